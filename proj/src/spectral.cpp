#include <algorithm>
#include <cmath>
#include <random>

#include "plab/graph.hpp"

namespace plab {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kCluster = 1e-6;

MatrixXd to_dense(const IntMatrix& T) {
    const Eigen::Index n = Eigen::Index(T.size());
    MatrixXd M(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) M(i, j) = double(T[size_t(i)][size_t(j)]);
    return M;
}

// D^{1/2} T D^{-1/2}
MatrixXd symmetrize(const IntMatrix& T, const std::vector<double>& w) {
    const Eigen::Index n = Eigen::Index(T.size());
    MatrixXd S(n, n);
    double scale = 1;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double a = w[size_t(i)] * double(T[size_t(i)][size_t(j)]);
            const double b = w[size_t(j)] * double(T[size_t(j)][size_t(i)]);
            scale = std::max(scale, std::fabs(a));
            if (std::fabs(a - b) > 1e-9 * scale)
                throw NonnormalInput("joint_eigenbasis: operator is not self-adjoint for the weights");
            S(i, j) = double(T[size_t(i)][size_t(j)]) * std::sqrt(w[size_t(i)] / w[size_t(j)]);
        }
    return (S + S.transpose()) / 2;
}

// split columns of V into groups of equal eigenvalue of V^T S V; returns rotated groups
std::vector<MatrixXd> refine(const MatrixXd& V, const MatrixXd& S) {
    const MatrixXd M = V.transpose() * S * V;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es((M + M.transpose()) / 2);
    const VectorXd& ev = es.eigenvalues();
    const MatrixXd W = V * es.eigenvectors();
    std::vector<MatrixXd> out;
    Eigen::Index a = 0;
    for (Eigen::Index b = 1; b <= ev.size(); ++b)
        if (b == ev.size() || ev(b) - ev(b - 1) > kCluster) {
            out.push_back(W.middleCols(a, b - a));
            a = b;
        }
    return out;
}

struct SymPair {
    VectorXd u;
    std::vector<double> lambda;
};

// joint eigenvectors of commuting symmetric S_i restricted to the column span of B (orthonormal)
std::vector<SymPair> joint_diagonalize(const std::vector<MatrixXd>& S, const MatrixXd& B, uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> r(1.0, 2.0);
    MatrixXd A = MatrixXd::Zero(B.rows(), B.rows());
    for (const auto& s : S) A += r(gen) * s;
    std::vector<MatrixXd> groups = refine(B, A);
    for (const auto& s : S) {
        std::vector<MatrixXd> next;
        for (const auto& g : groups)
            for (auto& h : refine(g, s)) next.push_back(std::move(h));
        groups = std::move(next);
    }
    std::vector<SymPair> out;
    for (const auto& g : groups)
        for (Eigen::Index c = 0; c < g.cols(); ++c) {
            SymPair sp{g.col(c), {}};
            for (const auto& s : S) sp.lambda.push_back(sp.u.dot(s * sp.u));
            out.push_back(std::move(sp));
        }
    // deterministic order: by eigenvalue tuple, descending
    std::stable_sort(out.begin(), out.end(), [](const SymPair& a, const SymPair& b) {
        for (size_t i = 0; i < a.lambda.size(); ++i)
            if (std::fabs(a.lambda[i] - b.lambda[i]) > kCluster) return a.lambda[i] > b.lambda[i];
        return false;
    });
    // fix the sign: largest entry positive
    for (auto& sp : out) {
        Eigen::Index k;
        sp.u.cwiseAbs().maxCoeff(&k);
        if (sp.u(k) < 0) sp.u = -sp.u;
    }
    return out;
}

SpectralData assemble(const std::vector<MatrixXd>& S, const std::vector<i64>& primes,
                      const std::vector<double>& w, const std::vector<SymPair>& sp) {
    SpectralData D;
    D.primes = primes;
    D.weights = w;
    std::vector<double> norms;
    for (const auto& s : S) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(s, Eigen::EigenvaluesOnly);
        norms.push_back(std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()));
    }
    for (const auto& p : sp) {
        Eigenpair e;
        e.v = p.u;
        for (Eigen::Index i = 0; i < e.v.size(); ++i) e.v(i) /= std::sqrt(w[size_t(i)]);
        e.lambda = p.lambda;
        e.one_dimensional = true;
        for (size_t k = 0; k < S.size(); ++k) {
            const double res = (S[k] * p.u - p.lambda[k] * p.u).norm() / norms[k];
            D.max_residual = std::max(D.max_residual, res);
            if (std::fabs(std::fabs(p.lambda[k]) - double(primes[k] + 1)) > kCluster) e.one_dimensional = false;
        }
        D.pairs.push_back(std::move(e));
    }
    for (size_t i = 0; i < D.pairs.size(); ++i) {
        bool placed = false;
        for (auto& f : D.families) {
            const auto& a = D.pairs[size_t(f[0])].lambda;
            bool same = true;
            for (size_t k = 0; k < a.size(); ++k)
                if (std::fabs(a[k] - D.pairs[i].lambda[k]) > kCluster) same = false;
            if (same) {
                f.push_back(int(i));
                placed = true;
                break;
            }
        }
        if (!placed) D.families.push_back({int(i)});
    }
    return D;
}

void check_commuting(const std::vector<IntMatrix>& ops) {
    for (size_t a = 0; a < ops.size(); ++a)
        for (size_t b = a + 1; b < ops.size(); ++b) {
            const MatrixXd A = to_dense(ops[a]), B = to_dense(ops[b]);
            if ((A * B - B * A).cwiseAbs().maxCoeff() != 0.0)
                throw DomainError("joint_eigenbasis: operators do not commute");
        }
}

}  // namespace

SpectralData joint_eigenbasis(const std::vector<IntMatrix>& ops, const std::vector<i64>& primes,
                              const std::vector<double>& weights, uint64_t seed) {
    if (ops.empty() || ops.size() != primes.size()) throw DomainError("joint_eigenbasis: one operator per prime");
    check_commuting(ops);
    std::vector<MatrixXd> S;
    for (const auto& T : ops) S.push_back(symmetrize(T, weights));
    const Eigen::Index n = S[0].rows();
    return assemble(S, primes, weights, joint_diagonalize(S, MatrixXd::Identity(n, n), seed));
}

SpectralData joint_eigenbasis(const PathSpace& Y, int L, const std::vector<i64>& primes, uint64_t seed) {
    std::vector<IntMatrix> ops;
    for (i64 l : primes) ops.push_back(hecke_on_paths(Y, L, l));
    return joint_eigenbasis(ops, primes, Y.weights_double(L), seed);
}

std::pair<std::complex<double>, std::complex<double>> satake_pair(double lambda, i64 ell,
                                                                   std::complex<double> theta) {
    const std::complex<double> t = lambda / std::sqrt(double(ell));
    const std::complex<double> r = std::sqrt(t * t - 4.0 * theta);
    return {(t + r) / 2.0, (t - r) / 2.0};
}

NewvectorData generalized_newvectors(const PathSpace& Y, int L, const std::vector<i64>& primes,
                                     uint64_t seed) {
    NewvectorData out;
    out.L = L;
    std::vector<IntMatrix> ops;
    for (i64 l : primes) ops.push_back(hecke_on_paths(Y, L, l));
    check_commuting(ops);
    const auto w = Y.weights_double(L);
    std::vector<MatrixXd> S;
    for (const auto& T : ops) S.push_back(symmetrize(T, w));
    const Eigen::Index n = Eigen::Index(w.size());
    MatrixXd B;
    if (L == 0) {
        B = MatrixXd::Identity(n, n);
    } else {
        const auto& lev = Y.level(L);
        const Eigen::Index m = Eigen::Index(Y.level(L - 1).paths.size());
        MatrixXd A = MatrixXd::Zero(n, 2 * m);
        for (Eigen::Index x = 0; x < n; ++x) {
            A(x, lev.drop_last[size_t(x)]) = std::sqrt(w[size_t(x)]);
            A(x, m + lev.drop_first[size_t(x)]) = std::sqrt(w[size_t(x)]);
        }
        Eigen::ColPivHouseholderQR<MatrixXd> qr(A);
        qr.setThreshold(1e-10);
        const Eigen::Index r = qr.rank();
        const MatrixXd Qf = qr.householderQ();
        B = Qf.rightCols(n - r);
    }
    out.dim = int(B.cols());
    if (L >= 2)
        out.predicted = int(Y.level(L).paths.size()) - 2 * int(Y.level(L - 1).paths.size()) +
                        int(Y.level(L - 2).paths.size());
    out.spectral = assemble(S, primes, w, B.cols() ? joint_diagonalize(S, B, seed) : std::vector<SymPair>{});
    return out;
}

MassMeasure<double> l2_mass(const PathSpace& Y, int L, const Eigen::VectorXd& phi) {
    const auto w = Y.weights_double(L);
    MassMeasure<double> mu;
    mu.L = L;
    double tot = 0;
    for (Eigen::Index x = 0; x < phi.size(); ++x) {
        mu.mass.push_back(w[size_t(x)] * phi(x) * phi(x));
        tot += mu.mass.back();
    }
    if (!(tot > 0)) throw DomainError("l2_mass: zero function");
    for (auto& m : mu.mass) m /= tot;
    return mu;
}

MassMeasure<Q> uniform_measure(const PathSpace& Y, int L) {
    MassMeasure<Q> mu;
    mu.L = L;
    const Q tot = Y.total_weight(L);
    for (const auto& w : Y.weights(L)) mu.mass.push_back(w / tot);
    return mu;
}

Discrepancy discrepancy(const PathSpace& Y, const MassMeasure<double>& mu) {
    const auto w = Y.weights_double(mu.L);
    double tot = 0;
    for (double x : w) tot += x;
    Discrepancy d;
    for (size_t x = 0; x < w.size(); ++x) {
        const double diff = std::fabs(mu.mass[x] - w[x] / tot);
        d.tv += diff / 2;
        d.sup = std::max(d.sup, diff);
    }
    return d;
}

std::vector<double> recurrence_series(std::complex<double> alpha, std::complex<double> beta,
                                      std::complex<double> theta, i64 ell, int n) {
    if (n < 0) throw DomainError("recurrence_constant: n must be >= 0");
    std::vector<std::complex<double>> lam(size_t(n) + 1);
    std::complex<double> ak = 1;
    lam[0] = 1;
    for (int k = 1; k <= n; ++k) {
        ak *= alpha;
        lam[size_t(k)] = ak + beta * lam[size_t(k - 1)];  // complete homogeneous sum
    }
    std::vector<double> c(size_t(n) + 1);
    double sig = 0, mx = 0;
    for (int k = 0; k <= n; ++k) {
        std::complex<double> s = lam[size_t(k)];
        if (k >= 2) s -= theta / double(ell) * lam[size_t(k - 2)];
        sig += std::norm(s);
        mx = std::max(mx, std::norm(lam[size_t(k)]));
        c[size_t(k)] = sig + mx;
    }
    return c;
}

RecurrenceResult recurrence_constant(std::complex<double> alpha, std::complex<double> beta,
                                     std::complex<double> theta, i64 ell, int n) {
    RecurrenceResult r;
    r.c = recurrence_series(alpha, beta, theta, ell, n).back();
    r.gamma1 = std::abs(alpha - theta / double(ell) / alpha);
    r.gamma2 = std::abs(beta - theta / double(ell) / beta);
    return r;
}

Amplifier amplifier_coefficients(int L, const std::map<i64, double>& lambda_pi, i64 excluded) {
    if (L < 2) throw DomainError("amplifier_coefficients: L must be >= 2");
    Amplifier A;
    const double c = std::log(double(L)) / double(L);
    for (i64 q = L; q <= 2 * i64(L); ++q) {
        if (!is_prime(q) || excluded % q == 0) continue;
        for (i64 l : {q, q * q}) {
            auto it = lambda_pi.find(l);
            if (it == lambda_pi.end()) throw DomainError("amplifier_coefficients: missing lambda at " + std::to_string(l));
            const double cl = it->second < 0 ? -c : c;
            A.c[l] = cl;
            A.lambda += cl * it->second;
            A.l1 += std::fabs(cl);
        }
    }
    if (A.c.empty()) throw InsufficientPrimes("amplifier_coefficients: no admissible prime in [L, 2L]");
    return A;
}

}  // namespace plab
