#pragma once
// Non-backtracking path spaces over the Brandt graph, Hecke operators and shifts on them,
// joint eigenbases, generalized newvectors, L^2-mass measures, recurrence constants and
// amplifier coefficients.
//
// A path x_0 -> ... -> x_L is a chain I_0 > I_1 > ... > I_L of right ideals with each step a
// p-neighbor and I_{k+1} != p I_{k-1}. Such a chain is fixed by its end X = I_L, since
// I_k = X + p^k I_0. Path classes are chains modulo the units of O_L(I_0) with I_0 the stored
// class representative; a class carries weight 1 / |Stab| (stabilizer modulo +-1).

#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "plab/quaternion.hpp"

namespace plab {

struct SizeLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ClassificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonnormalInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientPrimes : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr size_t kPathCap = 100000;

struct PathClass {
    int start = 0;             // class of I_0
    IdealLattice end;          // canonical X = I_L inside the representative I_0
    int stab = 1;              // #{u in O_L(I_0)^x : uX = X} / 2
    std::vector<int> vertices; // classes of I_0, ..., I_L
};

struct PathLevel {
    int L = 0;
    std::vector<PathClass> paths;
    std::vector<int> drop_last, drop_first;  // into level L - 1 (empty at L = 0)
    std::map<std::pair<int, IMat4>, int> index;
};

class PathSpace {
public:
    // Y_{m..mp}; all levels 0..mp - m are kept for the projections
    static PathSpace build(const MaximalOrder& R, const ClassGraph& G, int m, int mp,
                           size_t cap = kPathCap);

    int m() const { return m_; }
    int mp() const { return mp_; }
    int length() const { return mp_ - m_; }
    size_t size() const { return levels_.back().paths.size(); }
    const PathLevel& level(int L) const { return levels_.at(size_t(L)); }
    const PathLevel& top() const { return levels_.back(); }
    const MaximalOrder& order() const { return R_; }
    const ClassGraph& graph() const { return G_; }
    i64 p() const { return G_.p; }

    Q weight(int L, int id) const { return Q(1, level(L).paths[size_t(id)].stab); }
    std::vector<Q> weights(int L) const;
    std::vector<double> weights_double(int L) const;
    // sum of weights at level L: (sum_i 1/w_i)(p + 1) p^{L-1}
    Q total_weight(int L) const;

    // id of the class of the chain with start class `start` and end X; throws ClassificationFailure
    int locate(int L, int start, const IdealLattice& X) const;
    // the p forward extensions (p + 1 at L = 0) of the stored representative, as level L + 1 ends
    std::vector<IdealLattice> forward_ends(int L, int id) const;
    // ids at level L - k_first - k_last after dropping k_first leading and k_last trailing edges
    std::vector<int> projection(int L, int k_first, int k_last) const;

    // I_k = X + p^k I_0 for the stored representative
    IdealLattice chain_member(int L, int id, int k) const;

private:
    PathSpace(const MaximalOrder& R, const ClassGraph& G) : R_(R), G_(G) {}
    void add_level(size_t cap);
    IdealLattice canonical(int start, const IdealLattice& X, int* fixers) const;

    MaximalOrder R_;
    ClassGraph G_;
    int m_ = 0, mp_ = 0;
    std::vector<PathLevel> levels_;
};

// right ideals J <= I with nr(J) = n nr(I)
std::vector<IdealLattice> sublattices_of_norm(const MaximalOrder& R, const IdealLattice& I, i64 n);
// T_n on the paths of level L, n coprime to pD: T[x][y] = number of Hecke images of x in class y
// (ell + 1 of them for a prime ell; they move I_0 at n and keep the chain at p)
IntMatrix hecke_on_paths(const PathSpace& Y, int L, i64 n);

// S: back extensions (J > p I_0 > ... > p I_{L-1}); F: forward extensions followed by dropping
// the first edge. The unshift is U = F / p; for L >= 2, S U = p P with P the average over the
// fibre of drop_last (at L = 1, S F = (p - 1) E + 1). At L = 0 both equal B(p).
struct ShiftPair {
    IntMatrix shift;    // S
    IntMatrix forward;  // F = p U
};
ShiftPair shift_operators(const PathSpace& Y, int L);

// pullback along a projection: Pull[x][y] = [proj(x) = y]
IntMatrix pullback_matrix(const std::vector<int>& proj, size_t target_size);

struct Eigenpair {
    Eigen::VectorXd v;           // weighted-orthonormal in the path basis
    std::vector<double> lambda;  // T_ell eigenvalue, one per prime
    bool one_dimensional = false;
};

struct SpectralData {
    std::vector<i64> primes;
    std::vector<double> weights;
    std::vector<Eigenpair> pairs;
    std::vector<std::vector<int>> families;  // indices with equal eigenvalue tuples (1e-6)
    double max_residual = 0;                 // max ||T v - lambda v|| / ||T||
};

// weighted-orthonormal joint eigenbasis of the commuting operators ops (one per prime)
SpectralData joint_eigenbasis(const std::vector<IntMatrix>& ops, const std::vector<i64>& primes,
                              const std::vector<double>& weights, uint64_t seed = 1);
SpectralData joint_eigenbasis(const PathSpace& Y, int L, const std::vector<i64>& primes,
                              uint64_t seed = 1);

// roots of x^2 - lambda_pi x + theta, lambda_pi = lambda / sqrt(ell)
std::pair<std::complex<double>, std::complex<double>> satake_pair(double lambda, i64 ell,
                                                                   std::complex<double> theta = 1.0);

struct NewvectorData {
    int L = 0;
    int dim = 0;          // dimension of the orthocomplement of the pullbacks
    int predicted = -1;   // |Y_L| - 2 |Y_{L-1}| + |Y_{L-2}| for L >= 2
    SpectralData spectral;
};
// joint eigenfunctions on level L orthogonal to pullbacks along drop_last and drop_first
NewvectorData generalized_newvectors(const PathSpace& Y, int L, const std::vector<i64>& primes,
                                     uint64_t seed = 1);

template <class T>
struct MassMeasure {
    int L = 0;
    std::vector<T> mass;
};

// mu(x) = w_x |phi(x)|^2 / ||phi||^2
MassMeasure<double> l2_mass(const PathSpace& Y, int L, const Eigen::VectorXd& phi);
// uniform measure w_x / sum w
MassMeasure<Q> uniform_measure(const PathSpace& Y, int L);

// Y_{-N..N} -> Y_{-n..n}: drop N - n edges from each end (levels 2N -> 2n)
template <class T>
MassMeasure<T> mass_pushforward(const PathSpace& Y, const MassMeasure<T>& mu, int k_first,
                                int k_last) {
    const auto proj = Y.projection(mu.L, k_first, k_last);
    MassMeasure<T> out;
    out.L = mu.L - k_first - k_last;
    out.mass.assign(Y.level(out.L).paths.size(), T(0));
    for (size_t x = 0; x < proj.size(); ++x) out.mass[size_t(proj[x])] += mu.mass[x];
    return out;
}

struct Discrepancy {
    double tv = 0;   // (1/2) sum |mu - u|
    double sup = 0;  // max over singletons |mu(x) - u(x)|
};
Discrepancy discrepancy(const PathSpace& Y, const MassMeasure<double>& mu);

struct RecurrenceResult {
    double c = 0;                    // c_{pi,ell}(n)
    double gamma1 = 0, gamma2 = 0;  // |gamma_1|, |gamma_2|
};
// lambda(ell^k) = sum_i alpha^i beta^{k-i};
// sigma_k = lambda(ell^k) - [k >= 2] theta ell^{-1} lambda(ell^{k-2});
// c = sum_{k <= n} |sigma_k|^2 + max_{m <= n} |lambda(ell^m)|^2
RecurrenceResult recurrence_constant(std::complex<double> alpha, std::complex<double> beta,
                                     std::complex<double> theta, i64 ell, int n);
// c(k) for k = 0..n in one pass
std::vector<double> recurrence_series(std::complex<double> alpha, std::complex<double> beta,
                                      std::complex<double> theta, i64 ell, int n);

struct Amplifier {
    std::map<i64, double> c;  // ell -> c_ell on the support {q, q^2 : q in [L, 2L] prime}
    double lambda = 0;        // sum c_ell lambda_pi(ell)
    double l1 = 0;            // sum |c_ell|
};
// lambda_pi: normalized eigenvalues at every q and q^2; primes dividing `excluded` are skipped
Amplifier amplifier_coefficients(int L, const std::map<i64, double>& lambda_pi, i64 excluded);

}  // namespace plab
