#include "plab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace plab {

i64 checked(__int128 v) {
    if (v > __int128(INT64_MAX) || v < -__int128(INT64_MAX))
        throw DomainError("lattice arithmetic overflow");
    return i64(v);
}

IVec4 add(const IVec4& a, const IVec4& b) {
    IVec4 r;
    for (int i = 0; i < 4; ++i) r[i] = checked(__int128(a[i]) + b[i]);
    return r;
}

IVec4 scale(const IVec4& a, i64 s) {
    IVec4 r;
    for (int i = 0; i < 4; ++i) r[i] = checked(__int128(a[i]) * s);
    return r;
}

i64 Lattice4::index() const {
    __int128 d = 1;
    for (int i = 0; i < 4; ++i) d *= rows[i][i];
    return checked(d);
}

bool Lattice4::contains(const IVec4& v) const {
    IVec4 r = v;
    for (int c = 0; c < 4; ++c) {
        if (r[c] % rows[c][c] != 0) return false;
        const i64 q = r[c] / rows[c][c];
        for (int k = c; k < 4; ++k) r[k] = checked(__int128(r[k]) - __int128(q) * rows[c][k]);
    }
    return true;
}

std::string Lattice4::key() const {
    std::ostringstream os;
    for (int r = 0; r < 4; ++r)
        for (int c = r; c < 4; ++c) os << rows[r][c] << (r == 3 && c == 3 ? "" : ",");
    return os.str();
}

namespace {

using Row = std::array<__int128, 4>;

__int128 pmod(__int128 a, __int128 m) {
    a %= m;
    return a < 0 ? a + m : a;
}

// exact echelon on rows; column c entries of rows[c..] combined by Euclid
Lattice4 echelon(std::vector<Row> rows, i64 M) {
    Lattice4 out;
    size_t top = 0;
    for (int c = 0; c < 4; ++c) {
        // bring the gcd of column c into rows[top]
        for (;;) {
            size_t best = rows.size();
            for (size_t r = top; r < rows.size(); ++r)
                if (rows[r][c] != 0 &&
                    (best == rows.size() ||
                     (rows[r][c] < 0 ? -rows[r][c] : rows[r][c]) <
                         (rows[best][c] < 0 ? -rows[best][c] : rows[best][c])))
                    best = r;
            if (best == rows.size()) throw DomainError("hnf: lattice is not of full rank");
            std::swap(rows[top], rows[best]);
            bool done = true;
            for (size_t r = top + 1; r < rows.size(); ++r) {
                if (rows[r][c] == 0) continue;
                const __int128 q = rows[r][c] / rows[top][c];
                for (int k = c; k < 4; ++k) rows[r][k] -= q * rows[top][k];
                if (M > 0)
                    for (int k = c + 1; k < 4; ++k) rows[r][k] = pmod(rows[r][k], M);
                if (rows[r][c] != 0) done = false;
            }
            if (done) break;
        }
        if (rows[top][c] < 0)
            for (int k = c; k < 4; ++k) rows[top][k] = -rows[top][k];
        if (M > 0)
            for (int k = c + 1; k < 4; ++k) rows[top][k] = pmod(rows[top][k], M);
        ++top;
    }
    for (int c = 0; c < 4; ++c)
        for (int k = 0; k < 4; ++k) out.rows[c][k] = k < c ? 0 : checked(rows[size_t(c)][k]);
    // reduce above the pivots
    for (int c = 1; c < 4; ++c)
        for (int r = 0; r < c; ++r) {
            const i64 piv = out.rows[c][c];
            i64 q = out.rows[r][c] / piv;
            if (out.rows[r][c] - q * piv < 0) --q;
            if (q != 0)
                for (int k = c; k < 4; ++k)
                    out.rows[r][k] = checked(__int128(out.rows[r][k]) - __int128(q) * out.rows[c][k]);
        }
    return out;
}

}  // namespace

Lattice4 hnf_mod(const std::vector<IVec4>& gens, i64 M) {
    if (M <= 0) throw DomainError("hnf_mod: modulus must be positive");
    std::vector<Row> rows;
    rows.reserve(gens.size() + 4);
    for (const auto& g : gens) {
        Row r;
        for (int k = 0; k < 4; ++k) r[k] = pmod(g[k], M);
        rows.push_back(r);
    }
    // M e_k stays intact until column k is reached, so reducing mod M is legitimate
    for (int k = 0; k < 4; ++k) {
        Row r{0, 0, 0, 0};
        r[k] = M;
        rows.push_back(r);
    }
    return echelon(std::move(rows), M);
}

Lattice4 hnf(const std::vector<IVec4>& gens) {
    std::vector<Row> rows;
    for (const auto& g : gens) rows.push_back({g[0], g[1], g[2], g[3]});
    return echelon(std::move(rows), 0);
}

Lattice4 lattice_sum(const Lattice4& a, const Lattice4& b) {
    std::vector<IVec4> g(a.rows.begin(), a.rows.end());
    g.insert(g.end(), b.rows.begin(), b.rows.end());
    return hnf_mod(g, std::gcd(a.index(), b.index()));
}

IVec4 mat_vec_left(const IVec4& x, const IMat4& U) {
    IVec4 r{0, 0, 0, 0};
    for (int k = 0; k < 4; ++k) {
        __int128 s = 0;
        for (int i = 0; i < 4; ++i) s += __int128(x[i]) * U[i][k];
        r[k] = checked(s);
    }
    return r;
}

i64 quad(const Gram4& G, const IVec4& x) {
    __int128 s = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += __int128(x[i]) * x[j] * G[i][j];
    return checked(s);
}

IMat4 lll_reduce(Gram4& G) {
    using ld = long double;
    IMat4 U{};
    for (int i = 0; i < 4; ++i) U[i][i] = 1;
    auto size_reduce = [&](int k, int j, i64 q) {
        // b_k -= q b_j
        for (int i = 0; i < 4; ++i) U[k][i] = checked(__int128(U[k][i]) - __int128(q) * U[j][i]);
        const i64 gkj = G[k][j], gjj = G[j][j];
        for (int i = 0; i < 4; ++i)
            if (i != k) {
                G[k][i] = checked(__int128(G[k][i]) - __int128(q) * G[j][i]);
                G[i][k] = G[k][i];
            }
        G[k][k] = checked(__int128(G[k][k]) - 2 * __int128(q) * gkj + __int128(q) * q * gjj);
    };
    auto gso = [&](ld mu[4][4], ld B[4]) {
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < i; ++j) {
                ld s = ld(G[i][j]);
                for (int k = 0; k < j; ++k) s -= mu[j][k] * mu[i][k] * B[k];
                mu[i][j] = s / B[j];
            }
            ld s = ld(G[i][i]);
            for (int k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * B[k];
            B[i] = s;
        }
    };
    ld mu[4][4] = {}, B[4] = {};
    int k = 1, guard = 0;
    while (k < 4) {
        if (++guard > 100000) throw DomainError("lll_reduce: no convergence");
        gso(mu, B);
        for (int j = k - 1; j >= 0; --j) {
            const ld m = mu[k][j];
            if (std::fabs(m) > 0.5L) {
                size_reduce(k, j, i64(std::llround(m)));
                gso(mu, B);
            }
        }
        if (B[k] < (0.99L - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            std::swap(U[k], U[k - 1]);
            std::swap(G[k], G[k - 1]);
            for (int i = 0; i < 4; ++i) std::swap(G[i][k], G[i][k - 1]);
            k = std::max(k - 1, 1);
        } else {
            ++k;
        }
    }
    return U;
}

void enumerate_short(const Gram4& G0, i64 bound, const std::function<void(const IVec4&, i64)>& f) {
    if (bound <= 0) return;
    Gram4 G = G0;
    const IMat4 U = lll_reduce(G);
    // Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    using ld = long double;
    ld q[4][4] = {};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) q[i][j] = ld(G[i][j]);
    for (int i = 0; i < 4; ++i) {
        if (q[i][i] <= 0) throw DomainError("enumerate_short: form is not positive definite");
        for (int j = i + 1; j < 4; ++j) {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for (int k = i + 1; k < 4; ++k)
            for (int l = k; l < 4; ++l) q[k][l] -= q[k][i] * q[i][l];
    }
    const ld slack = 1e-9L * (1.0L + ld(bound));
    IVec4 x{0, 0, 0, 0};
    ld T[4], Uc[4];
    std::function<void(int)> rec = [&](int i) {
        Uc[i] = 0;
        for (int j = i + 1; j < 4; ++j) Uc[i] += q[i][j] * ld(x[j]);
        const ld r = std::sqrt(std::max(T[i], 0.0L) / q[i][i]) + slack;
        const i64 lo = i64(std::ceil(-Uc[i] - r)), hi = i64(std::floor(-Uc[i] + r));
        for (i64 v = lo; v <= hi; ++v) {
            x[i] = v;
            const ld d = ld(v) + Uc[i];
            if (i == 0) {
                bool zero = x[0] == 0 && x[1] == 0 && x[2] == 0 && x[3] == 0;
                if (zero) continue;
                const i64 val = quad(G, x);
                if (val <= bound) f(mat_vec_left(x, U), val);
            } else {
                T[i - 1] = T[i] - q[i][i] * d * d + slack;
                if (T[i - 1] >= 0) rec(i - 1);
            }
        }
        x[i] = 0;
    };
    T[3] = ld(bound);
    rec(3);
}

std::vector<i64> theta_counts(const Gram4& G, i64 bound) {
    std::vector<i64> c(size_t(bound) + 1, 0);
    c[0] = 1;
    enumerate_short(G, bound, [&](const IVec4&, i64 v) { ++c[size_t(v)]; });
    return c;
}

}  // namespace plab
