#include "plab/quaternion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace plab {

Quat Quat::operator+(const Quat& o) const {
    Quat r;
    for (int k = 0; k < 4; ++k) r.c[k] = c[k] + o.c[k];
    return r;
}
Quat Quat::operator-(const Quat& o) const {
    Quat r;
    for (int k = 0; k < 4; ++k) r.c[k] = c[k] - o.c[k];
    return r;
}
Quat Quat::operator*(Q s) const {
    Quat r;
    for (int k = 0; k < 4; ++k) r.c[k] = c[k] * s;
    return r;
}

QuaternionAlgebra::QuaternionAlgebra(i64 a, i64 b) : a_(a), b_(b) {
    if (a >= 0 || b >= 0) throw DomainError("QuaternionAlgebra: a and b must be negative");
}

Quat QuaternionAlgebra::mul(const Quat& x, const Quat& y) const {
    const Q a(a_), b(b_);
    const auto& u = x.c;
    const auto& v = y.c;
    Quat r;
    r.c[0] = u[0] * v[0] + a * u[1] * v[1] + b * u[2] * v[2] - a * b * u[3] * v[3];
    r.c[1] = u[0] * v[1] + u[1] * v[0] - b * u[2] * v[3] + b * u[3] * v[2];
    r.c[2] = u[0] * v[2] + u[2] * v[0] + a * u[1] * v[3] - a * u[3] * v[1];
    r.c[3] = u[0] * v[3] + u[3] * v[0] + u[1] * v[2] - u[2] * v[1];
    return r;
}

Quat QuaternionAlgebra::conj(const Quat& x) const {
    Quat r = x * Q(-1);
    r.c[0] = x.c[0];
    return r;
}

Q QuaternionAlgebra::nr(const Quat& x) const {
    const Q a(a_), b(b_);
    return x.c[0] * x.c[0] - a * x.c[1] * x.c[1] - b * x.c[2] * x.c[2] +
           a * b * x.c[3] * x.c[3];
}

Q QuaternionAlgebra::trd(const Quat& x) const { return x.c[0] * Q(2); }

namespace {

int legendre(i64 a, i64 p) {
    a = posmod(a, p);
    if (a == 0) return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::vector<i64> prime_factors(i64 n) {
    std::vector<i64> out;
    n = n < 0 ? -n : n;
    for (i64 q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
        }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

int hilbert_symbol(i64 a, i64 b, i64 p) {
    const int al = val_p(a, p), be = val_p(b, p);
    const i64 u = a / ipow(p, al), v = b / ipow(p, be);
    if (p != 2) {
        int s = ((al * be) % 2 == 1 && (p % 4 == 3)) ? -1 : 1;
        if (be % 2) s *= legendre(u, p);
        if (al % 2) s *= legendre(v, p);
        return s;
    }
    auto eps = [](i64 x) { return int(posmod((x - 1) / 2, 2)); };
    auto omg = [](i64 x) {
        const i64 r = posmod(x, 8);
        return (r == 3 || r == 5) ? 1 : 0;
    };
    const int e = eps(u) * eps(v) + al * omg(v) + be * omg(u);
    return e % 2 ? -1 : 1;
}

std::vector<i64> QuaternionAlgebra::ramified_primes() const {
    std::set<i64> cand{2};
    for (i64 q : prime_factors(a_)) cand.insert(q);
    for (i64 q : prime_factors(b_)) cand.insert(q);
    std::vector<i64> out;
    for (i64 q : cand)
        if (hilbert_symbol(a_, b_, q) == -1) out.push_back(q);
    // the infinite place is ramified, so the finite count is odd
    if (out.size() % 2 == 0) throw DomainError("QuaternionAlgebra: inconsistent ramification");
    return out;
}

i64 QuaternionAlgebra::discriminant() const {
    i64 d = 1;
    for (i64 q : ramified_primes()) d *= q;
    return d;
}

namespace {

// inverse of a 4x4 rational matrix
std::array<std::array<Q, 4>, 4> inverse4(std::array<std::array<Q, 4>, 4> m) {
    std::array<std::array<Q, 4>, 4> inv{};
    for (int i = 0; i < 4; ++i) inv[i][i] = 1;
    for (int c = 0; c < 4; ++c) {
        int piv = -1;
        for (int r = c; r < 4; ++r)
            if (m[r][c] != Q(0)) {
                piv = r;
                break;
            }
        if (piv < 0) throw DomainError("order basis is singular");
        std::swap(m[c], m[piv]);
        std::swap(inv[c], inv[piv]);
        const Q s = m[c][c];
        for (int k = 0; k < 4; ++k) {
            m[c][k] /= s;
            inv[c][k] /= s;
        }
        for (int r = 0; r < 4; ++r)
            if (r != c && m[r][c] != Q(0)) {
                const Q f = m[r][c];
                for (int k = 0; k < 4; ++k) {
                    m[r][k] -= f * m[c][k];
                    inv[r][k] -= f * inv[c][k];
                }
            }
    }
    return inv;
}

i64 det4(const Gram4& g) {
    std::array<std::array<Q, 4>, 4> m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = g[i][j];
    Q d = 1;
    for (int c = 0; c < 4; ++c) {
        int piv = -1;
        for (int r = c; r < 4; ++r)
            if (m[r][c] != Q(0)) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            std::swap(m[c], m[piv]);
            d = -d;
        }
        d *= m[c][c];
        for (int r = c + 1; r < 4; ++r) {
            const Q f = m[r][c] / m[c][c];
            for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
        }
    }
    if (d.denominator() != 1) throw DomainError("det4: non-integral determinant");
    return d.numerator();
}

Quat qv(Q a, Q b, Q c, Q d) {
    Quat q;
    q.c = {a, b, c, d};
    return q;
}

}  // namespace

MaximalOrder::MaximalOrder(QuaternionAlgebra B, std::array<Quat, 4> basis)
    : B_(B), basis_(basis) {
    std::array<std::array<Q, 4>, 4> m;
    for (int r = 0; r < 4; ++r) m[r] = basis[size_t(r)].c;
    to_order_ = inverse4(m);
    auto coords = [&](const Quat& q) -> IVec4 {
        auto c = from_quat(q);
        if (!c) throw DomainError("MaximalOrder: basis is not closed under multiplication");
        return *c;
    };
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) mult_[a][b] = coords(B_.mul(basis_[a], basis_[b]));
    for (int a = 0; a < 4; ++a) conj_[a] = coords(B_.conj(basis_[a]));
    one_ = coords(Quat::scalar(1));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const Q t = B_.trd(B_.mul(basis_[a], B_.conj(basis_[b])));
            if (t.denominator() != 1) throw DomainError("MaximalOrder: trace form not integral");
            gram_[a][b] = t.numerator();
        }
    D_ = B_.discriminant();
    if (det4(gram_) != D_ * D_)
        throw DomainError("MaximalOrder: det of the trace form is not D^2 (order not maximal)");
}

MaximalOrder MaximalOrder::from_basis(const QuaternionAlgebra& B,
                                      const std::array<Quat, 4>& basis) {
    return MaximalOrder(B, basis);
}

MaximalOrder MaximalOrder::for_prime(i64 D) {
    if (!is_prime(D)) throw DomainError("MaximalOrder::for_prime: D must be prime");
    const Q h(1, 2), f(1, 4);
    if (D == 2) {
        QuaternionAlgebra B(-1, -1);
        return MaximalOrder(B, {qv(1, 0, 0, 0), qv(0, 1, 0, 0), qv(0, 0, 1, 0), qv(h, h, h, h)});
    }
    if (D % 4 == 3) {
        QuaternionAlgebra B(-1, -D);
        return MaximalOrder(B, {qv(1, 0, 0, 0), qv(0, 1, 0, 0), qv(h, 0, h, 0), qv(0, h, 0, h)});
    }
    if (D % 8 == 5) {
        QuaternionAlgebra B(-2, -D);
        return MaximalOrder(B, {qv(h, 0, h, h), qv(0, f, h, f), qv(0, 0, 1, 0), qv(0, 0, 0, 1)});
    }
    // D = 1 mod 8: (-D, -q) with q = 3 mod 4 prime, (D/q) = -1, q | c^2 D + 1
    i64 q = 3;
    while (!(is_prime(q) && q % 4 == 3 && legendre(D, q) == -1)) ++q;
    i64 c = 0;
    while ((c * c % q * (D % q) + 1) % q != 0) ++c;
    QuaternionAlgebra B(-D, -q);
    return MaximalOrder(
        B, {qv(h, 0, h, 0), qv(0, h, 0, h), qv(0, 0, Q(1, q), Q(c, q)), qv(0, 0, 0, 1)});
}

IVec4 MaximalOrder::mul(const IVec4& x, const IVec4& y) const {
    std::array<__int128, 4> r{0, 0, 0, 0};
    for (int a = 0; a < 4; ++a) {
        if (x[a] == 0) continue;
        for (int b = 0; b < 4; ++b) {
            if (y[b] == 0) continue;
            const __int128 s = __int128(x[a]) * y[b];
            for (int k = 0; k < 4; ++k) r[k] += s * mult_[a][b][k];
        }
    }
    return {checked(r[0]), checked(r[1]), checked(r[2]), checked(r[3])};
}

IVec4 MaximalOrder::conj(const IVec4& x) const { return mat_vec_left(x, conj_); }

i64 MaximalOrder::nr(const IVec4& x) const { return quad(gram_, x) / 2; }

i64 MaximalOrder::trd(const IVec4& x) const {
    // trd(x) = trd(x * conj(1))
    __int128 s = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) s += __int128(x[a]) * one_[b] * gram_[a][b];
    return checked(s);
}

Quat MaximalOrder::to_quat(const IVec4& x) const {
    Quat q;
    for (int a = 0; a < 4; ++a) q = q + basis_[a] * Q(x[a]);
    return q;
}

std::optional<IVec4> MaximalOrder::from_quat(const Quat& q) const {
    IVec4 r;
    for (int k = 0; k < 4; ++k) {
        Q s = 0;
        for (int m = 0; m < 4; ++m) s += q.c[m] * to_order_[m][k];
        if (s.denominator() != 1) return std::nullopt;
        r[k] = s.numerator();
    }
    return r;
}

IMat4 MaximalOrder::left_mult(const IVec4& x) const {
    IMat4 m;
    for (int b = 0; b < 4; ++b) {
        IVec4 e{0, 0, 0, 0};
        e[b] = 1;
        m[b] = mul(x, e);
    }
    return m;
}

IMat4 MaximalOrder::right_mult(const IVec4& x) const {
    IMat4 m;
    for (int b = 0; b < 4; ++b) {
        IVec4 e{0, 0, 0, 0};
        e[b] = 1;
        m[b] = mul(e, x);
    }
    return m;
}

std::vector<IVec4> norm_enumerate(const MaximalOrder& R, i64 n) {
    std::vector<IVec4> out;
    if (n < 1) return out;
    enumerate_short(R.trace_gram(), 2 * n, [&](const IVec4& x, i64 v) {
        if (v == 2 * n) out.push_back(x);
    });
    std::sort(out.begin(), out.end());
    return out;
}

Gram4 normalized_gram(const MaximalOrder& R, const IdealLattice& I) {
    const auto& T = R.trace_gram();
    Gram4 G;
    for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s) {
            __int128 v = 0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    v += __int128(I.L.rows[r][a]) * I.L.rows[s][b] * T[a][b];
            if (v % I.norm != 0) throw DomainError("normalized_gram: norm does not divide");
            G[r][s] = checked(v / I.norm);
        }
    return G;
}

namespace {

i64 lattice_norm(const MaximalOrder& R, const Lattice4& L) {
    IdealLattice tmp{L, 1};
    const Gram4 G = normalized_gram(R, tmp);
    i64 g = 0;
    for (int r = 0; r < 4; ++r) {
        g = std::gcd(g, G[r][r] / 2);
        for (int s = r + 1; s < 4; ++s) g = std::gcd(g, G[r][s]);
    }
    return g;
}

}  // namespace

IdealLattice product_conj(const MaximalOrder& R, const IdealLattice& A, const IdealLattice& B) {
    std::vector<IVec4> gens;
    for (const auto& a : A.L.rows)
        for (const auto& b : B.L.rows) gens.push_back(R.mul(a, R.conj(b)));
    const i64 N = checked(__int128(A.norm) * B.norm);
    IdealLattice P{hnf_mod(gens, N), N};
    if (lattice_norm(R, P.L) != N) throw DomainError("product_conj: unexpected norm");
    return P;
}

bool is_right_ideal(const MaximalOrder& R, const IdealLattice& I) {
    for (const auto& b : I.L.rows)
        for (int k = 0; k < 4; ++k) {
            IVec4 e{0, 0, 0, 0};
            e[k] = 1;
            if (!I.L.contains(R.mul(b, e))) return false;
        }
    return true;
}

std::vector<IdealLattice> neighbors(const MaximalOrder& R, const IdealLattice& I, i64 ell) {
    const Gram4 G = normalized_gram(R, I);
    const i64 N = checked(__int128(ell) * I.norm);
    std::set<Lattice4> found;
    IVec4 c{0, 0, 0, 0};
    // projective representatives: first nonzero coordinate equal to 1
    for (int lead = 0; lead < 4 && i64(found.size()) < ell + 1; ++lead) {
        const i64 free = ipow(ell, 3 - lead);
        for (i64 t = 0; t < free && i64(found.size()) < ell + 1; ++t) {
            c = {0, 0, 0, 0};
            c[lead] = 1;
            i64 s = t;
            for (int k = lead + 1; k < 4; ++k) {
                c[k] = s % ell;
                s /= ell;
            }
            if (posmod(quad(G, c) / 2, ell) != 0) continue;
            IVec4 alpha{0, 0, 0, 0};
            for (int r = 0; r < 4; ++r) alpha = add(alpha, scale(I.L.rows[r], c[r]));
            std::vector<IVec4> gens;
            for (int k = 0; k < 4; ++k) {
                IVec4 e{0, 0, 0, 0};
                e[k] = 1;
                gens.push_back(R.mul(alpha, e));
                gens.push_back(scale(I.L.rows[k], ell));
            }
            found.insert(hnf_mod(gens, N));
        }
    }
    if (i64(found.size()) != ell + 1)
        throw DomainError("neighbors: expected ell + 1 sublattices");
    std::vector<IdealLattice> out;
    for (const auto& L : found) {
        if (L.index() != checked(__int128(N) * N))
            throw DomainError("neighbors: sublattice has the wrong index");
        out.push_back({L, N});
    }
    return out;
}

IdealLattice left_transport(const MaximalOrder& R, const IVec4& alpha, i64 d,
                            const IdealLattice& E) {
    const __int128 nn = __int128(R.nr(alpha)) * E.norm;
    if (nn % (__int128(d) * d) != 0) throw DomainError("left_transport: norm not divisible");
    const i64 N = checked(nn / (__int128(d) * d));
    std::vector<IVec4> gens;
    for (const auto& b : E.L.rows) {
        IVec4 v = R.mul(alpha, b);
        for (auto& x : v) {
            if (x % d != 0) throw DomainError("left_transport: image not integral");
            x /= d;
        }
        gens.push_back(v);
    }
    IdealLattice out{hnf_mod(gens, N), N};
    if (out.L.index() != checked(__int128(N) * N))
        throw DomainError("left_transport: image is not a right ideal of the expected norm");
    return out;
}

std::optional<Transport> find_equivalence(const MaximalOrder& R, const IdealLattice& J,
                                          const RightIdealClass& I, int index_of_I) {
    const IdealLattice P = product_conj(R, J, I.ideal);
    const Gram4 G = normalized_gram(R, P);
    std::optional<IVec4> hit;
    enumerate_short(G, 2, [&](const IVec4& x, i64 v) {
        if (v != 2 || hit) return;
        IVec4 a{0, 0, 0, 0};
        for (int r = 0; r < 4; ++r) a = add(a, scale(P.L.rows[r], x[r]));
        hit = a;
    });
    if (!hit) return std::nullopt;
    return Transport{index_of_I, R.conj(*hit), J.norm};
}

RightIdealClass make_class(const MaximalOrder& R, const IdealLattice& I) {
    RightIdealClass c;
    c.ideal = I;
    const auto th = theta_counts(normalized_gram(R, I), 22);
    for (int k = 0; k < 12; ++k) c.theta[size_t(k)] = th[size_t(2 * k)];
    const IdealLattice P = product_conj(R, I, I);
    const Gram4 G = normalized_gram(R, P);
    enumerate_short(G, 2, [&](const IVec4& x, i64 v) {
        if (v != 2) return;
        IVec4 a{0, 0, 0, 0};
        for (int r = 0; r < 4; ++r) a = add(a, scale(P.L.rows[r], x[r]));
        c.unit_betas.push_back(a);
    });
    std::sort(c.unit_betas.begin(), c.unit_betas.end());
    c.units = int(c.unit_betas.size());
    if (c.units < 2 || c.units % 2) throw DomainError("make_class: bad unit count");
    return c;
}

Mat2 SplittingEmbedding::mul(const Mat2& x, const Mat2& y) const {
    auto f = [&](i64 a, i64 b, i64 c, i64 d) {
        return posmod(mulmod(a, b, mod) + mulmod(c, d, mod), mod);
    };
    return {f(x[0], y[0], x[1], y[2]), f(x[0], y[1], x[1], y[3]), f(x[2], y[0], x[3], y[2]),
            f(x[2], y[1], x[3], y[3])};
}

i64 SplittingEmbedding::det(const Mat2& x) const {
    return posmod(mulmod(x[0], x[3], mod) - mulmod(x[1], x[2], mod), mod);
}

i64 SplittingEmbedding::tr(const Mat2& x) const { return posmod(x[0] + x[3], mod); }

Mat2 SplittingEmbedding::apply(const IVec4& x) const {
    Mat2 r{0, 0, 0, 0};
    for (int k = 0; k < 4; ++k) {
        const i64 c = posmod(x[k], mod);
        for (int t = 0; t < 4; ++t) r[t] = posmod(r[t] + mulmod(c, images[k][t], mod), mod);
    }
    return r;
}

SplittingEmbedding split_embed(const MaximalOrder& R, i64 p, int M) {
    if (R.discriminant() % p == 0) throw NoSplitting("split_embed: p divides the discriminant");
    if (M < 1) throw DomainError("split_embed: precision must be positive");
    const i64 mod = ipow(p, M);
    auto mulm = [&](const IVec4& x, const IVec4& y) {
        IVec4 r = R.mul(x, y);
        for (auto& v : r) v = posmod(v, mod);
        return r;
    };
    // a rank-one idempotent mod p: e^2 = e, trd(e) = 1
    std::optional<IVec4> e;
    const i64 tot = ipow(p, 4);
    for (i64 t = 0; t < tot && !e; ++t) {
        IVec4 c;
        i64 s = t;
        for (int k = 0; k < 4; ++k) {
            c[k] = s % p;
            s /= p;
        }
        if (posmod(R.trd(c) - 1, p) != 0) continue;
        IVec4 sq = R.mul(c, c);
        bool ok = true;
        for (int k = 0; k < 4; ++k) ok = ok && posmod(sq[k] - c[k], p) == 0;
        if (ok) e = c;
    }
    if (!e) throw NoSplitting("split_embed: no idempotent mod p");
    // e <- 3e^2 - 2e^3 doubles the precision of e^2 = e
    IVec4 x = *e;
    for (int prec = 1; prec < M; prec *= 2) {
        const IVec4 x2 = mulm(x, x), x3 = mulm(x2, x);
        for (int k = 0; k < 4; ++k)
            x[k] = posmod(mulmod(3, x2[k], mod) - mulmod(2, x3[k], mod), mod);
    }
    // basis of the left module O e
    std::array<IVec4, 4> v;
    for (int k = 0; k < 4; ++k) {
        IVec4 ek{0, 0, 0, 0};
        ek[k] = 1;
        v[k] = mulm(ek, x);
    }
    int b1 = -1, b2 = -1, r1 = -1, r2 = -1;
    for (int i = 0; i < 4 && b1 < 0; ++i)
        for (int j = i + 1; j < 4 && b1 < 0; ++j)
            for (int r = 0; r < 4 && b1 < 0; ++r)
                for (int s = r + 1; s < 4 && b1 < 0; ++s) {
                    const i64 m = posmod(mulmod(v[i][r], v[j][s], mod) -
                                             mulmod(v[j][r], v[i][s], mod),
                                         mod);
                    if (m % p != 0) {
                        b1 = i;
                        b2 = j;
                        r1 = r;
                        r2 = s;
                    }
                }
    if (b1 < 0) throw NoSplitting("split_embed: O e is not free of rank 2");
    const i64 minor =
        posmod(mulmod(v[b1][r1], v[b2][r2], mod) - mulmod(v[b2][r1], v[b1][r2], mod), mod);
    const i64 minv = inv_mod(minor, mod);
    // coordinates of w in the basis (v[b1], v[b2]) read off rows r1, r2
    auto coords = [&](const IVec4& w) -> std::array<i64, 2> {
        const i64 c1 = mulmod(posmod(mulmod(w[r1], v[b2][r2], mod) -
                                         mulmod(v[b2][r1], w[r2], mod),
                                     mod),
                              minv, mod);
        const i64 c2 = mulmod(posmod(mulmod(v[b1][r1], w[r2], mod) -
                                         mulmod(w[r1], v[b1][r2], mod),
                                     mod),
                              minv, mod);
        return {c1, c2};
    };
    SplittingEmbedding S{p, M, mod, {}};
    for (int k = 0; k < 4; ++k) {
        IVec4 ek{0, 0, 0, 0};
        ek[k] = 1;
        const auto c1 = coords(mulm(ek, v[b1]));
        const auto c2 = coords(mulm(ek, v[b2]));
        S.images[k] = {c1[0], c2[0], c1[1], c2[1]};
    }
    return S;
}

BallParams::BallParams(i64 p_, int c, int e_, std::vector<GL2Element> om)
    : p(p_), c_depth(c), e(e_), omega(std::move(om)) {
    if (!is_prime(p)) throw DomainError("BallParams: p must be prime");
    if (e < 1) throw DomainError("BallParams: epsilon = p^-e needs e >= 1");
    if (c_depth < 0) throw DomainError("BallParams: subgroup depth must be >= 0");
    // x B(C, eps) x^{-1} lies in K once x does, since B(C, eps) <= K
    for (const auto& x : omega)
        if (!x.in_K()) throw DomainError("BallParams: Omega must lie in K");
}

double BallParams::epsilon() const { return std::pow(double(p), -e); }

i64 returns_bound(i64 n) {
    i64 b = 6;
    for (i64 q : prime_factors(n)) b *= val_p(n, q) + 1;
    return b;
}

namespace {

i64 residue(const PAdicNumber& x, i64 mod, int M) {
    if (x.is_zero()) return 0;
    if (x.valuation() < 0) throw DomainError("hecke_returns_count: x must lie in K");
    if (x.valuation() >= M) return 0;
    const int need = M - x.valuation();
    if (x.precision() < need) throw PrecisionError("hecke_returns_count: x known to too few digits");
    return mulmod(ipow(x.prime(), x.valuation()), x.unit_mod(need), mod);
}

}  // namespace

ReturnsResult hecke_returns_count(const MaximalOrder& R, const SplittingEmbedding& iota,
                                  const GL2Element& x, const BallParams& ball, i64 n, i64 m_num,
                                  i64 m_den) {
    const i64 p = ball.p;
    if (iota.p != p) throw DomainError("hecke_returns_count: embedding at another prime");
    if (n < 1 || n % p == 0) throw DomainError("hecke_returns_count: n must be coprime to p");
    if (m_num % p == 0 || m_den % p == 0 || m_num == 0 || m_den == 0)
        throw DomainError("hecke_returns_count: m must be a p-adic unit");
    // n < sqrt(1/2) / eps  <=>  2 n^2 < p^{2e}
    if (2.0 * double(n) * double(n) >= std::pow(double(p), 2.0 * ball.e))
        throw DomainError("hecke_returns_count: n too large for epsilon");
    if (iota.M < std::max(ball.e, ball.c_depth))
        throw PrecisionError("hecke_returns_count: ball membership undecidable at this precision");
    if (!x.in_K()) throw DomainError("hecke_returns_count: x must lie in K");
    const i64 mod = iota.mod;
    const int M = iota.M;
    const Mat2 X{residue(x.A(), mod, M), residue(x.B(), mod, M), residue(x.C(), mod, M),
                 residue(x.D(), mod, M)};
    const i64 dinv = inv_mod(iota.det(X), mod);
    const Mat2 Xi{mulmod(X[3], dinv, mod), posmod(-mulmod(X[1], dinv, mod), mod),
                  posmod(-mulmod(X[2], dinv, mod), mod), mulmod(X[0], dinv, mod)};
    const i64 minv = mulmod(posmod(m_den, mod), inv_mod(posmod(m_num, mod), mod), mod);
    const i64 pe = ipow(p, ball.e);
    const i64 pc = ball.c_depth > 0 ? ipow(p, ball.c_depth) : 0;
    auto in_C = [&](i64 a) {
        if (ball.c_depth == 0) return a % p != 0;
        return posmod(a - 1, pc) == 0;
    };
    const auto cand = norm_enumerate(R, n);
    ReturnsResult out{n, 0, returns_bound(n), i64(cand.size())};
    for (const auto& alpha : cand) {
        Mat2 y = iota.mul(iota.mul(Xi, iota.apply(alpha)), X);
        for (auto& t : y) t = mulmod(t, minv, mod);
        if (y[1] % pe == 0 && y[2] % pe == 0 && in_C(y[0]) && in_C(y[3])) ++out.count;
    }
    return out;
}

}  // namespace plab
