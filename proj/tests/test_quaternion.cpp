#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "plab/quaternion.hpp"

using namespace plab;

namespace {

const i64 kDiscs[] = {2, 3, 5, 7, 11, 13};

i64 sigma1(i64 n) {
    i64 s = 0;
    for (i64 d = 1; d <= n; ++d)
        if (n % d == 0) s += d;
    return s;
}

// Hurwitz elements of norm n, counted in doubled coordinates: all entries of one parity,
// sum of squares 4n
i64 hurwitz_box_count(i64 n) {
    const i64 r = i64(std::sqrt(double(4 * n))) + 1;
    i64 c = 0;
    for (i64 a = -r; a <= r; ++a)
        for (i64 b = -r; b <= r; ++b)
            for (i64 x = -r; x <= r; ++x)
                for (i64 y = -r; y <= r; ++y) {
                    const i64 par = a & 1;
                    if ((b & 1) != par || (x & 1) != par || (y & 1) != par) continue;
                    if (a * a + b * b + x * x + y * y == 4 * n) ++c;
                }
    return c;
}

// mass formula evaluated independently: sum over classes of 1/#units for prime D
Q prime_mass(i64 D) { return Q(D - 1, 24); }

std::vector<double> symmetrized_spectrum(const IntMatrix& B, const std::vector<RightIdealClass>& cl) {
    const int h = int(B.size());
    Eigen::MatrixXd S(h, h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j)
            S(i, j) = double(B[size_t(i)][size_t(j)]) *
                      std::sqrt(double(cl[size_t(j)].units) / double(cl[size_t(i)].units));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const auto& v = es.eigenvalues();
    return {v.data(), v.data() + v.size()};
}

bool is_prime_small(i64 n) { return is_prime(n); }

}  // namespace

TEST_CASE("norm_enumerate on the Hurwitz order matches a box search") {
    const auto R = MaximalOrder::for_prime(2);
    CHECK(norm_enumerate(R, 1).size() == 24);
    CHECK(norm_enumerate(R, 3).size() == 96);
    for (i64 n = 1; n <= 25; ++n) CHECK(i64(norm_enumerate(R, n).size()) == hurwitz_box_count(n));
    for (i64 n = 1; n <= 99; n += 2) CHECK(i64(norm_enumerate(R, n).size()) == 24 * sigma1(n));
    for (const auto& a : norm_enumerate(R, 7)) CHECK(R.nr(a) == 7);
}

TEST_CASE("built-in orders are maximal and ramify exactly at D") {
    for (i64 D : {2, 3, 5, 7, 11, 13, 17, 37, 41, 73, 89, 97}) {
        CAPTURE(D);
        const auto R = MaximalOrder::for_prime(D);
        CHECK(R.discriminant() == D);
        CHECK(R.algebra().ramified_primes() == std::vector<i64>{D});
        // integral trace form and closed multiplication, checked through random products
        std::mt19937_64 g{uint64_t(D)};
        std::uniform_int_distribution<i64> u(-5, 5);
        for (int t = 0; t < 30; ++t) {
            IVec4 x{u(g), u(g), u(g), u(g)}, y{u(g), u(g), u(g), u(g)};
            const auto xy = R.mul(x, y);
            CHECK(R.to_quat(xy) == R.algebra().mul(R.to_quat(x), R.to_quat(y)));
            CHECK(R.nr(xy) == R.nr(x) * R.nr(y));
            CHECK(Q(R.nr(x)) == R.algebra().nr(R.to_quat(x)));
            CHECK(Q(R.trd(x)) == R.algebra().trd(R.to_quat(x)));
        }
    }
}

TEST_CASE("from_basis rejects a non-maximal order") {
    const QuaternionAlgebra B(-1, -1);
    std::array<Quat, 4> lip;
    for (int k = 0; k < 4; ++k) lip[size_t(k)].c[size_t(k)] = Q(1);
    CHECK_THROWS_AS(MaximalOrder::from_basis(B, lip), DomainError);
    std::array<Quat, 4> hur = lip;
    hur[3].c = {Q(1, 2), Q(1, 2), Q(1, 2), Q(1, 2)};
    CHECK(MaximalOrder::from_basis(B, hur).discriminant() == 2);
}

TEST_CASE("hilbert symbols") {
    CHECK(hilbert_symbol(-1, -1, 2) == -1);
    CHECK(hilbert_symbol(-1, -1, 3) == 1);
    CHECK(hilbert_symbol(-1, -3, 3) == -1);
    CHECK(hilbert_symbol(-2, -5, 5) == -1);
    CHECK(QuaternionAlgebra(-1, -1).discriminant() == 2);
}

TEST_CASE("class graphs: mass, degrees, involution, transports") {
    for (i64 D : {2, 3, 5, 7, 11, 13, 37, 73}) {
        const auto R = MaximalOrder::for_prime(D);
        for (i64 p : {2, 3, 5}) {
            if (p == D) continue;
            CAPTURE(D);
            CAPTURE(p);
            const auto G = ideal_class_graph(R, p);
            CHECK(G.mass() == prime_mass(D));
            CHECK(G.mass() == eichler_mass(D));
            for (int i = 0; i < G.h(); ++i) {
                int deg = 0;
                for (const auto& e : G.edges)
                    if (e.from == i) deg += e.mult;
                CHECK(deg == p + 1);
                const auto& nb = G.neighbor_lattices[size_t(i)];
                CHECK(nb.size() == size_t(p + 1));
                for (size_t s = 0; s < nb.size(); ++s) {
                    CHECK(is_right_ideal(R, nb[s]));
                    CHECK(nb[s].norm == G.classes[size_t(i)].ideal.norm * p);
                    const Transport& t = G.neighbor_transport[size_t(i)][s];
                    const auto back = left_transport(R, t.g, t.d, nb[s]);
                    CHECK(back.L == G.classes[size_t(t.target)].ideal.L);
                }
            }
            for (const auto& e : G.edges) {
                const auto& r = G.edges[size_t(e.reverse_id)];
                CHECK(r.reverse_id == e.id);
                CHECK(r.from == e.to);
                CHECK(G.classes[size_t(e.from)].units * r.mult == G.classes[size_t(e.to)].units * e.mult);
            }
        }
    }
}

TEST_CASE("class numbers and unit groups") {
    CHECK(ideal_class_graph(MaximalOrder::for_prime(2), 3).h() == 1);
    CHECK(ideal_class_graph(MaximalOrder::for_prime(2), 3).classes[0].units == 24);
    CHECK(ideal_class_graph(MaximalOrder::for_prime(13), 2).h() == 1);
    CHECK(ideal_class_graph(MaximalOrder::for_prime(37), 2).h() == 3);
    const auto G11 = ideal_class_graph(MaximalOrder::for_prime(11), 2);
    REQUIRE(G11.h() == 2);
    std::vector<int> u{G11.classes[0].units, G11.classes[1].units};
    std::sort(u.begin(), u.end());
    CHECK(u == std::vector<int>{4, 6});
    CHECK(G11.edges.size() == 3);
}

TEST_CASE("D = 73 regression") {
    const auto R = MaximalOrder::for_prime(73);
    const auto G2 = ideal_class_graph(R, 2), G3 = ideal_class_graph(R, 3);
    CHECK(G2.h() == 6);
    CHECK(G3.h() == 6);
    for (const auto& c : G2.classes) CHECK(c.weight() == 1);
    CHECK(G2.edges.size() == 18);
    CHECK(G3.edges.size() == 24);
    CHECK(ideal_class_graph(R, 5).edges.size() == 36);
    Q inv_w = 0;
    for (const auto& c : G2.classes) inv_w += Q(1, c.weight());
    CHECK(inv_w == Q(6));
    CHECK(G2.mass() == Q(3));
}

TEST_CASE("graph json is deterministic and carries the pairing") {
    const auto R = MaximalOrder::for_prime(11);
    const auto a = ideal_class_graph(R, 3).json(), b = ideal_class_graph(R, 3).json();
    CHECK(a == b);
    CHECK(a.find("\"reverse_id\"") != std::string::npos);
    CHECK(a.find("\"theta_prefix\"") != std::string::npos);
    CHECK_THROWS_AS(ideal_class_graph(R, 11), DomainError);
}

TEST_CASE("Brandt matrices") {
    for (i64 D : kDiscs) {
        CAPTURE(D);
        const auto R = MaximalOrder::for_prime(D);
        const auto G = ideal_class_graph(R, D == 2 ? 3 : 2);
        const auto& cl = G.classes;
        const int h = G.h();
        const auto B = brandt_matrices(R, cl, 900);
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < h; ++j) CHECK(B[1][size_t(i)][size_t(j)] == (i == j ? 1 : 0));
        // weighted symmetry and degrees
        for (int n = 1; n <= 30; ++n)
            for (int i = 0; i < h; ++i)
                for (int j = 0; j < h; ++j)
                    CHECK(cl[size_t(j)].units * B[size_t(n)][size_t(i)][size_t(j)] ==
                          cl[size_t(i)].units * B[size_t(n)][size_t(j)][size_t(i)]);
        for (i64 l = 2; l <= 30; ++l) {
            if (!is_prime_small(l) || l == D) continue;
            for (int i = 0; i < h; ++i) {
                i64 s = 0;
                for (int j = 0; j < h; ++j) s += B[size_t(l)][size_t(i)][size_t(j)];
                CHECK(s == l + 1);
            }
        }
        // B(m) B(n) = sum_{d | (m,n), (d,D) = 1} d B(mn/d^2)
        for (i64 m = 1; m <= 30; ++m)
            for (i64 n = 1; n <= 30; ++n) {
                if (std::gcd(m, D) != 1 || std::gcd(n, D) != 1) continue;
                const auto lhs = matmul(B[size_t(m)], B[size_t(n)]);
                IntMatrix rhs(size_t(h), std::vector<i64>(size_t(h), 0));
                for (i64 d = 1; d <= std::gcd(m, n); ++d) {
                    if (m % d || n % d || std::gcd(d, D) != 1) continue;
                    const auto& Bq = B[size_t(m * n / (d * d))];
                    for (int i = 0; i < h; ++i)
                        for (int j = 0; j < h; ++j) rhs[size_t(i)][size_t(j)] += d * Bq[size_t(i)][size_t(j)];
                }
                CHECK(lhs == rhs);
            }
        // temperedness away from the constants
        for (i64 l = 2; l <= 30; ++l) {
            if (!is_prime_small(l) || l == D) continue;
            auto ev = symmetrized_spectrum(B[size_t(l)], cl);
            int ones = 0;
            for (double x : ev) {
                if (std::fabs(std::fabs(x) - double(l + 1)) < 1e-9) {
                    ++ones;
                    continue;
                }
                CHECK(std::fabs(x) <= 2 * std::sqrt(double(l)) + 1e-9);
            }
            CHECK(ones == 1);
        }
    }
}

TEST_CASE("Brandt matrices of the Hurwitz order are sigma") {
    const auto R = MaximalOrder::for_prime(2);
    const auto G = ideal_class_graph(R, 3);
    const auto B = brandt_matrices(R, G.classes, 99);
    for (i64 n = 1; n <= 99; n += 2) CHECK(B[size_t(n)][0][0] == i64(norm_enumerate(R, n).size()) / 24);
    for (i64 n = 1; n <= 99; n += 2) CHECK(B[size_t(n)][0][0] == sigma1(n));
    CHECK(brandt_matrix(R, G.classes, 9) == B[9]);
}

TEST_CASE("Brandt matrix B(2) for D = 11") {
    const auto R = MaximalOrder::for_prime(11);
    const auto G = ideal_class_graph(R, 2);
    auto B2 = brandt_matrix(R, G.classes, 2);
    // order the classes by unit count 4, 6
    if (G.classes[0].units == 6) {
        std::swap(B2[0], B2[1]);
        for (auto& r : B2) std::swap(r[0], r[1]);
    }
    CHECK(B2 == IntMatrix{{1, 2}, {3, 0}});
}

TEST_CASE("split_embed invariants") {
    std::mt19937_64 g(7);
    std::uniform_int_distribution<i64> u(-50, 50);
    for (i64 D : {2, 3, 5, 11, 13}) {
        const auto R = MaximalOrder::for_prime(D);
        for (i64 p : {2, 3, 5, 7}) {
            if (p == D) continue;
            CAPTURE(D);
            CAPTURE(p);
            const auto io = split_embed(R, p, 6);
            const i64 mod = io.mod;
            auto md = [&](i64 x) { return ((x % mod) + mod) % mod; };
            const Mat2 id = io.apply(R.one());
            CHECK(id == Mat2{1, 0, 0, 1});
            for (int t = 0; t < 100; ++t) {
                IVec4 x{u(g), u(g), u(g), u(g)}, y{u(g), u(g), u(g), u(g)};
                CHECK(io.tr(io.apply(x)) == md(R.trd(x)));
                CHECK(io.det(io.apply(x)) == md(R.nr(x)));
                CHECK(io.apply(R.mul(x, y)) == io.mul(io.apply(x), io.apply(y)));
            }
            // iota(i)^2 = a
            if (auto i = R.from_quat(Quat{{Q(0), Q(1), Q(0), Q(0)}})) {
                const Mat2 s = io.mul(io.apply(*i), io.apply(*i));
                CHECK(s == Mat2{md(R.algebra().a()), 0, 0, md(R.algebra().a())});
            }
        }
        CHECK_THROWS_AS(split_embed(R, D, 4), NoSplitting);
    }
}

TEST_CASE("Hecke returns") {
    for (i64 D : {2, 11}) {
        const auto R = MaximalOrder::for_prime(D);
        for (i64 p : {2, 3}) {
            if (p == D) continue;  // no splitting at a ramified prime
            CAPTURE(D);
            CAPTURE(p);
            const auto io = split_embed(R, p, 8);
            const auto id = GL2Element::identity(p);
            for (int e : {2, 4}) {
                const BallParams ball(p, 0, e, {id});
                const auto one = hecke_returns_count(R, io, id, ball, 1);
                CHECK(one.count <= 6);
                CHECK(one.count >= 2);  // +-1
                const double lim = std::sqrt(0.5) * std::pow(double(p), e);
                for (i64 n = 1; double(n) < lim; ++n) {
                    if (n % p == 0) continue;
                    const auto r = hecke_returns_count(R, io, id, ball, n);
                    CHECK(r.count <= r.bound);
                    CHECK(r.bound == returns_bound(n));
                    // shrinking epsilon shrinks the set
                    if (e == 4 && 2.0 * double(n * n) < std::pow(double(p), 4)) {
                        const BallParams loose(p, 0, 2, {id});
                        CHECK(r.count <= hecke_returns_count(R, io, id, loose, n).count);
                    }
                }
            }
        }
    }
    CHECK(returns_bound(1) == 6);
    CHECK(returns_bound(12) == 36);
}

TEST_CASE("Hecke returns preconditions") {
    const auto R = MaximalOrder::for_prime(2);
    const auto io = split_embed(R, 3, 2);
    const auto id = GL2Element::identity(3);
    CHECK_THROWS_AS(hecke_returns_count(R, io, id, BallParams(3, 0, 4, {id}), 1), PrecisionError);
    CHECK_THROWS_AS(hecke_returns_count(R, io, id, BallParams(3, 0, 2, {id}), 3), DomainError);
    CHECK_THROWS_AS(hecke_returns_count(R, io, id, BallParams(3, 0, 2, {id}), 7), DomainError);
    CHECK_THROWS_AS(hecke_returns_count(R, io, id, BallParams(3, 0, 2, {id}), 1, 3), DomainError);
    CHECK_THROWS_AS(BallParams(3, 0, 1, {GL2Element::a(pa_pow(3, -1))}), DomainError);
    // deeper C only shrinks the set
    const auto io6 = split_embed(R, 3, 6);
    for (i64 n : {1, 2, 5, 7}) {
        const auto full = hecke_returns_count(R, io6, id, BallParams(3, 0, 4, {id}), n).count;
        const auto deep = hecke_returns_count(R, io6, id, BallParams(3, 2, 4, {id}), n).count;
        CHECK(deep <= full);
    }
}
