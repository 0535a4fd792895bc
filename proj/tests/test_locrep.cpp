#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "plab/locrep.hpp"

using namespace plab;

namespace {

constexpr int kTransformSamples = 500;
constexpr int kFormulaSamples = 1000;
constexpr int kEvalPoints = 20;

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    i64 below(i64 n) { return std::uniform_int_distribution<i64>(0, n - 1)(gen); }
    int range(int lo, int hi) { return int(std::uniform_int_distribution<int>(lo, hi)(gen)); }
    i64 unit(i64 p) {
        i64 mod = ipow(p, 12);
        for (;;) {
            i64 u = below(mod);
            if (u % p) return u;
        }
    }
    PAdicNumber number(i64 p, int vlo, int vhi) { return pa_pow(p, range(vlo, vhi), unit(p)); }
    PAdicNumber integer_in(i64 p, int v) {  // random element of p^v O
        i64 x = below(ipow(p, 10));
        if (x == 0) return PAdicNumber::zero(p, work_precision(p));
        return pa_int(x, p) * pa_pow(p, v);
    }
};

MultCharacter mc(const UnitCharacter& w, Rational ap = Rational(0)) { return {w, ap}; }

UnitCharacter odd_char(i64 p, int c, i64 s) {
    i64 order = (p - 1) * ipow(p, c - 1);
    return UnitCharacter::odd(p, c, Rational(s, order));
}

// representations used throughout, with N = c(chi1/chi2)
std::vector<PrincipalSeries> sample_reps() {
    std::vector<PrincipalSeries> out;
    // chi1 unramified, chi2 of conductor 2 (p = 3)
    out.emplace_back(mc(UnitCharacter::trivial(3), Rational(1, 7)), mc(odd_char(3, 2, 1)));
    // both ramified, ratio of conductor 3 (p = 3)
    out.emplace_back(mc(odd_char(3, 2, 5), Rational(1, 5)), mc(odd_char(3, 3, 2), Rational(2, 9)));
    // chi2 = chi1^{-1}, conductor 2 (p = 5)
    auto w = odd_char(5, 2, 3);
    out.emplace_back(mc(w, Rational(1, 3)), mc(w.inverse(), Rational(-1, 3)));
    // p = 2: chi1 trivial, chi2 of conductor 3
    out.emplace_back(mc(UnitCharacter::trivial(2)),
                     mc(UnitCharacter::two(3, Rational(1, 2), Rational(1, 2)), Rational(1, 4)));
    // chi2 unramified, chi1 ramified (p = 3)
    out.emplace_back(mc(odd_char(3, 1, 1), Rational(3, 11)), mc(UnitCharacter::trivial(3)));
    return out;
}

GL2Element random_g(Rng& R, i64 p) {
    for (;;) {
        auto a = R.number(p, -2, 2), b = R.number(p, -2, 2), c = R.number(p, -2, 2),
             d = R.number(p, -2, 2);
        try {
            return GL2Element(a, b, c, d);
        } catch (const DomainError&) {
        }
    }
}

// element of GL_2(O) with b in p^lb O and c in p^lc O
GL2Element random_k(Rng& R, i64 p, int lb, int lc) {
    auto a = pa_pow(p, 0, R.unit(p)), d = pa_pow(p, 0, R.unit(p));
    return GL2Element(a, R.integer_in(p, lb), R.integer_in(p, lc), d);
}

double sqrt_abs(const PAdicNumber& y) { return std::pow(double(y.prime()), -0.5 * y.valuation()); }

}  // namespace

TEST_CASE("GL2Element constructors and group law") {
    const i64 p = 3;
    Rng R(1);
    for (int i = 0; i < 50; ++i) {
        auto x = R.number(p, -3, 3), y = R.number(p, -3, 3);
        auto nn = GL2Element::n(x) * GL2Element::n(y);
        CHECK(nn.B() == x + y);
        CHECK(nn.C().is_zero());
        auto g = random_g(R, p);
        auto e = g * g.inverse();
        CHECK(e.A() == pa_int(1, p));
        CHECK(e.B().is_zero());
        CHECK(e.C().is_zero());
    }
    auto w = GL2Element::w(p);
    auto w2 = w * w;
    CHECK(w2.A() == pa_int(-1, p));
    CHECK(w2.D() == pa_int(-1, p));
    CHECK(GL2Element::a(pa_pow(p, 2)).det() == pa_pow(p, 2));
    CHECK(GL2Element::w(p).in_K());
    CHECK_FALSE(GL2Element::a(pa_pow(p, 1)).in_K());
    auto z = PAdicNumber::zero(p, 10);
    CHECK_THROWS_AS(GL2Element(pa_int(1, p), pa_int(2, p), pa_int(2, p), pa_int(4, p)), DomainError);
    (void)z;
}

TEST_CASE("BallFunction evaluation, norm and disjointness") {
    const i64 p = 5;
    BallFunction f(p);
    f.add_ball(pa_int(1, p), 2, 2.0);       // 1 + 25 O
    f.add_ball(pa_pow(p, 1, 2), 3, 1.0);    // 10 + 125 O
    f.add_shell(-1, cplx(0, 1));            // nu = -1
    CHECK(f(pa_int(26, p)) == cplx(2.0));
    CHECK(f(pa_int(6, p)) == cplx(0.0));
    CHECK(f(pa_int(135, p)) == cplx(1.0));
    CHECK(f(pa_pow(p, -1, 3)) == cplx(0, 1));
    CHECK(f.l2_norm_sq() == doctest::Approx(4.0 / 25 + 1.0 / 125 + 5 * 0.8));
    CHECK_THROWS_AS(f.add_ball(pa_int(51, p), 3, 1.0), DomainError);
    CHECK_THROWS_AS(f.add_shell(0, 1.0), DomainError);  // meets 1 + 25 O
    CHECK_NOTHROW(f.add_shell(-2, 1.0));
    CHECK(f.min_valuation() == -2);
    CHECK(f.resolution() == 3);

    auto chi = mc(odd_char(p, 2, 7));
    auto g = BallFunction::char_shell(chi, 1, 3.0);
    CHECK(g.resolution() == 3);
    Rng R(2);
    for (int i = 0; i < 200; ++i) {
        auto x = R.number(p, -1, 3);
        auto d = R.integer_in(p, 3);
        CHECK(std::abs(g(x) - g(add_or_zero(x, d))) < 1e-12);
    }
    CHECK_THROWS_AS(g.add_char_ball(pa_pow(p, 2), 2, chi, 1.0), DomainError);
}

TEST_CASE("PrincipalSeries invariants") {
    auto w = odd_char(3, 2, 1);
    CHECK_THROWS_AS(PrincipalSeries(mc(w), mc(w, Rational(1, 3))), DomainError);
    for (const auto& pi : sample_reps()) {
        CHECK(pi.N() >= 1);
        CHECK(pi.N1() + pi.N2() == pi.N());
        CHECK(pi.N1() == pi.N() / 2);
        // conductor subadditivity, with equality when exactly one character is ramified
        int c = conductor_product_bound(pi.chi1(), pi.chi2());
        CHECK(c <= pi.conductor());
        if ((pi.chi1().conductor() == 0) != (pi.chi2().conductor() == 0))
            CHECK(c == pi.conductor());
    }
    // exhaustive subadditivity over small conductors at p = 5
    for (int c1 = 0; c1 <= 2; ++c1)
        for (int c2 = 0; c2 <= 2; ++c2)
            for (const auto& a : UnitCharacter::all_of_conductor(5, c1))
                for (const auto& b : UnitCharacter::all_of_conductor(5, c2)) {
                    int c = (a * b).conductor();
                    CHECK(c <= c1 + c2);
                    if ((c1 == 0) != (c2 == 0)) CHECK(c == c1 + c2);
                }
}

TEST_CASE("induced_eval examples") {
    const i64 p = 3;
    auto chi1 = mc(UnitCharacter::trivial(p), Rational(2, 7));
    auto chi2 = mc(odd_char(p, 2, 1));
    PrincipalSeries pi(chi1, chi2);
    InducedVector v(pi, BallFunction::indicator_ideal(p, 0));
    CHECK(std::abs(induced_eval(v, GL2Element::identity(p)) - 1.0) < 1e-14);
    cplx expect = std::pow(3.0, -0.5) * std::polar(1.0, 2 * std::numbers::pi * 2.0 / 7.0);
    CHECK(std::abs(induced_eval(v, GL2Element::a(pa_pow(p, 1))) - expect) < 1e-14);

    REQUIRE(pi.N() == 2);
    auto v1 = build_microlocal(pi, 1);
    Rng R(3);
    for (int i = 0; i < 20; ++i) {
        auto x = pa_pow(p, 0, R.unit(p));
        CHECK(induced_eval(v1, GL2Element::n_lower(x)) == cplx(0.0));
    }
    CHECK(v1.norm_sq() == doctest::Approx(std::pow(3.0, -pi.N2())));
}

TEST_CASE("induced model transformation law") {
    Rng R(4);
    for (const auto& pi : sample_reps()) {
        const i64 p = pi.prime();
        std::vector<InducedVector> vs{build_microlocal(pi, 1), build_microlocal(pi, 2)};
        vs.push_back(build_newvector(pi, 0, pi.conductor()));
        BallFunction f(p);
        f.add_ball(pa_int(1, p), 2, cplx(0.5, -1.0));
        f.add_char_shell(-1, mc(odd_char(p == 2 ? 3 : p, 1, 1).prime() == p ? odd_char(p, 1, 1)
                                                                             : UnitCharacter::trivial(p)),
                         2.0);
        vs.emplace_back(pi, f);
        for (const auto& v : vs)
            for (int i = 0; i < 60; ++i) {
                auto g = random_g(R, p);
                auto x = R.number(p, -3, 3);
                auto y1 = R.number(p, -2, 2), y2 = R.number(p, -2, 2);
                auto h = GL2Element::n(x) * GL2Element::diag(y1, y2) * g;
                cplx lhs = induced_eval(v, h);
                cplx rhs = sqrt_abs(y1) / sqrt_abs(y2) * pi.chi1().eval(y1) * pi.chi2().eval(y2) *
                           induced_eval(v, g);
                CHECK(std::abs(lhs - rhs) < 1e-10);
            }
    }
}

TEST_CASE("microlocal closed forms agree with the line model") {
    Rng R(5);
    for (const auto& pi : sample_reps()) {
        auto v1 = build_microlocal(pi, 1);
        auto v2 = build_microlocal(pi, 2);
        for (int i = 0; i < kFormulaSamples; ++i) {
            auto g = random_g(R, pi.prime());
            cplx c1 = microlocal_closed_form(pi, 1, g);
            cplx l1 = v1.line().eval(g.C() / g.D()) * sqrt_abs(g.det() / (g.D() * g.D())) *
                      pi.chi1().eval(g.det() / g.D()) * pi.chi2().eval(g.D());
            CHECK(std::abs(c1 - l1) < 1e-10);
            cplx c2 = microlocal_closed_form(pi, 2, g);
            cplx l2 = v2.line().eval(g.C() / g.D()) * sqrt_abs(g.det() / (g.D() * g.D())) *
                      pi.chi1().eval(g.det() / g.D()) * pi.chi2().eval(g.D());
            CHECK(std::abs(c2 - l2) < 1e-10);
        }
        // d = 0 uses the behaviour at infinity of the line model
        auto z = PAdicNumber::zero(pi.prime(), work_precision(pi.prime()));
        GL2Element g(pa_int(1, pi.prime()), pa_int(1, pi.prime()), pa_pow(pi.prime(), -1), z);
        InducedVector v2_line(pi, v2.line(), VectorTag::LineModel);
        CHECK(std::abs(induced_eval(v2_line, g) - microlocal_closed_form(pi, 2, g)) < 1e-12);
    }
}

TEST_CASE("orientation law of microlocal lifts") {
    Rng R(6);
    for (const auto& pi : sample_reps()) {
        const i64 p = pi.prime();
        const auto& w1 = pi.chi1().unit_part();
        const auto& w2 = pi.chi2().unit_part();
        auto v1 = build_microlocal(pi, 1);
        auto v2 = build_microlocal(pi, 2);
        std::vector<GL2Element> pts;
        for (int k = 0; k < kEvalPoints; ++k) pts.push_back(random_g(R, p));
        for (int i = 0; i < kTransformSamples; ++i) {
            auto k = random_k(R, p, pi.N1(), pi.N2());
            auto a = k.A();
            auto da = k.det() / a;
            cplx o1 = w1.eval(a) * w2.eval(da);
            cplx o2 = w2.eval(a) * w1.eval(da);
            for (const auto& h : pts) {
                CHECK(std::abs(induced_eval(v1, h * k) - o1 * induced_eval(v1, h)) < 1e-10);
                CHECK(std::abs(induced_eval(v2, h * k) - o2 * induced_eval(v2, h)) < 1e-10);
            }
        }
    }
}

TEST_CASE("newvectors: transformation, normalization, translation") {
    Rng R(7);
    for (const auto& pi : sample_reps()) {
        const i64 p = pi.prime();
        const int c = pi.conductor();
        for (int m = -2; m <= 1; ++m) {
            auto v = build_newvector(pi, m, m + c);
            CHECK(v.norm_sq() == doctest::Approx(1.0));
            std::vector<GL2Element> pts;
            for (int k = 0; k < kEvalPoints; ++k) pts.push_back(random_g(R, p));
            // points n'(x) a(y) with x near the support of the line model
            for (int k = 0; k < kEvalPoints; ++k)
                pts.push_back(GL2Element::n_lower(R.number(p, m - 1, m + c + 1)) *
                              GL2Element::a(R.number(p, -1, 1)));
            for (int i = 0; i < 100; ++i) {
                auto k = random_k(R, p, std::max(0, -m), m + c);
                cplx cc = pi.central().eval(k.D());
                for (const auto& h : pts)
                    CHECK(std::abs(induced_eval(v, h * k) - cc * induced_eval(v, h)) < 1e-10);
            }
            // a(p) maps support m..m' onto m-1..m'-1
            auto t = v.translate_a(pa_pow(p, 1));
            CHECK(t.support_m() == m - 1);
            auto u = build_newvector(pi, m - 1, m - 1 + c);
            cplx ratio = 0.0;
            for (const auto& h : pts) {
                cplx a = induced_eval(t, h), b = induced_eval(u, h);
                if (std::abs(b) < 1e-9) {
                    CHECK(std::abs(a) < 1e-9);
                    continue;
                }
                if (ratio == cplx(0.0)) ratio = a / b;
                CHECK(std::abs(a / b - ratio) < 1e-10);
            }
            CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-10);
        }
        CHECK_THROWS_AS(build_newvector(pi, 0, c + 1), DomainError);
    }
    // leading value positive real
    auto pi = sample_reps()[1];
    auto v = build_newvector(pi, 0, pi.conductor());
    cplx lead = v.line().eval(pa_pow(pi.prime(), pi.chi2().conductor()));
    CHECK(lead.real() > 0);
    CHECK(std::abs(lead.imag()) < 1e-14);
}

TEST_CASE("newvector_dimension") {
    CHECK(newvector_dimension(0, 0, 0) == 1);
    CHECK(newvector_dimension(2, -1, 1) == 1);
    CHECK(newvector_dimension(3, 0, 1) == 0);
    CHECK(newvector_dimension(2, -3, 1) == 3);
    CHECK_THROWS_AS(newvector_dimension(1, 2, 1), DomainError);
}

TEST_CASE("norm identity on a grid") {
    for (const auto& pi : sample_reps()) {
        const i64 p = pi.prime();
        for (const auto& v : {build_microlocal(pi, 1), build_newvector(pi, -1, pi.conductor() - 1),
                              build_microlocal(pi, 2)}) {
            const auto& f = v.line();
            // x in p^{-K} O at resolution f.resolution; the tail |x| > p^K is geometric
            const int K = f.compact() ? f.rho : f.rho + 2;
            const int depth = f.resolution + K;
            double s = 0;
            if (depth <= 9) {
                i64 cells = ipow(p, depth);
                for (i64 k = 0; k < cells; ++k) {
                    auto x = k == 0 ? PAdicNumber::zero(p, 10) : pa_int(k, p) * pa_pow(p, -K);
                    s += std::norm(induced_eval(v, GL2Element::n_lower(x)));
                }
                s *= std::pow(double(p), -f.resolution);
                if (!f.compact())  // |f| = |A|/|x| beyond p^{-K}: volume p^k(1-1/p) per shell
                    s += std::norm(f.A) * std::pow(double(p), -K - 1);
                CHECK(s == doctest::Approx(v.norm_sq()).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("spherical_whittaker") {
    const i64 p = 3;
    cplx a = std::polar(1.0, 0.7), b = std::polar(1.0, -0.7);
    CHECK(std::abs(spherical_whittaker(a, b, p, 0) - 1.0) < 1e-15);
    CHECK(spherical_whittaker(a, b, p, -1) == cplx(0.0));
    CHECK(std::abs(spherical_whittaker(1.0, 1.0, p, 2) - 3.0 / 3.0) < 1e-15);
    CHECK(std::abs(spherical_whittaker(1.0, 1.0, 5, 2) - 3.0 / 5.0) < 1e-15);
    // Hecke recursion
    for (double th : {0.0, 0.3, 1.1, std::numbers::pi / 2, std::numbers::pi}) {
        cplx al = std::polar(1.0, th), be = std::polar(1.0, -th);
        cplx lam = al + be;
        for (int n = 1; n < 40; ++n) {
            cplx lhs = lam * spherical_whittaker(al, be, p, n);
            cplx rhs = std::sqrt(3.0) * spherical_whittaker(al, be, p, n + 1) +
                       spherical_whittaker(al, be, p, n - 1) / std::sqrt(3.0);
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }
}

TEST_CASE("full_whittaker_at for spherical vectors") {
    const i64 p = 3;
    auto W = WhittakerVector::spherical_angle(p, 0.4);
    auto Wg = W.translated(GL2Element::identity(p));  // forces the Iwasawa route
    Rng R(8);
    for (int i = 0; i < 200; ++i) {
        auto y = R.number(p, -4, 6), x = R.number(p, -4, 3);
        cplx direct = full_whittaker_at(W, y, x);
        CHECK(std::abs(direct - full_whittaker_at(Wg, y, x)) < 1e-12);
        if (x.valuation() >= 0) {
            CHECK(std::abs(direct - W.kirillov(y)) < 1e-15);
        } else {
            auto x2 = x * x;
            cplx neat = psi_eval(y / x) * W.at(GL2Element::a(y / x2) * GL2Element::w(p) *
                                               GL2Element::n(x.inverse()));
            CHECK(std::abs(direct - neat) < 1e-12);
        }
    }
    auto y = pa_int(2, p), x = pa_pow(p, -1, 1);
    cplx expect = psi_eval(y / x) * W.kirillov(y / (x * x));
    CHECK((y / (x * x)).valuation() == 2);
    CHECK(std::abs(full_whittaker_at(W, y, x) - expect) < 1e-15);
    // uniform integrability in y, uniformly in x
    double sup = 0;
    for (int k = -3; k <= 8; ++k) {
        double s = 0;
        for (int j = -20; j < 120; ++j) s += std::abs(full_whittaker_at(W, pa_pow(p, j), pa_pow(p, k)));
        sup = std::max(sup, s);
    }
    CHECK(sup < 10.0);
}

TEST_CASE("intertwined Whittaker functions") {
    Rng R(9);
    auto reps = sample_reps();
    for (std::size_t ri : {std::size_t(0), std::size_t(3), std::size_t(4)}) {
        const auto& pi = reps[ri];
        const i64 p = pi.prime();
        for (int which : {1, 2}) {
            auto v = build_microlocal(pi, which);
            auto W = WhittakerVector::intertwined(v);
            // equivariance under n(x)
            for (int i = 0; i < 10; ++i) {
                auto g = random_g(R, p);
                auto x = R.number(p, -2, 2);
                CHECK(std::abs(W.at(GL2Element::n(x) * g) - psi_eval(x) * W.at(g)) < 1e-10);
            }
            // fast line integral versus the literal intertwiner
            for (int i = 0; i < 4; ++i) {
                auto y = R.number(p, -2, 2), x = R.number(p, -1, 2);
                auto g = GL2Element::a(y) * GL2Element::n_lower(x);
                CHECK(std::abs(W.at(g) - whittaker_intertwine(v, g)) < 1e-9);
            }
            // Kirillov closed form up to a constant
            auto Wc = WhittakerVector::microlocal(pi, which);
            cplx ratio = 0.0;
            for (int j = -pi.N1() - 3; j <= 4; ++j)
                for (int i = 0; i < 4; ++i) {
                    auto y = pa_pow(p, j, R.unit(p));
                    cplx a = W.kirillov(y), b = Wc.kirillov(y);
                    if (j < -pi.N1()) {
                        CHECK(std::abs(a) < 1e-12);
                        CHECK(b == cplx(0.0));
                        continue;
                    }
                    if (ratio == cplx(0.0)) ratio = a / b;
                    CHECK(std::abs(a / b - ratio) < 1e-10);
                }
            CHECK(std::abs(ratio) > 1e-6);
            // neat identity for |x| > 1
            for (int i = 0; i < 5; ++i) {
                auto y = R.number(p, -2, 2), x = R.number(p, -3, -1);
                cplx lhs = full_whittaker_at(W, y, x);
                cplx rhs = pi.central().eval(x) * psi_eval(y / x) * W.at(GL2Element::a(y / (x * x)) * GL2Element::w(p) *
                                                  GL2Element::n(x.inverse()));
                CHECK(std::abs(lhs - rhs) < 1e-9);
            }
        }
    }
}

TEST_CASE("a(units)-eigencharacters of microlocal lifts and newvectors") {
    Rng R(21);
    for (const auto& pi : sample_reps()) {
        const i64 p = pi.prime();
        std::vector<InducedVector> vs{build_microlocal(pi, 1), build_microlocal(pi, 2),
                                      build_newvector(pi, -1, pi.conductor() - 1)};
        vs.push_back(vs[0].translate_w());
        vs.push_back(vs[2].translate_a(pa_pow(p, 1)));
        for (const auto& v : vs) {
            REQUIRE(v.a_eigencharacter().has_value());
            const auto& eta = *v.a_eigencharacter();
            for (int i = 0; i < 10; ++i) {
                auto u = pa_pow(p, 0, R.unit(p));
                auto vu = v.translate_a(u);
                for (int k = 0; k < 10; ++k) {
                    auto z = R.number(p, -4, 4);
                    CHECK(std::abs(vu.line().eval(z) - eta.eval(u) * v.line().eval(z)) < 1e-12);
                }
            }
        }
        CHECK_FALSE(vs[0].translate_n_lower(pa_pow(p, 1)).a_eigencharacter().has_value());
    }
}

TEST_CASE("vector descriptors serialize") {
    auto pi = sample_reps()[0];
    auto v = build_microlocal(pi, 1);
    auto s = v.json();
    CHECK(s.find("\"microlocal_v1\"") != std::string::npos);
    CHECK(s.find("\"N\":2") != std::string::npos);
}
