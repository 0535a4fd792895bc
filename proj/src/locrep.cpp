#include "plab/locrep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace plab {

namespace {

constexpr double kShellTol = 1e-12;

double pow_p(i64 p, double e) { return std::pow(double(p), e); }

bool is_zero_c(cplx z) { return z == cplx(0.0, 0.0); }

// nu(x), with zero read as "very large"
int nu(const PAdicNumber& x) { return x.is_zero() ? PAdicNumber::kZeroValuation : x.valuation(); }

// |det/d^2|^{1/2} chi1(det/d) chi2(d)
cplx induced_factor(const PrincipalSeries& pi, const PAdicNumber& det, const PAdicNumber& d) {
    double mod = pow_p(pi.prime(), -0.5 * (det.valuation() - 2 * d.valuation()));
    return mod * pi.chi1().eval(det / d) * pi.chi2().eval(d);
}

bool in_ball(const PAdicNumber& x, const PAdicNumber& c, int r) {
    if (c.is_zero()) return nu(x) >= r;
    if (x.is_zero()) return c.valuation() >= r;
    return val_diff(x, c) >= r;
}

cplx chi_pow_p(const MultCharacter& chi, int s) { return turn(chi.angle_at_p() * Rational(s)); }

}  // namespace

int work_precision(i64 p) {
    int M = 0;
    long double acc = 1;
    while (acc * p < 1.0e18L) {
        acc *= p;
        ++M;
    }
    return M;
}

PAdicNumber add_or_zero(const PAdicNumber& x, const PAdicNumber& y) {
    try {
        return x + y;
    } catch (const PrecisionError&) {
        return PAdicNumber::zero(x.prime(), std::min(x.precision(), y.precision()));
    }
}

int val_diff(const PAdicNumber& x, const PAdicNumber& y) {
    if (x.is_zero() && y.is_zero()) return PAdicNumber::kZeroValuation;
    if (x.is_zero()) return y.valuation();
    if (y.is_zero()) return x.valuation();
    try {
        PAdicNumber d = x - y;
        return d.valuation();
    } catch (const PrecisionError&) {
        return std::min(x.valuation() + x.precision(), y.valuation() + y.precision());
    }
}

PAdicNumber pa_int(i64 n, i64 p) { return PAdicNumber::from_int(n, p, work_precision(p)); }
PAdicNumber pa_pow(i64 p, int v, i64 unit) {
    return PAdicNumber::from_parts(p, v, unit, work_precision(p));
}

// -- GL2Element ---------------------------------------------------------------

GL2Element::GL2Element(PAdicNumber a, PAdicNumber b, PAdicNumber c, PAdicNumber d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    det_ = add_or_zero(a_ * d_, -(b_ * c_));
    if (det_.is_zero()) throw DomainError("GL2Element: singular matrix");
}

GL2Element GL2Element::identity(i64 p) {
    auto z = PAdicNumber::zero(p, work_precision(p));
    return {pa_int(1, p), z, z, pa_int(1, p)};
}
GL2Element GL2Element::n(const PAdicNumber& x) {
    i64 p = x.prime();
    return {pa_int(1, p), x, PAdicNumber::zero(p, work_precision(p)), pa_int(1, p)};
}
GL2Element GL2Element::n_lower(const PAdicNumber& x) {
    i64 p = x.prime();
    return {pa_int(1, p), PAdicNumber::zero(p, work_precision(p)), x, pa_int(1, p)};
}
GL2Element GL2Element::diag(const PAdicNumber& y1, const PAdicNumber& y2) {
    auto z = PAdicNumber::zero(y1.prime(), work_precision(y1.prime()));
    return {y1, z, z, y2};
}
GL2Element GL2Element::a(const PAdicNumber& y) { return diag(y, pa_int(1, y.prime())); }
GL2Element GL2Element::z(const PAdicNumber& y) { return diag(y, y); }
GL2Element GL2Element::w(i64 p) {
    auto z = PAdicNumber::zero(p, work_precision(p));
    return {z, pa_int(-1, p), pa_int(1, p), z};
}

GL2Element GL2Element::operator*(const GL2Element& o) const {
    return {add_or_zero(a_ * o.a_, b_ * o.c_), add_or_zero(a_ * o.b_, b_ * o.d_),
            add_or_zero(c_ * o.a_, d_ * o.c_), add_or_zero(c_ * o.b_, d_ * o.d_)};
}

GL2Element GL2Element::inverse() const {
    PAdicNumber di = det_.inverse();
    return {d_ * di, -(b_ * di), -(c_ * di), a_ * di};
}

bool GL2Element::in_K() const {
    for (const auto* e : {&a_, &b_, &c_, &d_})
        if (!e->is_zero() && e->valuation() < 0) return false;
    return det_.valuation() == 0;
}

std::string GL2Element::str() const {
    std::ostringstream os;
    os << "[[" << a_.str() << ", " << b_.str() << "], [" << c_.str() << ", " << d_.str() << "]]";
    return os.str();
}

// -- BallFunction -------------------------------------------------------------

BallFunction BallFunction::indicator_ideal(i64 p, int r, cplx value) {
    BallFunction f(p);
    f.add_ball(PAdicNumber::zero(p, work_precision(p)), r, value);
    return f;
}

BallFunction BallFunction::char_shell(const MultCharacter& chi, int n, cplx scale) {
    BallFunction f(chi.prime());
    f.add_char_shell(n, chi, scale);
    return f;
}

void BallFunction::check_disjoint(const Piece& q) const {
    auto ball_meets_shell = [](const Piece& b, int n) {
        if (!b.center.is_zero() && b.center.valuation() < b.r) return b.center.valuation() == n;
        return n >= b.r;
    };
    for (const auto& o : pieces_) {
        bool meet;
        if (o.kind == Kind::Ball && q.kind == Kind::Ball)
            meet = val_diff(o.center, q.center) >= std::min(o.r, q.r);
        else if (o.kind == Kind::Shell && q.kind == Kind::Shell)
            meet = o.r == q.r;
        else if (o.kind == Kind::Ball)
            meet = ball_meets_shell(o, q.r);
        else
            meet = ball_meets_shell(q, o.r);
        if (meet) throw DomainError("BallFunction: pieces overlap");
    }
}

BallFunction& BallFunction::add_ball(const PAdicNumber& center, int r, cplx value) {
    Piece q;
    q.kind = Kind::Ball;
    q.center = center;
    q.r = r;
    q.value = value;
    check_disjoint(q);
    pieces_.push_back(q);
    return *this;
}

BallFunction& BallFunction::add_char_ball(const PAdicNumber& center, int r,
                                          const MultCharacter& chi, cplx scale) {
    if (center.is_zero() || center.valuation() >= r)
        throw DomainError("character ball must avoid 0");
    Piece q;
    q.kind = Kind::Ball;
    q.center = center;
    q.r = r;
    q.value = scale;
    q.has_char = true;
    q.chi = chi;
    check_disjoint(q);
    pieces_.push_back(q);
    return *this;
}

BallFunction& BallFunction::add_shell(int n, cplx value) {
    Piece q;
    q.kind = Kind::Shell;
    q.center = PAdicNumber::zero(p_, work_precision(p_));
    q.r = n;
    q.value = value;
    check_disjoint(q);
    pieces_.push_back(q);
    return *this;
}

BallFunction& BallFunction::add_char_shell(int n, const MultCharacter& chi, cplx scale) {
    Piece q;
    q.kind = Kind::Shell;
    q.center = PAdicNumber::zero(p_, work_precision(p_));
    q.r = n;
    q.value = scale;
    q.has_char = true;
    q.chi = chi;
    check_disjoint(q);
    pieces_.push_back(q);
    return *this;
}

cplx BallFunction::operator()(const PAdicNumber& x) const {
    for (const auto& q : pieces_) {
        bool hit = q.kind == Kind::Ball ? in_ball(x, q.center, q.r)
                                        : (!x.is_zero() && x.valuation() == q.r);
        if (!hit) continue;
        return q.has_char ? q.value * q.chi.eval(x) : q.value;
    }
    return 0.0;
}

double BallFunction::l2_norm_sq() const {
    double s = 0;
    for (const auto& q : pieces_) {
        double vol = pow_p(p_, -q.r);
        if (q.kind == Kind::Shell) vol *= 1.0 - 1.0 / double(p_);
        s += vol * std::norm(q.value);
    }
    return s;
}

int BallFunction::resolution() const {
    int R = -PAdicNumber::kZeroValuation;
    for (const auto& q : pieces_) {
        int c = q.has_char ? std::max(q.chi.conductor(), 1) : 0;
        if (q.kind == Kind::Ball) {
            int r = q.r;
            if (q.has_char) r = std::max(r, q.center.valuation() + q.chi.conductor());
            R = std::max(R, r);
        } else {
            R = std::max(R, q.has_char ? q.r + c : q.r + 1);
        }
    }
    return R;
}

int BallFunction::min_valuation() const {
    int m = PAdicNumber::kZeroValuation;
    for (const auto& q : pieces_) {
        if (q.kind == Kind::Shell || q.center.is_zero())
            m = std::min(m, q.r);
        else
            m = std::min(m, std::min(q.center.valuation(), q.r));
    }
    return m;
}

BallFunction BallFunction::scaled(cplx s) const {
    BallFunction f = *this;
    for (auto& q : f.pieces_) q.value *= s;
    return f;
}

// -- PrincipalSeries ----------------------------------------------------------

PrincipalSeries::PrincipalSeries(MultCharacter chi1, MultCharacter chi2)
    : chi1_(std::move(chi1)), chi2_(std::move(chi2)) {
    if (chi1_.prime() != chi2_.prime()) throw DomainError("prime mismatch");
    N_ = (chi1_.inverse() * chi2_).conductor();
    if (N_ == 0) throw DomainError("PrincipalSeries: c(chi1/chi2) = 0, irreducibility not guaranteed");
}

std::string PrincipalSeries::json() const {
    std::ostringstream os;
    os << "{\"p\":" << prime() << ",\"chi1\":{\"unit\":" << chi1_.unit_part().json()
       << ",\"at_p\":\"" << chi1_.angle_at_p().str() << "\"},\"chi2\":{\"unit\":"
       << chi2_.unit_part().json() << ",\"at_p\":\"" << chi2_.angle_at_p().str()
       << "\"},\"N\":" << N_ << ",\"c_pi\":" << conductor() << "}";
    return os.str();
}

// -- line functions and induced vectors --------------------------------------

LineFunction line_from_balls(const PrincipalSeries& pi, const BallFunction& f) {
    if (f.prime() != pi.prime()) throw DomainError("prime mismatch");
    LineFunction L;
    L.eval = [f](const PAdicNumber& z) { return f(z); };
    L.resolution = f.pieces().empty() ? 0 : f.resolution();
    L.rho = f.pieces().empty() ? 0 : 1 - f.min_valuation();
    L.A = 0.0;
    L.l2_norm_sq = f.l2_norm_sq();
    return L;
}

InducedVector::InducedVector(PrincipalSeries pi, BallFunction f)
    : pi_(pi), f_(line_from_balls(pi, f)), tag_(VectorTag::LineModel) {}

InducedVector::InducedVector(PrincipalSeries pi, LineFunction f, VectorTag tag)
    : pi_(std::move(pi)), f_(std::move(f)), tag_(tag) {}

InducedVector InducedVector::scaled(cplx s) const {
    InducedVector v = *this;
    auto base = f_.eval;
    v.f_.eval = [base, s](const PAdicNumber& z) { return s * base(z); };
    v.f_.A = s * f_.A;
    v.f_.l2_norm_sq = std::norm(s) * f_.l2_norm_sq;
    return v;
}

InducedVector InducedVector::translate_a(const PAdicNumber& y) const {
    const i64 p = pi_.prime();
    const int k = y.valuation();
    const cplx s = pow_p(p, -0.5 * k) * pi_.chi1().eval(y);
    auto base = f_.eval;
    LineFunction L;
    L.eval = [base, s, y](const PAdicNumber& z) { return s * base(y * z); };
    L.resolution = f_.resolution - k;
    L.rho = f_.rho + k;
    L.A = f_.A * s * pow_p(p, k) * pi_.ratio().eval(y);
    L.l2_norm_sq = f_.l2_norm_sq;
    InducedVector v(pi_, L, VectorTag::LineModel);
    v.set_support(m_ - k, mp_ - k);
    v.eta_ = eta_;
    return v;
}

InducedVector InducedVector::translate_n_lower(const PAdicNumber& x) const {
    auto base = f_.eval;
    LineFunction L;
    L.eval = [base, x](const PAdicNumber& z) { return base(add_or_zero(z, x)); };
    L.resolution = f_.resolution;
    if (x.is_zero())
        L.rho = f_.rho;
    else if (f_.compact())
        L.rho = std::max(f_.rho, 1 - x.valuation());
    else
        L.rho = std::max(f_.rho, std::max(pi_.N(), 1) - x.valuation());
    L.A = f_.A;
    L.l2_norm_sq = f_.l2_norm_sq;
    return InducedVector(pi_, L, VectorTag::LineModel);
}

InducedVector InducedVector::translate_z(const PAdicNumber& y) const {
    InducedVector v = scaled(pi_.central().eval(y));
    v.tag_ = tag_;
    return v;
}

InducedVector InducedVector::translate_w() const {
    const i64 p = pi_.prime();
    const MultCharacter chi = pi_.ratio();
    const PAdicNumber minus_one = pa_int(-1, p);
    auto base = f_.eval;
    const cplx A = f_.A;
    LineFunction L;
    L.eval = [base, chi, minus_one, A, p](const PAdicNumber& z) -> cplx {
        if (z.is_zero()) return A;
        PAdicNumber mz = minus_one * z;
        cplx fz = base(minus_one / z);
        if (is_zero_c(fz)) return 0.0;
        return fz * pow_p(p, z.valuation()) * chi.eval(mz);
    };
    const int R = f_.resolution, rho = f_.rho, N = std::max(pi_.N(), 1);
    L.resolution = std::max({rho, rho - 1 + N, R + 2 * rho - 2});
    L.rho = R;
    L.A = f_.eval(PAdicNumber::zero(p, work_precision(p))) * chi.eval(minus_one);
    L.l2_norm_sq = f_.l2_norm_sq;
    InducedVector v(pi_, L, VectorTag::LineModel);
    // a(u) w = w z(u) a(1/u)
    if (eta_) v.eta_ = pi_.central().unit_part() * eta_->inverse();
    return v;
}

std::string InducedVector::json() const {
    static const char* names[] = {"line_model", "microlocal_v1", "microlocal_v2", "newvector"};
    std::ostringstream os;
    os << "{\"tag\":\"" << names[int(tag_)] << "\",\"pi\":" << pi_.json() << ",\"support\":["
       << m_ << "," << mp_ << "],\"norm_sq\":" << f_.l2_norm_sq << ",\"resolution\":"
       << f_.resolution << ",\"rho\":" << f_.rho << "}";
    return os.str();
}

cplx microlocal_closed_form(const PrincipalSeries& pi, int which, const GL2Element& g) {
    if (which == 1) {
        if (g.D().is_zero()) throw DomainError("v_1 closed form needs d != 0");
        PAdicNumber q = g.C() / g.D();
        if (nu(q) < pi.N2()) return 0.0;
        return induced_factor(pi, g.det(), g.D());
    }
    if (which == 2) {
        if (g.C().is_zero()) throw DomainError("v_2 closed form needs c != 0");
        PAdicNumber q = g.D() / g.C();
        if (nu(q) < pi.N1()) return 0.0;
        double mod = pow_p(pi.prime(), -0.5 * (g.det().valuation() - 2 * g.C().valuation()));
        return mod * pi.chi1().eval(g.det() / g.C()) * pi.chi2().eval(g.C());
    }
    throw DomainError("microlocal lift index must be 1 or 2");
}

cplx induced_eval(const InducedVector& v, const GL2Element& g) {
    const auto& pi = v.rep();
    if (v.tag() == VectorTag::MicrolocalV1 && !g.D().is_zero())
        return microlocal_closed_form(pi, 1, g);
    if (v.tag() == VectorTag::MicrolocalV2 && !g.C().is_zero())
        return microlocal_closed_form(pi, 2, g);
    const auto& f = v.line();
    if (g.D().is_zero()) {
        // limit of f(c/d) at infinity
        if (f.compact()) return 0.0;
        double mod = pow_p(pi.prime(), -0.5 * (g.det().valuation() - 2 * g.C().valuation()));
        return f.A * mod * pi.chi1().eval(g.det() / g.C()) * pi.chi2().eval(g.C());
    }
    cplx fv = f.eval(g.C() / g.D());
    if (is_zero_c(fv)) return 0.0;
    return fv * induced_factor(pi, g.det(), g.D());
}

InducedVector build_microlocal(const PrincipalSeries& pi, int which) {
    const i64 p = pi.prime();
    const int N1 = pi.N1(), N2 = pi.N2();
    if (pi.N() < 1) throw DomainError("microlocal lifts need N >= 1");
    if (which == 1) {
        InducedVector v(pi, line_from_balls(pi, BallFunction::indicator_ideal(p, N2)),
                        VectorTag::MicrolocalV1);
        v.set_support(-N1, N2);
        v.set_a_eigencharacter(pi.chi1().unit_part());
        return v;
    }
    if (which != 2) throw DomainError("microlocal lift index must be 1 or 2");
    const MultCharacter chi = pi.ratio();
    LineFunction L;
    L.eval = [chi, N1, p](const PAdicNumber& z) -> cplx {
        if (z.is_zero() || z.valuation() > -N1) return 0.0;
        return pow_p(p, z.valuation()) * chi.eval(z);
    };
    L.resolution = N2;
    L.rho = N1;
    L.A = 1.0;
    L.l2_norm_sq = pow_p(p, -N1);
    InducedVector v(pi, L, VectorTag::MicrolocalV2);
    v.set_support(-N1, N2);
    v.set_a_eigencharacter(pi.chi2().unit_part());
    return v;
}

InducedVector build_newvector(const PrincipalSeries& pi, int m, int mp) {
    if (mp - m != pi.conductor())
        throw DomainError("support mismatch: m' - m must equal c(pi)");
    const i64 p = pi.prime();
    const int c1 = pi.chi1().conductor(), c2 = pi.chi2().conductor();
    InducedVector out = [&]() -> InducedVector {
        if (c1 == 0 && c2 == 0) throw DomainError("newvector: both characters unramified");
        if (c1 == 0) {
            double s = pow_p(p, 0.5 * mp);
            return {pi, line_from_balls(pi, BallFunction::indicator_ideal(p, mp, s)),
                    VectorTag::Newvector};
        }
        if (c2 > 0) {
            int n = m + c2;
            double s = std::sqrt(pow_p(p, n) / (1.0 - 1.0 / double(p)));
            MultCharacter w1inv(pi.chi1().unit_part().inverse(), Rational(0));
            return {pi, line_from_balls(pi, BallFunction::char_shell(w1inv, n, s)),
                    VectorTag::Newvector};
        }
        // chi2 unramified: f = 1_{nu(z) <= m} |z|^{-1} chi1^{-1}chi2(z), not compactly supported
        const MultCharacter chi = pi.ratio();
        const double s = pow_p(p, -0.5 * m);
        LineFunction L;
        L.eval = [chi, m, p, s](const PAdicNumber& z) -> cplx {
            if (z.is_zero() || z.valuation() > m) return 0.0;
            return s * pow_p(p, z.valuation()) * chi.eval(z);
        };
        L.resolution = mp;
        L.rho = -m;
        L.A = s;
        L.l2_norm_sq = 1.0;
        return {pi, L, VectorTag::Newvector};
    }();
    out.set_support(m, mp);
    out.set_a_eigencharacter(UnitCharacter::trivial(p));
    return out;
}

int newvector_dimension(int c_pi, int m, int mp) {
    if (m > mp) throw DomainError("newvector_dimension: need m <= m'");
    return std::max(0, 1 + (mp - m) - c_pi);
}

// -- Whittaker functions ------------------------------------------------------

cplx line_t_integral(const PrincipalSeries& pi, const LineFunction& f, const PAdicNumber& y,
                     const PAdicNumber& x) {
    if (y.is_zero()) throw DomainError("line_t_integral: y = 0");
    const i64 p = pi.prime();
    const int N = pi.N();
    const int j = y.valuation();
    const int R = f.resolution;
    const MultCharacter chi = pi.ratio();
    const UnitCharacter& omega = chi.unit_part();
    const OpenUnitSubgroup units{p, 0};
    const double shell_mass = 1.0 - 1.0 / double(p);
    const int vx = nu(x);

    cplx total = 0.0;
    // shells with nu(y/t) >= R see the constant f(x); only the Gauss shell survives
    if (-N <= j - R) {
        cplx fx = f.eval(x);
        if (!is_zero_c(fx))
            total += shell_mass * fx * chi_pow_p(chi, -N) * omega.eval(i64(-1)) *
                     gauss_sum_raw(-N, -1, omega, units);
    }
    int s_hi;
    int core = PAdicNumber::kZeroValuation;
    if (f.compact()) {
        s_hi = j - std::min(vx, 1 - f.rho);
    } else {
        long long S = std::max<long long>(0, (long long)j + f.rho);
        if (vx != PAdicNumber::kZeroValuation)
            S = std::max<long long>(S, (long long)j - vx + std::max(N, 1));
        core = int(S);
        s_hi = core - 1;
    }
    const int s_lo = j - R + 1;
    for (int s = s_lo; s <= s_hi; ++s) {
        const int e = std::max({1, R - j + s, N, -s});
        std::vector<i64> reps = units.representatives(e);
        cplx acc = 0.0;
        const cplx cs = chi_pow_p(chi, s);
        for (i64 u : reps) {
            PAdicNumber t = pa_pow(p, s, u);
            cplx fz = f.eval(add_or_zero(x, y / t));
            if (is_zero_c(fz)) continue;
            acc += fz * omega.eval(u) * psi_eval(-t);
        }
        total += shell_mass * cs * acc / double(reps.size());
    }
    if (core != PAdicNumber::kZeroValuation)
        total += f.A * chi.eval(y) * pow_p(p, j - core);
    return total;
}

cplx whittaker_intertwine(const InducedVector& v, const GL2Element& g) {
    const auto& pi = v.rep();
    const i64 p = pi.prime();
    const int N = pi.N();
    const OpenUnitSubgroup units{p, 0};
    const GL2Element w = GL2Element::w(p);
    const GL2Element wg = w * g;
    const cplx at_zero = induced_eval(v, wg);

    auto shell = [&](int s, bool* constant) {
        int e = std::max({1, N, -s});
        cplx prev = 0.0;
        for (int it = 0; it < 8; ++it, ++e) {
            cplx acc = 0.0;
            bool all_const = true;
            std::vector<i64> reps = units.representatives(e);
            for (i64 u : reps) {
                PAdicNumber t = pa_pow(p, s, u);
                cplx val = induced_eval(v, w * GL2Element::n(t) * g);
                if (std::abs(val - at_zero) > 1e-14) all_const = false;
                acc += val * psi_eval(-t);
            }
            acc *= pow_p(p, -s) * (1.0 - 1.0 / double(p)) / double(reps.size());
            if (constant) *constant = all_const && s >= 0;
            if (it > 0 && std::abs(acc - prev) < 1e-13) return acc;
            prev = acc;
        }
        return prev;
    };

    const int depth = std::max(0, v.line().resolution) + std::abs(v.line().rho);
    const int cutoff = N + depth + 2;
    cplx total = 0.0;
    // large |t|: shells nu(t) = s < 0, outward until two consecutive empty shells past -N
    int quiet = 0;
    for (int s = -1; s >= -cutoff; --s) {
        cplx h = shell(s, nullptr);
        total += h;
        quiet = (std::abs(h) < kShellTol && s < -N) ? quiet + 1 : 0;
        if (quiet >= 2) break;
    }
    // small |t|: until the integrand is the constant v(wg) on two consecutive shells
    int flat = 0;
    for (int s = 0; s < 400; ++s) {
        bool constant = false;
        cplx h = shell(s, &constant);
        if (constant) {
            if (++flat >= 2) {
                total += at_zero * pow_p(p, -s);  // p^s O, this shell included
                return total;
            }
        } else {
            flat = 0;
        }
        total += h;
    }
    throw PrecisionError("whittaker_intertwine: small-t shells did not stabilize");
}

cplx spherical_whittaker(cplx alpha, cplx beta, i64 p, int n) {
    if (n < 0) return 0.0;
    cplx s = 0.0, ai = 1.0;
    cplx bn = std::pow(beta, n);
    cplx ratio = std::abs(beta) > 0 ? alpha / beta : 0.0;
    for (int i = 0; i <= n; ++i) {
        s += ai * bn;
        ai *= ratio;
    }
    return pow_p(p, -0.5 * n) * s;
}

cplx spherical_whittaker(cplx alpha, cplx beta, const PAdicNumber& y) {
    if (y.is_zero()) throw DomainError("spherical_whittaker at y = 0");
    return spherical_whittaker(alpha, beta, y.prime(), y.valuation());
}

WhittakerVector WhittakerVector::spherical(i64 p, cplx alpha, cplx beta) {
    WhittakerVector W;
    W.kind_ = Kind::Spherical;
    W.p_ = p;
    W.alpha_ = alpha;
    W.beta_ = beta;
    return W;
}

WhittakerVector WhittakerVector::spherical_angle(i64 p, double theta) {
    return spherical(p, std::polar(1.0, theta), std::polar(1.0, -theta));
}

WhittakerVector WhittakerVector::intertwined(const InducedVector& v) {
    WhittakerVector W;
    W.kind_ = Kind::Intertwined;
    W.p_ = v.rep().prime();
    W.v_ = std::make_shared<InducedVector>(v);
    W.pi_ = std::make_shared<PrincipalSeries>(v.rep());
    return W;
}

WhittakerVector WhittakerVector::microlocal(const PrincipalSeries& pi, int which) {
    if (which != 1 && which != 2) throw DomainError("microlocal lift index must be 1 or 2");
    WhittakerVector W;
    W.kind_ = Kind::MicrolocalKirillov;
    W.p_ = pi.prime();
    W.pi_ = std::make_shared<PrincipalSeries>(pi);
    W.which_ = which;
    // W_i = kappa^{-1} W_{v_i}; kappa read off at y = 1 (inside the support)
    InducedVector v = build_microlocal(pi, which);
    PAdicNumber one = pa_int(1, pi.prime());
    cplx kappa = line_t_integral(pi, v.line(), one, PAdicNumber::zero(pi.prime(), 1));
    W.v_ = std::make_shared<InducedVector>(v.scaled(1.0 / kappa));
    return W;
}

WhittakerVector WhittakerVector::translated(const GL2Element& g0) const {
    WhittakerVector W = *this;
    if (W.right_.empty())
        W.right_.push_back(g0);
    else
        W.right_[0] = g0 * W.right_[0];
    return W;
}

cplx WhittakerVector::eval_base(const GL2Element& g) const {
    if (kind_ == Kind::Spherical) {
        const auto& c = g.C();
        const auto& d = g.D();
        cplx central = alpha_ * beta_;
        if (!d.is_zero() && nu(c) >= d.valuation()) {
            PAdicNumber y = g.det() / (d * d);
            return std::pow(central, d.valuation()) * psi_eval(g.B() / d) *
                   spherical_whittaker(alpha_, beta_, y);
        }
        PAdicNumber y = g.det() / (c * c);
        return std::pow(central, c.valuation()) * psi_eval(g.A() / c) *
               spherical_whittaker(alpha_, beta_, y);
    }
    const auto& pi = *pi_;
    if (g.D().is_zero()) return whittaker_intertwine(*v_, g);
    // g = z(d) n(b/d) a(det/d^2) n'(c/d)
    const auto& d = g.D();
    PAdicNumber y = g.det() / (d * d);
    PAdicNumber x = g.C() / d;
    cplx J = line_t_integral(pi, v_->line(), y, x);
    return pi.central().eval(d) * psi_eval(g.B() / d) * pow_p(p_, -0.5 * y.valuation()) *
           pi.chi1().eval(y) * J;
}

WhittakerVector WhittakerVector::scaled(cplx s) const {
    WhittakerVector W = *this;
    W.scale_ *= s;
    return W;
}

GL2Element WhittakerVector::right_multiplier() const {
    return right_.empty() ? GL2Element::identity(p_) : right_[0];
}

cplx WhittakerVector::at(const GL2Element& g) const {
    if (right_.empty()) return scale_ * eval_base(g);
    return scale_ * eval_base(g * right_[0]);
}

cplx WhittakerVector::kirillov(const PAdicNumber& y) const {
    if (right_.empty() && kind_ == Kind::Spherical)
        return scale_ * spherical_whittaker(alpha_, beta_, y);
    if (right_.empty() && kind_ == Kind::MicrolocalKirillov) {
        if (y.valuation() < -pi_->N1()) return 0.0;
        const auto& chi = which_ == 1 ? pi_->chi1() : pi_->chi2();
        return scale_ * pow_p(p_, -0.5 * y.valuation()) * chi.eval(y);
    }
    return at(GL2Element::a(y));
}

cplx full_whittaker_at(const WhittakerVector& W, const PAdicNumber& y, const PAdicNumber& x) {
    if (y.is_zero()) throw DomainError("full_whittaker_at: y = 0");
    if (!W.is_translated() && W.kind() == WhittakerVector::Kind::Spherical) {
        if (nu(x) >= 0) return W.scale() * spherical_whittaker(W.alpha(), W.beta(), y);
        cplx central = W.alpha() * W.beta();
        return W.scale() * std::pow(central, x.valuation()) * psi_eval(y / x) *
               spherical_whittaker(W.alpha(), W.beta(), y / (x * x));
    }
    return W.at(GL2Element::a(y) * GL2Element::n_lower(x));
}

}  // namespace plab
