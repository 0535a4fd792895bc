#pragma once
// Principal series of GL_2(Q_p): induced/line models, newvectors, microlocal
// lifts and Whittaker functions.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "plab/padic.hpp"

namespace plab {

// relative precision used for group-element arithmetic at prime p
int work_precision(i64 p);

// x + y, with a total cancellation read as an exact zero
PAdicNumber add_or_zero(const PAdicNumber& x, const PAdicNumber& y);
// nu(x - y); returns the known absolute precision if x and y agree there
int val_diff(const PAdicNumber& x, const PAdicNumber& y);

PAdicNumber pa_int(i64 n, i64 p);
PAdicNumber pa_pow(i64 p, int v, i64 unit = 1);

class GL2Element {
public:
    GL2Element(PAdicNumber a, PAdicNumber b, PAdicNumber c, PAdicNumber d);

    static GL2Element identity(i64 p);
    static GL2Element n(const PAdicNumber& x);
    static GL2Element n_lower(const PAdicNumber& x);  // n'(x)
    static GL2Element diag(const PAdicNumber& y1, const PAdicNumber& y2);
    static GL2Element a(const PAdicNumber& y);
    static GL2Element z(const PAdicNumber& y);
    static GL2Element w(i64 p);

    const PAdicNumber& A() const { return a_; }
    const PAdicNumber& B() const { return b_; }
    const PAdicNumber& C() const { return c_; }
    const PAdicNumber& D() const { return d_; }
    const PAdicNumber& det() const { return det_; }
    i64 prime() const { return a_.prime(); }

    GL2Element operator*(const GL2Element& o) const;
    GL2Element inverse() const;
    bool in_K() const;  // GL_2(Z_p)
    std::string str() const;

private:
    PAdicNumber a_, b_, c_, d_, det_;
};

// Finitely many disjoint pieces; outside them the function is zero.
//   BALL:  center + p^r O, value * (chi(x) if has_char)
//   SHELL: {nu(x) = r},   value * (chi(x) if has_char)
class BallFunction {
public:
    enum class Kind { Ball, Shell };
    struct Piece {
        Kind kind = Kind::Ball;
        PAdicNumber center;
        int r = 0;
        cplx value{1.0, 0.0};
        bool has_char = false;
        MultCharacter chi;
    };

    explicit BallFunction(i64 p) : p_(p) {}
    static BallFunction indicator_ideal(i64 p, int r, cplx value = 1.0);  // value * 1_{p^r O}
    static BallFunction char_shell(const MultCharacter& chi, int n, cplx scale = 1.0);

    BallFunction& add_ball(const PAdicNumber& center, int r, cplx value);
    BallFunction& add_char_ball(const PAdicNumber& center, int r, const MultCharacter& chi,
                                cplx scale);
    BallFunction& add_shell(int n, cplx value);
    BallFunction& add_char_shell(int n, const MultCharacter& chi, cplx scale);

    i64 prime() const { return p_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    cplx operator()(const PAdicNumber& x) const;
    double l2_norm_sq() const;
    // f(x + d) = f(x) whenever nu(d) >= resolution()
    int resolution() const;
    // least valuation met by the support (kZeroValuation if empty)
    int min_valuation() const;
    BallFunction scaled(cplx s) const;

private:
    void check_disjoint(const Piece& q) const;
    i64 p_;
    std::vector<Piece> pieces_;
};

class PrincipalSeries {
public:
    PrincipalSeries(MultCharacter chi1, MultCharacter chi2);
    const MultCharacter& chi1() const { return chi1_; }
    const MultCharacter& chi2() const { return chi2_; }
    i64 prime() const { return chi1_.prime(); }
    int N() const { return N_; }  // c(chi1/chi2)
    int N1() const { return N_ / 2; }
    int N2() const { return N_ - N_ / 2; }
    int conductor() const { return chi1_.conductor() + chi2_.conductor(); }
    MultCharacter central() const { return chi1_ * chi2_; }
    // chi1^{-1} chi2, the character governing the line model at infinity
    MultCharacter ratio() const { return chi1_.inverse() * chi2_; }
    std::string json() const;

private:
    MultCharacter chi1_, chi2_;
    int N_;
};

// A function on k describing v_f. Besides pointwise values it records
//   resolution: f(z + d) = f(z) for nu(d) >= resolution
//   rho, A:     f(z) = A |z|^{-1} chi1^{-1}chi2(z) whenever nu(z) <= -rho
// so that both the compact and the "decaying at infinity" cases are exact.
struct LineFunction {
    std::function<cplx(const PAdicNumber&)> eval;  // z == 0 allowed
    int resolution = 0;
    int rho = 0;
    cplx A{0.0, 0.0};
    double l2_norm_sq = 0.0;
    bool compact() const { return A == cplx(0.0, 0.0); }
};

enum class VectorTag { LineModel, MicrolocalV1, MicrolocalV2, Newvector };

class InducedVector {
public:
    InducedVector(PrincipalSeries pi, BallFunction f);
    InducedVector(PrincipalSeries pi, LineFunction f, VectorTag tag);

    const PrincipalSeries& rep() const { return pi_; }
    const LineFunction& line() const { return f_; }
    VectorTag tag() const { return tag_; }
    int support_m() const { return m_; }
    int support_mp() const { return mp_; }
    void set_support(int m, int mp) { m_ = m; mp_ = mp; }
    double norm_sq() const { return f_.l2_norm_sq; }
    // eta with pi(a(u)) v = eta(u) v for all units u, when known
    const std::optional<UnitCharacter>& a_eigencharacter() const { return eta_; }
    void set_a_eigencharacter(std::optional<UnitCharacter> eta) { eta_ = std::move(eta); }

    InducedVector scaled(cplx s) const;
    // pi(g) v for g in the generators used by invariance checks
    InducedVector translate_a(const PAdicNumber& y) const;
    InducedVector translate_n_lower(const PAdicNumber& x) const;
    InducedVector translate_z(const PAdicNumber& y) const;
    InducedVector translate_w() const;
    std::string json() const;

private:
    PrincipalSeries pi_;
    LineFunction f_;
    VectorTag tag_;
    int m_ = 0, mp_ = 0;
    std::optional<UnitCharacter> eta_;
};

// value of v at g through the line model, v(g) = f(c/d)|det/d^2|^{1/2} chi1(det/d) chi2(d)
cplx induced_eval(const InducedVector& v, const GL2Element& g);
// closed forms for v_1 (needs d != 0) and v_2 (needs c != 0)
cplx microlocal_closed_form(const PrincipalSeries& pi, int which, const GL2Element& g);

InducedVector build_microlocal(const PrincipalSeries& pi, int which);
InducedVector build_newvector(const PrincipalSeries& pi, int m, int mp);
int newvector_dimension(int c_pi, int m, int mp);

LineFunction line_from_balls(const PrincipalSeries& pi, const BallFunction& f);

// J_f(y, x) = int_t f(x + y/t) chi(t) psi(-t) dt/|t|, chi = chi1^{-1}chi2,
// so that W_v(a(y) n'(x)) = |y|^{1/2} chi1(y) J_f(y, x). Exact finite sum.
cplx line_t_integral(const PrincipalSeries& pi, const LineFunction& f, const PAdicNumber& y,
                     const PAdicNumber& x);

// literal intertwiner W_v(g) = int v(w n(t) g) psi(-t) dt, summed by t-shells
cplx whittaker_intertwine(const InducedVector& v, const GL2Element& g);

// W(a(p^n)) for the spherical vector with Satake parameters (alpha, beta)
cplx spherical_whittaker(cplx alpha, cplx beta, i64 p, int n);
cplx spherical_whittaker(cplx alpha, cplx beta, const PAdicNumber& y);

class WhittakerVector {
public:
    enum class Kind { Spherical, Intertwined, MicrolocalKirillov };

    static WhittakerVector spherical(i64 p, cplx alpha, cplx beta);
    static WhittakerVector spherical_angle(i64 p, double theta);  // alpha = e^{i theta}
    static WhittakerVector intertwined(const InducedVector& v);
    // closed Kirillov formula of W_1 (which = 1) or W_2 (which = 2)
    static WhittakerVector microlocal(const PrincipalSeries& pi, int which);

    Kind kind() const { return kind_; }
    i64 prime() const { return p_; }
    cplx alpha() const { return alpha_; }
    cplx beta() const { return beta_; }
    // sigma(g0) W: evaluation becomes W(h g0)
    WhittakerVector translated(const GL2Element& g0) const;
    WhittakerVector scaled(cplx s) const;
    cplx scale() const { return scale_; }
    bool is_translated() const { return !right_.empty(); }
    // the accumulated right multiplier (identity when untranslated)
    GL2Element right_multiplier() const;

    cplx kirillov(const PAdicNumber& y) const;  // W(a(y))
    cplx at(const GL2Element& g) const;         // W(g)

private:
    cplx eval_base(const GL2Element& g) const;
    Kind kind_ = Kind::Spherical;
    i64 p_ = 2;
    cplx alpha_{1.0, 0.0}, beta_{1.0, 0.0};
    std::shared_ptr<const InducedVector> v_;
    std::shared_ptr<const PrincipalSeries> pi_;
    int which_ = 1;
    cplx scale_{1.0, 0.0};
    std::vector<GL2Element> right_;
};

// W(a(y) n'(x))
cplx full_whittaker_at(const WhittakerVector& W, const PAdicNumber& y, const PAdicNumber& x);

}  // namespace plab
