#include "plab/rs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include <json.hpp>

namespace plab {

namespace {



int nu(const PAdicNumber& x) { return x.is_zero() ? PAdicNumber::kZeroValuation : x.valuation(); }
double pow_p(i64 p, double e) { return std::pow(double(p), e); }
bool is_zero_c(cplx z) { return z == cplx(0.0, 0.0); }

const std::vector<i64>& unit_reps(i64 p, int d) {
    static std::map<std::pair<i64, int>, std::vector<i64>> cache;
    auto key = std::make_pair(p, d);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    return cache.emplace(key, OpenUnitSubgroup{p, 0}.representatives(d)).first->second;
}

// additive cells of p^lo O at resolution R: shells lo..R-1 with units mod p^{R-r}, plus 0
struct XCell {
    PAdicNumber x;
    double w;
    int k;  // min(nu(x), 0)
};

std::vector<XCell> x_cells_at(i64 p, int lo, int R) {
    R = std::max(R, lo);
    std::vector<XCell> out;
    const double w = pow_p(p, -R);
    for (int r = lo; r < R; ++r)
        for (i64 u : unit_reps(p, R - r)) out.push_back({pa_pow(p, r, u), w, std::min(r, 0)});
    out.push_back({PAdicNumber::zero(p, work_precision(p)), w, 0});
    return out;
}

bool is_untranslated_spherical(const WhittakerVector& W) {
    return W.kind() == WhittakerVector::Kind::Spherical && !W.is_translated();
}

std::vector<i64> unit_generators(i64 p) {
    if (p == 2) return {posmod(-1, ipow(2, 20)), 5};
    return {smallest_primitive_root_p2(p)};
}

// g^{-1} h g in GL_2(O) for every h in the closed group generated by gens
bool conjugates_into_K(const GL2Element& g, const std::vector<GL2Element>& gens) {
    GL2Element gi = g.inverse();
    for (const auto& h : gens)
        if (!(gi * h * g).in_K()) return false;
    return true;
}

bool right_a_units_invariant(const WhittakerVector& W) {
    if (W.kind() != WhittakerVector::Kind::Spherical) return false;
    if (!W.is_translated()) return true;
    const i64 p = W.prime();
    std::vector<GL2Element> gens;
    for (i64 u : unit_generators(p)) gens.push_back(GL2Element::a(pa_pow(p, 0, u)));
    return conjugates_into_K(W.right_multiplier(), gens);
}

// least e with W(h a(u)) = W(h) for u in 1 + p^e O
int a_fix_depth(const WhittakerVector& W) {
    const i64 p = W.prime();
    GL2Element g = W.right_multiplier();
    for (int e = p == 2 ? 2 : 1; e < 40; ++e) {
        PAdicNumber u = pa_int(1, p) + pa_pow(p, e);
        if (conjugates_into_K(g, {GL2Element::a(u)})) return e;
    }
    throw DomainError("ell_RS: translated W1 not invariant under a deep unit subgroup");
}

// least e >= 0 with W(h n'(d)) = W(h) for nu(d) >= e
int n_lower_fix_depth(const WhittakerVector& W) {
    const i64 p = W.prime();
    GL2Element g = W.right_multiplier();
    for (int e = 0; e < 60; ++e)
        if (conjugates_into_K(g, {GL2Element::n_lower(pa_pow(p, e))})) return e;
    throw DomainError("ell_RS: translated W1 not smooth enough");
}

// least e with pi(a(u)) v = v for u in 1 + p^e O
int vector_a_fix_depth(const InducedVector& v) {
    const auto& f = v.line();
    const auto& pi = v.rep();
    int e = std::max({1, pi.chi1().conductor(), f.resolution + f.rho - 1});
    if (!f.compact()) e = std::max(e, pi.N());
    if (pi.prime() == 2) e = std::max(e, 2);
    return e;
}

cplx chi_pow(const MultCharacter& chi, int s) { return turn(chi.angle_at_p() * Rational(s)); }

// sum_j sum_k K[j][k] (alpha beta)^k W(p^{j-2k}) with K_{j,k} = a_k + b_k z^j for j >= j0
class KernelSum {
public:
    KernelSum(cplx alpha, cplx beta, i64 p, cplx z) : al_(alpha), be_(beta), p_(p), z_(z) {}
    void add(int j, int k, cplx v) { K_[k][j] += v; }
    void touch(int j, int k) { K_[k][j] += 0.0; }
    // false if the fit at j0..j0+3 fails for some k
    bool fits(int j0) const {
        for (const auto& [k, row] : K_) {
            cplx a, b;
            fit(row, j0, a, b);
            double scale = 1.0 + std::abs(a) + std::abs(b);
            for (int j = j0 + 2; j <= j0 + 3; ++j) {
                cplx pred = a + b * std::pow(z_, j);
                if (std::abs(at(row, j) - pred) > 1e-11 * scale) return false;
            }
        }
        return true;
    }
    cplx total(int j0) const {
        cplx sum = 0.0;
        const cplx ab = al_ * be_;
        for (const auto& [k, row] : K_) {
            const cplx ck = std::pow(ab, k);
            for (const auto& [j, v] : row)
                if (j < j0) sum += v * ck * spherical_whittaker(al_, be_, p_, j - 2 * k);
            cplx a, b;
            fit(row, j0, a, b);
            sum += ck * a * spherical_tail(al_, be_, p_, 1.0, j0 - 2 * k);
            if (!is_zero_c(b))
                sum += ck * b * std::pow(z_, 2 * k) * spherical_tail(al_, be_, p_, z_, j0 - 2 * k);
        }
        return sum;
    }

private:
    static cplx at(const std::map<int, cplx>& row, int j) {
        auto it = row.find(j);
        return it == row.end() ? cplx(0.0) : it->second;
    }
    void fit(const std::map<int, cplx>& row, int j0, cplx& a, cplx& b) const {
        cplx k0 = at(row, j0), k1 = at(row, j0 + 1);
        if (std::abs(z_ - 1.0) < 1e-12) {
            a = k0;
            b = 0.0;
            return;
        }
        b = (k1 - k0) / (std::pow(z_, j0) * (z_ - 1.0));
        a = k0 - b * std::pow(z_, j0);
    }
    cplx al_, be_;
    i64 p_;
    cplx z_;
    std::map<int, std::map<int, cplx>> K_;
};

struct Prepared {
    WhittakerVector W1;
    InducedVector v2, v3;
    bool used_w = false;
};

Prepared prepare(const WhittakerVector& W1, const InducedVector& v2, const InducedVector& v3) {
    if (W1.kind() != WhittakerVector::Kind::Spherical)
        throw DomainError("ell_RS: W1 must come from a spherical vector (possibly translated)");
    const auto& a = v2.rep();
    const auto& b = v3.rep();
    if (!(a.chi1() == b.chi1() && a.chi2() == b.chi2()))
        throw DomainError("ell_RS: v2 and v3 must lie in the same representation");
    if (a.prime() != W1.prime()) throw DomainError("ell_RS: prime mismatch");
    if (a.N() < 1) throw DomainError("ell_RS: needs c(chi1/chi2) >= 1");
    if (v3.line().compact()) return {W1, v2, v3, false};
    // invariance under w^{-1} = -w; the two factors omega(-1) cancel
    WhittakerVector Ww = is_untranslated_spherical(W1)
                             ? W1
                             : W1.translated(GL2Element::w(W1.prime()).inverse());
    InducedVector w2 = v2.translate_w(), w3 = v3.translate_w();
    if (!w3.line().compact())
        throw DomainError("ell_RS: v3 neither compactly supported nor after w");
    return {Ww, w2, w3, true};
}

// int_x phi(p^j, x) dx summed over j, with y-unit fixed to 1
struct DiagSum {
    cplx value;
    int j_lo, j_hi, cells;
    bool closed;
    double tail_bound;
};

DiagSum diag_sum(const WhittakerVector& W1, const InducedVector& v2, const InducedVector& v3,
                 const RSOptions& opt) {
    const auto& pi = v2.rep();
    const i64 p = pi.prime();
    const auto& f2 = v2.line();
    const auto& f3 = v3.line();
    const bool closed = is_untranslated_spherical(W1);
    const int Rx = std::max({f2.resolution, f3.resolution, n_lower_fix_depth(W1)});
    const int lo = 1 - f3.rho;

    struct Cell {
        XCell c;
        cplx f3v;
    };
    std::vector<Cell> cells;
    for (auto& c : x_cells_at(p, lo, Rx)) {
        cplx v = f3.eval(c.x);
        if (!is_zero_c(v)) cells.push_back({c, v});
    }
    DiagSum out{0.0, 0, 0, int(cells.size()), closed, 0.0};
    if (cells.empty()) return out;
    int kmin = 0;
    for (auto& c : cells) kmin = std::min(kmin, c.c.k);

    // conj J_{f2}(p^j, x) for one cell
    auto jterm = [&](int j, const Cell& c) {
        PAdicNumber y = pa_pow(p, j);
        return c.c.w * c.f3v * std::conj(line_t_integral(pi, f2, y, c.c.x));
    };

    if (closed) {
        const cplx z = std::conj(pi.ratio().value_at_p());
        KernelSum K(W1.alpha(), W1.beta(), p, z);
        const int j_start = 2 * kmin;
        int j0 = std::max({f2.resolution, f3.resolution, 0}) + 1;
        int computed = j_start - 1;
        auto compute_to = [&](int jmax) {
            for (int j = computed + 1; j <= jmax; ++j) {
                for (auto& c : cells) {
                    if (j < 2 * c.c.k) continue;
                    cplx t = jterm(j, c);
                    if (c.c.k < 0) t *= psi_eval(pa_pow(p, j) / c.c.x);
                    K.add(j, c.c.k, t);
                }
                for (int k = kmin; k <= 0; ++k) K.touch(j, k);
            }
            computed = std::max(computed, jmax);
        };
        for (int tries = 0;; ++tries) {
            compute_to(j0 + 3);
            if (K.fits(j0)) break;
            if (tries > 30) throw NoStabilization("ell_RS: kernel tail did not settle");
            ++j0;
        }
        out.value = W1.scale() * K.total(j0);
        out.j_lo = j_start;
        out.j_hi = computed;
        return out;
    }

    // translated W1: explicit shells with a decay bound for the tail
    const GL2Element g = W1.right_multiplier();
    int spread = 0;
    for (const auto* e : {&g.A(), &g.B(), &g.C(), &g.D()})
        if (!e->is_zero()) spread = std::max(spread, std::abs(e->valuation()));
    spread += std::abs(g.det().valuation());
    const int j_lo = 2 * kmin - 2 * spread - 2;
    const int j_floor = std::max({f2.resolution, f3.resolution, 0}) + 2 * spread + 2;
    const double decay = 1.0 / std::pow(1.0 - pow_p(p, -0.5), 2);
    cplx total = 0.0;
    int j = j_lo;
    double bound = 0.0;
    std::array<double, 3> wrecent{1.0, 1.0, 1.0};
    for (;; ++j) {
        if (j - j_lo > opt.max_shells) throw NoStabilization("ell_RS: too many y shells");
        PAdicNumber y = pa_pow(p, j);
        double wmax = 0.0, kmass = 0.0;
        for (auto& c : cells) {
            cplx wv = full_whittaker_at(W1, y, c.c.x);
            wmax = std::max(wmax, std::abs(wv));
            if (is_zero_c(wv)) continue;
            cplx t = jterm(j, c);
            kmass += std::abs(t);
            total += wv * t;
        }
        // W can vanish on an isolated shell (rational Satake angles); take the envelope of
        // the last three shells
        wrecent[size_t(j - j_lo) % 3] = wmax;
        const double wenv = *std::max_element(wrecent.begin(), wrecent.end());
        bound = wenv * std::max(kmass, 1.0) * decay * (j + 2 - j_lo);
        if (j >= j_floor + 2 && bound < opt.tail_tol) break;
    }
    out.value = total;
    out.j_lo = j_lo;
    out.j_hi = j;
    out.tail_bound = bound;
    return out;
}

}  // namespace

// -- HaarGrid ----------------------------------------------------------------

std::vector<HaarGrid::Cell> HaarGrid::y_cells() const {
    std::vector<Cell> out;
    const auto& reps = unit_reps(p, depth);
    for (int j = j_lo; j <= j_hi; ++j)
        for (i64 u : reps) out.push_back({pa_pow(p, j, u), 1.0 / double(reps.size())});
    return out;
}

std::vector<HaarGrid::Cell> HaarGrid::x_cells() const {
    std::vector<Cell> out;
    const auto& reps = unit_reps(p, depth);
    for (int r = r_lo; r <= r_hi; ++r) {
        double w = pow_p(p, -r) * (1.0 - 1.0 / double(p)) / double(reps.size());
        for (i64 u : reps) out.push_back({pa_pow(p, r, u), w});
    }
    out.push_back({PAdicNumber::zero(p, work_precision(p)), pow_p(p, -(r_hi + 1))});
    return out;
}

HaarGrid HaarGrid::enlarged() const {
    HaarGrid g = *this;
    g.j_lo -= 2;
    g.j_hi += 2;
    g.r_lo -= 2;
    g.r_hi += 2;
    g.depth += 1;
    return g;
}

cplx integrate_grid(const ZUGIntegrand& phi, const HaarGrid& grid) {
    auto ys = grid.y_cells();
    auto xs = grid.x_cells();
    cplx s = 0.0;
    for (const auto& y : ys)
        for (const auto& x : xs) s += y.weight * x.weight * phi(y.point, x.point);
    return s;
}

ZUGResult integrate_ZUG(const ZUGIntegrand& phi, HaarGrid grid, double tol, int max_rounds) {
    cplx v = integrate_grid(phi, grid);
    for (int round = 0; round < max_rounds; ++round) {
        HaarGrid g2 = grid.enlarged();
        cplx v2 = integrate_grid(phi, g2);
        double cert = std::abs(v2 - v);
        if (cert < tol) return {v, cert, grid};
        grid = g2;
        v = v2;
    }
    throw NoStabilization("integrate_ZUG: no stabilization within the window");
}

cplx spherical_tail(cplx alpha, cplx beta, i64 p, cplx z, int n0) {
    const double X = pow_p(p, -0.5);
    cplx total = 1.0 / ((1.0 - alpha * X * z) * (1.0 - beta * X * z));
    cplx zn = 1.0;
    for (int n = 0; n < n0; ++n) {
        total -= spherical_whittaker(alpha, beta, p, n) * zn;
        zn *= z;
    }
    return total;
}

cplx spherical_kirillov_integral(cplx alpha, cplx beta, i64 p) {
    return spherical_tail(alpha, beta, p, 1.0, 0);
}

// -- ell_RS ------------------------------------------------------------------

RSResult ell_RS_detail(const WhittakerVector& W1, const InducedVector& v2,
                       const InducedVector& v3, const RSOptions& opt) {
    Prepared P = prepare(W1, v2, v3);
    RSResult r;
    r.used_w = P.used_w;
    const auto& e2 = P.v2.a_eigencharacter();
    const auto& e3 = P.v3.a_eigencharacter();
    if (right_a_units_invariant(P.W1) && e2 && e3 && *e2 == *e3) {
        // the integrand is invariant under (y, x) -> (uy, ux): fix the unit of y
        DiagSum d = diag_sum(P.W1, P.v2, P.v3, opt);
        r.value = d.value;
        r.j_lo = d.j_lo;
        r.j_hi = d.j_hi;
        r.x_cells = d.cells;
        r.closed_tail = d.closed;
        r.tail_bound = d.tail_bound;
        return r;
    }
    // average over y-unit cosets, moving the unit onto the vectors by a(u)
    const i64 p = P.W1.prime();
    int e = std::max(vector_a_fix_depth(P.v2), vector_a_fix_depth(P.v3));
    if (!is_untranslated_spherical(P.W1)) e = std::max(e, a_fix_depth(P.W1));
    const auto& reps = unit_reps(p, e);
    cplx total = 0.0;
    r.closed_tail = true;
    for (i64 u0 : reps) {
        PAdicNumber u = pa_pow(p, 0, u0);
        WhittakerVector Wu = is_untranslated_spherical(P.W1)
                                 ? P.W1
                                 : P.W1.translated(GL2Element::a(u));
        DiagSum d = diag_sum(Wu, P.v2.translate_a(u), P.v3.translate_a(u), opt);
        total += d.value;
        r.j_lo = std::min(r.j_lo, d.j_lo);
        r.j_hi = std::max(r.j_hi, d.j_hi);
        r.x_cells = d.cells;
        r.closed_tail = r.closed_tail && d.closed;
        r.tail_bound = std::max(r.tail_bound, d.tail_bound);
    }
    r.value = total / double(reps.size());
    r.unit_cosets = int(reps.size());
    return r;
}

cplx ell_RS(const WhittakerVector& W1, const InducedVector& v2, const InducedVector& v3) {
    return ell_RS_detail(W1, v2, v3).value;
}

// -- diagonal-invariance route ------------------------------------------------

void check_pair_invariance(const LineFunction& f, const OpenUnitSubgroup& U1, int samples,
                           std::uint64_t seed) {
    const i64 p = U1.p;
    std::mt19937_64 gen(seed);
    const int lo = 1 - f.rho;
    const int hi = std::max(f.resolution, lo) + 1;
    const int d = std::max(U1.m, 1) + 6;
    std::vector<i64> us = U1.representatives(d);
    const i64 mod = ipow(p, d);
    auto rnd = [&](i64 n) { return std::uniform_int_distribution<i64>(0, n - 1)(gen); };
    auto point = [&]() {
        int v = lo + int(rnd(hi - lo + 1));
        i64 u;
        do u = rnd(mod); while (u % p == 0);
        return pa_pow(p, v, u);
    };
    for (int i = 0; i < samples; ++i) {
        PAdicNumber x = point(), y = point();
        PAdicNumber u = pa_pow(p, 0, us[size_t(rnd(i64(us.size())))]);
        cplx lhs = std::conj(f.eval(u * x)) * f.eval(u * y);
        cplx rhs = std::conj(f.eval(x)) * f.eval(y);
        if (std::abs(lhs - rhs) > 1e-12 * (1.0 + std::abs(rhs)))
            throw InvarianceViolation("conj(f) x f is not U1-invariant at a sampled point");
    }
}

cplx ell_RS_via_diag_invariance(const WhittakerVector& W1, const InducedVector& vf_in,
                                const OpenUnitSubgroup& U1) {
    if (!is_untranslated_spherical(W1))
        throw DomainError("diagonal-invariance route: W1 must be spherical and untranslated");
    InducedVector vf = vf_in.line().compact() ? vf_in : vf_in.translate_w();
    if (!vf.line().compact()) throw DomainError("diagonal-invariance route: f not compact");
    const auto& pi = vf.rep();
    const i64 p = pi.prime();
    if (U1.p != p) throw DomainError("diagonal-invariance route: prime mismatch");
    const auto& f = vf.line();
    check_pair_invariance(f, U1);

    const MultCharacter chi = pi.ratio().inverse();  // chi1 chi2^{-1}
    const UnitCharacter& omega = chi.unit_part();
    const int c = omega.conductor();
    const int m = U1.m;
    const int win = std::max(c, m);
    // cells must also resolve x where W1(a(y) n(x)) stops being constant
    const int R = std::max(f.resolution, n_lower_fix_depth(W1));
    const int vmin = 1 - f.rho;
    const double shell_mass = 1.0 - 1.0 / double(p);

    std::vector<XCell> cells;
    std::vector<cplx> fvals;
    for (auto& cell : x_cells_at(p, vmin, R)) {
        cplx v = f.eval(cell.x);
        if (is_zero_c(v)) continue;
        cells.push_back(cell);
        fvals.push_back(v);
    }
    // y-unit cosets of O^x / U1
    std::vector<i64> ycos = m == 0 ? std::vector<i64>{1} : unit_reps(p, m);

    // E_{u in U1} omega(u) psi(u w)
    std::map<std::pair<int, i64>, cplx> memo;
    auto Htilde = [&](const PAdicNumber& w) -> cplx {
        if (nu(w) >= 0) return c <= m ? 1.0 : 0.0;
        const int v = w.valuation();
        if (-v > win) return 0.0;
        const int dd = std::max({c, -v, 1});
        const i64 r = w.unit_mod(dd);
        auto key = std::make_pair(v, r);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        cplx h = std::conj(omega.eval(r)) * gauss_sum_raw(v, r, omega, U1);
        memo.emplace(key, h);
        return h;
    };

    std::map<std::tuple<int, int, i64>, cplx> class_memo;
    const cplx z = chi.value_at_p();
    KernelSum K(W1.alpha(), W1.beta(), p, z);
    int kmin = 0;
    for (auto& cell : cells) kmin = std::min(kmin, cell.k);
    auto compute_j = [&](int j) {
        for (int k = kmin; k <= 0; ++k) K.touch(j, k);
        for (i64 yu : ycos) {
            PAdicNumber y = pa_pow(p, j, yu);
            for (size_t ci = 0; ci < cells.size(); ++ci) {
                const auto& cell = cells[ci];
                if (j < 2 * cell.k) continue;
                const int vx = nu(cell.x);
                const bool far = cell.k < 0;
                PAdicNumber yx = far ? y / cell.x : PAdicNumber::zero(p, 1);
                const int vyx = far ? yx.valuation() : PAdicNumber::kZeroValuation;
                int s_lo = -win;
                if (far) s_lo = std::min(s_lo, vyx);
                const int s_hi = j - std::min(vx, vmin);
                cplx acc = 0.0;
                for (int s = s_lo; s <= s_hi; ++s) {
                    // valuation of w = t + y/x when no cancellation can occur
                    if (!(far && s == vyx)) {
                        const int vw = far ? std::min(s, vyx) : s;
                        if (vw < -win) continue;
                        if (vw >= 0 && c > m) continue;
                    }
                    const cplx cs = chi_pow(chi, s);
                    cplx sh = 0.0;
                    if (!far) {
                        // average omega(t)Htilde(t) over t in a(1 + p^e1 O) in one Gauss sum
                        const int e1 = std::max(1, R - j + s);
                        const OpenUnitSubgroup U2{p, m == 0 ? 0 : std::min(m, e1)};
                        const auto& reps = unit_reps(p, e1);
                        for (i64 a : reps) {
                            cplx fb = f.eval(add_or_zero(cell.x, y / pa_pow(p, s, a)));
                            if (is_zero_c(fb)) continue;
                            const i64 cls = U2.m == 0 ? 1 : posmod(a, ipow(p, U2.m));
                            auto key = std::make_tuple(s, U2.m, cls);
                            auto it = class_memo.find(key);
                            if (it == class_memo.end())
                                it = class_memo.emplace(key, gauss_sum_raw(s, cls, omega, U2)).first;
                            sh += std::conj(fb) * it->second;
                        }
                        acc += shell_mass * cs * sh / double(reps.size());
                        continue;
                    }
                    const int e = std::max({1, c, R - j + s, -s});
                    const auto& reps = unit_reps(p, e);
                    for (i64 tu : reps) {
                        PAdicNumber t = pa_pow(p, s, tu);
                        cplx fb = f.eval(add_or_zero(cell.x, y / t));
                        if (is_zero_c(fb)) continue;
                        cplx h = Htilde(add_or_zero(t, yx));
                        if (is_zero_c(h)) continue;
                        sh += std::conj(fb) * omega.eval(tu) * h;
                    }
                    acc += shell_mass * cs * sh / double(reps.size());
                }
                K.add(j, cell.k, cell.w * fvals[ci] * acc / double(ycos.size()));
            }
        }
    };
    const int j_start = 2 * kmin;
    int j0 = std::max(R + win, 0) + 1;
    int computed = j_start - 1;
    for (int tries = 0;; ++tries) {
        for (int j = computed + 1; j <= j0 + 3; ++j) compute_j(j);
        computed = std::max(computed, j0 + 3);
        if (K.fits(j0)) break;
        if (tries > 30) throw NoStabilization("diagonal-invariance route: tail did not settle");
        ++j0;
    }
    return W1.scale() * K.total(j0);
}

// -- the constant c ------------------------------------------------------------

cplx rs_constant_c(const MultCharacter& chi1, const MultCharacter& chi2) {
    const MultCharacter chi = chi1 * chi2.inverse();
    const int N = chi.conductor();
    if (N < 1) throw DomainError("rs_constant_c: needs c(chi1/chi2) >= 1");
    const i64 p = chi.prime();
    const OpenUnitSubgroup units{p, 0};
    // only the shell nu(t) = -N contributes
    cplx shell = (1.0 - 1.0 / double(p)) * chi_pow(chi, -N) *
                 gauss_sum(pa_pow(p, -N), chi.unit_part(), units);
    cplx c = pow_p(p, 0.5 * N) * shell;
    if (std::abs(std::abs(c) - 1.0) > 1e-10) throw std::logic_error("rs_constant_c: |c| != 1");
    return c;
}

}  // namespace plab
