#pragma once
// Haar integration on Z U \ G and the local Rankin-Selberg trilinear form.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "plab/locrep.hpp"

namespace plab {

struct NoStabilization : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvarianceViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Truncated grid for int_{y in k^x} int_{x in k} phi(y, x) d^x y dx.
// y runs over shells nu(y) = j in [j_lo, j_hi], units mod p^depth; x over
// shells nu(x) = r in [r_lo, r_hi], units mod p^depth, plus the ball
// p^{r_hi+1} O as a single cell at x = 0.
struct HaarGrid {
    i64 p = 2;
    int j_lo = 0, j_hi = 0;
    int r_lo = 0, r_hi = 0;
    int depth = 1;

    struct Cell {
        PAdicNumber point;
        double weight;
    };
    std::vector<Cell> y_cells() const;
    std::vector<Cell> x_cells() const;
    HaarGrid enlarged() const;  // j window and r window widened by 2, depth + 1
};

// phi(y, x) against d^x y dx; the factor 1/|y| of the quotient measure is the
// caller's (ell_RS supplies it through |y| from W_2 and v_3).
using ZUGIntegrand = std::function<cplx(const PAdicNumber& y, const PAdicNumber& x)>;

cplx integrate_grid(const ZUGIntegrand& phi, const HaarGrid& grid);

struct ZUGResult {
    cplx value;
    double certificate;  // |value(enlarged) - value|
    HaarGrid grid;       // the grid that certified
};
// enlarges until the certificate drops below tol; NoStabilization after max_rounds
ZUGResult integrate_ZUG(const ZUGIntegrand& phi, HaarGrid grid, double tol = 1e-10,
                        int max_rounds = 4);

// sum_{n >= n0} W(a(p^n)) z^n for the spherical W with parameters (alpha, beta), |z| <= 1
cplx spherical_tail(cplx alpha, cplx beta, i64 p, cplx z, int n0);
// int_{k^x} W(a(y)) d^x y = 1/((1 - alpha p^{-1/2})(1 - beta p^{-1/2}))
cplx spherical_kirillov_integral(cplx alpha, cplx beta, i64 p);

struct RSResult {
    cplx value;
    int j_lo = 0, j_hi = 0;  // y shells summed explicitly
    int x_cells = 0;
    int unit_cosets = 1;      // y-unit cosets (1 when the integrand is a(O^x)-invariant)
    bool closed_tail = false; // tail summed through the Kirillov generating function
    bool used_w = false;      // evaluated after translating everything by w
    double tail_bound = 0.0;
};

struct RSOptions {
    double tail_tol = 1e-14;  // truncation bound when the tail is not in closed form
    int max_shells = 400;
};

// ell_RS(W1, conj(W_{v2}), v3) = int_{ZU\G} W1 conj(W_{v2}) v3; W1 spherical, possibly translated
RSResult ell_RS_detail(const WhittakerVector& W1, const InducedVector& v2,
                       const InducedVector& v3, const RSOptions& opt = {});
cplx ell_RS(const WhittakerVector& W1, const InducedVector& v2, const InducedVector& v3);

// The same value for v2 = v3 = v_f through the triple integral in (x, y, t)
// after averaging over U1. W1 untranslated spherical.
cplx ell_RS_via_diag_invariance(const WhittakerVector& W1, const InducedVector& vf,
                                const OpenUnitSubgroup& U1);
// samples f(ux) conj f(uy) = f(x) conj f(y); throws InvarianceViolation
void check_pair_invariance(const LineFunction& f, const OpenUnitSubgroup& U1, int samples = 200,
                           std::uint64_t seed = 7);

// c = q^{N/2} int chi1 chi2^{-1}(t) psi(t) dt/|t|
cplx rs_constant_c(const MultCharacter& chi1, const MultCharacter& chi2);

struct LocalRSReportI {
    i64 p;
    int N;
    cplx alpha, beta;
    cplx lhs, rhs;
    cplx ratio;
    cplx c;
    cplx kirillov_integral;       // closed form
    cplx kirillov_integral_grid;  // grid route
    cplx lhs_diag;                // diagonal-invariance route
    std::string json() const;
};
LocalRSReportI local_rs_I(const PrincipalSeries& pi, cplx alpha, cplx beta);

struct VerifyIReport {
    i64 p;
    std::vector<LocalRSReportI> rows;  // one per N in the scan
    int N0 = -1;                       // least N with agreement at N, N+1, N+2 (-1: none)
    bool pass = false;
    std::string json() const;
};
// scans N = N_lo..N_hi using chi1 trivial, chi2 of conductor N with generator angle 1/order
VerifyIReport verify_local_rs_I(i64 p, int N_lo, int N_hi, cplx alpha, cplx beta,
                                double tol = 1e-8);

struct VerifyIIRow {
    int N;
    int m, mp;
    double norm_sq;
    cplx value;
    double normalized;  // |ell| q^{N/2} / |v'|^2
    double normalized_diag = -1.0;
};
struct VerifyIIReport {
    i64 p;
    cplx alpha, beta;
    std::vector<VerifyIIRow> rows;
    double sup = 0.0;
    std::string json() const;
};
VerifyIIReport verify_local_rs_II(const std::vector<PrincipalSeries>& reps,
                                  const std::vector<int>& support_shifts, cplx alpha, cplx beta,
                                  bool diag_route = true);

struct VerifyIIIReport {
    i64 p;
    int N;
    int c_chi1;
    cplx microlocal, newvector;
    cplx microlocal_v2;  // other orientation
    double difference, difference_v2;
    bool applicable;     // p odd
    bool pass;
    std::string json() const;
};
// chi2 = chi1^{-1}, chi1 of conductor c1 (N = c(chi1^2)); sigma spherical
VerifyIIIReport verify_local_rs_III(const MultCharacter& chi1, cplx alpha, cplx beta,
                                    double tol = 1e-8);

struct MVReport {
    i64 p;
    int N;
    double lhs;         // |ell_RS|^2
    double rhs_base;    // q^{-N} |v2|^2 |v3|^2 int <a(y) v1, v1> d^x y
    double grid_check;  // the last integral by a Kirillov grid
    double pairing_closed;  // the same integral as |int W d^x y|^2
    double ratio;
    std::string json() const;
};
MVReport mv_epic_identity_check(const PrincipalSeries& pi, cplx alpha, cplx beta);

}  // namespace plab
