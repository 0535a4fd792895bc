#include "plab/kernels.hpp"

#include <cmath>

namespace plab::kernels {
namespace {

void csum_scalar(const double* re, const double* im, const double* w, std::size_t n,
                 double* ore, double* oim) {
    double sr = 0.0, si = 0.0;
    if (w) {
        for (std::size_t i = 0; i < n; ++i) {
            sr += w[i] * re[i];
            si += w[i] * im[i];
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            sr += re[i];
            si += im[i];
        }
    }
    *ore = sr;
    *oim = si;
}

void cdot_scalar(const double* are, const double* aim, const double* bre,
                 const double* bim, std::size_t n, double* ore, double* oim) {
    double sr = 0.0, si = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sr += are[i] * bre[i] + aim[i] * bim[i];
        si += aim[i] * bre[i] - are[i] * bim[i];
    }
    *ore = sr;
    *oim = si;
}

void gemv_scalar(const double* A, const double* x, double* y, std::size_t rows,
                 std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = A + r * cols;
        double s = 0.0;
        for (std::size_t c = 0; c < cols; ++c) s += row[c] * x[c];
        y[r] = s;
    }
}

double abs_diff_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i] - b[i]);
    return s;
}

double wdot_scalar(const double* w, const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * a[i] * b[i];
    return s;
}

}  // namespace

const Table& scalar_table() {
    static const Table t{csum_scalar, cdot_scalar, gemv_scalar, abs_diff_scalar,
                         wdot_scalar, Isa::Scalar};
    return t;
}

std::string isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace plab::kernels
