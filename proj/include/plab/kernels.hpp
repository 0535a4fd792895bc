#pragma once
// Numeric inner loops shared by the local integrators and the spectral code.
// Every kernel has a scalar reference; an AVX2/FMA variant is picked at
// runtime when the CPU reports support. PLAB_SIMD=scalar forces the reference.

#include <cstddef>
#include <string>

namespace plab::kernels {

enum class Isa { Scalar, Avx2 };

// sum_i w[i] * (re[i] + i*im[i]); w may be null (all ones)
using CsumFn = void (*)(const double* re, const double* im, const double* w,
                        std::size_t n, double* out_re, double* out_im);
// sum_i a[i] * conj(b[i]) over split complex arrays
using CdotFn = void (*)(const double* are, const double* aim, const double* bre,
                        const double* bim, std::size_t n, double* out_re,
                        double* out_im);
// y = A x for row-major A (rows x cols)
using GemvFn = void (*)(const double* A, const double* x, double* y,
                        std::size_t rows, std::size_t cols);
// sum_i |a[i] - b[i]|
using AbsDiffFn = double (*)(const double* a, const double* b, std::size_t n);
// sum_i w[i] * a[i] * b[i]
using WdotFn = double (*)(const double* w, const double* a, const double* b,
                          std::size_t n);

struct Table {
    CsumFn csum;
    CdotFn cdot;
    GemvFn gemv;
    AbsDiffFn abs_diff;
    WdotFn wdot;
    Isa isa;
};

const Table& scalar_table();
// null when the build or the CPU lacks AVX2
const Table* avx2_table();
const Table& active();
std::string isa_name(Isa isa);

inline void csum(const double* re, const double* im, const double* w, std::size_t n,
                 double* ore, double* oim) {
    active().csum(re, im, w, n, ore, oim);
}
inline void cdot(const double* are, const double* aim, const double* bre,
                 const double* bim, std::size_t n, double* ore, double* oim) {
    active().cdot(are, aim, bre, bim, n, ore, oim);
}
inline void gemv(const double* A, const double* x, double* y, std::size_t r,
                 std::size_t c) {
    active().gemv(A, x, y, r, c);
}
inline double abs_diff(const double* a, const double* b, std::size_t n) {
    return active().abs_diff(a, b, n);
}
inline double wdot(const double* w, const double* a, const double* b, std::size_t n) {
    return active().wdot(w, a, b, n);
}

}  // namespace plab::kernels
