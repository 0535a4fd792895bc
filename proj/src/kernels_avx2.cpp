#include "plab/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(_M_X64)
#define PLAB_X86 1
#include <immintrin.h>
#endif

namespace plab::kernels {

#if PLAB_X86
namespace {

#define PLAB_AVX2 __attribute__((target("avx2,fma")))

PLAB_AVX2 inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

PLAB_AVX2 void csum_avx2(const double* re, const double* im, const double* w,
                         std::size_t n, double* ore, double* oim) {
    __m256d ar = _mm256_setzero_pd(), ai = _mm256_setzero_pd();
    std::size_t i = 0;
    if (w) {
        for (; i + 4 <= n; i += 4) {
            __m256d wv = _mm256_loadu_pd(w + i);
            ar = _mm256_fmadd_pd(wv, _mm256_loadu_pd(re + i), ar);
            ai = _mm256_fmadd_pd(wv, _mm256_loadu_pd(im + i), ai);
        }
    } else {
        for (; i + 4 <= n; i += 4) {
            ar = _mm256_add_pd(ar, _mm256_loadu_pd(re + i));
            ai = _mm256_add_pd(ai, _mm256_loadu_pd(im + i));
        }
    }
    double sr = hsum(ar), si = hsum(ai);
    for (; i < n; ++i) {
        double wi = w ? w[i] : 1.0;
        sr += wi * re[i];
        si += wi * im[i];
    }
    *ore = sr;
    *oim = si;
}

PLAB_AVX2 void cdot_avx2(const double* are, const double* aim, const double* bre,
                         const double* bim, std::size_t n, double* ore, double* oim) {
    __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xr = _mm256_loadu_pd(are + i), xi = _mm256_loadu_pd(aim + i);
        __m256d yr = _mm256_loadu_pd(bre + i), yi = _mm256_loadu_pd(bim + i);
        sr = _mm256_fmadd_pd(xr, yr, sr);
        sr = _mm256_fmadd_pd(xi, yi, sr);
        si = _mm256_fmadd_pd(xi, yr, si);
        si = _mm256_fnmadd_pd(xr, yi, si);
    }
    double r = hsum(sr), m = hsum(si);
    for (; i < n; ++i) {
        r += are[i] * bre[i] + aim[i] * bim[i];
        m += aim[i] * bre[i] - are[i] * bim[i];
    }
    *ore = r;
    *oim = m;
}

PLAB_AVX2 void gemv_avx2(const double* A, const double* x, double* y, std::size_t rows,
                         std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = A + r * cols;
        __m256d acc = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4)
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c), acc);
        double s = hsum(acc);
        for (; c < cols; ++c) s += row[c] * x[c];
        y[r] = s;
    }
}

PLAB_AVX2 double abs_diff_avx2(const double* a, const double* b, std::size_t n) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_and_pd(d, mask));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += std::fabs(a[i] - b[i]);
    return s;
}

PLAB_AVX2 double wdot_avx2(const double* w, const double* a, const double* b,
                           std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i));
        acc = _mm256_fmadd_pd(t, _mm256_loadu_pd(b + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * a[i] * b[i];
    return s;
}

}  // namespace

const Table* avx2_table() {
    static const Table t{csum_avx2, cdot_avx2, gemv_avx2, abs_diff_avx2, wdot_avx2,
                         Isa::Avx2};
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? &t : nullptr;
}
#else
const Table* avx2_table() { return nullptr; }
#endif

const Table& active() {
    static const Table* chosen = [] {
        const char* env = std::getenv("PLAB_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar_table();
        const Table* t = avx2_table();
        return t ? t : &scalar_table();
    }();
    return *chosen;
}

}  // namespace plab::kernels
