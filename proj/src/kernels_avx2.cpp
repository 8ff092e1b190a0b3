#include "powerlab/kernels.hpp"

#include <cmath>
#include <immintrin.h>

// AVX2 + FMA variants. Compiled with per-function target attributes so the
// translation unit stays legal on any host; dispatch guarantees these are
// only called when CPUID reports the instructions.

namespace powerlab::kernels {

namespace {

#define PL_AVX2 __attribute__((target("avx2,fma")))

PL_AVX2 inline double hsum256(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

PL_AVX2 void spmv_pattern_avx2(std::int64_t n_rows, const std::int64_t* offs,
                               const std::int32_t* cols, const double* x, double* y) {
    for (std::int64_t i = 0; i < n_rows; ++i) {
        const std::int64_t begin = offs[i], end = offs[i + 1];
        std::int64_t p = begin;
        __m256d acc = _mm256_setzero_pd();
        for (; p + 4 <= end; p += 4) {
            __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + p));
            acc = _mm256_add_pd(acc, _mm256_i32gather_pd(x, idx, 8));
        }
        double tail = 0.0;
        for (; p < end; ++p) tail += x[cols[p]];
        y[i] = hsum256(acc) + tail;
    }
}

PL_AVX2 double dot_avx2(std::int64_t n, const double* x, const double* y) {
    __m256d acc = _mm256_setzero_pd();
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i] * y[i];
    return hsum256(acc) + tail;
}

PL_AVX2 void axpy_avx2(std::int64_t n, double a, const double* x, double* y) {
    const __m256d va = _mm256_set1_pd(a);
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

PL_AVX2 void scal_avx2(std::int64_t n, double a, double* x) {
    const __m256d va = _mm256_set1_pd(a);
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

PL_AVX2 double nrm2_avx2(std::int64_t n, const double* x) {
    __m256d acc = _mm256_setzero_pd();
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i] * x[i];
    return std::sqrt(hsum256(acc) + tail);
}

#undef PL_AVX2

}  // namespace

const KernelTable avx2_table = {spmv_pattern_avx2, dot_avx2, axpy_avx2,
                                scal_avx2, nrm2_avx2, "avx2"};

}  // namespace powerlab::kernels
