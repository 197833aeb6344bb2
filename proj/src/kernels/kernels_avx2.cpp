#if defined(__x86_64__) || defined(_M_X64)

#include "pst/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <immintrin.h>

namespace pst::kernels {
namespace {

__attribute__((target("avx2,fma"))) void lambda_min_herm2_avx2(const double* h00,
                                                               const double* h11,
                                                               const double* re01,
                                                               const double* im01, double* out,
                                                               std::size_t n) {
    std::size_t i = 0;
    const __m256d half = _mm256_set1_pd(0.5);
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(h00 + i);
        __m256d d = _mm256_loadu_pd(h11 + i);
        __m256d re = _mm256_loadu_pd(re01 + i);
        __m256d im = _mm256_loadu_pd(im01 + i);
        __m256d mean = _mm256_mul_pd(half, _mm256_add_pd(a, d));
        __m256d hd = _mm256_mul_pd(half, _mm256_sub_pd(a, d));
        __m256d disc = _mm256_fmadd_pd(hd, hd, _mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im)));
        _mm256_storeu_pd(out + i, _mm256_sub_pd(mean, _mm256_sqrt_pd(disc)));
    }
    for (; i < n; ++i) {
        double mean = 0.5 * (h00[i] + h11[i]);
        double hd = 0.5 * (h00[i] - h11[i]);
        out[i] = mean - std::sqrt(hd * hd + re01[i] * re01[i] + im01[i] * im01[i]);
    }
}

__attribute__((target("avx2,fma"))) double sublevel_measure_avx2(const double* lam,
                                                                 std::size_t n, double delta,
                                                                 double dt) {
    if (n < 2) return 0.0;
    const std::size_t cells = n - 1;
    const __m256d vdelta = _mm256_set1_pd(delta);
    const __m256d vzero = _mm256_setzero_pd();
    const __m256d vone = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= cells; i += 4) {
        __m256d a = _mm256_loadu_pd(lam + i);
        __m256d b = _mm256_loadu_pd(lam + i + 1);
        __m256d den = _mm256_sub_pd(b, a);
        __m256d t = _mm256_div_pd(_mm256_sub_pd(vdelta, a), den);
        t = _mm256_min_pd(_mm256_max_pd(t, vzero), vone);
        __m256d up = t;                         // b > a
        __m256d down = _mm256_sub_pd(vone, t);  // b < a
        __m256d gt = _mm256_cmp_pd(b, a, _CMP_GT_OQ);
        __m256d frac = _mm256_blendv_pd(down, up, gt);
        // flat cells: whole cell iff a <= delta
        __m256d eq = _mm256_cmp_pd(b, a, _CMP_EQ_OQ);
        __m256d below = _mm256_cmp_pd(a, vdelta, _CMP_LE_OQ);
        __m256d flat = _mm256_and_pd(below, vone);
        frac = _mm256_blendv_pd(frac, flat, eq);
        acc = _mm256_add_pd(acc, frac);
    }
    alignas(32) double buf[4];
    _mm256_store_pd(buf, acc);
    double total = (buf[0] + buf[1]) + (buf[2] + buf[3]);
    for (; i < cells; ++i) {
        double a = lam[i], b = lam[i + 1];
        double frac;
        if (a == b) {
            frac = a <= delta ? 1.0 : 0.0;
        } else {
            double t = std::clamp((delta - a) / (b - a), 0.0, 1.0);
            frac = b > a ? t : 1.0 - t;
        }
        total += frac;
    }
    return total * dt;
}

__attribute__((target("avx2"))) void elementwise_min_avx2(const double* a, const double* b,
                                                          double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = std::min(a[i], b[i]);
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{lambda_min_herm2_avx2, sublevel_measure_avx2, elementwise_min_avx2,
                         "avx2"};
    return ops;
}

}  // namespace pst::kernels

#endif
