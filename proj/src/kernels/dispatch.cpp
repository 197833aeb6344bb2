#include "pst/kernels.hpp"

#if defined(__ARM_NEON)
#include <arm_neon.h>
#include <algorithm>
#include <cmath>
#endif

namespace pst::kernels {

#if defined(__ARM_NEON)
namespace {

void lambda_min_herm2_neon(const double* h00, const double* h11, const double* re01,
                           const double* im01, double* out, std::size_t n) {
    std::size_t i = 0;
    const float64x2_t half = vdupq_n_f64(0.5);
    for (; i + 2 <= n; i += 2) {
        float64x2_t a = vld1q_f64(h00 + i);
        float64x2_t d = vld1q_f64(h11 + i);
        float64x2_t re = vld1q_f64(re01 + i);
        float64x2_t im = vld1q_f64(im01 + i);
        float64x2_t mean = vmulq_f64(half, vaddq_f64(a, d));
        float64x2_t hd = vmulq_f64(half, vsubq_f64(a, d));
        float64x2_t disc = vfmaq_f64(vfmaq_f64(vmulq_f64(im, im), re, re), hd, hd);
        vst1q_f64(out + i, vsubq_f64(mean, vsqrtq_f64(disc)));
    }
    for (; i < n; ++i) {
        double mean = 0.5 * (h00[i] + h11[i]);
        double hd = 0.5 * (h00[i] - h11[i]);
        out[i] = mean - std::sqrt(hd * hd + re01[i] * re01[i] + im01[i] * im01[i]);
    }
}

void elementwise_min_neon(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vminq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) out[i] = std::min(a[i], b[i]);
}

}  // namespace

const Ops& neon_ops() {
    static const Ops ops{lambda_min_herm2_neon, scalar_ops().sublevel_measure,
                         elementwise_min_neon, "neon"};
    return ops;
}
#endif

const Ops& active_ops() {
    static const Ops& picked = []() -> const Ops& {
#if defined(__x86_64__) || defined(_M_X64)
        if (__builtin_cpu_supports("avx2")) return avx2_ops();
#endif
#if defined(__ARM_NEON)
        return neon_ops();
#endif
        return scalar_ops();
    }();
    return picked;
}

}  // namespace pst::kernels
