#include "pst/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace pst::kernels {
namespace {

void lambda_min_herm2_scalar(const double* h00, const double* h11, const double* re01,
                             const double* im01, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double mean = 0.5 * (h00[i] + h11[i]);
        double half = 0.5 * (h00[i] - h11[i]);
        double off2 = re01[i] * re01[i] + im01[i] * im01[i];
        out[i] = mean - std::sqrt(half * half + off2);
    }
}

// Per cell [a,b]: lambda linear; cell fraction below delta is
//   b > a : clamp((delta-a)/(b-a), 0, 1)
//   b < a : 1 - clamp((delta-a)/(b-a), 0, 1)
//   b == a: a <= delta ? 1 : 0
double sublevel_measure_scalar(const double* lam, std::size_t n, double delta, double dt) {
    if (n < 2) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double a = lam[i], b = lam[i + 1];
        double frac;
        if (a == b) {
            frac = a <= delta ? 1.0 : 0.0;
        } else {
            double t = (delta - a) / (b - a);
            t = std::clamp(t, 0.0, 1.0);
            frac = b > a ? t : 1.0 - t;
        }
        total += frac;
    }
    return total * dt;
}

void elementwise_min_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::min(a[i], b[i]);
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{lambda_min_herm2_scalar, sublevel_measure_scalar,
                         elementwise_min_scalar, "scalar"};
    return ops;
}

}  // namespace pst::kernels
