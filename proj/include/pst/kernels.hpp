#pragma once

#include <cstddef>
#include <string_view>

namespace pst::kernels {

/// Data-parallel inner loops used by the sublevel sweeps. Each kernel has a
/// scalar reference implementation and SIMD variants selected once at
/// startup from CPU features; all variants are equivalence-tested against
/// the scalar reference.
struct Ops {
    /// Smallest eigenvalue of Hermitian 2x2 [[h00, h01],[conj(h01), h11]]
    /// per lane, h01 = re01 + i*im01.
    void (*lambda_min_herm2)(const double* h00, const double* h11, const double* re01,
                             const double* im01, double* out, std::size_t n);

    /// Lebesgue measure of {lambda <= delta} for piecewise-linear lambda on a
    /// uniform grid with spacing dt (n nodes, n-1 cells, crossing points
    /// interpolated linearly).
    double (*sublevel_measure)(const double* lambda, std::size_t n, double delta, double dt);

    /// out[i] = min(a[i], b[i]).
    void (*elementwise_min)(const double* a, const double* b, double* out, std::size_t n);

    std::string_view name;
};

const Ops& scalar_ops();
#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();
#endif
#if defined(__ARM_NEON)
const Ops& neon_ops();
#endif

/// The implementation picked for this machine (AVX2/NEON when available).
const Ops& active_ops();

}  // namespace pst::kernels
