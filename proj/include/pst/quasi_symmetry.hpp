#pragma once

#include <optional>
#include <vector>

#include "pst/symbol.hpp"

namespace pst {

struct SemiboundedCheck {
    bool hypothesis_holds = false;      // Im(zQ) >= -tol
    bool kernel_equalities_hold = false;
    double max_subspace_angle = 0.0;    // worst defect across the kernel
                                        // identities and Ran Q | ker Q
};

/// Kernel identities of semibounded matrices: when Im(zQ) >= 0 for some
/// nonzero z, ker Q = ker Q* = ker(Re Q) /\ ker(Im Q) and Ran Q is the
/// orthogonal complement of ker Q.
SemiboundedCheck semibounded_kernel_check(const Matrix& q, Complex z, double tol = 1e-10);

struct QuasiSymmetryCheck {
    Verdict verdict = Verdict::no;
    double c_margin = 0.0;     // min over samples of lambda_min(Re(VQ) + C Q*Q)
    double C_used = 0.0;
    double im_min_eig = 0.0;   // min over samples of lambda_min(Im Q)
};

inline constexpr double kImPsdTolerance = 1e-10;

/// Decide the quasi-symmetric inequalities over a sample set. C < 0 requests
/// the automatic mode: the margin is monotone in C, so the smallest C
/// recovering 99.9% of the saturated margin (bisection over [0, 1e6]) is
/// reported.
QuasiSymmetryCheck is_quasi_symmetric(const MatrixSymbol& q,
                                      const std::vector<PhasePoint>& samples,
                                      const TangentDirection& v, double C = -1.0);

struct SymmetrizerParams {
    double c_target = 1e-2;      // in units of the patch-normalized symbol
    double C_max = 1e3;
    std::size_t dykstra_iters = 150;
    std::size_t polish_iters = 2000;
    double rho_max = double(1 << 20);
    bool apply_shift = true;
    std::optional<Matrix> fixed_M;  // skip the search, evaluate this candidate
                                    // (given for the unnormalized symbol)
    std::uint64_t seed = 7;
};

struct SymmetrizerResult {
    Matrix M;                    // constant part, for the normalized symbol P/scale
    bool feasible = false;
    double C_used = 0.0;
    double rho_shift = 0.0;      // effective symmetrizer is M + i rho P_hat^*(w)
    double c_prime = 0.0;        // Im Q >= c_prime Q*Q holds at all samples
    double norm_scale = 1.0;     // sup ||P|| over the patch
    double sigma_min_M = 0.0;    // min over samples of sigma_min(M + i rho P_hat^*)
    std::vector<std::pair<double, double>> margins;  // per sample (qs1, qs2)

    /// Effective symmetrizer at a point (for the normalized symbol).
    Matrix effective_M(const Matrix& p_hat_at_w) const;
};

/// Search for a constant-per-patch symmetrizer by alternating projections
/// (Dykstra) between the affine image of M and the product of semidefinite
/// cones, then a margin-maximizing subgradient polish, then the smallest
/// power-of-two shift rho making Im Q >= c' Q*Q hold at every sample.
/// feasible=false reports "not found within budget", never a certificate.
SymmetrizerResult find_symmetrizer(const MatrixSymbol& p,
                                   const std::vector<PhasePoint>& samples,
                                   const TangentDirection& v,
                                   const SymmetrizerParams& params = {});

/// The normalized symbol Q = (M + i rho P_hat^*) P_hat as an exact
/// coefficient table.
MatrixSymbol symmetrized_symbol(const MatrixSymbol& p, const SymmetrizerResult& r);

/// w -> E(w)^* Q(w) E(w); derivative follows from the product rule on the
/// coefficient tables. Singular E surfaces at evaluation time.
MatrixSymbol transform_conjugate(const MatrixSymbol& q, const MatrixSymbol& e);
MatrixSymbol transform_conjugate(const MatrixSymbol& q, const Matrix& e);

/// w -> -Q(w)^*; quasi-symmetric with respect to -V when Q was with V.
MatrixSymbol transform_negadjoint(const MatrixSymbol& q);

}  // namespace pst
