#pragma once

#include <map>
#include <optional>
#include <vector>

#include "pst/symbol.hpp"

namespace pst {

struct PrincipalTypeVerdict {
    Verdict verdict = Verdict::inconclusive;
    std::optional<TangentDirection> witness;
    double pairing_condition = 0.0;  // sigma_min of the pairing at the witness
    Eigen::Index kernel_dim = 0;
};

/// The K x K matrix of the bilinear pairing (u, v) -> <dP_nu(w) u, v> over
/// orthonormal bases of ker P(w) and ker P*(w). Throws StructuralError when
/// the kernel and cokernel dimensions disagree.
Matrix cokernel_pairing(const MatrixSymbol& p, const PhasePoint& w, const TangentDirection& nu,
                        double tol = RankPolicy{}.tol);

struct PrincipalTypeSearch {
    std::size_t grid_density = 2000;
    std::size_t refine_iters = 20;
    bool exclude_radial = true;
    double radial_cone = 0.1;           // half-angle (radians) around +-w/|w|
    double tol = 1e-7;                  // on sigma_min of the normalized pairing
    std::size_t min_density_for_no = 500;
    std::uint64_t seed = 20250810;
};

PrincipalTypeVerdict is_principal_type(const MatrixSymbol& p, const PhasePoint& w,
                                       const PrincipalTypeSearch& search = {});

struct MultiplicityProfile {
    // multiset of (algebraic, geometric) multiplicities of near-zero clusters
    std::vector<std::pair<int, int>> sections;
    bool operator==(const MultiplicityProfile&) const = default;
};

struct ConstantCharacteristicsReport {
    Verdict verdict = Verdict::inconclusive;
    MultiplicityProfile at_center;
    std::vector<MultiplicityProfile> per_sample;
    std::string note;
};

/// Eigenvalues of P with |lambda| < eps are clustered (single linkage,
/// radius eps/10 unless overridden); the verdict is yes when every sample
/// shows the same multiset of (algebraic, geometric) multiplicities.
/// Cluster separation below twice the radius is reported inconclusive.
ConstantCharacteristicsReport check_constant_characteristics(
    const MatrixSymbol& p, const PhasePoint& w0, double eps,
    const std::vector<PhasePoint>& samples, double cluster_radius = -1.0);

}  // namespace pst
