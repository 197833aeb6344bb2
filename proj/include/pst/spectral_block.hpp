#pragma once

#include <optional>
#include <vector>

#include "pst/symbol.hpp"
#include "pst/types.hpp"

namespace pst {

struct SpectralProjection {
    Matrix Pi;
    double epsilon = 0.0;
    int nodes = 0;
    double idempotency_defect = 0.0;   // ||Pi^2 - Pi||
    double commutation_defect = 0.0;   // ||Q Pi - Pi Q||
    Eigen::Index rank = 0;             // eigenvalue count strictly inside
};

/// Riesz projector (1/2 pi i) \oint (z - Q)^{-1} dz over |z| = epsilon by
/// trapezoid quadrature (exponentially convergent). Throws NumericalError
/// when an eigenvalue sits within 0.1 epsilon of the contour.
SpectralProjection spectral_projection(const Matrix& q, double epsilon, int nodes = 32);

/// Contour radius from the spectral gap around the near-zero cluster:
/// geometric mean of the largest in-cluster and smallest out-of-cluster
/// moduli. nullopt when every eigenvalue belongs to the cluster.
std::optional<double> auto_contour_radius(const Matrix& q, double rel_gap_floor = 3.0);

struct ApproximationPropertyReport {
    Verdict verdict = Verdict::no;
    double max_defect = 0.0;                    // max ||Pi* (Re Q) Pi|| on Sigma samples
    double tangential_derivative_defect = 0.0;  // max ||d_k (Pi* Re Q Pi)(w0)||, k in TSigma
    Eigen::Index bundle_rank = 0;
    double max_bundle_jump = 0.0;               // max ||Pi_i - Pi_{i-1}|| along the samples
    bool vacuous = false;                       // dim ker Q^N(w0) = 0
};

struct ApproximationPropertyOptions {
    double epsilon = -1.0;   // <= 0 requests per-sample automatic radii
    int nodes = 32;
    double tol = 1e-6;       // defect tolerance after symbol normalization
    double fd_step = 1e-4;   // tangential differential step
    double bundle_jump_abort = 0.5;
};

/// Checks Re<Q v, v> = 0 on the bundle V = Ran Pi over the Sigma samples and
/// the vanishing of the tangential differential of Pi* (Re Q) Pi at w0.
/// Throws StructuralError if the projection rank changes across samples.
ApproximationPropertyReport approximation_property_check(
    const MatrixSymbol& q, const HypersurfaceChart& chart, const PhasePoint& w0,
    const std::vector<PhasePoint>& sigma_samples, const ApproximationPropertyOptions& opt = {});

struct BlockForm {
    Matrix Q11, Q22;
    Matrix left_transform;    // unipotent elimination factor
    Matrix basis_transform;   // unitary, first K columns span Ran Pi
    double residual_Q12 = 0.0;
};

/// Orthonormalize Ran Pi, complete to a unitary basis, and eliminate the
/// off-diagonal block by a left unipotent factor; Q11 and Q22 are unchanged
/// by the elimination.
BlockForm block_normal_form(const Matrix& q, const SpectralProjection& pi,
                            double tol = RankPolicy{}.tol);

}  // namespace pst
