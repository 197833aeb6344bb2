#pragma once

#include <optional>
#include <string>

#include "pst/quasi_symmetry.hpp"
#include "pst/spectral_block.hpp"
#include "pst/sublevel.hpp"

namespace pst {

struct FiniteTypeConfig {
    enum class Symmetrizer { automatic, identity, given };
    Symmetrizer symmetrizer = Symmetrizer::automatic;
    Matrix given_M;

    int v_sign = +1;                   // V = v_sign * d/dtau
    double patch_radius = 0.2;
    std::size_t patch_samples = 60;
    double sigma_extent = 0.1;         // Sigma sample lattice half-width
    Eigen::Index sigma_nodes = 3;      // per Sigma axis
    double base_extent = 0.1;          // bicharacteristic base lattice half-width
    Eigen::Index base_nodes = 5;       // per (x, xi) axis; 5^2 = 25 lines in 4d

    double delta_lo = 1e-7, delta_hi = 1e-2;
    std::size_t n_deltas = 16;
    SublevelOptions sublevel;
    DerivativeOrderOptions derivative;
    ApproximationPropertyOptions approx;
    SymmetrizerParams symmetrizer_params;
    double mu_fit_r2 = 0.99;
    double mu_k_tol = 0.02;
    std::uint64_t seed = 31;
};

struct FiniteTypeReport {
    Verdict verdict = Verdict::inconclusive;   // yes = finite type
    QuasiSymmetryCheck quasi;
    SymmetrizerResult symmetrizer;
    ApproximationPropertyReport approx;
    std::optional<double> mu;                  // min over the base lattice
    std::optional<int> k;
    std::optional<double> predicted_loss;      // 1/(mu+1), 0 for elliptic
    bool saturated = false;
    double worst_fit_r2 = 1.0;
    std::string note;
};

/// Full finite-type pipeline at an adapted chart: obtain the symmetrizer,
/// form Q = M P with the invertibility shift, check quasi-symmetry on the
/// patch and the approximation property on Sigma, then fit the sublevel
/// exponent of Im Q along the bicharacteristic lattice and predict the
/// derivative loss.
FiniteTypeReport finite_type_verdict(const MatrixSymbol& p, const PhasePoint& w0,
                                     const HypersurfaceChart& chart,
                                     const FiniteTypeConfig& config = {});

struct InvarianceTriple {
    FiniteTypeReport base;      // P
    FiniteTypeReport conjugated;  // A P B
    FiniteTypeReport adjoint;   // P* with V -> -V
};

/// Runs the verdict on P, A P B and P* for constant invertible A, B.
InvarianceTriple finite_type_invariance_fixture(const MatrixSymbol& p, const Matrix& a,
                                                const Matrix& b, const PhasePoint& w0,
                                                const HypersurfaceChart& chart,
                                                const FiniteTypeConfig& config = {});

}  // namespace pst
