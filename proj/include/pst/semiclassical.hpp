#pragma once

#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "pst/sublevel.hpp"
#include "pst/types.hpp"

namespace pst {

enum class BoundaryRule { dirichlet_window, periodic };

struct DiscretizeOptions {
    double window_lo = -2.0;
    double window_hi = 2.0;
    BoundaryRule boundary = BoundaryRule::dirichlet_window;
    int stencil_order = 4;       // 2 or 4 (interior; edge rows drop to 2)
    Eigen::Index n_t = 0;        // 0 applies the resolution rule below
    int k_max = 6;               // vanishing-order cap in the rule
    Eigen::Index n_t_floor = 64;
    Eigen::Index n_t_cap = 2048;
};

/// n_t >= 64 h^{-1/(k_max+1)}, forced even (odd centered-difference D_t is
/// exactly singular), capped for the dense path.
Eigen::Index resolution_rule(double h, const DiscretizeOptions& opt);

struct DiscretizedOperator {
    Matrix dense;
    Eigen::SparseMatrix<Complex> sparse;
    bool is_sparse = false;
    double h = 0.0;
    Eigen::Index n_t = 0;
    Eigen::Index size = 0;
    double window_lo = 0.0, window_hi = 0.0;
    BoundaryRule boundary = BoundaryRule::dirichlet_window;
    int stencil_order = 4;
};

/// h D_t (x) Id_N + i F(t) as a dense matrix on the window grid; F is the
/// damping curve of the model at |xi| = 1.
DiscretizedOperator discretize_model(const MatrixCurve& damping, double h,
                                     const DiscretizeOptions& opt = {});

/// Smallest singular value: full SVD for size <= 4096, otherwise inverse
/// power iteration on the normal equations through a sparse LU of the
/// operator (deterministic start vector, tolerance 1e-10, max 500 steps).
double sigma_min_op(const DiscretizedOperator& op);

struct ScalingReport {
    std::vector<double> h_grid;
    std::vector<Eigen::Index> n_ts;
    std::vector<double> sigma_mins;
    double gamma_hat = 0.0;
    double fit_r2 = 0.0;
    std::optional<double> predicted;
    bool gain = false;            // gamma_hat <= 0.97 with fit_r2 >= 0.99
    bool unreliable_fit = false;  // fit_r2 < 0.95
};

std::vector<double> log_h_grid(double lo, double hi, std::size_t count);

ScalingReport scaling_sweep(const MatrixCurve& damping, const std::vector<double>& h_grid,
                            std::optional<double> predicted = std::nullopt,
                            const DiscretizeOptions& opt = {}, std::size_t jobs = 1);

// --- the coupled transport model -----------------------------------------

struct SubexGrid {
    Eigen::Index n_t = 128;
    Eigen::Index n_x = 128;
    Eigen::Index cap = 128;      // upper bound on both grid axes
    double t_window = 4.0;       // t in [-2, 2], Dirichlet
    double theta_res = 0.9;      // largest resolved stencil phase (radians)
    double kappa = 3.5;          // Fourier band grows as kappa max(1,|beta|) h^{-1/2}
    int stencil_order = 4;
};

/// One conjugated branch  h D_t + s alpha h D_x + i (t - beta x)^2  on the
/// band-limited x-Fourier modes (the model reduced to the unit-frequency
/// base mode; x periodic on [-1, 1)). alpha = 0 collapses to decoupled
/// per-x 1-D operators and is handled by the caller.
DiscretizedOperator discretize_subex_branch(double alpha, double beta, int branch, double h,
                                            const SubexGrid& grid = {});

/// min over branches (and over x when alpha = 0) of sigma_min at this h.
double subex_sigma_min(double alpha, double beta, double h, const SubexGrid& grid = {});

ScalingReport subex_scaling_sweep(double alpha, double beta, const std::vector<double>& h_grid,
                                  const SubexGrid& grid = {}, std::size_t jobs = 1);

struct SubexCell {
    double alpha = 0.0, beta = 0.0;
    ScalingReport report;
};

/// Gain/no-gain verdict table over the (alpha, beta) parameter grid.
std::vector<SubexCell> subellipticity_matrix(const std::vector<double>& alphas,
                                             const std::vector<double>& betas,
                                             const std::vector<double>& h_grid,
                                             const SubexGrid& grid = {}, std::size_t jobs = 1);

/// Default sweep for the coupled model, chosen so the resonant transverse
/// scale h^{1/2} stays inside the resolvable Fourier band at every h.
std::vector<double> subex_default_h_grid();

}  // namespace pst
