#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pst/symbol.hpp"

namespace pst {

/// A PSD matrix curve t -> F(t): either the exact restriction of a
/// polynomial symbol to a bicharacteristic line, or a plain callable.
class MatrixCurve {
public:
    MatrixCurve(UnivariateMatrixPoly poly);  // NOLINT: implicit by design
    MatrixCurve(std::function<Matrix(double)> fn, Eigen::Index n);

    Matrix eval(double t) const;
    Eigen::Index dimension() const { return n_; }
    bool polynomial() const { return poly_.has_value(); }
    const UnivariateMatrixPoly& poly() const;

    /// lambda_min over a uniform grid, through the batched kernels.
    std::vector<double> lambda_min_grid(double lo, double hi, std::size_t count) const;

    /// Restriction of the imaginary part of a symbol to the t-line through
    /// base (bicharacteristic of an adapted chart).
    static MatrixCurve im_along_line(const MatrixSymbol& q, const PhasePoint& base,
                                     Eigen::Index t_coord);

private:
    std::optional<UnivariateMatrixPoly> poly_;
    std::function<Matrix(double)> fn_;
    Eigen::Index n_ = 0;
};

struct SublevelOptions {
    double window_lo = -1.0;
    double window_hi = 1.0;
    std::size_t n_grid = 100000;
    double psd_tol = 1e-10;      // tolerated negativity of lambda_min(F)
};

/// |{t in window : lambda_min(F(t)) <= delta}| with linear interpolation of
/// the crossing points between grid nodes.
double omega_delta_measure(const MatrixCurve& f, double delta, const SublevelOptions& opt = {});

struct SublevelReport {
    std::vector<double> delta_grid;
    std::vector<double> measures;
    double window_lo = 0.0, window_hi = 0.0;
    double mu_hat = 0.0;          // +inf sentinel when all measures vanish
    double fit_r2 = 0.0;
    std::optional<int> k_inferred;
    bool saturated = false;
};

/// Log-log least-squares fit of the measure against delta over a log-spaced
/// grid; detects saturation (measure == window length for every delta) and
/// the elliptic case (all measures zero -> mu = +inf).
SublevelReport fit_sublevel_exponent(const MatrixCurve& f, double delta_lo, double delta_hi,
                                     std::size_t n_deltas, const SublevelOptions& opt = {});

enum class VanishingProbe { min_eigvec, random, both };

struct DerivativeOrderOptions {
    int k_max = 8;
    VanishingProbe strategy = VanishingProbe::both;
    std::size_t random_vectors = 32;
    std::size_t t_grid = 801;     // odd, so the window midpoint is a node
    double threshold_rel = 1e-3;  // against the probe's largest sum; sits
                                  // above the FD roundoff floor of the
                                  // high-order stencils
    std::uint64_t seed = 11;
};

/// Smallest even k <= k_max such that sum_{j<=k} |d^j/dt^j <F u, u>| stays
/// positive over the window for every probe direction; the minimal
/// eigenvector probe follows lambda_min(F(t)) itself.
std::optional<int> derivative_order(const MatrixCurve& f, double window_lo, double window_hi,
                                    const DerivativeOrderOptions& opt = {});

}  // namespace pst
