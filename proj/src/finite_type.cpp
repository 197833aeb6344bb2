#include "pst/finite_type.hpp"

#include <algorithm>
#include <cmath>

#include "pst/linalg.hpp"
#include "pst/sampling.hpp"

namespace pst {

namespace {

std::vector<Eigen::Index> coords_except(Eigen::Index dim,
                                        std::initializer_list<Eigen::Index> skip) {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < dim; ++i)
        if (std::find(skip.begin(), skip.end(), i) == skip.end()) out.push_back(i);
    return out;
}

}  // namespace

FiniteTypeReport finite_type_verdict(const MatrixSymbol& p, const PhasePoint& w0,
                                     const HypersurfaceChart& chart,
                                     const FiniteTypeConfig& config) {
    FiniteTypeReport rep;
    const Eigen::Index dim = p.phase_dim();
    TangentDirection v = TangentDirection::axis(dim, chart.tau_index, double(config.v_sign));

    auto patch = ball_samples(w0, config.patch_radius, config.patch_samples, config.seed);

    SymmetrizerParams sp = config.symmetrizer_params;
    if (config.symmetrizer == FiniteTypeConfig::Symmetrizer::identity)
        sp.fixed_M = Matrix::Identity(p.dimension(), p.dimension());
    else if (config.symmetrizer == FiniteTypeConfig::Symmetrizer::given)
        sp.fixed_M = config.given_M;
    rep.symmetrizer = find_symmetrizer(p, patch, v, sp);
    if (!rep.symmetrizer.feasible) {
        rep.verdict = Verdict::inconclusive;
        rep.note = "no symmetrizer found within budget";
        return rep;
    }

    MatrixSymbol q = symmetrized_symbol(p, rep.symmetrizer);

    rep.quasi = is_quasi_symmetric(q, patch, v);
    if (rep.quasi.verdict != Verdict::yes) {
        rep.verdict = Verdict::inconclusive;
        rep.note = "constructed Q is not quasi-symmetric on the patch";
        return rep;
    }

    PhasePoint sigma_center = w0;
    sigma_center.coords[chart.tau_index] = 0.0;
    auto sigma_samples = plane_lattice(sigma_center, coords_except(dim, {chart.tau_index}),
                                       config.sigma_extent, config.sigma_nodes);
    rep.approx = approximation_property_check(q, chart, sigma_center, sigma_samples,
                                              config.approx);
    if (rep.approx.verdict != Verdict::yes) {
        rep.verdict = Verdict::inconclusive;
        rep.note = "approximation property fails on the contour bundle";
        return rep;
    }

    // sublevel exponent of Im Q along the t-line bicharacteristics over a
    // lattice of base points on Sigma
    auto bases = plane_lattice(sigma_center,
                               coords_except(dim, {chart.tau_index, chart.t_index}),
                               config.base_extent, config.base_nodes);
    SublevelOptions sopt = config.sublevel;
    double mu_min = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> worst;
    for (std::size_t i = 0; i < bases.size(); ++i) {
        MatrixCurve curve = MatrixCurve::im_along_line(q, bases[i], chart.t_index);
        auto fit = fit_sublevel_exponent(curve, config.delta_lo, config.delta_hi,
                                         config.n_deltas, sopt);
        if (fit.saturated) {
            rep.saturated = true;
            rep.verdict = Verdict::no;
            rep.note = "sublevel measure saturates along a bicharacteristic";
            return rep;
        }
        if (std::isinf(fit.mu_hat)) continue;  // elliptic along this line
        rep.worst_fit_r2 = std::min(rep.worst_fit_r2, fit.fit_r2);
        if (fit.mu_hat < mu_min) {
            mu_min = fit.mu_hat;
            worst = i;
        }
    }

    if (!worst) {
        // Im Q stays definite along every line: finite type 0 behaviour
        rep.mu = std::numeric_limits<double>::infinity();
        rep.predicted_loss = 0.0;
        rep.verdict = Verdict::yes;
        return rep;
    }

    if (rep.worst_fit_r2 < config.mu_fit_r2) {
        rep.verdict = Verdict::inconclusive;
        rep.note = "sublevel exponent fit is unreliable";
        rep.mu = mu_min;
        return rep;
    }

    rep.mu = mu_min;
    rep.predicted_loss = 1.0 / (mu_min + 1.0);

    MatrixCurve worst_curve = MatrixCurve::im_along_line(q, bases[*worst], chart.t_index);
    auto k = derivative_order(worst_curve, config.sublevel.window_lo, config.sublevel.window_hi,
                              config.derivative);
    if (k && *k >= 2 && std::abs(mu_min - 1.0 / double(*k)) <= config.mu_k_tol) {
        rep.k = *k;
        rep.predicted_loss = double(*k) / double(*k + 1);
    }
    rep.verdict = Verdict::yes;
    return rep;
}

InvarianceTriple finite_type_invariance_fixture(const MatrixSymbol& p, const Matrix& a,
                                                const Matrix& b, const PhasePoint& w0,
                                                const HypersurfaceChart& chart,
                                                const FiniteTypeConfig& config) {
    InvarianceTriple out;
    out.base = finite_type_verdict(p, w0, chart, config);

    MatrixSymbol apb = p.multiply_left(a).multiply_right(b);
    out.conjugated = finite_type_verdict(apb, w0, chart, config);

    FiniteTypeConfig adj = config;
    adj.v_sign = -config.v_sign;
    out.adjoint = finite_type_verdict(p.adjoint(), w0, chart, adj);
    return out;
}

}  // namespace pst
