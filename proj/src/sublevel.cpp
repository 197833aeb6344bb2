#include "pst/sublevel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pst/kernels.hpp"
#include "pst/linalg.hpp"

namespace pst {

MatrixCurve::MatrixCurve(UnivariateMatrixPoly poly)
    : poly_(std::move(poly)), n_(poly_->dimension()) {}

MatrixCurve::MatrixCurve(std::function<Matrix(double)> fn, Eigen::Index n)
    : fn_(std::move(fn)), n_(n) {}

Matrix MatrixCurve::eval(double t) const { return poly_ ? poly_->eval(t) : fn_(t); }

const UnivariateMatrixPoly& MatrixCurve::poly() const {
    if (!poly_) throw DomainError("curve is not polynomial");
    return *poly_;
}

std::vector<double> MatrixCurve::lambda_min_grid(double lo, double hi,
                                                 std::size_t count) const {
    if (count < 2) throw DomainError("need at least two grid nodes");
    std::vector<double> ts(count);
    double dt = (hi - lo) / double(count - 1);
    for (std::size_t i = 0; i < count; ++i) ts[i] = lo + double(i) * dt;
    std::vector<double> out(count);
    if (poly_) {
        poly_->lambda_min_sweep(ts.data(), count, out.data());
    } else {
        for (std::size_t i = 0; i < count; ++i) out[i] = lambda_min_hermitian(fn_(ts[i]));
    }
    return out;
}

MatrixCurve MatrixCurve::im_along_line(const MatrixSymbol& q, const PhasePoint& base,
                                       Eigen::Index t_coord) {
    if (q.polynomial_backed()) {
        UnivariateMatrixPoly line = q.restrict_to_line(base, t_coord);
        std::vector<Matrix> cs;
        cs.reserve(line.coeffs().size());
        for (const auto& c : line.coeffs()) cs.push_back(im_part(c));
        return MatrixCurve(UnivariateMatrixPoly(std::move(cs), q.dimension()));
    }
    PhasePoint b = base;
    Eigen::Index n = q.dimension();
    return MatrixCurve(
        [q, b, t_coord](double t) {
            PhasePoint w = b;
            w.coords[t_coord] = b.coords[t_coord] + t;
            return im_part(q.eval(w));
        },
        n);
}

namespace {

void check_psd_curve(const MatrixCurve& f, const std::vector<double>& lam, double window_lo,
                     double window_hi, double tol) {
    double max_abs = 0.0, min_lam = 0.0;
    for (double v : lam) {
        max_abs = std::max(max_abs, std::abs(v));
        min_lam = std::min(min_lam, v);
    }
    if (min_lam < -tol * std::max(1.0, max_abs))
        throw DomainError("curve is not positive semidefinite (lambda_min = " +
                          std::to_string(min_lam) + ")");
    // Hermiticity spot check
    for (double t : {window_lo, 0.5 * (window_lo + window_hi), window_hi}) {
        Matrix v = f.eval(t);
        if ((v - v.adjoint()).norm() > 1e-8 * std::max(1.0, v.norm()))
            throw DomainError("curve is not Hermitian");
    }
}

}  // namespace

double omega_delta_measure(const MatrixCurve& f, double delta, const SublevelOptions& opt) {
    if (delta <= 0) throw DomainError("delta must be positive");
    auto lam = f.lambda_min_grid(opt.window_lo, opt.window_hi, opt.n_grid);
    check_psd_curve(f, lam, opt.window_lo, opt.window_hi, opt.psd_tol);
    double dt = (opt.window_hi - opt.window_lo) / double(opt.n_grid - 1);
    return kernels::active_ops().sublevel_measure(lam.data(), lam.size(), delta, dt);
}

SublevelReport fit_sublevel_exponent(const MatrixCurve& f, double delta_lo, double delta_hi,
                                     std::size_t n_deltas, const SublevelOptions& opt) {
    if (!(delta_lo > 0) || !(delta_hi > delta_lo) || delta_hi > 1.0)
        throw DomainError("delta range must satisfy 0 < lo < hi <= 1");
    if (n_deltas < 8) throw DomainError("need at least 8 deltas");

    SublevelReport rep;
    rep.window_lo = opt.window_lo;
    rep.window_hi = opt.window_hi;

    auto lam = f.lambda_min_grid(opt.window_lo, opt.window_hi, opt.n_grid);
    check_psd_curve(f, lam, opt.window_lo, opt.window_hi, opt.psd_tol);
    double dt = (opt.window_hi - opt.window_lo) / double(opt.n_grid - 1);

    for (std::size_t i = 0; i < n_deltas; ++i) {
        double frac = double(i) / double(n_deltas - 1);
        double d = delta_lo * std::pow(delta_hi / delta_lo, frac);
        rep.delta_grid.push_back(d);
        rep.measures.push_back(
            kernels::active_ops().sublevel_measure(lam.data(), lam.size(), d, dt));
    }

    const double window_len = opt.window_hi - opt.window_lo;
    rep.saturated = std::all_of(rep.measures.begin(), rep.measures.end(), [&](double m) {
        return m >= window_len * (1.0 - 1e-12);
    });
    if (rep.saturated) {
        rep.mu_hat = 0.0;
        rep.fit_r2 = 1.0;
        return rep;
    }

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < n_deltas; ++i)
        if (rep.measures[i] > 0.0) {
            lx.push_back(std::log(rep.delta_grid[i]));
            ly.push_back(std::log(rep.measures[i]));
        }
    if (lx.empty()) {
        rep.mu_hat = std::numeric_limits<double>::infinity();  // elliptic along the curve
        rep.fit_r2 = 1.0;
        return rep;
    }
    if (lx.size() < 3) {
        rep.mu_hat = 0.0;
        rep.fit_r2 = 0.0;
        return rep;
    }

    double n = double(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
        syy += ly[i] * ly[i];
    }
    double denom = n * sxx - sx * sx;
    rep.mu_hat = (n * sxy - sx * sy) / denom;
    double ss_tot = syy - sy * sy / n;
    double intercept = (sy - rep.mu_hat * sx) / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double e = ly[i] - (rep.mu_hat * lx[i] + intercept);
        ss_res += e * e;
    }
    rep.fit_r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;

    if (rep.fit_r2 >= 0.99 && rep.mu_hat > 1e-9) {
        int k = 2 * int(std::llround(0.5 / rep.mu_hat));
        if (k >= 2 && std::abs(rep.mu_hat - 1.0 / double(k)) <= 0.02) rep.k_inferred = k;
    }
    return rep;
}

namespace {

// j-th central difference with binomial weights, step chosen against
// roundoff amplification 2^j eps / h^j.
double central_derivative(const std::function<double(double)>& s, double t, int j, double h) {
    if (j == 0) return s(t);
    double acc = 0.0;
    double sign = 1.0;
    double binom = 1.0;
    for (int i = 0; i <= j; ++i) {
        acc += sign * binom * s(t + (0.5 * j - i) * h);
        sign = -sign;
        binom = binom * double(j - i) / double(i + 1);
    }
    return acc / std::pow(h, j);
}

}  // namespace

std::optional<int> derivative_order(const MatrixCurve& f, double window_lo, double window_hi,
                                    const DerivativeOrderOptions& opt) {
    if (opt.k_max < 0 || opt.k_max % 2 != 0) throw DomainError("k_max must be even and >= 0");
    std::size_t grid = opt.t_grid | 1;  // force odd
    std::vector<double> ts(grid);
    double dt = (window_hi - window_lo) / double(grid - 1);
    for (std::size_t i = 0; i < grid; ++i) ts[i] = window_lo + double(i) * dt;

    // probe scalars g(t): lambda_min field and frozen random unit vectors
    std::vector<std::function<double(double)>> probes;
    bool want_eigvec =
        opt.strategy == VanishingProbe::min_eigvec || opt.strategy == VanishingProbe::both;
    bool want_random =
        opt.strategy == VanishingProbe::random || opt.strategy == VanishingProbe::both;
    if (want_eigvec)
        probes.emplace_back([&f](double t) { return lambda_min_hermitian(f.eval(t)); });
    std::vector<Vector> us;
    if (want_random) {
        std::mt19937_64 gen(opt.seed);
        std::normal_distribution<double> nd(0.0, 1.0);
        for (std::size_t r = 0; r < opt.random_vectors; ++r) {
            Vector u(f.dimension());
            for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = Complex(nd(gen), nd(gen));
            u.normalize();
            us.push_back(u);
            probes.emplace_back([&f, u](double t) {
                return (u.adjoint() * f.eval(t) * u)(0, 0).real();
            });
        }
    }

    const double eps = std::numeric_limits<double>::epsilon();
    // cumulative |d^j g| sums per probe, extended two orders per k step
    std::vector<std::vector<double>> sums(probes.size(), std::vector<double>(grid, 0.0));
    std::vector<int> done_j(probes.size(), -1);
    for (int k = 0; k <= opt.k_max; k += 2) {
        bool k_ok = true;
        for (std::size_t p = 0; p < probes.size(); ++p) {
            for (int j = done_j[p] + 1; j <= k; ++j) {
                double h = std::max(dt, std::pow(eps, 1.0 / double(j + 2)));
                for (std::size_t i = 0; i < grid; ++i)
                    sums[p][i] += std::abs(central_derivative(probes[p], ts[i], j, h));
            }
            done_j[p] = k;
            if (!k_ok) continue;
            double peak = *std::max_element(sums[p].begin(), sums[p].end());
            double floor = *std::min_element(sums[p].begin(), sums[p].end());
            if (peak <= 0.0 || floor <= opt.threshold_rel * peak) k_ok = false;
        }
        if (k_ok) return k;
    }
    return std::nullopt;
}

}  // namespace pst
