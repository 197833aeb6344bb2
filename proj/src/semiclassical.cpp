#include "pst/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include "pst/linalg.hpp"
#include "pst/parallel.hpp"

namespace pst {

Eigen::Index resolution_rule(double h, const DiscretizeOptions& opt) {
    if (opt.n_t > 0) return opt.n_t + (opt.n_t % 2);
    double want = double(opt.n_t_floor) * std::pow(h, -1.0 / double(opt.k_max + 1));
    Eigen::Index n = Eigen::Index(std::ceil(want));
    n += n % 2;
    return std::clamp(n, opt.n_t_floor, opt.n_t_cap);
}

namespace {

// Interior nodes of the window (Dirichlet) or all nodes (periodic);
// first-derivative matrix of D_t = -i d/dt.
Matrix dt_matrix(Eigen::Index n, double window, BoundaryRule boundary, int order) {
    Matrix d = Matrix::Zero(n, n);
    const Complex mi(0.0, -1.0);
    if (boundary == BoundaryRule::dirichlet_window) {
        double dlt = window / double(n + 1);
        for (Eigen::Index i = 0; i < n; ++i) {
            bool interior4 = order == 4 && i >= 2 && i + 2 < n;
            if (interior4) {
                d(i, i - 2) += mi / (12.0 * dlt);
                d(i, i - 1) += mi * (-8.0 / (12.0 * dlt));
                d(i, i + 1) += mi * (8.0 / (12.0 * dlt));
                d(i, i + 2) += mi * (-1.0 / (12.0 * dlt));
            } else {
                if (i > 0) d(i, i - 1) += mi * (-1.0 / (2.0 * dlt));
                if (i + 1 < n) d(i, i + 1) += mi * (1.0 / (2.0 * dlt));
            }
        }
        return d;
    }
    double dlt = window / double(n);
    auto wrap = [n](Eigen::Index i) { return (i % n + n) % n; };
    for (Eigen::Index i = 0; i < n; ++i) {
        if (order == 4) {
            d(i, wrap(i - 2)) += mi / (12.0 * dlt);
            d(i, wrap(i - 1)) += mi * (-8.0 / (12.0 * dlt));
            d(i, wrap(i + 1)) += mi * (8.0 / (12.0 * dlt));
            d(i, wrap(i + 2)) += mi * (-1.0 / (12.0 * dlt));
        } else {
            d(i, wrap(i - 1)) += mi * (-1.0 / (2.0 * dlt));
            d(i, wrap(i + 1)) += mi * (1.0 / (2.0 * dlt));
        }
    }
    return d;
}

std::vector<double> t_nodes(Eigen::Index n, double lo, double hi, BoundaryRule boundary) {
    std::vector<double> t(n);
    if (boundary == BoundaryRule::dirichlet_window) {
        double dlt = (hi - lo) / double(n + 1);
        for (Eigen::Index i = 0; i < n; ++i) t[i] = lo + double(i + 1) * dlt;
    } else {
        double dlt = (hi - lo) / double(n);
        for (Eigen::Index i = 0; i < n; ++i) t[i] = lo + double(i) * dlt;
    }
    return t;
}

}  // namespace

DiscretizedOperator discretize_model(const MatrixCurve& damping, double h,
                                     const DiscretizeOptions& opt) {
    if (!(h > 0.0) || h > 1.0) throw DomainError("h must lie in (0, 1]");
    DiscretizedOperator op;
    op.h = h;
    op.boundary = opt.boundary;
    op.stencil_order = opt.stencil_order;
    op.window_lo = opt.window_lo;
    op.window_hi = opt.window_hi;
    op.n_t = resolution_rule(h, opt);

    const Eigen::Index nmat = damping.dimension();
    const Eigen::Index n = op.n_t;
    op.size = n * nmat;
    Matrix dt = h * dt_matrix(n, opt.window_hi - opt.window_lo, opt.boundary,
                              opt.stencil_order);
    auto ts = t_nodes(n, opt.window_lo, opt.window_hi, opt.boundary);

    op.dense = Matrix::Zero(op.size, op.size);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j)
            if (dt(i, j) != Complex(0, 0))
                op.dense.block(i * nmat, j * nmat, nmat, nmat) +=
                    dt(i, j) * Matrix::Identity(nmat, nmat);
        op.dense.block(i * nmat, i * nmat, nmat, nmat) +=
            Complex(0, 1) * damping.eval(ts[i]);
    }
    return op;
}

namespace {

double sigma_min_sparse(const Eigen::SparseMatrix<Complex>& a) {
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success)
        throw NumericalError("sparse factorization failed; operator may be singular");

    const Eigen::Index n = a.rows();
    std::mt19937_64 gen(42);
    std::normal_distribution<double> nd(0.0, 1.0);
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = Complex(nd(gen), nd(gen));
    x.normalize();

    // power iteration on (A^* A)^{-1}: x converges to the right singular
    // vector of the smallest singular value
    double lam = 0.0, lam_old = -1.0;
    const double tol = 1e-10;
    const int max_iters = 500;
    int it = 0;
    for (; it < max_iters; ++it) {
        Vector y = lu.adjoint().solve(x);
        Vector z = lu.solve(y);
        lam = z.norm();
        x = z / lam;
        if (lam_old > 0 && std::abs(lam - lam_old) <= tol * lam) break;
        if (it > 200 && lam_old > 0 && std::abs(lam - lam_old) <= 1e-8 * lam) break;
        lam_old = lam;
    }
    if (it == max_iters) {
        double residual = std::abs(lam - lam_old) / std::max(lam, 1e-300);
        throw NumericalError("inverse power iteration did not settle; relative residual " +
                             std::to_string(residual));
    }
    return (a * x).norm();
}

}  // namespace

double sigma_min_op(const DiscretizedOperator& op) {
    if (!op.is_sparse) {
        if (op.size <= 4096) {
            Eigen::BDCSVD<Matrix> svd(op.dense);
            return svd.singularValues()(svd.singularValues().size() - 1);
        }
        Eigen::SparseMatrix<Complex> s = op.dense.sparseView(1.0, 1e-300);
        return sigma_min_sparse(s);
    }
    if (op.size <= 1024) {
        Matrix d = Matrix(op.sparse);
        Eigen::BDCSVD<Matrix> svd(d);
        return svd.singularValues()(svd.singularValues().size() - 1);
    }
    return sigma_min_sparse(op.sparse);
}

std::vector<double> log_h_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0) || !(hi > lo) || count < 2) throw DomainError("bad h grid");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = hi * std::pow(lo / hi, double(i) / double(count - 1));
    return out;  // decreasing
}

namespace {

void fit_loglog(const std::vector<double>& h, const std::vector<double>& sig, double& slope,
                double& r2) {
    double n = double(h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        double x = std::log(h[i]), y = std::log(sig[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        double e = std::log(sig[i]) - (slope * std::log(h[i]) + intercept);
        ss_res += e * e;
    }
    r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
}

void finish_report(ScalingReport& rep) {
    fit_loglog(rep.h_grid, rep.sigma_mins, rep.gamma_hat, rep.fit_r2);
    rep.gain = rep.gamma_hat <= 0.97 && rep.fit_r2 >= 0.99;
    rep.unreliable_fit = rep.fit_r2 < 0.95;
}

}  // namespace

ScalingReport scaling_sweep(const MatrixCurve& damping, const std::vector<double>& h_grid,
                            std::optional<double> predicted, const DiscretizeOptions& opt,
                            std::size_t jobs) {
    if (h_grid.size() < 6) throw DomainError("scaling sweep needs at least 6 h points");
    ScalingReport rep;
    rep.h_grid = h_grid;
    rep.predicted = predicted;
    rep.n_ts.resize(h_grid.size());
    rep.sigma_mins.resize(h_grid.size());
    parallel_for(h_grid.size(), jobs, [&](std::size_t i) {
        auto op = discretize_model(damping, h_grid[i], opt);
        rep.n_ts[i] = op.n_t;
        rep.sigma_mins[i] = sigma_min_op(op);
    });
    finish_report(rep);
    return rep;
}

// --- subex -----------------------------------------------------------------

namespace {

std::vector<double> band_modes(double alpha, double beta, double h, const SubexGrid& grid) {
    double dlt = grid.t_window / double(grid.n_t + 1);
    double band = grid.kappa * std::max(1.0, std::abs(beta)) / std::sqrt(h);
    if (alpha > 0) band = std::min(band, grid.theta_res / (alpha * dlt));
    band = std::min(band, 0.8 * M_PI * double(grid.n_x) / 2.0);
    std::vector<double> xi;
    for (Eigen::Index m = -grid.n_x / 2; m < grid.n_x / 2; ++m) {
        double x = M_PI * double(m);
        if (std::abs(x) <= band) xi.push_back(x);
    }
    return xi;
}

}  // namespace

DiscretizedOperator discretize_subex_branch(double alpha, double beta, int branch, double h,
                                            const SubexGrid& grid) {
    if (grid.n_t > grid.cap || grid.n_x > grid.cap)
        throw ConfigError("requested grid exceeds the configured 2-D cap");
    if (alpha <= 0.0) throw DomainError("branch assembly needs alpha > 0");
    DiscretizedOperator op;
    op.h = h;
    op.boundary = BoundaryRule::dirichlet_window;
    op.stencil_order = grid.stencil_order;
    op.window_lo = -grid.t_window / 2;
    op.window_hi = grid.t_window / 2;
    op.n_t = grid.n_t;
    op.is_sparse = true;

    const double s = branch >= 0 ? 1.0 : -1.0;
    auto xi = band_modes(alpha, beta, h, grid);
    const Eigen::Index nb = Eigen::Index(xi.size());
    const Eigen::Index nt = grid.n_t;
    const Eigen::Index nx = grid.n_x;
    op.size = nt * nb;

    Matrix dt = h * dt_matrix(nt, grid.t_window, BoundaryRule::dirichlet_window,
                              grid.stencil_order);
    auto ts = t_nodes(nt, op.window_lo, op.window_hi, BoundaryRule::dirichlet_window);

    // damping blocks are Toeplitz in the mode index: row j, col j' sees the
    // x-average of g(t, x) against e^{-i (xi_j - xi_j') x}
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(std::size_t(nt) * std::size_t(nb) * std::size_t(nb) +
                 std::size_t(nt) * 5 * std::size_t(nb));
    std::vector<double> x(nx);
    for (Eigen::Index i = 0; i < nx; ++i) x[i] = -1.0 + 2.0 * double(i) / double(nx);

    for (Eigen::Index i = 0; i < nt; ++i) {
        std::vector<Complex> ghat(2 * nb - 1);
        for (Eigen::Index d = -(nb - 1); d <= nb - 1; ++d) {
            // all band modes are multiples of pi, so differences are too
            double dxi = (nb > 1) ? (xi[1] - xi[0]) * double(d) : 0.0;
            Complex acc(0, 0);
            for (Eigen::Index ix = 0; ix < nx; ++ix) {
                double g = (ts[i] - beta * x[ix]) * (ts[i] - beta * x[ix]);
                acc += g * std::polar(1.0, -dxi * x[ix]);
            }
            ghat[d + nb - 1] = acc / double(nx);
        }
        for (Eigen::Index j = 0; j < nb; ++j)
            for (Eigen::Index jj = 0; jj < nb; ++jj) {
                Complex v = Complex(0, 1) * ghat[(j - jj) + nb - 1];
                if (j == jj) v += s * alpha * h * xi[j];
                trip.emplace_back(int(i * nb + j), int(i * nb + jj), v);
            }
        for (Eigen::Index i2 = std::max<Eigen::Index>(0, i - 2);
             i2 <= std::min(nt - 1, i + 2); ++i2) {
            if (dt(i, i2) == Complex(0, 0)) continue;
            for (Eigen::Index j = 0; j < nb; ++j)
                trip.emplace_back(int(i * nb + j), int(i2 * nb + j), dt(i, i2));
        }
    }
    op.sparse.resize(op.size, op.size);
    op.sparse.setFromTriplets(trip.begin(), trip.end());
    op.sparse.makeCompressed();
    return op;
}

double subex_sigma_min(double alpha, double beta, double h, const SubexGrid& grid) {
    if (alpha == 0.0) {
        // no x-transport: the x grid decouples into 1-D dampened operators
        DiscretizeOptions opt;
        opt.window_lo = -grid.t_window / 2;
        opt.window_hi = grid.t_window / 2;
        opt.n_t = grid.n_t;
        opt.stencil_order = grid.stencil_order;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index ix = 0; ix < grid.n_x; ++ix) {
            double xj = -1.0 + 2.0 * double(ix) / double(grid.n_x);
            MatrixCurve curve(
                [beta, xj](double t) {
                    Matrix m(1, 1);
                    m(0, 0) = (t - beta * xj) * (t - beta * xj);
                    return m;
                },
                1);
            best = std::min(best, sigma_min_op(discretize_model(curve, h, opt)));
        }
        return best;
    }
    double best = std::numeric_limits<double>::infinity();
    for (int branch : {+1, -1})
        best = std::min(best,
                        sigma_min_op(discretize_subex_branch(alpha, beta, branch, h, grid)));
    return best;
}

std::vector<double> subex_default_h_grid() { return log_h_grid(1.5e-2, 1.0e-1, 7); }

ScalingReport subex_scaling_sweep(double alpha, double beta, const std::vector<double>& h_grid,
                                  const SubexGrid& grid, std::size_t jobs) {
    if (h_grid.size() < 6) throw DomainError("scaling sweep needs at least 6 h points");
    ScalingReport rep;
    rep.h_grid = h_grid;
    rep.n_ts.assign(h_grid.size(), grid.n_t);
    rep.sigma_mins.resize(h_grid.size());
    parallel_for(h_grid.size(), jobs, [&](std::size_t i) {
        rep.sigma_mins[i] = subex_sigma_min(alpha, beta, h_grid[i], grid);
    });
    finish_report(rep);
    return rep;
}

std::vector<SubexCell> subellipticity_matrix(const std::vector<double>& alphas,
                                             const std::vector<double>& betas,
                                             const std::vector<double>& h_grid,
                                             const SubexGrid& grid, std::size_t jobs) {
    std::vector<SubexCell> cells;
    for (double a : alphas)
        for (double b : betas) cells.push_back({a, b, {}});
    parallel_for(cells.size(), jobs, [&](std::size_t i) {
        cells[i].report = subex_scaling_sweep(cells[i].alpha, cells[i].beta, h_grid, grid, 1);
    });
    return cells;
}

}  // namespace pst
