#include "pst/spectral_block.hpp"

#include <algorithm>
#include <cmath>

#include "pst/linalg.hpp"

namespace pst {

SpectralProjection spectral_projection(const Matrix& q, double epsilon, int nodes) {
    if (epsilon <= 0) throw DomainError("contour radius must be positive");
    if (nodes < 16) throw DomainError("need at least 16 quadrature nodes");
    const Eigen::Index n = q.rows();

    Eigen::ComplexEigenSolver<Matrix> es(q);
    SpectralProjection out;
    out.epsilon = epsilon;
    out.nodes = nodes;
    for (Eigen::Index i = 0; i < n; ++i) {
        double r = std::abs(es.eigenvalues()(i));
        if (std::abs(r - epsilon) < 0.1 * epsilon)
            throw NumericalError(
                "eigenvalue with |lambda| = " + std::to_string(r) +
                " is too close to the contour |z| = " + std::to_string(epsilon) +
                "; choose a radius away from the spectrum");
        if (r < epsilon) ++out.rank;
    }

    Matrix acc = Matrix::Zero(n, n);
    for (int j = 0; j < nodes; ++j) {
        double th = 2.0 * M_PI * double(j) / double(nodes);
        Complex z = epsilon * Complex(std::cos(th), std::sin(th));
        Matrix shifted = z * Matrix::Identity(n, n) - q;
        acc += z * shifted.partialPivLu().solve(Matrix::Identity(n, n));
    }
    out.Pi = acc / double(nodes);
    out.idempotency_defect = sigma_max(out.Pi * out.Pi - out.Pi);
    out.commutation_defect = sigma_max(q * out.Pi - out.Pi * q);
    return out;
}

std::optional<double> auto_contour_radius(const Matrix& q, double rel_gap_floor) {
    Eigen::ComplexEigenSolver<Matrix> es(q);
    std::vector<double> mods;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        mods.push_back(std::abs(es.eigenvalues()(i)));
    std::sort(mods.begin(), mods.end());
    double scale = std::max(mods.back(), 1e-300);

    // widest relative gap between consecutive moduli, zero cluster first
    double best_ratio = 0.0;
    std::size_t split = 0;  // eigenvalues [0, split) are the near-zero cluster
    for (std::size_t i = 0; i + 1 < mods.size(); ++i) {
        double inner = std::max(mods[i], 1e-14 * scale);
        double ratio = mods[i + 1] / inner;
        if (ratio > best_ratio) {
            best_ratio = ratio;
            split = i + 1;
        }
    }
    if (split == 0 || best_ratio < rel_gap_floor) return std::nullopt;
    double inner = std::max(mods[split - 1], 1e-14 * scale);
    return std::sqrt(inner * mods[split]);
}

namespace {

// Projector onto the cluster_size smallest-modulus eigenvalues: the full
// identity when the cluster is everything, otherwise a contour at the
// geometric mean across the gap above the cluster.
Matrix cluster_projection(const Matrix& qw, Eigen::Index cluster_size, int nodes) {
    const Eigen::Index n = qw.rows();
    if (cluster_size == n) return Matrix::Identity(n, n);
    Eigen::ComplexEigenSolver<Matrix> es(qw);
    std::vector<double> mods;
    for (Eigen::Index i = 0; i < n; ++i) mods.push_back(std::abs(es.eigenvalues()(i)));
    std::sort(mods.begin(), mods.end());
    double scale = std::max(mods.back(), 1e-300);
    double inner = std::max(mods[cluster_size - 1], 1e-13 * scale);
    double outer = mods[cluster_size];
    if (outer < 1.5 * inner)
        throw StructuralError("near-zero cluster no longer separated at a Sigma sample");
    auto pi = spectral_projection(qw, std::sqrt(inner * outer), nodes);
    return pi.Pi;
}

Matrix projection_at(const MatrixSymbol& q, const PhasePoint& w, double epsilon,
                     Eigen::Index cluster_size, int nodes, Eigen::Index* rank_out) {
    Matrix qw = q.eval(w);
    if (epsilon > 0) {
        auto pi = spectral_projection(qw, epsilon, nodes);
        if (rank_out) *rank_out = pi.rank;
        return pi.Pi;
    }
    Matrix pi = cluster_projection(qw, cluster_size, nodes);
    if (rank_out) *rank_out = Eigen::Index(std::llround(pi.trace().real()));
    return pi;
}

}  // namespace

ApproximationPropertyReport approximation_property_check(
    const MatrixSymbol& q, const HypersurfaceChart& chart, const PhasePoint& w0,
    const std::vector<PhasePoint>& sigma_samples, const ApproximationPropertyOptions& opt) {
    ApproximationPropertyReport rep;

    Matrix q0 = q.eval(w0);
    Eigen::Index rank0 = 0;
    if (opt.epsilon > 0) {
        auto pi = spectral_projection(q0, opt.epsilon, opt.nodes);
        rank0 = pi.rank;
    } else {
        // generalized kernel dimension of Q(w0) under the shared rank policy
        Eigen::ComplexEigenSolver<Matrix> es(q0);
        double scale = std::max(1e-300, sigma_max(q0));
        for (Eigen::Index i = 0; i < q0.rows(); ++i)
            if (std::abs(es.eigenvalues()(i)) <= std::max(1e-6 * scale, 1e-12)) ++rank0;
    }
    rep.bundle_rank = rank0;
    if (rank0 == 0) {
        rep.vacuous = true;
        rep.verdict = Verdict::yes;
        return rep;
    }

    Matrix prev = projection_at(q, w0, opt.epsilon, rank0, opt.nodes, nullptr);
    for (const auto& w : sigma_samples) {
        Eigen::Index rank = rank0;
        Matrix pi = projection_at(q, w, opt.epsilon, rank0, opt.nodes, &rank);
        if (rank != rank0)
            throw StructuralError("projection rank changes across Sigma samples (" +
                                  std::to_string(rank0) + " -> " + std::to_string(rank) + ")");
        double jump = sigma_max(pi - prev);
        rep.max_bundle_jump = std::max(rep.max_bundle_jump, jump);
        if (jump > opt.bundle_jump_abort)
            throw StructuralError("projection bundle jump " + std::to_string(jump) +
                                  " exceeds the continuity guard");
        Matrix s = pi.adjoint() * re_part(q.eval(w)) * pi;
        rep.max_defect = std::max(rep.max_defect, sigma_max(s));
        prev = pi;
    }

    auto s_at = [&](const PhasePoint& w) {
        Matrix pi = projection_at(q, w, opt.epsilon, rank0, opt.nodes, nullptr);
        return (pi.adjoint() * re_part(q.eval(w)) * pi).eval();
    };
    for (Eigen::Index k = 0; k < w0.dim(); ++k) {
        if (k == chart.tau_index) continue;  // TSigma spans the non-tau coordinates
        PhasePoint wp = w0, wm = w0;
        wp.coords[k] += opt.fd_step;
        wm.coords[k] -= opt.fd_step;
        Matrix ds = (s_at(wp) - s_at(wm)) / (2.0 * opt.fd_step);
        rep.tangential_derivative_defect =
            std::max(rep.tangential_derivative_defect, sigma_max(ds));
    }

    rep.verdict = (rep.max_defect <= opt.tol && rep.tangential_derivative_defect <= opt.tol)
                      ? Verdict::yes
                      : Verdict::no;
    return rep;
}

BlockForm block_normal_form(const Matrix& q, const SpectralProjection& pi, double tol) {
    const Eigen::Index n = q.rows();
    Eigen::JacobiSVD<Matrix> svd(pi.Pi, Eigen::ComputeFullU);
    Eigen::Index k = 0;
    while (k < svd.singularValues().size() && svd.singularValues()(k) > 0.5) ++k;
    if (k != pi.rank)
        throw StructuralError("projection is too far from idempotent to span a bundle");

    Matrix basis = svd.matrixU();  // first k columns span Ran Pi
    Matrix qt = basis.adjoint() * q * basis;
    Matrix q11 = qt.topLeftCorner(k, k);
    Matrix q12 = qt.topRightCorner(k, n - k);
    Matrix q22 = qt.bottomRightCorner(n - k, n - k);
    if (n - k > 0 && sigma_min(q22) <= tol * std::max(1.0, sigma_max(q22)))
        throw NumericalError("trailing block is numerically singular; elimination undefined");

    Matrix left = Matrix::Identity(n, n);
    if (k > 0 && n - k > 0)
        left.topRightCorner(k, n - k) = -q12 * q22.partialPivLu().solve(
                                                  Matrix::Identity(n - k, n - k));
    Matrix reduced = left * qt;
    Matrix diag = Matrix::Zero(n, n);
    diag.topLeftCorner(k, k) = q11;
    diag.bottomRightCorner(n - k, n - k) = q22;

    BlockForm out;
    out.Q11 = q11;
    out.Q22 = q22;
    out.left_transform = left;
    out.basis_transform = basis;
    out.residual_Q12 = sigma_max(reduced - diag);
    return out;
}

}  // namespace pst
