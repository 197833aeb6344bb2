#include "pst/principal_type.hpp"

#include <algorithm>
#include <cmath>

#include "pst/linalg.hpp"
#include "pst/sampling.hpp"

namespace pst {

Matrix cokernel_pairing(const MatrixSymbol& p, const PhasePoint& w, const TangentDirection& nu,
                        double tol) {
    Matrix pw = p.eval(w);
    Matrix u = kernel_basis(pw, tol);
    Matrix v = kernel_basis(pw.adjoint(), tol);
    if (u.cols() != v.cols())
        throw StructuralError("kernel and cokernel dimensions disagree (" +
                              std::to_string(u.cols()) + " vs " + std::to_string(v.cols()) +
                              "); the pairing is not a square form");
    Matrix dp = p.directional_derivative(w, nu);
    return v.adjoint() * dp * u;  // entry (i,j) = <dP u_j, v_i>
}

namespace {

double pairing_merit(const MatrixSymbol& p, const PhasePoint& w, const Matrix& u,
                     const Matrix& v, const RealVector& dir) {
    Matrix dp = p.directional_derivative(w, TangentDirection(dir, false));
    double scale = std::max(1.0, sigma_max(dp));
    return sigma_min(v.adjoint() * dp * u) / scale;
}

}  // namespace

PrincipalTypeVerdict is_principal_type(const MatrixSymbol& p, const PhasePoint& w,
                                       const PrincipalTypeSearch& search) {
    PrincipalTypeVerdict out;
    Matrix pw = p.eval(w);
    Matrix u = kernel_basis(pw);
    Matrix v = kernel_basis(pw.adjoint());
    if (u.cols() != v.cols())
        throw StructuralError("kernel and cokernel dimensions disagree at the query point");
    out.kernel_dim = u.cols();
    if (out.kernel_dim == 0) {
        out.verdict = Verdict::yes;
        out.pairing_condition = std::numeric_limits<double>::infinity();
        return out;
    }

    const Eigen::Index d = p.phase_dim();
    auto dirs = sphere_directions(d, search.grid_density, search.seed);

    // A radial direction keeps homogeneous symbols on their own ray, so it
    // can never witness principal type; drop a cone around it.
    bool drop_radial = search.exclude_radial && p.homogeneous() && w.coords.norm() > 1e-12;
    RealVector radial;
    if (drop_radial) radial = w.coords.normalized();

    double best = -1.0;
    RealVector best_dir;
    for (const auto& dir : dirs) {
        if (drop_radial && std::acos(std::min(1.0, std::abs(radial.dot(dir)))) < search.radial_cone)
            continue;
        double m = pairing_merit(p, w, u, v, dir);
        if (m > best) {
            best = m;
            best_dir = dir;
        }
    }
    if (best < 0.0) throw ConfigError("direction grid empty after radial exclusion");

    // local ascent: axis-aligned probes with a shrinking step
    double step = 0.5;
    for (std::size_t it = 0; it < search.refine_iters; ++it) {
        bool improved = false;
        for (Eigen::Index k = 0; k < d; ++k) {
            for (double s : {step, -step}) {
                RealVector cand = best_dir + s * RealVector::Unit(d, k);
                cand.normalize();
                if (drop_radial &&
                    std::acos(std::min(1.0, std::abs(radial.dot(cand)))) < search.radial_cone)
                    continue;
                double m = pairing_merit(p, w, u, v, cand);
                if (m > best) {
                    best = m;
                    best_dir = cand;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }

    out.pairing_condition = best;
    if (best > search.tol) {
        out.verdict = Verdict::yes;
        out.witness = TangentDirection(best_dir, true);
    } else if (search.grid_density >= search.min_density_for_no) {
        out.verdict = Verdict::no;
    } else {
        out.verdict = Verdict::inconclusive;
    }
    return out;
}

namespace {

MultiplicityProfile profile_at(const MatrixSymbol& p, const PhasePoint& w, double eps,
                               double radius, bool& ambiguous) {
    Matrix pw = p.eval(w);
    Eigen::ComplexEigenSolver<Matrix> es(pw);
    std::vector<Complex> near;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i)) < eps) near.push_back(es.eigenvalues()(i));

    MultiplicityProfile prof;
    if (near.empty()) return prof;

    // single-linkage clusters at the given radius
    std::vector<int> cluster(near.size(), -1);
    int nc = 0;
    for (std::size_t i = 0; i < near.size(); ++i) {
        if (cluster[i] >= 0) continue;
        cluster[i] = nc;
        std::vector<std::size_t> frontier{i};
        while (!frontier.empty()) {
            std::size_t a = frontier.back();
            frontier.pop_back();
            for (std::size_t b = 0; b < near.size(); ++b)
                if (cluster[b] < 0 && std::abs(near[a] - near[b]) <= radius) {
                    cluster[b] = nc;
                    frontier.push_back(b);
                }
        }
        ++nc;
    }
    std::vector<Complex> means(nc, 0.0);
    std::vector<int> sizes(nc, 0);
    for (std::size_t i = 0; i < near.size(); ++i) {
        means[cluster[i]] += near[i];
        sizes[cluster[i]] += 1;
    }
    for (int c = 0; c < nc; ++c) means[c] /= double(sizes[c]);
    for (int a = 0; a < nc; ++a)
        for (int b = a + 1; b < nc; ++b)
            if (std::abs(means[a] - means[b]) < 2.0 * radius) ambiguous = true;

    double scale = std::max(1.0, sigma_max(pw));
    for (int c = 0; c < nc; ++c) {
        Matrix shifted = pw - means[c] * Matrix::Identity(pw.rows(), pw.cols());
        Eigen::JacobiSVD<Matrix> svd(shifted);
        int geo = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) <= std::max(0.5 * radius, 1e-12 * scale)) ++geo;
        prof.sections.emplace_back(sizes[c], geo);
    }
    std::sort(prof.sections.begin(), prof.sections.end());
    return prof;
}

}  // namespace

ConstantCharacteristicsReport check_constant_characteristics(
    const MatrixSymbol& p, const PhasePoint& w0, double eps,
    const std::vector<PhasePoint>& samples, double cluster_radius) {
    if (eps <= 0) throw DomainError("eps must be positive");
    double radius = cluster_radius > 0 ? cluster_radius : eps / 10.0;

    ConstantCharacteristicsReport rep;
    bool ambiguous = false;
    rep.at_center = profile_at(p, w0, eps, radius, ambiguous);
    bool constant = true;
    for (const auto& w : samples) {
        rep.per_sample.push_back(profile_at(p, w, eps, radius, ambiguous));
        if (!(rep.per_sample.back() == rep.at_center)) constant = false;
    }
    if (ambiguous) {
        rep.verdict = Verdict::inconclusive;
        rep.note = "eigenvalue clusters closer than twice the clustering radius";
    } else {
        rep.verdict = constant ? Verdict::yes : Verdict::no;
    }
    return rep;
}

}  // namespace pst
