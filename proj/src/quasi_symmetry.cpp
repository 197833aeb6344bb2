#include "pst/quasi_symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>

#include "pst/linalg.hpp"

namespace pst {

namespace {

Matrix orthonormal_range(const Matrix& a, double tol = RankPolicy{}.tol) {
    if (a.norm() == 0.0) return Matrix(a.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
    const auto& s = svd.singularValues();
    double cut = s(0) * tol;
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    return svd.matrixU().leftCols(r);
}

double projector_distance(const Matrix& a, const Matrix& b) {
    Eigen::Index n = a.rows();
    Matrix pa = a * a.adjoint(), pb = b * b.adjoint();
    (void)n;
    return sigma_max(pa - pb);
}

}  // namespace

SemiboundedCheck semibounded_kernel_check(const Matrix& q, Complex z, double tol) {
    SemiboundedCheck out;
    if (z == Complex(0, 0)) throw DomainError("z must be nonzero");
    Matrix zq = z * q;
    out.hypothesis_holds = lambda_min_hermitian(im_part(zq)) >= -tol;
    if (!out.hypothesis_holds) return out;

    Matrix ker_q = kernel_basis(q);
    Matrix ker_qs = kernel_basis(q.adjoint());
    Matrix stacked(2 * q.rows(), q.cols());
    stacked << re_part(q), im_part(q);
    Matrix ker_reim = kernel_basis(stacked);

    double d1 = projector_distance(ker_q, ker_qs);
    double d2 = projector_distance(ker_q, ker_reim);
    Matrix ran_q = orthonormal_range(q);
    double d3 = ker_q.cols() && ran_q.cols() ? overlap_with(ran_q, ker_q) : 0.0;
    out.max_subspace_angle = std::max({d1, d2, d3});
    out.kernel_equalities_hold = ker_q.cols() == ker_qs.cols() &&
                                 ker_q.cols() == ker_reim.cols() &&
                                 out.max_subspace_angle <= 1e-6;
    return out;
}

namespace {

struct SamplePack {
    std::vector<Matrix> q;        // Q(w)
    std::vector<Matrix> vq_re;    // Re (VQ)(w)
    std::vector<Matrix> qhq;      // Q*Q(w)
};

SamplePack pack_symbol(const MatrixSymbol& q, const std::vector<PhasePoint>& samples,
                       const TangentDirection& v) {
    SamplePack p;
    p.q.reserve(samples.size());
    for (const auto& w : samples) {
        Matrix qw = q.eval(w);
        p.vq_re.push_back(re_part(q.directional_derivative(w, v)));
        p.qhq.push_back(qw.adjoint() * qw);
        p.q.push_back(std::move(qw));
    }
    return p;
}

double c_margin_at(const SamplePack& p, double C) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.q.size(); ++i)
        m = std::min(m, lambda_min_hermitian(p.vq_re[i] + C * p.qhq[i]));
    return m;
}

}  // namespace

QuasiSymmetryCheck is_quasi_symmetric(const MatrixSymbol& q,
                                      const std::vector<PhasePoint>& samples,
                                      const TangentDirection& v, double C) {
    if (samples.empty()) throw DomainError("sample set is empty");
    QuasiSymmetryCheck out;
    SamplePack p = pack_symbol(q, samples, v);

    out.im_min_eig = std::numeric_limits<double>::infinity();
    for (const auto& qw : p.q) out.im_min_eig = std::min(out.im_min_eig, lambda_min_hermitian(im_part(qw)));

    if (C >= 0.0) {
        out.C_used = C;
        out.c_margin = c_margin_at(p, C);
    } else {
        const double c_max = 1e6;
        double saturated = c_margin_at(p, c_max);
        if (saturated <= 0.0) {
            out.C_used = c_max;
            out.c_margin = saturated;
        } else if (c_margin_at(p, 0.0) >= 0.999 * saturated) {
            out.C_used = 0.0;
            out.c_margin = c_margin_at(p, 0.0);
        } else {
            double lo = 0.0, hi = c_max;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                if (c_margin_at(p, mid) >= 0.999 * saturated) hi = mid;
                else lo = mid;
            }
            out.C_used = hi;
            out.c_margin = c_margin_at(p, hi);
        }
    }
    out.verdict =
        (out.c_margin > 0.0 && out.im_min_eig >= -kImPsdTolerance) ? Verdict::yes : Verdict::no;
    return out;
}

// ---------------------------------------------------------------------------
// find_symmetrizer

namespace {

// Real parametrization of M in C^{NxN}: first N^2 entries Re, then Im.
Matrix unpack_m(const RealVector& x, Eigen::Index n) {
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = Complex(x[i * n + j], x[n * n + i * n + j]);
    return m;
}

struct ConstraintData {
    std::vector<Matrix> p;    // normalized P(w)
    std::vector<Matrix> dv;   // normalized (VP)(w)
    std::vector<Matrix> pp;   // P*P
    Eigen::Index n = 0;

    std::size_t count() const { return 2 * p.size(); }

    // constraint k as an affine function of M
    Matrix value(std::size_t k, const Matrix& m, double C, double c_target) const {
        std::size_t s = k / 2;
        if (k % 2 == 0) return im_part(m * p[s]) + C * pp[s];
        return re_part(m * dv[s]) + C * pp[s] -
               c_target * Matrix::Identity(n, n);
    }
};

// Least-squares projection onto the affine image {T(M)}: Gram matrix of the
// linearization is independent of C, factor it once.
class AffineProjector {
public:
    AffineProjector(const ConstraintData& data, double C, double c_target)
        : data_(data), C_(C), c_target_(c_target) {
        const Eigen::Index n = data.n;
        const Eigen::Index dof = 2 * n * n;
        basis_images_.resize(dof);
        for (Eigen::Index j = 0; j < dof; ++j) {
            RealVector e = RealVector::Zero(dof);
            e[j] = 1.0;
            Matrix mj = unpack_m(e, n);
            auto& imgs = basis_images_[j];
            imgs.reserve(data.count());
            for (std::size_t s = 0; s < data.p.size(); ++s) {
                imgs.push_back(im_part(mj * data.p[s]));
                imgs.push_back(re_part(mj * data.dv[s]));
            }
        }
        RealMatrix gram(dof, dof);
        for (Eigen::Index a = 0; a < dof; ++a)
            for (Eigen::Index b = a; b < dof; ++b) {
                double g = 0.0;
                for (std::size_t k = 0; k < data.count(); ++k)
                    g += (basis_images_[a][k].conjugate().cwiseProduct(basis_images_[b][k]))
                             .sum()
                             .real();
                gram(a, b) = g;
                gram(b, a) = g;
            }
        // tiny ridge keeps the factorization stable when a direction of M
        // does not move any constraint
        gram.diagonal().array() += 1e-12 * (gram.trace() / double(dof) + 1.0);
        llt_.compute(gram);
    }

    Matrix project(const std::vector<Matrix>& target) const {
        const Eigen::Index n = data_.n;
        const Eigen::Index dof = 2 * n * n;
        std::vector<Matrix> diff(data_.count());
        for (std::size_t k = 0; k < data_.count(); ++k) {
            Matrix offset = (k % 2 == 0)
                                ? (C_ * data_.pp[k / 2]).eval()
                                : (C_ * data_.pp[k / 2] - c_target_ * Matrix::Identity(n, n))
                                      .eval();
            diff[k] = target[k] - offset;
        }
        RealVector rhs = RealVector::Zero(dof);
        for (Eigen::Index j = 0; j < dof; ++j) {
            double r = 0.0;
            for (std::size_t k = 0; k < data_.count(); ++k)
                r += (basis_images_[j][k].conjugate().cwiseProduct(diff[k])).sum().real();
            rhs[j] = r;
        }
        return unpack_m(llt_.solve(rhs), n);
    }

private:
    const ConstraintData& data_;
    double C_, c_target_;
    std::vector<std::vector<Matrix>> basis_images_;
    Eigen::LDLT<RealMatrix> llt_;
};

Matrix project_psd(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(re_part(h));
    RealVector w = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

std::pair<double, double> min_margins(const ConstraintData& data, const Matrix& m, double C) {
    double m1 = std::numeric_limits<double>::infinity();
    double m2 = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < data.p.size(); ++s) {
        m2 = std::min(m2, lambda_min_hermitian(im_part(m * data.p[s]) + C * data.pp[s]));
        m1 = std::min(m1, lambda_min_hermitian(re_part(m * data.dv[s]) + C * data.pp[s]));
    }
    return {m1, m2};
}

Matrix dykstra(const ConstraintData& data, const AffineProjector& proj, double C,
               double c_target, std::size_t iters) {
    const Eigen::Index n = data.n;
    Matrix m = Matrix::Identity(n, n);
    std::vector<Matrix> z(data.count()), corr(data.count(), Matrix::Zero(n, n));
    for (std::size_t k = 0; k < data.count(); ++k) z[k] = data.value(k, m, C, c_target);
    for (std::size_t it = 0; it < iters; ++it) {
        std::vector<Matrix> w(data.count());
        for (std::size_t k = 0; k < data.count(); ++k) {
            w[k] = project_psd(z[k] + corr[k]);
            corr[k] = z[k] + corr[k] - w[k];
        }
        m = proj.project(w);
        double nm = m.norm();
        double cap = std::sqrt(double(n));
        if (nm > cap) m *= cap / nm;
        for (std::size_t k = 0; k < data.count(); ++k) z[k] = data.value(k, m, C, c_target);
    }
    return m;
}

// Projected subgradient ascent on the concave merit
// phi(M) = min_k lambda_min(constraint_k(M)), over the Frobenius ball.
Matrix polish(const ConstraintData& data, Matrix m, double C, double c_target,
              std::size_t iters) {
    const Eigen::Index n = data.n;
    const double cap = std::sqrt(double(n));
    Matrix best = m;
    double best_phi = -std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < iters; ++it) {
        double worst = std::numeric_limits<double>::infinity();
        std::size_t worst_k = 0;
        Vector worst_v;
        for (std::size_t k = 0; k < data.count(); ++k) {
            Matrix h = data.value(k, m, C, c_target);
            Eigen::SelfAdjointEigenSolver<Matrix> es(re_part(h));
            if (es.eigenvalues()(0) < worst) {
                worst = es.eigenvalues()(0);
                worst_k = k;
                worst_v = es.eigenvectors().col(0);
            }
        }
        if (worst > best_phi) {
            best_phi = worst;
            best = m;
        }
        // lambda_min sensitivity: for the Im constraint, d lam = Im(v^* dM (P v));
        // for the Re constraint, d lam = Re(v^* dM (D v)). Gradient wrt the
        // complex entries of M is the outer product conj(v) (A v)^T with the
        // matching real/imaginary selection.
        std::size_t s = worst_k / 2;
        const Matrix& a = (worst_k % 2 == 0) ? data.p[s] : data.dv[s];
        Vector av = a * worst_v;
        Matrix outer = worst_v.conjugate() * av.transpose();  // d tr(M G)/dM with G = av v^*
        Matrix grad(n, n);
        if (worst_k % 2 == 0) {
            // d Im(v^* M (Pv)) = Im(outer_ij) for Re(M_ij), Re(outer_ij) for Im(M_ij)
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    grad(i, j) = Complex(outer(i, j).imag(), outer(i, j).real());
        } else {
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    grad(i, j) = Complex(outer(i, j).real(), -outer(i, j).imag());
        }
        double gn = grad.norm();
        if (gn < 1e-15) break;
        m += (0.5 / std::sqrt(double(it + 1))) * grad / gn;
        double nm = m.norm();
        if (nm > cap) m *= cap / nm;
    }
    return best;
}

}  // namespace

Matrix SymmetrizerResult::effective_M(const Matrix& p_hat_at_w) const {
    return M + Complex(0, rho_shift) * p_hat_at_w.adjoint();
}

SymmetrizerResult find_symmetrizer(const MatrixSymbol& p,
                                   const std::vector<PhasePoint>& samples,
                                   const TangentDirection& v, const SymmetrizerParams& params) {
    if (samples.empty()) throw DomainError("sample set is empty");
    SymmetrizerResult out;
    const Eigen::Index n = p.dimension();

    out.norm_scale = std::max(p.sup_norm(samples), 1e-300);
    ConstraintData data;
    data.n = n;
    for (const auto& w : samples) {
        Matrix pw = p.eval(w) / out.norm_scale;
        data.dv.push_back(p.directional_derivative(w, v) / out.norm_scale);
        data.pp.push_back(pw.adjoint() * pw);
        data.p.push_back(std::move(pw));
    }

    const double feas_tol = 1e-9;
    Matrix best_m = Matrix::Zero(n, n);
    double best_score = -std::numeric_limits<double>::infinity();
    double best_C = 0.0;
    bool feasible = false;
    for (double C : {0.0, 1.0, 10.0, 100.0, params.C_max}) {
        if (C > params.C_max) continue;
        Matrix m;
        if (params.fixed_M) {
            m = *params.fixed_M * out.norm_scale;  // rescale to the normalized symbol
        } else {
            AffineProjector proj(data, C, params.c_target);
            m = dykstra(data, proj, C, params.c_target, params.dykstra_iters);
            m = polish(data, m, C, params.c_target, params.polish_iters);
        }
        auto [m1, m2] = min_margins(data, m, C);
        double score = std::min(m1 - params.c_target, m2);
        if (score > best_score) {
            best_score = score;
            best_m = m;
            best_C = C;
        }
        if (m1 >= params.c_target && m2 >= -feas_tol) {
            feasible = true;
            break;
        }
    }
    out.M = best_m;
    out.C_used = best_C;

    if (params.apply_shift) {
        const Eigen::Index ns = Eigen::Index(data.p.size());
        double max_pp = 0.0;
        for (const auto& pp : data.pp) max_pp = std::max(max_pp, sigma_max(pp));
        for (double rho = 1.0; rho <= params.rho_max; rho *= 2.0) {
            double cp = std::min(1e-2, 0.5 / std::max(1e-8, rho * max_pp));
            double worst = std::numeric_limits<double>::infinity();
            for (Eigen::Index s = 0; s < ns; ++s) {
                Matrix me = out.M + Complex(0, rho) * data.p[s].adjoint();
                Matrix q = me * data.p[s];
                worst = std::min(worst, lambda_min_hermitian(im_part(q) - cp * q.adjoint() * q));
            }
            if (worst >= -1e-8) {
                out.rho_shift = rho;
                out.c_prime = cp;
                break;
            }
        }
    }

    out.sigma_min_M = std::numeric_limits<double>::infinity();
    double m1_min = std::numeric_limits<double>::infinity();
    double m2_min = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < data.p.size(); ++s) {
        Matrix me = out.effective_M(data.p[s]);
        double m2 =
            lambda_min_hermitian(im_part(me * data.p[s]) + out.C_used * data.pp[s]);
        double m1 =
            lambda_min_hermitian(re_part(me * data.dv[s]) + out.C_used * data.pp[s]);
        out.margins.emplace_back(m1, m2);
        out.sigma_min_M = std::min(out.sigma_min_M, sigma_min(me));
        m1_min = std::min(m1_min, m1);
        m2_min = std::min(m2_min, m2);
    }
    out.feasible = feasible && m1_min > 0.0 && m2_min > 0.0;
    return out;
}

MatrixSymbol symmetrized_symbol(const MatrixSymbol& p, const SymmetrizerResult& r) {
    MatrixSymbol p_hat = p.scaled(1.0 / r.norm_scale);
    MatrixSymbol q = p_hat.multiply_left(r.M);
    if (r.rho_shift > 0.0) {
        MatrixSymbol shift = p_hat.adjoint().multiply(p_hat).scaled(Complex(0, r.rho_shift));
        q = q.add(shift);
    }
    return q;
}

MatrixSymbol transform_conjugate(const MatrixSymbol& q, const MatrixSymbol& e) {
    return e.adjoint().multiply(q).multiply(e);
}

MatrixSymbol transform_conjugate(const MatrixSymbol& q, const Matrix& e) {
    return q.multiply_left(e.adjoint()).multiply_right(e);
}

MatrixSymbol transform_negadjoint(const MatrixSymbol& q) { return q.adjoint().scaled(-1.0); }

}  // namespace pst
