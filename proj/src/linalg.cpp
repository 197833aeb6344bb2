#include "pst/linalg.hpp"

#include <random>

#include <Eigen/SVD>

namespace pst {

HermitianSplit hermitian_split(const Matrix& a) {
    return {re_part(a), im_part(a)};
}

Matrix kernel_basis(const Matrix& a, double tol) {
    if (a.rows() == 0) return Matrix::Identity(0, 0);
    if (a.norm() == 0.0) return Matrix::Identity(a.cols(), a.cols());
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double smax = s.size() ? s(0) : 0.0;
    double cut = smax > 0.0 ? tol * smax : tol;
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) <= cut) ++k;
    // columns of V for the trailing singular values
    return svd.matrixV().rightCols(k + (a.cols() - s.size()));
}

Eigen::Index numerical_rank(const Matrix& a, double tol) {
    return a.cols() - kernel_basis(a, tol).cols();
}

double sigma_min(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    return s.size() ? s(s.size() - 1) : 0.0;
}

double sigma_max(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    return s.size() ? s(0) : 0.0;
}

double lambda_min_hermitian(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(re_part(h), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double subspace_angle(const Matrix& u, const Matrix& v) {
    if (u.cols() != v.cols()) return M_PI / 2.0;
    if (u.cols() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(u.adjoint() * v);
    double c = std::min(1.0, svd.singularValues()(svd.singularValues().size() - 1));
    return std::acos(c);
}

double overlap_with(const Matrix& u, const Matrix& v) {
    if (u.cols() == 0 || v.cols() == 0) return 0.0;
    return sigma_max(v.adjoint() * u);
}

Matrix random_complex_matrix(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(nd(gen), nd(gen));
    return m;
}

Matrix random_unitary(Eigen::Index n, std::uint64_t seed) {
    Matrix m = random_complex_matrix(n, seed);
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ();
    // fix the phase so the result is reproducible across BLAS paths
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        Complex d = r(i, i);
        if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

Matrix random_conditioned_matrix(Eigen::Index n, double cond_max, std::uint64_t seed) {
    Matrix u = random_unitary(n, seed);
    Matrix v = random_unitary(n, seed ^ 0x9e3779b97f4a7c15ull);
    std::mt19937_64 gen(seed ^ 0xdeadbeefcafef00dull);
    std::uniform_real_distribution<double> ud(1.0 / cond_max, 1.0);
    RealVector s(n);
    s(0) = 1.0;
    for (Eigen::Index i = 1; i < n; ++i) s(i) = ud(gen);
    return u * s.asDiagonal() * v.adjoint();
}

}  // namespace pst
