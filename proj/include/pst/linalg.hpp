#pragma once

#include "pst/types.hpp"

namespace pst {

/// Hermitian/anti-Hermitian decomposition A = Re A + i Im A.
struct HermitianSplit {
    Matrix re;
    Matrix im;
};

HermitianSplit hermitian_split(const Matrix& a);

inline Matrix re_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }
inline Matrix im_part(const Matrix& a) { return (a - a.adjoint()) / Complex(0.0, 2.0); }

/// Orthonormal basis of the numerical kernel of A under the shared rank
/// policy. The zero matrix returns the full identity basis.
Matrix kernel_basis(const Matrix& a, double tol = RankPolicy{}.tol);

/// Numerical rank under the same cutoff.
Eigen::Index numerical_rank(const Matrix& a, double tol = RankPolicy{}.tol);

double sigma_min(const Matrix& a);
double sigma_max(const Matrix& a);

/// Smallest eigenvalue of the Hermitian part-enforced matrix.
double lambda_min_hermitian(const Matrix& h);

/// Largest principal angle (radians) between the column spans of two
/// orthonormal bases; 0 for two empty bases, pi/2 on dimension mismatch.
double subspace_angle(const Matrix& u, const Matrix& v);

/// sin of the largest angle between span(u) and the orthogonal complement of
/// span(v): how far u is from being contained in v^perp.
double overlap_with(const Matrix& u, const Matrix& v);

/// Deterministic random matrices for fixtures: entries from a seeded
/// generator, optionally conditioned (sigma_max/sigma_min <= target).
Matrix random_complex_matrix(Eigen::Index n, std::uint64_t seed);
Matrix random_conditioned_matrix(Eigen::Index n, double cond_max, std::uint64_t seed);
Matrix random_unitary(Eigen::Index n, std::uint64_t seed);

}  // namespace pst
