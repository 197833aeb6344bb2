#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pst/types.hpp"

#include <nlohmann/json_fwd.hpp>

namespace pst {

/// Matrix polynomial in one variable, A(t) = sum_k coeff[k] t^k. Obtained by
/// restricting a polynomial symbol to a coordinate line; evaluation is
/// Horner, derivatives are exact.
class UnivariateMatrixPoly {
public:
    UnivariateMatrixPoly() = default;
    explicit UnivariateMatrixPoly(std::vector<Matrix> coeffs, Eigen::Index n)
        : coeffs_(std::move(coeffs)), n_(n) {}

    Matrix eval(double t) const;
    UnivariateMatrixPoly derivative() const;
    Eigen::Index dimension() const { return n_; }
    Eigen::Index degree() const { return coeffs_.empty() ? 0 : Eigen::Index(coeffs_.size()) - 1; }
    const std::vector<Matrix>& coeffs() const { return coeffs_; }

    /// Batched lambda_min over a grid of t values; uses the 2x2 closed form
    /// through the SIMD kernels when N == 2, dense eigensolves otherwise.
    void lambda_min_sweep(const double* t, std::size_t count, double* out) const;

private:
    std::vector<Matrix> coeffs_;
    Eigen::Index n_ = 0;
};

/// An evaluable map from phase-space points to N x N complex matrices.
/// Three kinds: a multi-index coefficient table (exact derivatives), a named
/// model from the library (polynomial-backed, keeps name and parameters),
/// and values sampled on a rectangular lattice with multilinear
/// interpolation.
class MatrixSymbol {
public:
    enum class Kind { polynomial, model, grid };

    struct GridData {
        RealVector lo, hi;                 // box per phase dimension
        std::vector<Eigen::Index> shape;   // lattice points per dimension
        std::vector<Matrix> values;        // row-major over the lattice
    };

    MatrixSymbol() = default;

    static MatrixSymbol polynomial(Eigen::Index dim, Eigen::Index phase_dim,
                                   std::map<std::vector<int>, Matrix> terms);
    static MatrixSymbol constant(const Matrix& value, Eigen::Index phase_dim);
    static MatrixSymbol zero(Eigen::Index dim, Eigen::Index phase_dim);
    static MatrixSymbol grid(Eigen::Index dim, GridData data);
    /// Non-polynomial analytic models (evaluation only, no coefficient
    /// algebra); derivatives fall back to finite differences.
    static MatrixSymbol callable(Eigen::Index dim, Eigen::Index phase_dim,
                                 std::function<Matrix(const PhasePoint&)> fn);

    Kind kind() const { return kind_; }
    Eigen::Index dimension() const { return dim_; }
    Eigen::Index phase_dim() const { return phase_dim_; }
    bool polynomial_backed() const { return kind_ != Kind::grid && !callable_; }
    bool homogeneous() const { return homogeneous_; }
    void mark_homogeneous(bool h) { homogeneous_ = h; }

    const std::string& model_name() const { return model_name_; }
    void set_model_tag(std::string name, nlohmann::json params);
    const nlohmann::json& model_params() const;

    Matrix eval(const PhasePoint& w) const;
    Matrix directional_derivative(const PhasePoint& w, const TangentDirection& nu) const;

    /// Exact partial-derivative symbol d/dw_k (polynomial-backed only).
    MatrixSymbol partial(Eigen::Index k) const;

    /// Restriction to the line {base + t e_coord} as a matrix polynomial in
    /// t (polynomial-backed only).
    UnivariateMatrixPoly restrict_to_line(const PhasePoint& base, Eigen::Index coord) const;

    // Pointwise algebra, exact on the coefficient tables.
    MatrixSymbol multiply(const MatrixSymbol& rhs) const;        // w -> A(w) B(w)
    MatrixSymbol multiply_left(const Matrix& a) const;           // w -> a A(w)
    MatrixSymbol multiply_right(const Matrix& b) const;          // w -> A(w) b
    MatrixSymbol adjoint() const;                                // w -> A(w)^*
    MatrixSymbol scaled(Complex factor) const;
    MatrixSymbol add(const MatrixSymbol& rhs) const;

    const std::map<std::vector<int>, Matrix>& terms() const;
    const GridData& grid_data() const;

    /// max ||P(w)|| (spectral norm) over a sample set, for patch
    /// normalization.
    double sup_norm(const std::vector<PhasePoint>& samples) const;

    nlohmann::json to_json() const;
    static MatrixSymbol from_json(const nlohmann::json& j);

private:
    Kind kind_ = Kind::polynomial;
    Eigen::Index dim_ = 0;
    Eigen::Index phase_dim_ = 0;
    bool homogeneous_ = false;
    std::map<std::vector<int>, Matrix> terms_;
    GridData grid_;
    std::function<Matrix(const PhasePoint&)> callable_;
    std::string model_name_;
    std::shared_ptr<nlohmann::json> model_params_;

    void require_polynomial(const char* op) const;
};

}  // namespace pst
