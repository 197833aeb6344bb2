#include "pst/symbol.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "pst/kernels.hpp"
#include "pst/linalg.hpp"

namespace pst {

Matrix UnivariateMatrixPoly::eval(double t) const {
    if (coeffs_.empty()) return Matrix::Zero(n_, n_);
    Matrix acc = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) acc = acc * t + *it;
    return acc;
}

UnivariateMatrixPoly UnivariateMatrixPoly::derivative() const {
    if (coeffs_.size() <= 1) return UnivariateMatrixPoly({}, n_);
    std::vector<Matrix> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = double(k) * coeffs_[k];
    return UnivariateMatrixPoly(std::move(d), n_);
}

void UnivariateMatrixPoly::lambda_min_sweep(const double* t, std::size_t count,
                                            double* out) const {
    if (n_ == 2) {
        // Horner on the four packed real channels, then the closed form.
        std::vector<double> h00(count), h11(count), re01(count), im01(count);
        for (std::size_t i = 0; i < count; ++i) {
            Matrix v = eval(t[i]);
            h00[i] = v(0, 0).real();
            h11[i] = v(1, 1).real();
            re01[i] = v(0, 1).real();
            im01[i] = v(0, 1).imag();
        }
        kernels::active_ops().lambda_min_herm2(h00.data(), h11.data(), re01.data(), im01.data(),
                                               out, count);
        return;
    }
    for (std::size_t i = 0; i < count; ++i) out[i] = lambda_min_hermitian(eval(t[i]));
}

MatrixSymbol MatrixSymbol::polynomial(Eigen::Index dim, Eigen::Index phase_dim,
                                      std::map<std::vector<int>, Matrix> terms) {
    MatrixSymbol s;
    s.kind_ = Kind::polynomial;
    s.dim_ = dim;
    s.phase_dim_ = phase_dim;
    for (auto& [e, c] : terms) {
        if (Eigen::Index(e.size()) != phase_dim)
            throw ConfigError("term exponent length does not match phase dimension");
        if (c.rows() != dim || c.cols() != dim)
            throw ConfigError("coefficient matrix shape does not match symbol dimension");
    }
    s.terms_ = std::move(terms);
    return s;
}

MatrixSymbol MatrixSymbol::constant(const Matrix& value, Eigen::Index phase_dim) {
    std::map<std::vector<int>, Matrix> t;
    t[std::vector<int>(phase_dim, 0)] = value;
    return polynomial(value.rows(), phase_dim, std::move(t));
}

MatrixSymbol MatrixSymbol::zero(Eigen::Index dim, Eigen::Index phase_dim) {
    return polynomial(dim, phase_dim, {});
}

MatrixSymbol MatrixSymbol::grid(Eigen::Index dim, GridData data) {
    MatrixSymbol s;
    s.kind_ = Kind::grid;
    s.dim_ = dim;
    s.phase_dim_ = data.lo.size();
    std::size_t total = 1;
    for (auto m : data.shape) {
        if (m < 2) throw ConfigError("grid needs at least 2 points per dimension");
        total *= std::size_t(m);
    }
    if (data.values.size() != total) throw ConfigError("grid value count does not match shape");
    s.grid_ = std::move(data);
    return s;
}

MatrixSymbol MatrixSymbol::callable(Eigen::Index dim, Eigen::Index phase_dim,
                                    std::function<Matrix(const PhasePoint&)> fn) {
    MatrixSymbol s;
    s.kind_ = Kind::polynomial;
    s.dim_ = dim;
    s.phase_dim_ = phase_dim;
    s.callable_ = std::move(fn);
    return s;
}

void MatrixSymbol::set_model_tag(std::string name, nlohmann::json params) {
    kind_ = Kind::model;
    model_name_ = std::move(name);
    model_params_ = std::make_shared<nlohmann::json>(std::move(params));
}

const nlohmann::json& MatrixSymbol::model_params() const {
    static const nlohmann::json empty = nlohmann::json::object();
    return model_params_ ? *model_params_ : empty;
}

void MatrixSymbol::require_polynomial(const char* op) const {
    if (!polynomial_backed())
        throw DomainError(std::string(op) + " requires a polynomial-backed symbol");
}

Matrix MatrixSymbol::eval(const PhasePoint& w) const {
    if (w.dim() != phase_dim_) throw DomainError("phase point dimension mismatch");
    if (callable_) return callable_(w);
    if (kind_ != Kind::grid) {
        Matrix acc = Matrix::Zero(dim_, dim_);
        for (const auto& [e, c] : terms_) {
            double mono = 1.0;
            for (Eigen::Index i = 0; i < phase_dim_; ++i) {
                int p = e[i];
                double wi = w.coords[i];
                while (p-- > 0) mono *= wi;
            }
            acc += mono * c;
        }
        return acc;
    }
    // multilinear interpolation on the lattice
    const auto& g = grid_;
    Eigen::Index d = phase_dim_;
    std::vector<Eigen::Index> i0(d);
    std::vector<double> frac(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        double span = g.hi[k] - g.lo[k];
        double u = (w.coords[k] - g.lo[k]) / span * double(g.shape[k] - 1);
        if (u < -1e-12 || u > double(g.shape[k] - 1) + 1e-12)
            throw DomainError("point outside grid domain");
        u = std::clamp(u, 0.0, double(g.shape[k] - 1));
        Eigen::Index i = std::min(Eigen::Index(u), g.shape[k] - 2);
        i0[k] = i;
        frac[k] = u - double(i);
    }
    Matrix acc = Matrix::Zero(dim_, dim_);
    for (std::size_t corner = 0; corner < (std::size_t(1) << d); ++corner) {
        double wgt = 1.0;
        std::size_t flat = 0;
        for (Eigen::Index k = 0; k < d; ++k) {
            bool hi = corner & (std::size_t(1) << k);
            wgt *= hi ? frac[k] : 1.0 - frac[k];
            flat = flat * std::size_t(g.shape[k]) + std::size_t(i0[k] + (hi ? 1 : 0));
        }
        if (wgt != 0.0) acc += wgt * g.values[flat];
    }
    return acc;
}

Matrix MatrixSymbol::directional_derivative(const PhasePoint& w,
                                            const TangentDirection& nu) const {
    if (nu.components.size() != phase_dim_) throw DomainError("direction dimension mismatch");
    if (polynomial_backed()) {
        Matrix acc = Matrix::Zero(dim_, dim_);
        for (Eigen::Index k = 0; k < phase_dim_; ++k) {
            if (nu.components[k] == 0.0) continue;
            acc += nu.components[k] * partial(k).eval(w);
        }
        return acc;
    }
    // fourth-order central differences with a Richardson consistency check
    double step = 1e-3;
    if (kind_ == Kind::grid)
        for (Eigen::Index k = 0; k < phase_dim_; ++k)
            step = std::max(step, (grid_.hi[k] - grid_.lo[k]) / double(grid_.shape[k] - 1));
    auto shifted = [&](double s) {
        PhasePoint p(RealVector(w.coords + s * nu.components));
        return eval(p);
    };
    auto d4 = [&](double h) {
        return (8.0 * (shifted(h) - shifted(-h)) - (shifted(2 * h) - shifted(-2 * h))) /
               (12.0 * h);
    };
    Matrix coarse, fine;
    try {
        coarse = d4(step);
        fine = d4(step / 2.0);
    } catch (const DomainError&) {
        throw DomainError("stencil too close to lattice boundary");
    }
    return fine + (fine - coarse) / 15.0;
}

MatrixSymbol MatrixSymbol::partial(Eigen::Index k) const {
    require_polynomial("partial derivative");
    std::map<std::vector<int>, Matrix> out;
    for (const auto& [e, c] : terms_) {
        if (e[k] == 0) continue;
        std::vector<int> d = e;
        d[k] -= 1;
        Matrix add = double(e[k]) * c;
        auto it = out.find(d);
        if (it == out.end()) out.emplace(std::move(d), std::move(add));
        else it->second += add;
    }
    return polynomial(dim_, phase_dim_, std::move(out));
}

UnivariateMatrixPoly MatrixSymbol::restrict_to_line(const PhasePoint& base,
                                                    Eigen::Index coord) const {
    require_polynomial("line restriction");
    std::vector<Matrix> coeffs;
    auto bump = [&](std::size_t power, const Matrix& m) {
        if (coeffs.size() <= power) coeffs.resize(power + 1, Matrix::Zero(dim_, dim_));
        coeffs[power] += m;
    };
    const double b = base.coords[coord];
    for (const auto& [e, c] : terms_) {
        double fixed = 1.0;
        for (Eigen::Index i = 0; i < phase_dim_; ++i) {
            if (i == coord) continue;
            int p = e[i];
            double wi = base.coords[i];
            while (p-- > 0) fixed *= wi;
        }
        if (fixed == 0.0) continue;
        // (b + t)^p expanded binomially
        const int p = e[coord];
        double binom = 1.0;  // C(p, j) b^{p-j}, built incrementally
        double bpow = 1.0;
        for (int j = 0; j < p; ++j) bpow *= b;
        for (int j = 0; j <= p; ++j) {
            if (binom * bpow != 0.0) bump(std::size_t(j), (fixed * binom * bpow) * c);
            if (j < p) {
                binom = binom * double(p - j) / double(j + 1);
                if (b != 0.0) bpow /= b;
                else bpow = (j + 1 == p) ? 1.0 : 0.0;
            }
        }
    }
    if (coeffs.empty()) coeffs.push_back(Matrix::Zero(dim_, dim_));
    return UnivariateMatrixPoly(std::move(coeffs), dim_);
}

MatrixSymbol MatrixSymbol::multiply(const MatrixSymbol& rhs) const {
    require_polynomial("product");
    rhs.require_polynomial("product");
    if (phase_dim_ != rhs.phase_dim_ || dim_ != rhs.dim_)
        throw StructuralError("symbol product dimension mismatch");
    std::map<std::vector<int>, Matrix> out;
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : rhs.terms_) {
            std::vector<int> e(phase_dim_);
            for (Eigen::Index i = 0; i < phase_dim_; ++i) e[i] = ea[i] + eb[i];
            Matrix prod = ca * cb;
            auto it = out.find(e);
            if (it == out.end()) out.emplace(std::move(e), std::move(prod));
            else it->second += prod;
        }
    return polynomial(dim_, phase_dim_, std::move(out));
}

MatrixSymbol MatrixSymbol::multiply_left(const Matrix& a) const {
    require_polynomial("product");
    std::map<std::vector<int>, Matrix> out = terms_;
    for (auto& [e, c] : out) c = a * c;
    return polynomial(dim_, phase_dim_, std::move(out));
}

MatrixSymbol MatrixSymbol::multiply_right(const Matrix& b) const {
    require_polynomial("product");
    std::map<std::vector<int>, Matrix> out = terms_;
    for (auto& [e, c] : out) c = c * b;
    return polynomial(dim_, phase_dim_, std::move(out));
}

MatrixSymbol MatrixSymbol::adjoint() const {
    require_polynomial("adjoint");
    std::map<std::vector<int>, Matrix> out = terms_;
    for (auto& [e, c] : out) c = c.adjoint().eval();
    return polynomial(dim_, phase_dim_, std::move(out));
}

MatrixSymbol MatrixSymbol::scaled(Complex factor) const {
    require_polynomial("scaling");
    std::map<std::vector<int>, Matrix> out = terms_;
    for (auto& [e, c] : out) c *= factor;
    return polynomial(dim_, phase_dim_, std::move(out));
}

MatrixSymbol MatrixSymbol::add(const MatrixSymbol& rhs) const {
    require_polynomial("sum");
    rhs.require_polynomial("sum");
    if (phase_dim_ != rhs.phase_dim_ || dim_ != rhs.dim_)
        throw StructuralError("symbol sum dimension mismatch");
    std::map<std::vector<int>, Matrix> out = terms_;
    for (const auto& [e, c] : rhs.terms_) {
        auto it = out.find(e);
        if (it == out.end()) out.emplace(e, c);
        else it->second += c;
    }
    return polynomial(dim_, phase_dim_, std::move(out));
}

const std::map<std::vector<int>, Matrix>& MatrixSymbol::terms() const {
    if (!polynomial_backed()) throw DomainError("symbol has no coefficient table");
    return terms_;
}

const MatrixSymbol::GridData& MatrixSymbol::grid_data() const {
    if (kind_ != Kind::grid) throw DomainError("not a grid symbol");
    return grid_;
}

double MatrixSymbol::sup_norm(const std::vector<PhasePoint>& samples) const {
    double m = 0.0;
    for (const auto& w : samples) m = std::max(m, sigma_max(eval(w)));
    return m;
}

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json rrow = nlohmann::json::array(), irow = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rrow.push_back(m(i, j).real());
            irow.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    return {{"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
    const auto& re = j.at("re");
    Eigen::Index rows = re.size(), cols = rows ? Eigen::Index(re[0].size()) : 0;
    Matrix m(rows, cols);
    bool has_im = j.contains("im");
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = Complex(re[i][c].get<double>(),
                              has_im ? j["im"][i][c].get<double>() : 0.0);
    return m;
}

}  // namespace

nlohmann::json MatrixSymbol::to_json() const {
    nlohmann::json j;
    j["dimension"] = dim_;
    j["phase_dim"] = phase_dim_;
    if (kind_ == Kind::model) {
        j["kind"] = "model";
        j["model"] = model_name_;
        j["params"] = model_params();
        return j;
    }
    if (kind_ == Kind::polynomial) {
        j["kind"] = "polynomial";
        if (homogeneous_) j["homogeneous"] = true;
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [e, c] : terms_)
            terms.push_back({{"exponents", e}, {"matrix", matrix_to_json(c)}});
        j["terms"] = std::move(terms);
        return j;
    }
    j["kind"] = "grid";
    j["lo"] = std::vector<double>(grid_.lo.data(), grid_.lo.data() + grid_.lo.size());
    j["hi"] = std::vector<double>(grid_.hi.data(), grid_.hi.data() + grid_.hi.size());
    j["shape"] = grid_.shape;
    nlohmann::json vals = nlohmann::json::array();
    for (const auto& v : grid_.values) vals.push_back(matrix_to_json(v));
    j["values"] = std::move(vals);
    return j;
}

MatrixSymbol symbol_from_model_json(const nlohmann::json& j);  // models.cpp

MatrixSymbol MatrixSymbol::from_json(const nlohmann::json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "model") return symbol_from_model_json(j);
    Eigen::Index dim = j.at("dimension").get<Eigen::Index>();
    Eigen::Index pdim = j.at("phase_dim").get<Eigen::Index>();
    if (kind == "polynomial") {
        std::map<std::vector<int>, Matrix> terms;
        for (const auto& t : j.at("terms"))
            terms[t.at("exponents").get<std::vector<int>>()] = matrix_from_json(t.at("matrix"));
        auto s = polynomial(dim, pdim, std::move(terms));
        s.mark_homogeneous(j.value("homogeneous", false));
        return s;
    }
    if (kind == "grid") {
        GridData g;
        auto lo = j.at("lo").get<std::vector<double>>();
        auto hi = j.at("hi").get<std::vector<double>>();
        g.lo = Eigen::Map<RealVector>(lo.data(), lo.size());
        g.hi = Eigen::Map<RealVector>(hi.data(), hi.size());
        g.shape = j.at("shape").get<std::vector<Eigen::Index>>();
        for (const auto& v : j.at("values")) g.values.push_back(matrix_from_json(v));
        return grid(dim, std::move(g));
    }
    throw ConfigError("unknown symbol kind: " + kind);
}

}  // namespace pst
