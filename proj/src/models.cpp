#include "pst/models.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace pst {

namespace {

using Terms = std::map<std::vector<int>, Matrix>;

Matrix m2(Complex a, Complex b, Complex c, Complex d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

std::vector<int> exps(std::initializer_list<int> e) { return std::vector<int>(e); }

MatrixSymbol build_prtrem() {
    Terms t;
    t[exps({1, 0})] = m2(1, 0, 0, -1);
    t[exps({0, 1})] = m2(-1, 1, 1, -1);
    auto s = MatrixSymbol::polynomial(2, 2, std::move(t));
    s.mark_homogeneous(true);
    return s;
}

MatrixSymbol build_jordan() {
    Terms t;
    t[exps({0, 0})] = m2(0, 1, 0, 0);
    t[exps({1, 0})] = m2(1, 0, 0, 0);
    t[exps({0, 1})] = m2(0, 0, 0, 1);
    return MatrixSymbol::polynomial(2, 2, std::move(t));
}

MatrixSymbol build_w2iw3() {
    Terms t;
    t[exps({1, 0, 0, 0})] = m2(0, 1, 1, 0);
    t[exps({0, 1, 0, 0})] = m2(1, 0, 0, 1);
    t[exps({0, 0, 1, 0})] = m2(Complex(0, 1), 0, 0, Complex(0, -1));
    auto s = MatrixSymbol::polynomial(2, 4, std::move(t));
    s.mark_homogeneous(true);
    return s;
}

MatrixSymbol build_ex1() {
    Terms t;
    t[exps({2, 0})] = m2(1, 0, 0, 0);
    t[exps({3, 0})] = m2(0, 1, 1, 0);
    t[exps({4, 0})] = m2(0, 0, 0, 1);
    return MatrixSymbol::polynomial(2, 2, std::move(t));
}

MatrixSymbol build_ex2() {
    Terms t;
    t[exps({2, 0})] = m2(1, 0, 0, 0);
    t[exps({3, 0})] = m2(0, 1, 1, 0);
    t[exps({4, 0})] = m2(0, 0, 0, 1);
    t[exps({6, 0})] = m2(0, 0, 0, 1);
    t[exps({7, 0})] = m2(0, -1, -1, 0);
    t[exps({8, 0})] = m2(1, 0, 0, 0);
    return MatrixSymbol::polynomial(2, 2, std::move(t));
}

MatrixSymbol build_scalarex(const nlohmann::json& params) {
    int k = params.value("k", 2);
    if (k < 0 || k % 2 != 0) throw ConfigError("scalarex needs an even k >= 0");
    Terms t;
    Matrix one = Matrix::Identity(1, 1);
    t[exps({0, 1})] = one;                       // tau
    std::vector<int> e = exps({k, 0});
    t[e] = Complex(0, 1) * one;                  // i t^k
    return MatrixSymbol::polynomial(1, 2, std::move(t));
}

Matrix parse_matrix_or_identity(const nlohmann::json& params, const char* key,
                                Eigen::Index n) {
    if (!params.contains(key)) return Matrix::Identity(n, n);
    const auto& j = params.at(key);
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index c = 0; c < n; ++c) m(i, c) = j.at(i).at(c).get<double>();
    return m;
}

// tau * M0 + i F(t); phase (t, tau, x, xi) at |xi| = 1.
MatrixSymbol build_simplex(const nlohmann::json& params) {
    std::string f = params.value("f", "ex2");
    Terms ft;
    if (f == "ex1") ft = build_ex1().terms();
    else if (f == "ex2") ft = build_ex2().terms();
    else if (f == "t2") ft[exps({2, 0})] = Matrix::Identity(2, 2);
    else throw ConfigError("simplex: unknown damping curve '" + f + "'");
    Matrix m0 = parse_matrix_or_identity(params, "m0", 2);
    Terms t;
    t[exps({0, 1, 0, 0})] = m0;
    for (auto& [e, c] : ft) t[exps({e[0], 0, 0, 0})] = Complex(0, 1) * c;
    return MatrixSymbol::polynomial(2, 4, std::move(t));
}

// tau Id + alpha xi diag(1,-1) + i (t - beta x)^2 xi Id, on the chart xi > 0.
MatrixSymbol build_subex(const nlohmann::json& params) {
    if (!params.contains("alpha") || !params.contains("beta"))
        throw ConfigError("subex requires real parameters alpha and beta");
    double alpha = params.at("alpha").get<double>();
    double beta = params.at("beta").get<double>();
    Matrix id = Matrix::Identity(2, 2);
    Terms t;
    t[exps({0, 1, 0, 0})] = id;
    t[exps({0, 0, 0, 1})] = alpha * m2(1, 0, 0, -1);
    // (t - beta x)^2 xi = (t^2 - 2 beta t x + beta^2 x^2) xi
    t[exps({2, 0, 0, 1})] = Complex(0, 1) * id;
    auto add = [&](std::vector<int> e, Complex v) {
        Matrix m = v * id;
        auto it = t.find(e);
        if (it == t.end()) t.emplace(std::move(e), std::move(m));
        else it->second += m;
    };
    add(exps({1, 0, 1, 1}), Complex(0, -2.0 * beta));
    add(exps({0, 0, 2, 1}), Complex(0, beta * beta));
    return MatrixSymbol::polynomial(2, 4, std::move(t));
}

MatrixSymbol build_saex() {
    Terms t;
    t[exps({0, 0, 1, 0})] = m2(1, 0, 0, -1);
    t[exps({1, 0, 0, 1})] = m2(0, 1, 1, 0);
    auto s = MatrixSymbol::polynomial(2, 4, std::move(t));
    s.mark_homogeneous(true);
    return s;
}

MatrixSymbol build_identity(const nlohmann::json& params) {
    Eigen::Index n = params.value("N", 2);
    Eigen::Index pd = params.value("phase_dim", 2);
    return MatrixSymbol::constant(Matrix::Identity(n, n), pd);
}

MatrixSymbol build_zero(const nlohmann::json& params) {
    Eigen::Index n = params.value("N", 2);
    Eigen::Index pd = params.value("phase_dim", 2);
    return MatrixSymbol::zero(n, pd);
}

MatrixSymbol build_morimoto(const nlohmann::json& params) {
    double sigma = params.value("sigma", 1.0);
    if (sigma <= 0) throw ConfigError("morimoto requires sigma > 0");
    return MatrixSymbol::callable(1, 2, [sigma](const PhasePoint& w) {
        double t = w.coords[0];
        Matrix m(1, 1);
        m(0, 0) = t == 0.0 ? 0.0 : std::exp(-1.0 / std::pow(std::abs(t), sigma));
        return m;
    });
}

}  // namespace

Matrix f_ex1(double t) { return build_ex1().eval(PhasePoint((RealVector(2) << t, 0).finished())); }
Matrix f_ex2(double t) { return build_ex2().eval(PhasePoint((RealVector(2) << t, 0).finished())); }

MatrixSymbol model_library(const std::string& name, const nlohmann::json& params) {
    MatrixSymbol s;
    if (name == "prtrem") s = build_prtrem();
    else if (name == "jordan") s = build_jordan();
    else if (name == "w2iw3") s = build_w2iw3();
    else if (name == "ex1") s = build_ex1();
    else if (name == "ex2") s = build_ex2();
    else if (name == "scalarex") s = build_scalarex(params);
    else if (name == "simplex" || name == "sex") s = build_simplex(params);
    else if (name == "subex") s = build_subex(params);
    else if (name == "saex") s = build_saex();
    else if (name == "identity") s = build_identity(params);
    else if (name == "zero") s = build_zero(params);
    else if (name == "morimoto") s = build_morimoto(params);
    else throw ConfigError("unknown model '" + name + "'");
    s.set_model_tag(name, params.is_null() ? nlohmann::json::object() : params);
    return s;
}

MatrixSymbol symbol_from_model_json(const nlohmann::json& j) {
    return model_library(j.at("model").get<std::string>(),
                         j.value("params", nlohmann::json::object()));
}

std::vector<ModelInfo> list_models() {
    return {
        {"prtrem", "-", "2x2 symmetric system, principal type only at the origin"},
        {"jordan", "-", "upper-triangular system with a Jordan block at the origin"},
        {"w2iw3", "-", "2x2 system symmetrizable by the antidiagonal matrix"},
        {"ex1", "-", "rank-degenerate damping curve F(t), no subelliptic gain"},
        {"ex2", "-", "damping curve F(t) with eigenvalues t^2 and t^6 (times 1+t^2)"},
        {"scalarex", "k (even)", "scalar tau + i t^k"},
        {"simplex", "f in {ex1, ex2, t2}; m0", "tau M0 + i F(t) at |xi| = 1"},
        {"sex", "alias of simplex", "tau M + i F with M > 0, F >= 0"},
        {"subex", "alpha, beta", "coupled transport with damping (t - beta x)^2 |xi|"},
        {"saex", "-", "symmetric system with non-solvable diagonalization"},
        {"identity", "N, phase_dim", "constant identity"},
        {"zero", "N, phase_dim", "constant zero"},
        {"morimoto", "sigma > 0", "scalar damping vanishing to infinite order"},
    };
}

}  // namespace pst
