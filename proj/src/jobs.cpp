#include "pst/jobs.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pst/finite_type.hpp"
#include "pst/linalg.hpp"
#include "pst/models.hpp"
#include "pst/principal_type.hpp"
#include "pst/sampling.hpp"
#include "pst/semiclassical.hpp"

namespace pst {

namespace {

using ojson = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& dir, const std::string& name, const std::string& content) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write to " + dir + "/" + name);
    f << content;
}

void emit_report(const JobConfig& job, const std::string& name, const ojson& body) {
    std::string text = body.dump(2);
    text.push_back('\n');
    write_text(job.output_dir, name, text);
    std::cout << text;
}

ojson matrix_json(const Matrix& m) {
    ojson re = ojson::array(), im = ojson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ojson rr = ojson::array(), ir = ojson::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ir.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ir));
    }
    return ojson{{"re", std::move(re)}, {"im", std::move(im)}};
}

MatrixSymbol load_symbol(const ojson& options) {
    if (options.contains("symbol")) {
        const auto& s = options.at("symbol");
        if (s.is_string()) {
            std::ifstream f(s.get<std::string>());
            if (!f) throw ConfigError("cannot open symbol file " + s.get<std::string>());
            nlohmann::json j;
            f >> j;
            return MatrixSymbol::from_json(j);
        }
        return MatrixSymbol::from_json(s);
    }
    if (options.contains("model"))
        return model_library(options.at("model").get<std::string>(),
                             options.value("params", nlohmann::json::object()));
    throw ConfigError("provide either 'symbol' or 'model'");
}

PhasePoint point_from(const ojson& j) {
    auto v = j.get<std::vector<double>>();
    return PhasePoint(Eigen::Map<RealVector>(v.data(), Eigen::Index(v.size())));
}

// "lo:hi:n" -> n log-spaced values, descending for h sweeps
std::vector<double> parse_range(const std::string& s, bool descending) {
    double lo = 0, hi = 0;
    int n = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 2 || !(lo < hi))
        throw ConfigError("range must be lo:hi:count with lo < hi, got '" + s + "'");
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = lo * std::pow(hi / lo, double(i) / double(n - 1));
    if (descending) std::reverse(out.begin(), out.end());
    return out;
}

HypersurfaceChart chart_from(const ojson& options) {
    HypersurfaceChart chart;
    if (options.contains("chart")) {
        const auto& c = options.at("chart");
        chart.t_index = c.value("t_index", 0);
        chart.tau_index = c.value("tau_index", 1);
    }
    return chart;
}

int verdict_exit(Verdict v) { return v == Verdict::yes ? 0 : 2; }

// ---------------------------------------------------------------------------

int run_analyze_symbol(const JobConfig& job) {
    auto symbol = load_symbol(job.options);
    std::string check = job.options.value("check", "principal-type");
    PhasePoint w = job.options.contains("point")
                       ? point_from(job.options.at("point"))
                       : PhasePoint(RealVector::Zero(symbol.phase_dim()));

    if (check == "principal-type") {
        PrincipalTypeSearch search;
        search.grid_density = job.options.value("grid_density", search.grid_density);
        search.refine_iters = job.options.value("refine_iters", search.refine_iters);
        search.exclude_radial = job.options.value("exclude_radial", search.exclude_radial);
        if (job.seed) search.seed = job.seed;
        auto v = is_principal_type(symbol, w, search);
        ojson row;
        row["point"] = job.options.value("point", ojson::array());
        row["check"] = check;
        row["verdict"] = to_string(v.verdict);
        row["kernel_dim"] = v.kernel_dim;
        row["sigma_min"] = v.pairing_condition;
        if (v.witness) {
            std::vector<double> wt(v.witness->components.data(),
                                   v.witness->components.data() + v.witness->components.size());
            row["witness"] = wt;
        }
        emit_report(job, "analyze_symbol.json", row);
        return verdict_exit(v.verdict);
    }
    if (check == "constant-characteristics") {
        double eps = job.options.value("eps", 0.5);
        double radius = job.options.value("radius", 0.1);
        std::size_t count = job.options.value("samples", std::size_t(32));
        auto samples = ball_samples(w, radius, count, job.seed ? job.seed : 5);
        samples.push_back(w);
        auto rep = check_constant_characteristics(symbol, w, eps, samples);
        ojson row;
        row["check"] = check;
        row["verdict"] = to_string(rep.verdict);
        ojson secs = ojson::array();
        for (auto [alg, geo] : rep.at_center.sections)
            secs.push_back(ojson{{"algebraic", alg}, {"geometric", geo}});
        row["sections_at_center"] = secs;
        if (!rep.note.empty()) row["note"] = rep.note;
        emit_report(job, "analyze_symbol.json", row);
        return verdict_exit(rep.verdict);
    }
    throw ConfigError("unknown check '" + check + "'");
}

int run_find_symmetrizer(const JobConfig& job) {
    auto symbol = load_symbol(job.options);
    ojson patch = job.options.value("patch", ojson::object());
    PhasePoint center = patch.contains("center")
                            ? point_from(patch.at("center"))
                            : PhasePoint(RealVector::Zero(symbol.phase_dim()));
    double radius = patch.value("radius", 0.2);
    std::size_t count = patch.value("count", std::size_t(60));
    double singular_gap = patch.value("singular_gap", 0.1);

    auto samples = ball_samples(center, radius, 4 * count, job.seed ? job.seed : 13);
    std::vector<PhasePoint> kept;
    for (auto& w : samples) {
        double r = (w.coords - center.coords).norm();
        if (sigma_min(symbol.eval(w)) >= singular_gap * r) kept.push_back(std::move(w));
        if (kept.size() == count) break;
    }
    if (kept.size() < count / 2)
        throw NumericalError("patch sampling kept too few non-characteristic points");

    Eigen::Index axis = job.options.value("v_axis", 0);
    TangentDirection v = TangentDirection::axis(symbol.phase_dim(), axis);

    SymmetrizerParams params;
    params.c_target = job.options.value("c_target", params.c_target);
    params.C_max = job.options.value("C_max", params.C_max);

    auto res = find_symmetrizer(symbol, kept, v, params);

    ojson rep;
    rep["feasible"] = res.feasible;
    rep["M"] = matrix_json(res.M);
    rep["C_used"] = res.C_used;
    rep["rho_shift"] = res.rho_shift;
    rep["c_prime"] = res.c_prime;
    rep["norm_scale"] = res.norm_scale;
    rep["sigma_min_M"] = res.sigma_min_M;
    double m1 = std::numeric_limits<double>::infinity(), m2 = m1;
    for (auto& [a, b] : res.margins) {
        m1 = std::min(m1, a);
        m2 = std::min(m2, b);
    }
    rep["margin_qs1_min"] = m1;
    rep["margin_qs2_min"] = m2;
    emit_report(job, "symmetrizer.json", rep);

    std::ostringstream csv;
    csv << "sample,margin_qs1,margin_qs2\n";
    for (std::size_t i = 0; i < res.margins.size(); ++i)
        csv << i << "," << fmt(res.margins[i].first) << "," << fmt(res.margins[i].second)
            << "\n";
    write_text(job.output_dir, "margins.csv", csv.str());
    return res.feasible ? 0 : 2;
}

int run_sublevel(const JobConfig& job) {
    auto symbol = load_symbol(job.options);
    ojson curve_spec = job.options.value("curve", ojson::object());
    Eigen::Index coord = curve_spec.value("coord", 0);
    PhasePoint base = curve_spec.contains("base")
                          ? point_from(curve_spec.at("base"))
                          : PhasePoint(RealVector::Zero(symbol.phase_dim()));

    bool im_part_curve = job.options.value("imaginary_part", true);
    MatrixCurve curve = im_part_curve
                            ? MatrixCurve::im_along_line(symbol, base, coord)
                            : MatrixCurve(symbol.restrict_to_line(base, coord));

    SublevelOptions opt;
    opt.window_lo = job.options.value("window_lo", opt.window_lo);
    opt.window_hi = job.options.value("window_hi", opt.window_hi);
    opt.n_grid = job.options.value("grid", opt.n_grid);

    auto deltas = job.options.value("deltas", std::string("1e-7:1e-2:16"));
    auto grid = parse_range(deltas, false);

    auto rep = fit_sublevel_exponent(curve, grid.front(), grid.back(), grid.size(), opt);

    std::ostringstream csv;
    csv << "delta,measure\n";
    for (std::size_t i = 0; i < rep.delta_grid.size(); ++i)
        csv << fmt(rep.delta_grid[i]) << "," << fmt(rep.measures[i]) << "\n";
    write_text(job.output_dir, "sublevel.csv", csv.str());

    ojson out;
    out["mu_hat"] = std::isinf(rep.mu_hat) ? ojson("inf") : ojson(rep.mu_hat);
    out["fit_r2"] = rep.fit_r2;
    out["saturated"] = rep.saturated;
    if (rep.k_inferred) out["k_inferred"] = *rep.k_inferred;
    out["window"] = {rep.window_lo, rep.window_hi};
    emit_report(job, "sublevel.json", out);
    return 0;
}

int run_spectral_projection(const JobConfig& job) {
    Matrix q;
    if (job.options.contains("matrix")) {
        auto sym = MatrixSymbol::from_json(
            ojson{{"kind", "polynomial"},
                  {"dimension", job.options.at("matrix").at("re").size()},
                  {"phase_dim", 2},
                  {"terms",
                   ojson::array({ojson{{"exponents", {0, 0}},
                                       {"matrix", job.options.at("matrix")}}})}});
        q = sym.eval(PhasePoint(RealVector::Zero(2)));
    } else {
        auto symbol = load_symbol(job.options);
        PhasePoint w = job.options.contains("point")
                           ? point_from(job.options.at("point"))
                           : PhasePoint(RealVector::Zero(symbol.phase_dim()));
        q = symbol.eval(w);
    }
    double eps = job.options.value("epsilon", 0.0);
    if (eps <= 0) {
        auto auto_eps = auto_contour_radius(q);
        if (!auto_eps) throw NumericalError("no spectral gap found; pass epsilon explicitly");
        eps = *auto_eps;
    }
    auto pi = spectral_projection(q, eps, job.options.value("nodes", 32));
    ojson out;
    out["Pi"] = matrix_json(pi.Pi);
    out["epsilon"] = pi.epsilon;
    out["nodes"] = pi.nodes;
    out["rank"] = pi.rank;
    out["idempotency_defect"] = pi.idempotency_defect;
    out["commutation_defect"] = pi.commutation_defect;
    emit_report(job, "spectral_projection.json", out);
    return 0;
}

ojson finite_type_json(const FiniteTypeReport& rep) {
    ojson out;
    const char* verdict = rep.verdict == Verdict::yes
                              ? "finite_type"
                              : (rep.verdict == Verdict::no ? "not_finite_type"
                                                            : "inconclusive");
    out["verdict"] = verdict;
    out["quasi_symmetric"] = ojson{{"verdict", to_string(rep.quasi.verdict)},
                                   {"c_margin", rep.quasi.c_margin},
                                   {"C_used", rep.quasi.C_used},
                                   {"im_min_eig", rep.quasi.im_min_eig}};
    out["symmetrizer"] = ojson{{"feasible", rep.symmetrizer.feasible},
                               {"rho_shift", rep.symmetrizer.rho_shift},
                               {"sigma_min_M", rep.symmetrizer.sigma_min_M}};
    out["approximation_property"] =
        ojson{{"verdict", to_string(rep.approx.verdict)},
              {"max_defect", rep.approx.max_defect},
              {"tangential_derivative_defect", rep.approx.tangential_derivative_defect},
              {"vacuous", rep.approx.vacuous}};
    if (rep.mu) out["mu"] = std::isinf(*rep.mu) ? ojson("inf") : ojson(*rep.mu);
    if (rep.k) out["k"] = *rep.k;
    if (rep.predicted_loss) out["predicted_loss"] = *rep.predicted_loss;
    out["saturated"] = rep.saturated;
    if (!rep.note.empty()) out["note"] = rep.note;
    return out;
}

std::string finite_type_markdown(const FiniteTypeReport& rep) {
    std::ostringstream md;
    auto yn = [](Verdict v) { return std::string(to_string(v)); };
    md << "# Finite type report\n\n";
    md << "| check | result |\n|---|---|\n";
    md << "| quasi-symmetric | " << yn(rep.quasi.verdict) << " (margin "
       << fmt(rep.quasi.c_margin) << ") |\n";
    md << "| approximation property | " << yn(rep.approx.verdict) << " (defect "
       << fmt(rep.approx.max_defect) << ") |\n";
    md << "| sublevel exponent mu | "
       << (rep.mu ? (std::isinf(*rep.mu) ? std::string("inf (definite)") : fmt(*rep.mu))
                  : std::string("-"))
       << " |\n";
    md << "| derivative order k | " << (rep.k ? std::to_string(*rep.k) : std::string("-"))
       << " |\n";
    md << "| predicted loss | " << (rep.predicted_loss ? fmt(*rep.predicted_loss) : "-")
       << " |\n";
    md << "| verdict | "
       << (rep.verdict == Verdict::yes
               ? "finite type"
               : (rep.verdict == Verdict::no ? "not finite type" : "inconclusive"))
       << " |\n";
    return md.str();
}

FiniteTypeConfig finite_type_config_from(const JobConfig& job) {
    FiniteTypeConfig cfg;
    const auto& o = job.options;
    if (o.contains("symmetrizer")) {
        const auto& s = o.at("symmetrizer");
        if (s.is_string() && s == "identity")
            cfg.symmetrizer = FiniteTypeConfig::Symmetrizer::identity;
        else if (s.is_string() && s == "auto")
            cfg.symmetrizer = FiniteTypeConfig::Symmetrizer::automatic;
        else {
            cfg.symmetrizer = FiniteTypeConfig::Symmetrizer::given;
            Eigen::Index n = Eigen::Index(s.at("re").size());
            Matrix m(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    m(i, j) = Complex(s.at("re").at(i).at(j).get<double>(),
                                      s.contains("im") ? s.at("im").at(i).at(j).get<double>()
                                                       : 0.0);
            cfg.given_M = m;
        }
    }
    cfg.base_nodes = o.value("base_nodes", cfg.base_nodes);
    cfg.patch_samples = o.value("patch_samples", cfg.patch_samples);
    cfg.sublevel.n_grid = o.value("grid", cfg.sublevel.n_grid);
    if (job.seed) cfg.seed = job.seed;
    return cfg;
}

int run_finite_type(const JobConfig& job) {
    auto symbol = load_symbol(job.options);
    PhasePoint w0 = job.options.contains("point")
                        ? point_from(job.options.at("point"))
                        : PhasePoint(RealVector::Zero(symbol.phase_dim()));
    HypersurfaceChart chart = chart_from(job.options);
    auto cfg = finite_type_config_from(job);
    auto rep = finite_type_verdict(symbol, w0, chart, cfg);
    emit_report(job, "finite_type.json", finite_type_json(rep));
    write_text(job.output_dir, "finite_type.md", finite_type_markdown(rep));
    return verdict_exit(rep.verdict);
}

MatrixCurve damping_for_model(const std::string& model, const ojson& options) {
    if (model == "t2" || model == "scalarex") {
        int k = options.value("k", 2);
        std::vector<Matrix> coeffs(k + 1, Matrix::Zero(1, 1));
        coeffs[k](0, 0) = 1.0;
        return MatrixCurve(UnivariateMatrixPoly(std::move(coeffs), 1));
    }
    if (model == "ex1" || model == "ex2") {
        auto sym = model_library(model, nlohmann::json::object());
        return MatrixCurve(sym.restrict_to_line(PhasePoint(RealVector::Zero(2)), 0));
    }
    if (model == "elliptic") {
        std::vector<Matrix> coeffs(1, Matrix::Identity(1, 1));
        return MatrixCurve(UnivariateMatrixPoly(std::move(coeffs), 1));
    }
    if (model == "zero") {
        std::vector<Matrix> coeffs(1, Matrix::Zero(1, 1));
        return MatrixCurve(UnivariateMatrixPoly(std::move(coeffs), 1));
    }
    throw ConfigError("verify-estimate does not know model '" + model + "'");
}

ojson scaling_json(const ScalingReport& rep) {
    ojson out;
    out["gamma_hat"] = rep.gamma_hat;
    out["fit_r2"] = rep.fit_r2;
    out["subelliptic_verdict"] = rep.gain ? "gain" : "no_gain";
    out["unreliable_fit"] = rep.unreliable_fit;
    if (rep.predicted) out["predicted"] = *rep.predicted;
    ojson rows = ojson::array();
    for (std::size_t i = 0; i < rep.h_grid.size(); ++i)
        rows.push_back(ojson{{"h", rep.h_grid[i]},
                             {"n_t", rep.n_ts[i]},
                             {"sigma_min", rep.sigma_mins[i]}});
    out["sweep"] = rows;
    return out;
}

void write_scaling_artifacts(const JobConfig& job, const ScalingReport& rep) {
    std::ostringstream csv;
    csv << "h,n_t,sigma_min\n";
    for (std::size_t i = 0; i < rep.h_grid.size(); ++i)
        csv << fmt(rep.h_grid[i]) << "," << rep.n_ts[i] << "," << fmt(rep.sigma_mins[i])
            << "\n";
    write_text(job.output_dir, "scaling.csv", csv.str());
    if (job.options.value("plot_data", false)) {
        std::ostringstream dat;
        dat << "# h sigma_min  (log-log slope " << fmt(rep.gamma_hat) << ")\n";
        for (std::size_t i = 0; i < rep.h_grid.size(); ++i)
            dat << fmt(rep.h_grid[i]) << " " << fmt(rep.sigma_mins[i]) << "\n";
        write_text(job.output_dir, "scaling.dat", dat.str());
    }
}

int run_verify_estimate(const JobConfig& job) {
    std::string model = job.options.value("model", "t2");
    if (model == "subex") {
        double alpha = job.options.value("alpha", 0.0);
        double beta = job.options.value("beta", 0.0);
        std::vector<double> hgrid =
            job.options.contains("h") ? parse_range(job.options.at("h"), true)
                                      : subex_default_h_grid();
        auto rep = subex_scaling_sweep(alpha, beta, hgrid, SubexGrid{}, job.jobs);
        write_scaling_artifacts(job, rep);
        emit_report(job, "scaling.json", scaling_json(rep));
        return rep.gain ? 0 : 2;
    }
    auto curve = damping_for_model(model, job.options);
    auto hgrid = parse_range(job.options.value("h", std::string("1e-4:1e-1:8")), true);
    std::optional<double> predicted;
    if (job.options.contains("predicted")) predicted = job.options.at("predicted").get<double>();
    auto rep = scaling_sweep(curve, hgrid, predicted, DiscretizeOptions{}, job.jobs);
    write_scaling_artifacts(job, rep);
    emit_report(job, "scaling.json", scaling_json(rep));
    return rep.gain ? 0 : 2;
}

int run_list_models(const JobConfig& job) {
    std::ostringstream out;
    out << "model        params                  description\n";
    for (const auto& m : list_models()) {
        out << m.name;
        for (std::size_t i = m.name.size(); i < 13; ++i) out << ' ';
        out << m.params;
        for (std::size_t i = m.params.size(); i < 24; ++i) out << ' ';
        out << m.description << "\n";
    }
    std::cout << out.str();
    write_text(job.output_dir, "models.txt", out.str());
    return 0;
}

// --- the paper-example reproduction table ----------------------------------

struct SuiteRow {
    std::string name;
    std::string claim;
    std::string computed;
    bool pass = false;
};

void paper_suite_rows(const JobConfig& job, std::vector<SuiteRow>& rows) {
    auto want = [&](const std::string& name) {
        return job.only.empty() || name.find(job.only) != std::string::npos;
    };

    if (want("prtrem-origin")) {
        auto sym = model_library("prtrem", {});
        auto v = is_principal_type(sym, PhasePoint(RealVector::Zero(2)));
        rows.push_back({"prtrem-origin", "principal type at w = 0",
                        std::string(to_string(v.verdict)) + ", sigma_min " +
                            fmt(v.pairing_condition),
                        v.verdict == Verdict::yes});
    }
    if (want("prtrem-offaxis")) {
        auto sym = model_library("prtrem", {});
        auto v = is_principal_type(sym, PhasePoint((RealVector(2) << 0.0, 0.5).finished()));
        rows.push_back({"prtrem-offaxis", "not principal type at (0, 0.5)",
                        std::string(to_string(v.verdict)), v.verdict == Verdict::no});
    }
    if (want("jordan")) {
        auto sym = model_library("jordan", {});
        auto v = is_principal_type(sym, PhasePoint(RealVector::Zero(2)));
        rows.push_back({"jordan", "not principal type at the double zero",
                        std::string(to_string(v.verdict)), v.verdict == Verdict::no});
    }
    if (want("w2iw3")) {
        JobConfig sub = job;
        sub.output_dir.clear();
        auto sym = model_library("w2iw3", {});
        auto samples = ball_samples(PhasePoint(RealVector::Zero(4)), 0.2, 240,
                                    job.seed ? job.seed : 13);
        std::vector<PhasePoint> kept;
        for (auto& w : samples) {
            if (sigma_min(sym.eval(w)) >= 0.1 * w.coords.norm()) kept.push_back(std::move(w));
            if (kept.size() == 60) break;
        }
        TangentDirection v = TangentDirection::axis(4, 0);
        auto res = find_symmetrizer(sym, kept, v);
        double m1 = std::numeric_limits<double>::infinity(), m2 = m1;
        for (auto& [a, b] : res.margins) {
            m1 = std::min(m1, a);
            m2 = std::min(m2, b);
        }
        bool qs = false;
        if (res.feasible) {
            auto q = symmetrized_symbol(sym, res);
            qs = is_quasi_symmetric(q, kept, v).verdict == Verdict::yes;
        }
        bool pass = res.feasible && m1 >= 1e-3 && m2 >= 1e-3 && qs;
        rows.push_back({"w2iw3", "symmetrizer exists with positive margins",
                        std::string(res.feasible ? "feasible" : "infeasible") + ", margins " +
                            fmt(m1) + " / " + fmt(m2),
                        pass});
    }
    if (want("ex2-sublevel")) {
        auto sym = model_library("ex2", {});
        MatrixCurve curve(sym.restrict_to_line(PhasePoint(RealVector::Zero(2)), 0));
        auto rep = fit_sublevel_exponent(curve, 1e-7, 1e-2, 16);
        bool pass = std::abs(rep.mu_hat - 1.0 / 6.0) <= 0.02 && rep.fit_r2 >= 0.99 &&
                    rep.k_inferred && *rep.k_inferred == 6;
        rows.push_back({"ex2-sublevel", "measure ~ delta^{1/6}, k = 6",
                        "mu_hat " + fmt(rep.mu_hat) + ", r2 " + fmt(rep.fit_r2), pass});
    }
    if (want("ex1-sublevel")) {
        auto sym = model_library("ex1", {});
        MatrixCurve curve(sym.restrict_to_line(PhasePoint(RealVector::Zero(2)), 0));
        auto rep = fit_sublevel_exponent(curve, 1e-7, 1e-2, 16);
        rows.push_back({"ex1-sublevel", "sublevel sets saturate the window",
                        rep.saturated ? "saturated" : "not saturated", rep.saturated});
    }
    if (want("t2-scaling")) {
        auto rep = scaling_sweep(damping_for_model("t2", {}), log_h_grid(1e-4, 1e-1, 8),
                                 2.0 / 3.0, DiscretizeOptions{}, job.jobs);
        bool pass = std::abs(rep.gamma_hat - 2.0 / 3.0) <= 0.03;
        rows.push_back({"t2-scaling", "loss 2/3 for the k = 2 scalar model",
                        "gamma_hat " + fmt(rep.gamma_hat), pass});
    }
    if (want("ex2-scaling")) {
        auto rep = scaling_sweep(damping_for_model("ex2", {}), log_h_grid(1e-4, 1e-1, 8),
                                 6.0 / 7.0, DiscretizeOptions{}, job.jobs);
        bool pass = std::abs(rep.gamma_hat - 6.0 / 7.0) <= 0.03;
        rows.push_back({"ex2-scaling", "loss 6/7 for the perturbed system",
                        "gamma_hat " + fmt(rep.gamma_hat), pass});
    }
    if (want("ex1-scaling")) {
        auto rep = scaling_sweep(damping_for_model("ex1", {}), log_h_grid(1e-4, 1e-1, 8),
                                 std::nullopt, DiscretizeOptions{}, job.jobs);
        bool pass = rep.gamma_hat >= 0.97 && !rep.gain;
        rows.push_back({"ex1-scaling", "no subelliptic gain",
                        "gamma_hat " + fmt(rep.gamma_hat), pass});
    }
    if (want("subex-matrix")) {
        std::vector<double> alphas{0.0, 0.5, 1.0};
        std::vector<double> betas{0.0, 1.0, 2.0, -1.0, -2.0};
        auto cells = subellipticity_matrix(alphas, betas, subex_default_h_grid(), SubexGrid{},
                                           job.jobs);
        int bad = 0;
        std::ostringstream detail;
        for (const auto& c : cells) {
            bool expect_gain = c.alpha == 0.0 || std::abs(c.alpha * c.beta) != 1.0;
            if (c.report.gain != expect_gain) {
                ++bad;
                detail << " (" << c.alpha << "," << c.beta << ")";
            }
        }
        rows.push_back({"subex-matrix", "gain exactly when alpha = 0 or beta != +-1/alpha",
                        bad == 0 ? "15/15 cells match"
                                 : std::to_string(bad) + " cells differ:" + detail.str(),
                        bad == 0});
    }
    if (want("simplex-finite-type")) {
        auto sym = model_library("simplex", nlohmann::json{{"f", "ex2"}});
        FiniteTypeConfig cfg;
        cfg.symmetrizer = FiniteTypeConfig::Symmetrizer::identity;
        if (job.seed) cfg.seed = job.seed;
        auto rep = finite_type_verdict(sym, PhasePoint(RealVector::Zero(4)),
                                       HypersurfaceChart{}, cfg);
        bool pass = rep.verdict == Verdict::yes && rep.mu &&
                    std::abs(*rep.mu - 1.0 / 6.0) <= 0.02 && rep.predicted_loss &&
                    std::abs(*rep.predicted_loss - 6.0 / 7.0) <= 0.03;
        rows.push_back({"simplex-finite-type", "finite type 1/6, loss 6/7",
                        rep.mu ? ("mu " + fmt(*rep.mu) + ", loss " +
                                  (rep.predicted_loss ? fmt(*rep.predicted_loss) : "-"))
                               : "no exponent",
                        pass});
    }
    if (want("ex1-not-finite-type")) {
        auto sym = model_library("simplex", nlohmann::json{{"f", "ex1"}});
        FiniteTypeConfig cfg;
        cfg.symmetrizer = FiniteTypeConfig::Symmetrizer::identity;
        if (job.seed) cfg.seed = job.seed;
        auto rep = finite_type_verdict(sym, PhasePoint(RealVector::Zero(4)),
                                       HypersurfaceChart{}, cfg);
        rows.push_back({"ex1-not-finite-type", "saturating damping is not finite type",
                        rep.verdict == Verdict::no ? "not finite type" : "other",
                        rep.verdict == Verdict::no && rep.saturated});
    }
    if (want("elliptic-finite-type")) {
        auto sym = model_library("identity", nlohmann::json{{"N", 2}, {"phase_dim", 4}});
        FiniteTypeConfig cfg;
        if (job.seed) cfg.seed = job.seed;
        auto rep = finite_type_verdict(sym, PhasePoint(RealVector::Zero(4)),
                                       HypersurfaceChart{}, cfg);
        bool pass = rep.verdict == Verdict::yes && rep.predicted_loss &&
                    *rep.predicted_loss == 0.0;
        rows.push_back({"elliptic-finite-type", "elliptic symbols are finite type 0",
                        rep.predicted_loss ? "loss " + fmt(*rep.predicted_loss) : "-", pass});
    }
}

int run_paper_suite(const JobConfig& job) {
    std::vector<SuiteRow> rows;
    paper_suite_rows(job, rows);
    if (rows.empty()) throw ConfigError("--only matched no paper-suite rows");

    std::ostringstream md;
    md << "| example | claim | computed | status |\n|---|---|---|---|\n";
    bool all = true;
    for (const auto& r : rows) {
        md << "| " << r.name << " | " << r.claim << " | " << r.computed << " | "
           << (r.pass ? "pass" : "FAIL") << " |\n";
        all = all && r.pass;
    }
    std::cout << md.str();
    write_text(job.output_dir, "paper_suite.md", md.str());
    return all ? 0 : 1;
}

}  // namespace

JobConfig JobConfig::from_json(const nlohmann::json& j) {
    JobConfig cfg;
    cfg.command = j.at("command").get<std::string>();
    cfg.seed = j.value("seed", std::uint64_t(0));
    cfg.jobs = j.value("jobs", std::size_t(1));
    cfg.output_dir = j.value("output", std::string());
    cfg.only = j.value("only", std::string());
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "command" || it.key() == "seed" || it.key() == "jobs" ||
            it.key() == "output" || it.key() == "only")
            continue;
        cfg.options[it.key()] = it.value();
    }
    return cfg;
}

nlohmann::ordered_json JobConfig::to_json() const {
    ojson j;
    j["command"] = command;
    j["seed"] = seed;
    j["jobs"] = jobs;
    if (!output_dir.empty()) j["output"] = output_dir;
    if (!only.empty()) j["only"] = only;
    for (auto it = options.begin(); it != options.end(); ++it) j[it.key()] = it.value();
    return j;
}

int run(const JobConfig& job) {
    if (job.command == "analyze-symbol") return run_analyze_symbol(job);
    if (job.command == "find-symmetrizer") return run_find_symmetrizer(job);
    if (job.command == "sublevel") return run_sublevel(job);
    if (job.command == "finite-type") return run_finite_type(job);
    if (job.command == "spectral-projection") return run_spectral_projection(job);
    if (job.command == "verify-estimate") return run_verify_estimate(job);
    if (job.command == "list-models") return run_list_models(job);
    if (job.command == "run-paper-suite") return run_paper_suite(job);
    throw ConfigError("unknown command '" + job.command + "'");
}

}  // namespace pst
