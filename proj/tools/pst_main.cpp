#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pst/jobs.hpp"

namespace {

// flags shared by every subcommand
struct Common {
    std::string config_path;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::string output;
    std::string only;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "JSON job config; flags override its fields");
    cmd->add_option("--seed", c.seed, "deterministic seed");
    cmd->add_option("--jobs", c.jobs, "worker cap for parallel sweeps");
    cmd->add_option("--output", c.output, "directory for report artifacts");
    cmd->add_option("--only", c.only, "filter (run-paper-suite rows)");
}

pst::JobConfig assemble(const std::string& command, const Common& common,
                        const nlohmann::ordered_json& options) {
    pst::JobConfig job;
    if (!common.config_path.empty()) {
        std::ifstream f(common.config_path);
        if (!f) throw pst::ConfigError("cannot open config " + common.config_path);
        nlohmann::json j;
        f >> j;
        job = pst::JobConfig::from_json(j);
    }
    job.command = command;
    if (common.seed) job.seed = common.seed;
    if (common.jobs != 1) job.jobs = common.jobs;
    if (!common.output.empty()) job.output_dir = common.output;
    if (!common.only.empty()) job.only = common.only;
    for (auto it = options.begin(); it != options.end(); ++it)
        job.options[it.key()] = it.value();
    return job;
}

nlohmann::ordered_json parse_json_arg(const std::string& text, const char* what) {
    auto parsed = nlohmann::ordered_json::parse(text, nullptr, false);
    if (parsed.is_discarded())
        throw pst::ConfigError(std::string("could not parse ") + what + ": " + text);
    return parsed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for matrix phase-space symbols"};
    app.require_subcommand(1);

    struct SubState {
        Common common;
        std::string symbol, model, params, check, point, patch, curve, chart, deltas, h;
        std::string matrix, symmetrizer;
        double alpha = 0.0, beta = 0.0, epsilon = 0.0, c_target = -1.0;
        int nodes = 0, grid_density = 0, k = -1;
        bool plot_data = false;
        double window_lo = 0.0, window_hi = 0.0;
        bool has_window = false;
    };
    std::map<std::string, std::shared_ptr<SubState>> st;

    auto add_symbol_opts = [](CLI::App* cmd, SubState& s) {
        cmd->add_option("--symbol", s.symbol, "symbol JSON file or inline JSON");
        cmd->add_option("--model", s.model, "model name from list-models");
        cmd->add_option("--params", s.params, "model parameters as inline JSON");
    };

    {
        auto s = std::make_shared<SubState>();
        st["analyze-symbol"] = s;
        auto* cmd = app.add_subcommand("analyze-symbol", "principal type and characteristics");
        add_common(cmd, s->common);
        add_symbol_opts(cmd, *s);
        cmd->add_option("--check", s->check, "principal-type | constant-characteristics");
        cmd->add_option("--point", s->point, "phase point as JSON array");
        cmd->add_option("--grid-density", s->grid_density, "direction grid size");
    }
    {
        auto s = std::make_shared<SubState>();
        st["find-symmetrizer"] = s;
        auto* cmd = app.add_subcommand("find-symmetrizer", "semidefinite symmetrizer search");
        add_common(cmd, s->common);
        add_symbol_opts(cmd, *s);
        cmd->add_option("--patch", s->patch, "patch JSON file or inline JSON");
        cmd->add_option("--c-target", s->c_target, "target transversality constant");
    }
    {
        auto s = std::make_shared<SubState>();
        st["sublevel"] = s;
        auto* cmd = app.add_subcommand("sublevel", "sublevel measures and the exponent fit");
        add_common(cmd, s->common);
        add_symbol_opts(cmd, *s);
        cmd->add_option("--curve", s->curve, "curve JSON file or inline JSON");
        cmd->add_option("--deltas", s->deltas, "delta grid lo:hi:count");
        cmd->add_option("--window-lo", s->window_lo, "window lower end")
            ->each([s](const std::string&) { s->has_window = true; });
        cmd->add_option("--window-hi", s->window_hi, "window upper end")
            ->each([s](const std::string&) { s->has_window = true; });
    }
    {
        auto s = std::make_shared<SubState>();
        st["finite-type"] = s;
        auto* cmd = app.add_subcommand("finite-type", "full finite-type pipeline");
        add_common(cmd, s->common);
        add_symbol_opts(cmd, *s);
        cmd->add_option("--point", s->point, "base point as JSON array");
        cmd->add_option("--chart", s->chart, "chart JSON file or inline JSON");
        cmd->add_option("--symmetrizer", s->symmetrizer, "auto | identity | matrix JSON file");
    }
    {
        auto s = std::make_shared<SubState>();
        st["spectral-projection"] = s;
        auto* cmd = app.add_subcommand("spectral-projection", "Riesz projector by contour");
        add_common(cmd, s->common);
        add_symbol_opts(cmd, *s);
        cmd->add_option("--matrix", s->matrix, "matrix as inline JSON {re, im}");
        cmd->add_option("--point", s->point, "evaluation point");
        cmd->add_option("--epsilon", s->epsilon, "contour radius (0 = auto)");
        cmd->add_option("--nodes", s->nodes, "quadrature nodes");
    }
    {
        auto s = std::make_shared<SubState>();
        st["verify-estimate"] = s;
        auto* cmd = app.add_subcommand("verify-estimate", "semiclassical sigma_min sweep");
        add_common(cmd, s->common);
        cmd->add_option("--model", s->model, "t2 | scalarex | ex1 | ex2 | elliptic | subex");
        cmd->add_option("--h", s->h, "h sweep lo:hi:count");
        cmd->add_option("--alpha", s->alpha, "subex alpha");
        cmd->add_option("--beta", s->beta, "subex beta");
        cmd->add_option("--k", s->k, "scalarex exponent");
        cmd->add_flag("--plot-data", s->plot_data, "also write gnuplot scaling.dat");
    }
    {
        auto s = std::make_shared<SubState>();
        st["list-models"] = s;
        auto* cmd = app.add_subcommand("list-models", "model library table");
        add_common(cmd, s->common);
    }
    {
        auto s = std::make_shared<SubState>();
        st["run-paper-suite"] = s;
        auto* cmd = app.add_subcommand("run-paper-suite", "reproduce the example table");
        add_common(cmd, s->common);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        const SubState& s = *st.at(name);

        nlohmann::ordered_json opt = nlohmann::ordered_json::object();
        auto maybe_file_json = [](const std::string& text) -> nlohmann::ordered_json {
            if (!text.empty() && text.front() != '{' && text.front() != '[') {
                std::ifstream f(text);
                if (!f) throw pst::ConfigError("cannot open " + text);
                nlohmann::ordered_json j;
                f >> j;
                return j;
            }
            return nlohmann::ordered_json::parse(text);
        };

        if (!s.symbol.empty()) {
            if (s.symbol.front() == '{') opt["symbol"] = parse_json_arg(s.symbol, "--symbol");
            else opt["symbol"] = s.symbol;
        }
        if (!s.model.empty()) opt["model"] = s.model;
        if (!s.params.empty()) opt["params"] = parse_json_arg(s.params, "--params");
        if (!s.check.empty()) opt["check"] = s.check;
        if (!s.point.empty()) opt["point"] = parse_json_arg(s.point, "--point");
        if (!s.patch.empty()) opt["patch"] = maybe_file_json(s.patch);
        if (!s.curve.empty()) opt["curve"] = maybe_file_json(s.curve);
        if (!s.chart.empty()) opt["chart"] = maybe_file_json(s.chart);
        if (!s.deltas.empty()) opt["deltas"] = s.deltas;
        if (!s.h.empty()) opt["h"] = s.h;
        if (!s.matrix.empty()) opt["matrix"] = parse_json_arg(s.matrix, "--matrix");
        if (!s.symmetrizer.empty()) {
            if (s.symmetrizer == "auto" || s.symmetrizer == "identity")
                opt["symmetrizer"] = s.symmetrizer;
            else opt["symmetrizer"] = maybe_file_json(s.symmetrizer);
        }
        if (s.grid_density > 0) opt["grid_density"] = s.grid_density;
        if (s.epsilon > 0) opt["epsilon"] = s.epsilon;
        if (s.nodes > 0) opt["nodes"] = s.nodes;
        if (s.c_target >= 0) opt["c_target"] = s.c_target;
        if (s.k >= 0) opt["k"] = s.k;
        if (s.plot_data) opt["plot_data"] = true;
        if (s.has_window) {
            opt["window_lo"] = s.window_lo;
            opt["window_hi"] = s.window_hi;
        }
        if (name == "verify-estimate" && s.model == "subex") {
            opt["alpha"] = s.alpha;
            opt["beta"] = s.beta;
        }

        pst::JobConfig job = assemble(name, s.common, opt);
        return pst::run(job);
    } catch (const pst::Error& e) {
        nlohmann::ordered_json err{{"error", {{"code", e.code()}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        nlohmann::ordered_json err{{"error", {{"code", "internal"}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 1;
    }
}
