#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridflex/scenario.hpp"

namespace {

constexpr int kExitOptimal = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInputError = 3;
constexpr int kExitSolverFailure = 4;

struct CommonOpts {
    std::string config_path;
    std::optional<double> alpha, gamma, future_load_kw;
    std::optional<int> directions;
    std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "scenario config JSON")->required();
    cmd->add_option("--alpha", o.alpha, "uncertainty level override");
    cmd->add_option("--gamma", o.gamma, "uncertainty budget override");
    cmd->add_option("--directions", o.directions, "sweep direction count override");
    cmd->add_option("--future-load-kw", o.future_load_kw,
                    "uncontrolled load increment per LV grid, kW");
    cmd->add_option("--out", o.out_dir, "output directory");
}

gridflex::ScenarioConfig make_config(const CommonOpts& o) {
    gridflex::ScenarioConfig cfg = gridflex::load_config(o.config_path);
    if (o.alpha) cfg.alpha = *o.alpha;
    if (o.gamma) cfg.gamma = *o.gamma;
    if (o.directions) cfg.directions = *o.directions;
    if (o.future_load_kw) cfg.future_load_kw = *o.future_load_kw;
    return cfg;
}

int status_to_exit(gridflex::SolveStatus s) {
    switch (s) {
        case gridflex::SolveStatus::Optimal: return kExitOptimal;
        case gridflex::SolveStatus::Infeasible: return kExitInfeasible;
        default: return kExitSolverFailure;
    }
}

std::vector<gridflex::LvGridResult> load_precomputed(const gridflex::ScenarioConfig& cfg,
                                                     const std::string& dir) {
    std::ifstream in(cfg.mv_network_path, std::ios::binary);
    if (!in) throw gridflex::ScenarioError("cannot open '" + cfg.mv_network_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const gridflex::GridModel mv = gridflex::load_network(ss.str());
    static const char* names[3] = {"lower", "expected", "upper"};
    std::vector<gridflex::LvGridResult> out;
    for (const auto& [bus_idx, lv_path] : mv.attached_lv_grids) {
        gridflex::LvGridResult g;
        g.bus_id = mv.buses[bus_idx].id;
        for (int s = 0; s < 3; ++s) {
            const auto p = std::filesystem::path(dir) /
                           ("polygon_" + g.bus_id + "_" + names[s] + ".json");
            g.areas[s] = gridflex::read_polygon_json(p.string());
        }
        out.push_back(g);
    }
    return out;
}

int run_full(const CommonOpts& o, bool sweep_only, const std::string& polygons_dir) {
    const bool opf_only = !polygons_dir.empty();
    const gridflex::ScenarioConfig cfg = make_config(o);
    const gridflex::ScenarioReport rep = gridflex::run_scenario(
        cfg, opf_only ? load_precomputed(cfg, polygons_dir)
                      : std::vector<gridflex::LvGridResult>{});
    std::filesystem::create_directories(o.out_dir);
    if (!opf_only) gridflex::emit_polygon_csv(rep, o.out_dir);
    if (!sweep_only)
        gridflex::emit_report_json(rep, (std::filesystem::path(o.out_dir) / "report.json").string());
    if (sweep_only) {
        std::cout << "wrote " << rep.lv.size() * 3 << " polygons to " << o.out_dir << "\n";
        return kExitOptimal;
    }
    for (const auto& r : rep.realizations)
        std::cout << r.name << ": status=" << gridflex::to_string(r.sol.status)
                  << " losses_kwh=" << r.losses_kwh << " violation_chf=" << r.violation_chf
                  << "\n";
    return status_to_exit(rep.status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aggregate LV flexibility estimation and robust MV dispatch"};
    app.require_subcommand(1);

    CommonOpts run_o, sweep_o, opf_o;
    std::string polygons_dir;
    add_common(app.add_subcommand("run", "full pipeline: sweep + robust OPF + report"), run_o);
    add_common(app.add_subcommand("sweep", "flexibility polygons only"), sweep_o);
    CLI::App* opf = app.add_subcommand("opf", "robust OPF from precomputed polygons");
    add_common(opf, opf_o);
    opf->add_option("--polygons", polygons_dir, "directory with polygon_<bus>_<realization>.json")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInputError;
    }

    try {
        if (app.got_subcommand("run")) return run_full(run_o, false, "");
        if (app.got_subcommand("sweep")) return run_full(sweep_o, true, "");
        return run_full(opf_o, false, polygons_dir);
    } catch (const gridflex::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const gridflex::ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolverFailure;
    }
}
