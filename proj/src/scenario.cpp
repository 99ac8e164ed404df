#include "gridflex/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gridflex/sensitivity.hpp"

namespace gridflex {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string resolve(const std::string& base_dir, const std::string& path) {
    fs::path p(path);
    if (p.is_absolute()) return path;
    return (fs::path(base_dir) / p).string();
}

ordered_json config_to_json(const ScenarioConfig& c) {
    ordered_json j;
    j["mv_network_path"] = c.mv_network_path;
    j["measurement_paths"] = c.measurement_paths;
    j["forecast_path"] = c.forecast_path;
    j["alpha"] = c.alpha;
    j["gamma"] = c.gamma;
    j["directions"] = c.directions;
    j["weights"] = {{"w_l", c.weights.w_l},
                    {"w_v", c.weights.w_v},
                    {"w_lim", c.weights.w_lim},
                    {"w_p", c.weights.w_p},
                    {"w_q", c.weights.w_q}};
    j["violation_rate_chf"] = c.violation_rate_chf;
    j["horizon_hours"] = c.horizon_hours;
    j["label"] = c.label;
    j["future_load_kw"] = c.future_load_kw;
    j["estimation_window"] = c.estimation_window;
    j["ridge"] = c.ridge;
    return j;
}

FlexibilityArea translate_area(FlexibilityArea a, double dp) {
    a.base.x += dp;
    for (auto& v : a.vertices) v.x += dp;
    for (auto& h : a.half_planes) h.c += h.a * dp;
    return a;
}

ordered_json area_to_json(const FlexibilityArea& a) {
    ordered_json j;
    j["base"] = {a.base.x, a.base.y};
    j["vertices"] = ordered_json::array();
    for (const auto& v : a.vertices) j["vertices"].push_back({v.x, v.y});
    j["half_planes"] = ordered_json::array();
    for (const auto& h : a.half_planes) j["half_planes"].push_back({h.a, h.b, h.c});
    if (!a.diagnostic.empty()) j["diagnostic"] = a.diagnostic;
    return j;
}

const char* kRealizationNames[3] = {"lower", "expected", "upper"};

}  // namespace

ScenarioConfig load_config(const std::string& path) {
    json doc;
    try {
        doc = json::parse(slurp(path));
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("config parse failure: ") + e.what());
    }
    const std::string dir = fs::path(path).parent_path().string();
    ScenarioConfig c;
    try {
        c.mv_network_path = resolve(dir, doc.at("mv_network_path").get<std::string>());
        for (auto& [bus, p] : doc.value("measurement_paths", std::map<std::string, std::string>{}))
            c.measurement_paths[bus] = resolve(dir, p);
        c.forecast_path = resolve(dir, doc.at("forecast_path").get<std::string>());
        c.alpha = doc.value("alpha", c.alpha);
        c.gamma = doc.value("gamma", c.gamma);
        c.directions = doc.value("directions", c.directions);
        c.violation_rate_chf = doc.value("violation_rate_chf", c.violation_rate_chf);
        c.horizon_hours = doc.value("horizon_hours", c.horizon_hours);
        c.label = doc.value("label", c.label);
        c.future_load_kw = doc.value("future_load_kw", c.future_load_kw);
        c.estimation_window = doc.value("estimation_window", c.estimation_window);
        c.ridge = doc.value("ridge", c.ridge);
        if (doc.contains("weights")) {
            const auto& w = doc.at("weights");
            c.weights.w_l = w.value("w_l", c.weights.w_l);
            c.weights.w_v = w.value("w_v", c.weights.w_v);
            c.weights.w_lim = w.value("w_lim", c.weights.w_lim);
            c.weights.w_p = w.value("w_p", c.weights.w_p);
            c.weights.w_q = w.value("w_q", c.weights.w_q);
        }
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("config field error: ") + e.what());
    }
    if (c.directions < 4) throw ScenarioError("directions must be >= 4");
    if (c.gamma < 0) throw ScenarioError("gamma must be nonnegative");
    if (c.horizon_hours <= 0) throw ScenarioError("horizon_hours must be positive");
    return c;
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
    const std::string s = config_to_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

ScenarioReport run_scenario(const ScenarioConfig& cfg,
                            const std::vector<LvGridResult>& precomputed) {
    ScenarioReport rep;
    rep.config = cfg;
    rep.hash = config_hash(cfg);

    GridModel mv;
    try {
        mv = load_network(slurp(cfg.mv_network_path));
    } catch (const ModelError& e) {
        throw ScenarioError(std::string("stage load_network (MV): ") + e.what());
    }
    rep.s_base_mva = mv.s_base_mva;
    for (const auto& br : mv.branches) {
        rep.branch_ids.push_back(br.id);
        rep.branch_r.push_back(br.r);
    }
    for (const auto& b : mv.buses) rep.bus_ids.push_back(b.id);

    json fdoc;
    try {
        fdoc = json::parse(slurp(cfg.forecast_path));
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("stage forecasts: parse failure: ") + e.what());
    }
    const double kw_to_pu = 1e-3 / mv.s_base_mva;

    // ---- Part 1: flexibility areas per attached LV grid. ------------------
    const std::string mv_dir = fs::path(cfg.mv_network_path).parent_path().string();
    const double future_pu = cfg.future_load_kw * kw_to_pu;
    std::map<std::string, std::vector<FlexibilityArea>> mv_areas;
    for (const auto& [bus_idx, lv_path] : mv.attached_lv_grids) {
        const std::string bus_id = mv.buses[bus_idx].id;
        if (!precomputed.empty()) {
            auto it = std::find_if(precomputed.begin(), precomputed.end(),
                                   [&](const LvGridResult& g) { return g.bus_id == bus_id; });
            if (it == precomputed.end())
                throw ScenarioError("no precomputed polygons for LV grid at '" + bus_id + "'");
            mv_areas[bus_id] = {it->areas[0], it->areas[1], it->areas[2]};
            rep.lv.push_back(*it);
            continue;
        }
        GridModel lv;
        try {
            lv = load_network(slurp(resolve(mv_dir, lv_path)));
        } catch (const ModelError& e) {
            throw ScenarioError("stage load_network (LV at '" + bus_id + "'): " + e.what());
        }
        if (std::abs(lv.s_base_mva - mv.s_base_mva) > 1e-12)
            throw ScenarioError("LV grid at '" + bus_id + "' uses a different s_base than the MV grid");
        if (!cfg.measurement_paths.count(bus_id))
            throw ScenarioError("no measurement CSV configured for LV grid at '" + bus_id + "'");

        MeasurementSeries series;
        SensitivityMatrices sens;
        try {
            series = parse_measurement_csv(slurp(cfg.measurement_paths.at(bus_id)),
                                           lv.buses[lv.slack].id);
            const int window = cfg.estimation_window > 0 ? cfg.estimation_window : series.samples();
            sens = estimate_from_measurements(series, window, cfg.ridge);
        } catch (const EstimationError& e) {
            throw ScenarioError("stage sensitivity (LV at '" + bus_id + "'): " + e.what());
        }

        // Base operating state = last sample of the series.
        PredictedState base;
        const int last = series.samples() - 1;
        base.v = series.v.row(last).transpose();
        base.i = series.i.row(last).transpose();
        base.p_slack = series.p(last, 0);
        base.q_slack = series.q(last, 0);

        UncertaintyModel lv_unc;
        lv_unc.level = cfg.alpha;
        lv_unc.budget = cfg.gamma;
        if (fdoc.contains("lv") && fdoc.at("lv").contains(bus_id))
            for (auto& [lv_bus, hw] : fdoc.at("lv").at(bus_id).items())
                lv_unc.halfwidths[lv_bus] = {hw.value("p_halfwidth_kw", 0.0) * kw_to_pu,
                                             hw.value("q_halfwidth_kvar", 0.0) * kw_to_pu};

        LvGridResult res;
        res.bus_id = bus_id;
        try {
            for (int s = -1; s <= 1; ++s) {
                const PredictedState shifted =
                    s == 0 ? base : apply_worst_case_shift(base, sens, lv_unc, s);
                FlexibilityArea area = sweep_flexibility_area(lv, sens, shifted, cfg.directions);
                res.areas[s + 1] = translate_area(area, -future_pu);
            }
        } catch (const FlexibilityError& e) {
            throw ScenarioError("stage flexibility sweep (LV at '" + bus_id + "'): " + e.what());
        }
        mv_areas[bus_id] = {res.areas[0], res.areas[1], res.areas[2]};
        rep.lv.push_back(res);
    }

    // ---- Part 2: robust MV OPF at the three realizations. -----------------
    std::map<std::string, NodeForecast> forecasts;
    UncertaintyModel mv_unc;
    mv_unc.level = cfg.alpha;
    mv_unc.budget = cfg.gamma;
    if (fdoc.contains("mv"))
        for (auto& [bus, f] : fdoc.at("mv").items()) {
            NodeForecast nf;
            nf.p_gen_mid = f.value("p_gen_mid_kw", 0.0) * kw_to_pu;
            nf.q_gen_mid = f.value("q_gen_mid_kvar", 0.0) * kw_to_pu;
            nf.p_gen_halfwidth = f.value("p_gen_halfwidth_kw", 0.0) * kw_to_pu;
            nf.q_gen_halfwidth = f.value("q_gen_halfwidth_kvar", 0.0) * kw_to_pu;
            nf.p_load = f.value("p_load_kw", 0.0) * kw_to_pu;
            nf.q_load = f.value("q_load_kvar", 0.0) * kw_to_pu;
            forecasts[bus] = nf;
            if (nf.p_gen_halfwidth > 0 || nf.q_gen_halfwidth > 0)
                mv_unc.halfwidths[bus] = {nf.p_gen_halfwidth, nf.q_gen_halfwidth};
        }

    MvProgram program;
    try {
        program = robustify(build_socp(mv, forecasts, mv_areas, cfg.weights), mv_unc);
    } catch (const OpfError& e) {
        throw ScenarioError(std::string("stage build_socp/robustify: ") + e.what());
    } catch (const ProgramError& e) {
        throw ScenarioError(std::string("stage build_socp/robustify: ") + e.what());
    }

    const int n_unc = static_cast<int>(mv_unc.halfwidths.size());
    const double w_scale = n_unc > 0 ? std::min(1.0, cfg.gamma / n_unc) : 0.0;
    rep.status = SolveStatus::Optimal;
    for (int s = -1; s <= 1; ++s) {
        RealizationResult r;
        r.name = kRealizationNames[s + 1];
        r.w_scale = s * w_scale;
        std::map<std::string, double> w;
        for (const auto& [bus, hw] : mv_unc.halfwidths) w[bus] = s * w_scale;
        r.sol = solve_mv_opf(program, w);
        if (r.sol.status != SolveStatus::Optimal) {
            rep.status = r.sol.status;
            rep.realizations.push_back(r);
            continue;
        }
        r.losses_pu = r.sol.losses_pu(mv);
        r.losses_kwh = losses_kwh(r.losses_pu, mv.s_base_mva, cfg.horizon_hours);
        r.violation_chf = violation_cost(r.sol, cfg.violation_rate_chf);
        rep.realizations.push_back(r);
    }
    return rep;
}

void emit_polygon_csv(const ScenarioReport& report, const std::string& out_dir) {
    fs::create_directories(out_dir);
    for (const auto& lv : report.lv) {
        for (int s = 0; s < 3; ++s) {
            const auto& area = lv.areas[s];
            const std::string stem = "polygon_" + lv.bus_id + "_" + kRealizationNames[s];
            std::ofstream csv(fs::path(out_dir) / (stem + ".csv"), std::ios::binary);
            if (!csv) throw ScenarioError("cannot write polygon CSV in '" + out_dir + "'");
            csv << "direction_deg,p_pu,q_pu\n";
            csv.precision(17);
            const auto& verts = area.vertices.empty() ? std::vector<Point2>{area.base}
                                                      : area.vertices;
            for (const auto& v : verts) {
                const double ang =
                    std::atan2(v.y - area.base.y, v.x - area.base.x) * 180.0 / M_PI;
                csv << (std::hypot(v.x - area.base.x, v.y - area.base.y) < 1e-15 ? 0.0 : ang)
                    << "," << v.x << "," << v.y << "\n";
            }
            std::ofstream js(fs::path(out_dir) / (stem + ".json"), std::ios::binary);
            js << area_to_json(area).dump(2) << "\n";
        }
    }
}

std::string report_json(const ScenarioReport& report) {
    ordered_json j;
    j["schema_version"] = 1;
    j["label"] = report.config.label;
    std::ostringstream hx;
    hx << std::hex << report.hash;
    j["config_hash"] = hx.str();
    j["config"] = config_to_json(report.config);
    j["s_base_mva"] = report.s_base_mva;
    j["status"] = to_string(report.status);
    j["lv_grids"] = ordered_json::array();
    for (const auto& lv : report.lv) {
        ordered_json g;
        g["bus"] = lv.bus_id;
        for (int s = 0; s < 3; ++s) g["areas"][kRealizationNames[s]] = area_to_json(lv.areas[s]);
        j["lv_grids"].push_back(g);
    }
    j["branches"] = ordered_json::array();
    for (size_t k = 0; k < report.branch_ids.size(); ++k)
        j["branches"].push_back({{"id", report.branch_ids[k]}, {"r_pu", report.branch_r[k]}});
    j["realizations"] = ordered_json::array();
    for (const auto& r : report.realizations) {
        ordered_json e;
        e["name"] = r.name;
        e["w_scale"] = r.w_scale;
        e["status"] = to_string(r.sol.status);
        if (r.sol.status == SolveStatus::Optimal) {
            e["objective"] = r.sol.objective;
            e["decomposition"] = {{"losses", r.sol.cost_losses},
                                  {"voltage", r.sol.cost_voltage},
                                  {"current", r.sol.cost_current},
                                  {"p_transfer", r.sol.cost_p},
                                  {"q_transfer", r.sol.cost_q}};
            e["losses_pu"] = r.losses_pu;
            e["losses_kwh"] = r.losses_kwh;
            e["violation_chf"] = r.violation_chf;
            e["p_sl_pu"] = r.sol.p_sl;
            e["q_sl_pu"] = r.sol.q_sl;
            e["branch_p_pu"] = r.sol.p_branch;
            e["branch_q_pu"] = r.sol.q_branch;
            e["branch_l_pu2"] = r.sol.l_branch;
            e["bus_v_pu2"] = r.sol.v_sq;
            e["v_dev_pu2"] = r.sol.v_dev;
            e["i_dev_pu2"] = r.sol.i_dev;
            ordered_json ders = ordered_json::object();
            for (const auto& [id, pq] : r.sol.der_setpoints) ders[id] = {pq.first, pq.second};
            e["der_setpoints_pu"] = ders;
            ordered_json flex = ordered_json::object();
            for (const auto& [id, pq] : r.sol.flex_transfers) flex[id] = {pq.first, pq.second};
            e["flex_transfers_pu"] = flex;
        }
        j["realizations"].push_back(e);
    }
    return j.dump(2) + "\n";
}

void emit_report_json(const ScenarioReport& report, const std::string& path) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ScenarioError("cannot write report '" + path + "'");
    out << report_json(report);
}

FlexibilityArea read_polygon_json(const std::string& path) {
    json doc;
    try {
        doc = json::parse(slurp(path));
    } catch (const json::exception& e) {
        throw ScenarioError("polygon JSON parse failure at '" + path + "': " + e.what());
    }
    FlexibilityArea a;
    a.base = {doc.at("base")[0].get<double>(), doc.at("base")[1].get<double>()};
    for (const auto& v : doc.value("vertices", json::array()))
        a.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    for (const auto& h : doc.value("half_planes", json::array()))
        a.half_planes.push_back({h[0].get<double>(), h[1].get<double>(), h[2].get<double>()});
    a.diagnostic = doc.value("diagnostic", "");
    return a;
}

}  // namespace gridflex
