#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gridflex/grid_model.hpp"
#include "gridflex/lv_flexibility.hpp"
#include "gridflex/mv_robust_opf.hpp"

namespace gridflex {

class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

struct ScenarioConfig {
    std::string mv_network_path;
    std::map<std::string, std::string> measurement_paths;  // MV bus id -> CSV path
    std::string forecast_path;
    double alpha = 0.5;       // uncertainty level
    double gamma = 1.0;       // uncertainty budget
    int directions = 8;
    ObjectiveWeights weights;
    double violation_rate_chf = 100.0;
    double horizon_hours = 24.0;
    std::string label = "today";
    double future_load_kw = 0.0;  // uncontrolled increment per LV grid
    int estimation_window = 0;    // 0 = whole series
    double ridge = 1e-6;
};

/// Read a JSON config; relative paths resolve against the config directory.
ScenarioConfig load_config(const std::string& path);

/// FNV-1a over the canonical serialized config.
std::uint64_t config_hash(const ScenarioConfig& cfg);

struct LvGridResult {
    std::string bus_id;
    // sign -1 / 0 / +1 worst-case shift, indexed 0..2.
    FlexibilityArea areas[3];
};

struct RealizationResult {
    std::string name;  // lower | expected | upper
    double w_scale = 0.0;
    double losses_pu = 0.0;
    double losses_kwh = 0.0;
    double violation_chf = 0.0;
    MvOpfSolution sol;
};

struct ScenarioReport {
    ScenarioConfig config;
    std::uint64_t hash = 0;
    double s_base_mva = 1.0;
    std::vector<LvGridResult> lv;
    std::vector<RealizationResult> realizations;
    SolveStatus status = SolveStatus::NumericFailure;
    std::vector<std::string> branch_ids, bus_ids;
    std::vector<double> branch_r;
};

/// Part 1 (per-LV-grid flexibility sweep at signs -1/0/+1), then part 2
/// (robust MV OPF solved at the lower/expected/upper realizations).
/// When `precomputed` is nonempty, part 1 is skipped and those areas are
/// used as-is (no future-load translation is reapplied).
ScenarioReport run_scenario(const ScenarioConfig& cfg,
                            const std::vector<LvGridResult>& precomputed = {});

/// One CSV (direction_deg,p_pu,q_pu) and one JSON polygon file per LV grid
/// per realization, under out_dir.
void emit_polygon_csv(const ScenarioReport& report, const std::string& out_dir);

std::string report_json(const ScenarioReport& report);
void emit_report_json(const ScenarioReport& report, const std::string& path);

/// Re-read helper used by tests and the `opf` subcommand.
FlexibilityArea read_polygon_json(const std::string& path);

}  // namespace gridflex
