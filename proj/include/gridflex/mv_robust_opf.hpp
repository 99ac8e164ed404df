#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridflex/conic_solver.hpp"
#include "gridflex/grid_model.hpp"
#include "gridflex/lv_flexibility.hpp"
#include "gridflex/uncertainty.hpp"

namespace gridflex {

/// CHF-per-unit cost weights of the five objective terms.
struct ObjectiveWeights {
    double w_l = 1.0;
    double w_v = 100.0;
    double w_lim = 100.0;
    double w_p = 0.01;
    double w_q = 0.01;
};

/// Interval forecast and load at one MV bus. Generation is positive,
/// p_load/q_load are consumption magnitudes.
struct NodeForecast {
    double p_gen_mid = 0.0;
    double q_gen_mid = 0.0;
    double p_gen_halfwidth = 0.0;
    double q_gen_halfwidth = 0.0;
    double p_load = 0.0;
    double q_load = 0.0;
};

/// Conic program plus the bookkeeping needed for robustification and
/// scenario evaluation.
struct MvProgram {
    ConicProgram prog;
    GridModel model;
    TopologyReport topology;
    ObjectiveWeights weights;
    std::vector<NodeForecast> forecasts;  // per bus index

    std::vector<int> var_p, var_q, var_l;  // per branch
    std::vector<int> var_v;                // per bus, squared voltage
    std::vector<int> var_vdev;             // per bus
    std::vector<int> var_idev;             // per branch
    std::vector<std::pair<int, int>> der_vars;     // per model.ders index: (p, q)
    std::map<int, std::pair<int, int>> flex_vars;  // bus index -> (p, q)
    int var_psl = -1, var_qsl = -1;
    std::vector<int> p_row, q_row;  // balance equality rows per bus

    UncertaintyModel unc;  // attached by robustify (identity when level/budget 0)
    bool robustified = false;
};

struct MvOpfSolution {
    SolveStatus status = SolveStatus::NumericFailure;
    std::vector<double> p_branch, q_branch, l_branch;  // pu, pu, pu^2
    std::vector<double> v_sq;                          // per bus, pu^2
    std::vector<double> v_dev, i_dev;                  // slacks, pu^2
    std::map<std::string, std::pair<double, double>> der_setpoints;   // der id -> (p, q)
    std::map<std::string, std::pair<double, double>> flex_transfers;  // bus id -> (p, q)
    double p_sl = 0.0, q_sl = 0.0;
    double objective = 0.0;
    double cost_losses = 0.0, cost_voltage = 0.0, cost_current = 0.0, cost_p = 0.0, cost_q = 0.0;
    double solver_gap = 0.0;
    std::string message;

    double losses_pu(const GridModel& model) const;
    double slack_sum() const;
};

struct SocGapReport {
    std::vector<double> gap;      // per branch: v_i * l - P^2 - Q^2
    std::vector<int> flagged;     // branches with gap > tol
    double max_gap = 0.0;
};

class OpfError : public std::runtime_error {
public:
    explicit OpfError(const std::string& what) : std::runtime_error(what) {}
};

/// Deterministic SOC branch-flow OPF. `areas[bus]` may stack several
/// polygons; the transfer is constrained to their intersection. Every bus
/// with an attached LV grid must have at least one area.
MvProgram build_socp(const GridModel& model,
                     const std::map<std::string, NodeForecast>& forecasts,
                     const std::map<std::string, std::vector<FlexibilityArea>>& areas,
                     const ObjectiveWeights& weights = {});

/// Budget-robust counterpart: DER capability boxes shrink by
/// level * min(1, budget) * half-width (the dual norm of the box/l1 set
/// for per-node terms). level == 0 or budget == 0 returns the program
/// unchanged apart from recording the uncertainty model.
MvProgram robustify(const MvProgram& prog, const UncertaintyModel& unc);

/// Solve; scenario_w, when given, fixes each uncertain injection at
/// mid + level * w * half-width (per-node w in [-1,1], sum |w| <= budget).
MvOpfSolution solve_mv_opf(const MvProgram& prog,
                           const std::optional<std::map<std::string, double>>& scenario_w = {});

double violation_cost(const MvOpfSolution& sol, double rate = 100.0);

SocGapReport check_soc_tightness(const MvProgram& prog, const MvOpfSolution& sol,
                                 double tol = 1e-6);

}  // namespace gridflex
