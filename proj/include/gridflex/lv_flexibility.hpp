#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridflex/conic_solver.hpp"
#include "gridflex/geometry.hpp"
#include "gridflex/grid_model.hpp"
#include "gridflex/power_flow.hpp"
#include "gridflex/sensitivity.hpp"
#include "gridflex/uncertainty.hpp"

namespace gridflex {

/// Objective weights of one search direction: maximize
/// alpha_dir * dP + beta_dir * dQ of the transformer transfer.
struct DirectionWeights {
    double alpha_dir = 0.0;
    double beta_dir = 0.0;
};

/// Direction LP over per-DER curtailment and reactive deltas. Transfer
/// coordinates are exports toward the MV bus (generation-positive at the
/// coupling point), so curtailing PV moves the transfer in -P.
struct LvOpfProblem {
    ConicProgram prog;
    std::vector<int> dp_var, dq_var;     // per model.ders index
    Eigen::VectorXd export_p_coef;       // d(P transfer)/dx
    Eigen::VectorXd export_q_coef;
    bool base_feasible = true;           // base point inside grid limits
};

/// Convex (P,Q) transfer capability at the MV/LV transformer.
struct FlexibilityArea {
    std::vector<Point2> vertices;  // CCW hull, MV-injection convention
    Point2 base;
    std::vector<HalfPlane> half_planes;
    std::string diagnostic;  // non-empty when collapsed to the base point
};

class FlexibilityError : public std::runtime_error {
public:
    explicit FlexibilityError(const std::string& what) : std::runtime_error(what) {}
};

PredictedState to_state(const OperatingPoint& op);

/// Build the direction LP: box bounds per DER (curtailment up to
/// curtailable_fraction * p_max, q within capability), voltage and ampacity
/// rows for every monitored element via the sensitivity coefficients.
/// der_q0, when given, holds each DER's base reactive setpoint.
LvOpfProblem build_direction_lp(const GridModel& model, const SensitivityMatrices& sens,
                                const PredictedState& base, const DirectionWeights& dir,
                                const std::vector<double>& der_q0 = {});

/// One LP per direction theta_k = 2*pi*k/n; returns the hull of the optimal
/// transfer points. n = 8 reproduces the {0,+-1} weight pairs. Any
/// infeasible direction collapses the area to the base point.
FlexibilityArea sweep_flexibility_area(const GridModel& model, const SensitivityMatrices& sens,
                                       const PredictedState& base, int n_directions = 8,
                                       const std::vector<double>& der_q0 = {});

/// Shift the operating point by the sensitivity-predicted effect of every
/// uncertain injection moved to sign * level * min(1, budget) * half-width.
PredictedState apply_worst_case_shift(const PredictedState& base, const SensitivityMatrices& sens,
                                      const UncertaintyModel& unc, int sign);

std::vector<HalfPlane> polygon_to_halfplanes(const FlexibilityArea& area);

}  // namespace gridflex
