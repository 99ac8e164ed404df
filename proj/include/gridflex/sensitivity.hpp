#pragma once

#include <string>
#include <vector>

#include "gridflex/power_flow.hpp"
#include "gridflex/sensitivity_types.hpp"

namespace gridflex {

/// 10-minute monitoring series for one LV grid. Rows are dense: every
/// monitored element has a value at every timestamp.
struct MeasurementSeries {
    std::vector<long> timestamps;                 // strictly increasing, equal spacing
    std::vector<std::string> bus_ids;             // monitored buses, slack first
    std::vector<std::string> branch_ids;          // monitored branches
    std::string slack_id;
    // (samples x elements), per-unit.
    Eigen::MatrixXd v;  // per monitored bus
    Eigen::MatrixXd p;  // per monitored bus (slack column = transformer import)
    Eigen::MatrixXd q;
    Eigen::MatrixXd i;  // per monitored branch

    int samples() const { return static_cast<int>(timestamps.size()); }
};

struct PredictedState {
    Eigen::VectorXd v;  // per monitored bus
    Eigen::VectorXd i;  // per monitored branch
    double p_slack = 0.0;
    double q_slack = 0.0;
};

class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

/// Parse the measurement CSV (header: timestamp,element_id,kind,value_pu).
/// slack_id marks which bus column carries the transformer transfer.
MeasurementSeries parse_measurement_csv(const std::string& text, const std::string& slack_id);

/// Ridge-regularized least squares on first-differenced measurements over
/// the trailing `window` samples. Controllable buses are all monitored
/// non-slack buses; their dp/dq series are the regressors.
SensitivityMatrices estimate_from_measurements(const MeasurementSeries& series, int window,
                                               double ridge = 1e-6);

/// Linear state prediction around a base point: v = v0 + K_VP dp + K_VQ dq,
/// same for currents and the slack transfer. dp/dq are indexed like
/// sens.controllable_buses.
PredictedState predict_state(const SensitivityMatrices& sens, const OperatingPoint& base,
                             const Eigen::VectorXd& dp, const Eigen::VectorXd& dq);

/// Same, but with an explicit base state (measured rather than solved).
PredictedState predict_state(const SensitivityMatrices& sens, const Eigen::VectorXd& v0,
                             const Eigen::VectorXd& i0, double p_slack0, double q_slack0,
                             const Eigen::VectorXd& dp, const Eigen::VectorXd& dq);

}  // namespace gridflex
