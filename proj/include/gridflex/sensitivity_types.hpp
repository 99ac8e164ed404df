#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace gridflex {

/// First-order sensitivities of monitored voltages, branch currents and the
/// slack (transformer) transfer with respect to injection changes at the
/// controllable buses. All per-unit per per-unit, around a stated operating
/// point. The slack rows use the import convention: positive transfer flows
/// from the upstream grid into this network.
struct SensitivityMatrices {
    std::vector<std::string> monitored_buses;     // rows of k_vp / k_vq
    std::vector<std::string> monitored_branches;  // rows of k_ip / k_iq
    std::vector<std::string> controllable_buses;  // columns everywhere

    Eigen::MatrixXd k_vp, k_vq;  // (monitored buses x controllable)
    Eigen::MatrixXd k_ip, k_iq;  // (monitored branches x controllable)

    // d p_slack / d(p_j, q_j) and d q_slack / d(p_j, q_j).
    Eigen::VectorXd slack_p_dp, slack_p_dq, slack_q_dp, slack_q_dq;

    // Per-row RMS fit residuals; zero when produced by finite differences.
    Eigen::VectorXd residual_v, residual_i;

    int n_controllable() const { return static_cast<int>(controllable_buses.size()); }
    int column_of(const std::string& bus_id) const {
        for (size_t j = 0; j < controllable_buses.size(); ++j)
            if (controllable_buses[j] == bus_id) return static_cast<int>(j);
        return -1;
    }
    int voltage_row_of(const std::string& bus_id) const {
        for (size_t j = 0; j < monitored_buses.size(); ++j)
            if (monitored_buses[j] == bus_id) return static_cast<int>(j);
        return -1;
    }
};

}  // namespace gridflex
