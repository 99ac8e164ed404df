#pragma once

#include <complex>
#include <vector>

#include "gridflex/grid_model.hpp"
#include "gridflex/sensitivity_types.hpp"

namespace gridflex {

/// Per-bus complex injections, generation-positive. The slack entry is
/// ignored as input; its transfer comes out of the solve.
struct InjectionSet {
    std::vector<double> p;  // pu, size = num_buses
    std::vector<double> q;
};

struct OperatingPoint {
    std::vector<double> v;       // per-bus |V|, pu
    std::vector<double> i;       // per-branch |I| (sending end), pu
    double p_slack = 0.0;        // injection at the slack bus, pu
    double q_slack = 0.0;
    bool converged = false;
    int iterations = 0;
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Backward/forward sweep power flow. Non-convergence is reported through
/// the flag, NaN blowup through NumericError.
OperatingPoint solve_bfs(const GridModel& model, const InjectionSet& inj, double tol = 1e-8,
                         int max_iter = 100);

/// Total series losses sum(r_k * i_k^2), pu.
double losses(const GridModel& model, const OperatingPoint& op);

/// pu -> kWh over a horizon.
inline double losses_kwh(double loss_pu, double s_base_mva, double hours) {
    return loss_pu * s_base_mva * 1000.0 * hours;
}

/// Central-difference sensitivities of |V|, |I| and the slack transfer with
/// respect to every non-slack bus injection. Serves as the oracle for the
/// measurement-based estimator.
SensitivityMatrices finite_diff_sensitivities(const GridModel& model, const InjectionSet& inj,
                                              double h = 1e-5);

}  // namespace gridflex
