#pragma once

#include <map>
#include <string>

namespace gridflex {

/// Box/budget uncertainty on DER forecasts: each uncertain node deviates by
/// level * w_i * half-width with |w_i| <= 1 and sum|w_i| <= budget.
struct UncertaintyModel {
    double level = 0.0;   // alpha
    double budget = 0.0;  // Gamma
    // bus id -> (p half-width, q half-width), pu.
    std::map<std::string, std::pair<double, double>> halfwidths;

    /// Per-node worst-case deflection multiplier implied by the dual of the
    /// box/l1 set for a single-node term: min(1, Gamma).
    double node_scale() const { return budget < 1.0 ? budget : 1.0; }
};

}  // namespace gridflex
