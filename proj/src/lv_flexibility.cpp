#include "gridflex/lv_flexibility.hpp"

#include <cmath>

namespace gridflex {

PredictedState to_state(const OperatingPoint& op) {
    PredictedState ps;
    ps.v = Eigen::Map<const Eigen::VectorXd>(op.v.data(), op.v.size());
    ps.i = Eigen::Map<const Eigen::VectorXd>(op.i.data(), op.i.size());
    ps.p_slack = op.p_slack;
    ps.q_slack = op.q_slack;
    return ps;
}

LvOpfProblem build_direction_lp(const GridModel& model, const SensitivityMatrices& sens,
                                const PredictedState& base, const DirectionWeights& dir,
                                const std::vector<double>& der_q0) {
    if (dir.alpha_dir == 0.0 && dir.beta_dir == 0.0)
        throw FlexibilityError("direction weights must not both be zero");
    if (base.v.size() != sens.k_vp.rows() || base.i.size() != sens.k_ip.rows())
        throw FlexibilityError("base state shape does not match sensitivity rows");
    if (!der_q0.empty() && der_q0.size() != model.ders.size())
        throw FlexibilityError("der_q0 size does not match ders");

    LvOpfProblem out;
    ProgramBuilder b;
    const int nd = static_cast<int>(model.ders.size());
    std::vector<int> der_col(nd);
    for (int d = 0; d < nd; ++d) {
        const auto& der = model.ders[d];
        const std::string& bus_id = model.buses[der.bus].id;
        der_col[d] = sens.column_of(bus_id);
        if (der_col[d] < 0)
            throw FlexibilityError("DER '" + der.id + "' sits on unmonitored bus '" + bus_id +
                                   "'");
        const double curt = der.curtailable_fraction * der.p_max;
        const double q0 = der_q0.empty() ? 0.0 : der_q0[d];
        out.dp_var.push_back(b.add_var("dp_" + der.id, -curt, 0.0));
        out.dq_var.push_back(b.add_var("dq_" + der.id, der.q_min - q0, der.q_max - q0));
    }

    // Voltage rows per monitored bus with known limits; ampacity rows per
    // monitored branch. Unmonitored elements are deliberately not enforced.
    out.base_feasible = true;
    for (size_t r = 0; r < sens.monitored_buses.size(); ++r) {
        int bi;
        try {
            bi = model.bus_index(sens.monitored_buses[r]);
        } catch (const ModelError&) {
            continue;
        }
        if (bi == model.slack) continue;  // slack voltage held by the MV side
        const Bus& bus = model.buses[bi];
        if (base.v(r) < bus.v_min - 1e-12 || base.v(r) > bus.v_max + 1e-12)
            out.base_feasible = false;
        std::vector<std::pair<int, double>> row_up, row_dn;
        for (int d = 0; d < nd; ++d) {
            const int col = der_col[d];
            if (sens.k_vp(r, col) != 0) row_up.push_back({out.dp_var[d], sens.k_vp(r, col)});
            if (sens.k_vq(r, col) != 0) row_up.push_back({out.dq_var[d], sens.k_vq(r, col)});
        }
        for (auto [j, a] : row_up) row_dn.push_back({j, -a});
        b.add_ineq(row_up, bus.v_max - base.v(r));
        b.add_ineq(row_dn, base.v(r) - bus.v_min);
    }
    for (size_t r = 0; r < sens.monitored_branches.size(); ++r) {
        int bk = -1;
        for (int k = 0; k < model.num_branches(); ++k)
            if (model.branches[k].id == sens.monitored_branches[r]) bk = k;
        if (bk < 0) continue;
        const double imax = model.branches[bk].i_max;
        if (std::abs(base.i(r)) > imax + 1e-12) out.base_feasible = false;
        std::vector<std::pair<int, double>> row_up, row_dn;
        for (int d = 0; d < nd; ++d) {
            const int col = der_col[d];
            if (sens.k_ip(r, col) != 0) row_up.push_back({out.dp_var[d], sens.k_ip(r, col)});
            if (sens.k_iq(r, col) != 0) row_up.push_back({out.dq_var[d], sens.k_iq(r, col)});
        }
        for (auto [j, a] : row_up) row_dn.push_back({j, -a});
        b.add_ineq(row_up, imax - base.i(r));
        b.add_ineq(row_dn, imax + base.i(r));
    }

    // Transfer deltas in export convention: dP_export = -dP_slack_import.
    const int nvars = b.num_vars();
    out.export_p_coef.setZero(nvars);
    out.export_q_coef.setZero(nvars);
    for (int d = 0; d < nd; ++d) {
        const int col = der_col[d];
        out.export_p_coef(out.dp_var[d]) -= sens.slack_p_dp(col);
        out.export_p_coef(out.dq_var[d]) -= sens.slack_p_dq(col);
        out.export_q_coef(out.dp_var[d]) -= sens.slack_q_dp(col);
        out.export_q_coef(out.dq_var[d]) -= sens.slack_q_dq(col);
    }
    for (int j = 0; j < nvars; ++j)
        b.add_cost(j, -(dir.alpha_dir * out.export_p_coef(j) + dir.beta_dir * out.export_q_coef(j)));

    out.prog = b.build();
    return out;
}

FlexibilityArea sweep_flexibility_area(const GridModel& model, const SensitivityMatrices& sens,
                                       const PredictedState& base, int n_directions,
                                       const std::vector<double>& der_q0) {
    if (n_directions < 4) throw FlexibilityError("need at least 4 sweep directions");
    FlexibilityArea area;
    area.base = {-base.p_slack, -base.q_slack};  // export convention

    std::vector<Point2> pts{area.base};
    for (int k = 0; k < n_directions; ++k) {
        const double theta = 2.0 * M_PI * k / n_directions;
        DirectionWeights dir{std::cos(theta), std::sin(theta)};
        if (std::abs(dir.alpha_dir) < 1e-12) dir.alpha_dir = 0.0;
        if (std::abs(dir.beta_dir) < 1e-12) dir.beta_dir = 0.0;
        LvOpfProblem lp = build_direction_lp(model, sens, base, dir, der_q0);
        if (lp.prog.n == 0) continue;  // no DERs: base point only
        SolveResult res = solve(lp.prog);
        if (res.status != SolveStatus::Optimal) {
            area.vertices = {area.base};
            area.half_planes = polygon_halfplanes(area.vertices);
            area.diagnostic = "direction " + std::to_string(k) + "/" +
                              std::to_string(n_directions) + " " + to_string(res.status) +
                              "; area collapsed to the base point";
            return area;
        }
        pts.push_back({area.base.x + lp.export_p_coef.dot(res.x),
                       area.base.y + lp.export_q_coef.dot(res.x)});
    }
    area.vertices = convex_hull(pts);
    area.half_planes = polygon_halfplanes(area.vertices);
    return area;
}

PredictedState apply_worst_case_shift(const PredictedState& base, const SensitivityMatrices& sens,
                                      const UncertaintyModel& unc, int sign) {
    if (sign != 1 && sign != -1) throw FlexibilityError("shift sign must be +1 or -1");
    const int nc = sens.n_controllable();
    Eigen::VectorXd dp = Eigen::VectorXd::Zero(nc), dq = Eigen::VectorXd::Zero(nc);
    const double scale = unc.level * unc.node_scale() * sign;
    for (const auto& [bus, hw] : unc.halfwidths) {
        const int col = sens.column_of(bus);
        if (col < 0)
            throw FlexibilityError("uncertain bus '" + bus + "' is not a controllable column");
        dp(col) = scale * hw.first;
        dq(col) = scale * hw.second;
    }
    return predict_state(sens, base.v, base.i, base.p_slack, base.q_slack, dp, dq);
}

std::vector<HalfPlane> polygon_to_halfplanes(const FlexibilityArea& area) {
    if (area.vertices.empty()) {
        if (area.base.x == 0 && area.base.y == 0 && area.half_planes.empty())
            throw FlexibilityError("area has no vertices");
        return polygon_halfplanes({area.base});
    }
    return polygon_halfplanes(area.vertices);
}

}  // namespace gridflex
