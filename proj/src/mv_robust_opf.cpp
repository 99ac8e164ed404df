#include "gridflex/mv_robust_opf.hpp"

#include <cmath>

namespace gridflex {

double MvOpfSolution::losses_pu(const GridModel& model) const {
    double total = 0.0;
    for (int k = 0; k < model.num_branches(); ++k) total += model.branches[k].r * l_branch[k];
    return total;
}

double MvOpfSolution::slack_sum() const {
    double s = 0.0;
    for (double v : v_dev) s += v;
    for (double v : i_dev) s += v;
    return s;
}

MvProgram build_socp(const GridModel& model,
                     const std::map<std::string, NodeForecast>& forecasts,
                     const std::map<std::string, std::vector<FlexibilityArea>>& areas,
                     const ObjectiveWeights& weights) {
    for (double w : {weights.w_l, weights.w_v, weights.w_lim, weights.w_p, weights.w_q})
        if (w < 0) throw OpfError("objective weights must be nonnegative");
    for (const auto& [bus, path] : model.attached_lv_grids)
        if (!areas.count(model.buses[bus].id))
            throw OpfError("bus '" + model.buses[bus].id +
                           "' has an attached LV grid but no flexibility area");

    MvProgram mp;
    mp.model = model;
    mp.topology = validate_radial(model);
    mp.weights = weights;
    mp.forecasts.assign(model.num_buses(), NodeForecast{});
    for (const auto& [id, fc] : forecasts) mp.forecasts[model.bus_index(id)] = fc;

    const int n = model.num_buses();
    const int nb = model.num_branches();
    constexpr double inf = std::numeric_limits<double>::infinity();
    ProgramBuilder b;

    for (int k = 0; k < nb; ++k) {
        const auto& br = model.branches[k];
        mp.var_p.push_back(b.add_var("P_" + br.id));
        mp.var_q.push_back(b.add_var("Q_" + br.id));
        mp.var_l.push_back(b.add_var("l_" + br.id, 0.0, inf, weights.w_l * br.r));
    }
    for (int i = 0; i < n; ++i) {
        const bool is_slack = i == model.slack;
        mp.var_v.push_back(b.add_var("v_" + model.buses[i].id, is_slack ? 1.0 : -inf,
                                     is_slack ? 1.0 : inf));
        mp.var_vdev.push_back(b.add_var("Vdev_" + model.buses[i].id, 0.0, inf, weights.w_v));
    }
    for (int k = 0; k < nb; ++k)
        mp.var_idev.push_back(b.add_var("Idev_" + model.branches[k].id, 0.0, inf, weights.w_lim));
    mp.var_psl = b.add_var("p_sl", -inf, inf, weights.w_p);
    mp.var_qsl = b.add_var("q_sl", -inf, inf, weights.w_q);
    for (const auto& der : model.ders)
        mp.der_vars.push_back({b.add_var("pder_" + der.id, 0.0, der.p_max),
                               b.add_var("qder_" + der.id, der.q_min, der.q_max)});
    for (const auto& [id, polys] : areas) {
        const int bus = model.bus_index(id);
        const int pv = b.add_var("pflex_" + id);
        const int qv = b.add_var("qflex_" + id);
        mp.flex_vars[bus] = {pv, qv};
        for (const auto& area : polys) {
            const auto hps = polygon_to_halfplanes(area);
            if (area.vertices.size() <= 2 && !area.vertices.empty()) {
                // Degenerate area: pin with equalities so the feasible set
                // keeps a strict interior elsewhere.
                if (area.vertices.size() == 1) {
                    b.add_eq({{pv, 1.0}}, area.vertices[0].x);
                    b.add_eq({{qv, 1.0}}, area.vertices[0].y);
                } else {
                    b.add_eq({{pv, hps[0].a}, {qv, hps[0].b}}, hps[0].c);  // segment line
                    b.add_ineq({{pv, hps[2].a}, {qv, hps[2].b}}, hps[2].c);
                    b.add_ineq({{pv, hps[3].a}, {qv, hps[3].b}}, hps[3].c);
                }
            } else {
                for (const auto& h : hps) b.add_ineq({{pv, h.a}, {qv, h.b}}, h.c);
            }
        }
    }

    // Balance rows. Arriving power at bus j through its parent branch is
    // P - r*l; injections are generation-positive.
    mp.p_row.assign(n, -1);
    mp.q_row.assign(n, -1);
    int eq_count = b.num_eqs();
    auto balance_rows = [&](int bus) {
        std::vector<std::pair<int, double>> prow, qrow;
        for (int c = 0; c < n; ++c)
            if (mp.topology.parent_bus[c] == bus) {
                const int k = mp.topology.parent_branch[c];
                prow.push_back({mp.var_p[k], 1.0});
                qrow.push_back({mp.var_q[k], 1.0});
            }
        if (bus == model.slack) {
            prow.push_back({mp.var_psl, -1.0});
            qrow.push_back({mp.var_qsl, -1.0});
        } else {
            const int k = mp.topology.parent_branch[bus];
            prow.push_back({mp.var_p[k], -1.0});
            prow.push_back({mp.var_l[k], model.branches[k].r});
            qrow.push_back({mp.var_q[k], -1.0});
            qrow.push_back({mp.var_l[k], model.branches[k].x});
        }
        for (size_t d = 0; d < model.ders.size(); ++d)
            if (model.ders[d].bus == bus) {
                prow.push_back({mp.der_vars[d].first, -1.0});
                qrow.push_back({mp.der_vars[d].second, -1.0});
            }
        if (mp.flex_vars.count(bus)) {
            prow.push_back({mp.flex_vars[bus].first, -1.0});
            qrow.push_back({mp.flex_vars[bus].second, -1.0});
        }
        const NodeForecast& fc = mp.forecasts[bus];
        b.add_eq(prow, fc.p_gen_mid - fc.p_load);
        mp.p_row[bus] = eq_count++;
        b.add_eq(qrow, fc.q_gen_mid - fc.q_load);
        mp.q_row[bus] = eq_count++;
    };
    for (int i = 0; i < n; ++i) balance_rows(i);

    // Voltage recursion and cone per branch; soft limit epigraphs.
    for (int k = 0; k < nb; ++k) {
        const auto& br = model.branches[k];
        int from = br.from, to = br.to;
        if (mp.topology.parent_bus[from] == to) std::swap(from, to);  // orient root-ward
        const double z2 = br.r * br.r + br.x * br.x;
        b.add_eq({{mp.var_v[to], 1.0},
                  {mp.var_v[from], -1.0},
                  {mp.var_p[k], 2.0 * br.r},
                  {mp.var_q[k], 2.0 * br.x},
                  {mp.var_l[k], -z2}},
                 0.0);
        ++eq_count;
        b.add_cone(mp.var_v[from], mp.var_l[k], mp.var_p[k], mp.var_q[k]);
        b.add_ineq({{mp.var_l[k], 1.0}, {mp.var_idev[k], -1.0}}, br.i_max * br.i_max);
    }
    for (int i = 0; i < n; ++i) {
        const auto& bus = model.buses[i];
        b.add_ineq({{mp.var_v[i], 1.0}, {mp.var_vdev[i], -1.0}}, bus.v_max * bus.v_max);
        b.add_ineq({{mp.var_v[i], -1.0}, {mp.var_vdev[i], -1.0}}, -bus.v_min * bus.v_min);
    }

    mp.prog = b.build();
    return mp;
}

MvProgram robustify(const MvProgram& prog, const UncertaintyModel& unc) {
    if (unc.budget < 0) throw OpfError("uncertainty budget must be nonnegative");
    MvProgram out = prog;
    out.unc = unc;
    out.robustified = true;
    if (unc.level == 0.0 || unc.budget == 0.0) return out;

    const double s = std::abs(unc.level) * unc.node_scale();
    for (size_t d = 0; d < out.model.ders.size(); ++d) {
        const auto& der = out.model.ders[d];
        const auto it = unc.halfwidths.find(out.model.buses[der.bus].id);
        if (it == unc.halfwidths.end()) continue;
        const auto [hp, hq] = it->second;
        const auto [pv, qv] = out.der_vars[d];
        if (s * hp * 2 > der.p_max || s * hq * 2 > der.q_max - der.q_min)
            throw OpfError("DER '" + der.id + "': uncertainty exceeds its capability box");
        out.prog.lb(pv) += s * hp;
        out.prog.ub(pv) -= s * hp;
        out.prog.lb(qv) += s * hq;
        out.prog.ub(qv) -= s * hq;
    }
    return out;
}

MvOpfSolution solve_mv_opf(const MvProgram& prog,
                           const std::optional<std::map<std::string, double>>& scenario_w) {
    ConicProgram cp = prog.prog;
    if (scenario_w) {
        double l1 = 0.0;
        for (const auto& [id, w] : *scenario_w) {
            if (std::abs(w) > 1.0 + 1e-12)
                throw OpfError("scenario w at bus '" + id + "' outside [-1,1]");
            l1 += std::abs(w);
        }
        if (prog.robustified && l1 > prog.unc.budget + 1e-9)
            throw OpfError("scenario w violates the uncertainty budget");
        for (const auto& [id, w] : *scenario_w) {
            const int bus = prog.model.bus_index(id);
            const auto it = prog.unc.halfwidths.find(id);
            const double hp = it != prog.unc.halfwidths.end() ? it->second.first : 0.0;
            const double hq = it != prog.unc.halfwidths.end() ? it->second.second : 0.0;
            cp.b_eq(prog.p_row[bus]) += prog.unc.level * w * hp;
            cp.b_eq(prog.q_row[bus]) += prog.unc.level * w * hq;
        }
    }

    SolveResult res = solve(cp);
    MvOpfSolution sol;
    sol.status = res.status;
    sol.message = res.message;
    sol.solver_gap = res.gap_bound;
    if (res.status != SolveStatus::Optimal) return sol;

    const auto& m = prog.model;
    const auto& x = res.x;
    // Interior-point slacks never reach exactly zero; values at solver noise
    // level are inactive limits, not violations.
    const auto clamp_dev = [](double d) { return d < 1e-9 ? 0.0 : d; };
    for (int k = 0; k < m.num_branches(); ++k) {
        sol.p_branch.push_back(x(prog.var_p[k]));
        sol.q_branch.push_back(x(prog.var_q[k]));
        sol.l_branch.push_back(x(prog.var_l[k]));
        sol.i_dev.push_back(clamp_dev(x(prog.var_idev[k])));
    }
    for (int i = 0; i < m.num_buses(); ++i) {
        sol.v_sq.push_back(x(prog.var_v[i]));
        sol.v_dev.push_back(clamp_dev(x(prog.var_vdev[i])));
    }
    for (size_t d = 0; d < m.ders.size(); ++d)
        sol.der_setpoints[m.ders[d].id] = {x(prog.der_vars[d].first), x(prog.der_vars[d].second)};
    for (const auto& [bus, pq] : prog.flex_vars)
        sol.flex_transfers[m.buses[bus].id] = {x(pq.first), x(pq.second)};
    sol.p_sl = x(prog.var_psl);
    sol.q_sl = x(prog.var_qsl);

    const auto& w = prog.weights;
    sol.cost_losses = w.w_l * sol.losses_pu(m);
    for (double d : sol.v_dev) sol.cost_voltage += w.w_v * d;
    for (double d : sol.i_dev) sol.cost_current += w.w_lim * d;
    sol.cost_p = w.w_p * sol.p_sl;
    sol.cost_q = w.w_q * sol.q_sl;
    sol.objective = res.objective;
    return sol;
}

double violation_cost(const MvOpfSolution& sol, double rate) {
    if (sol.status != SolveStatus::Optimal)
        throw OpfError("violation cost requested on a non-optimal solution");
    return rate * sol.slack_sum();
}

SocGapReport check_soc_tightness(const MvProgram& prog, const MvOpfSolution& sol, double tol) {
    if (sol.status != SolveStatus::Optimal)
        throw OpfError("tightness check requested on a non-optimal solution");
    SocGapReport rep;
    const auto& m = prog.model;
    for (int k = 0; k < m.num_branches(); ++k) {
        int from = m.branches[k].from, to = m.branches[k].to;
        if (prog.topology.parent_bus[from] == to) std::swap(from, to);
        const double gap = sol.v_sq[from] * sol.l_branch[k] - sol.p_branch[k] * sol.p_branch[k] -
                           sol.q_branch[k] * sol.q_branch[k];
        rep.gap.push_back(gap);
        rep.max_gap = std::max(rep.max_gap, gap);
        if (gap > tol) rep.flagged.push_back(k);
    }
    return rep;
}

}  // namespace gridflex
