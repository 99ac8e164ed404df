#include "gridflex/power_flow.hpp"

#include <cmath>

namespace gridflex {

namespace {

using cx = std::complex<double>;

void check_injections(const GridModel& m, const InjectionSet& inj) {
    if (static_cast<int>(inj.p.size()) != m.num_buses() ||
        static_cast<int>(inj.q.size()) != m.num_buses())
        throw ModelError("injection set size does not match bus count");
}

}  // namespace

OperatingPoint solve_bfs(const GridModel& m, const InjectionSet& inj, double tol, int max_iter) {
    check_injections(m, inj);
    if (tol <= 0) throw ModelError("tolerance must be positive");
    const TopologyReport top = validate_radial(m);
    const int n = m.num_buses();
    const int nb = m.num_branches();

    std::vector<cx> v(n, cx(1.0, 0.0));
    std::vector<cx> i_branch(nb, cx(0.0, 0.0));
    std::vector<cx> s_spec(n);
    for (int b = 0; b < n; ++b) s_spec[b] = cx(inj.p[b], inj.q[b]);

    OperatingPoint op;
    op.v.assign(n, 1.0);
    op.i.assign(nb, 0.0);

    double mismatch = 0.0;
    int it = 0;
    for (it = 1; it <= max_iter; ++it) {
        // Backward: accumulate branch currents leaf-to-root. Injection
        // currents are conj(S/V) with generation positive, so a load draws
        // current toward the bus.
        std::vector<cx> i_acc(n, cx(0.0, 0.0));
        for (int b = 0; b < n; ++b)
            if (b != m.slack) i_acc[b] = -std::conj(s_spec[b] / v[b]);
        for (auto rit = top.order.rbegin(); rit != top.order.rend(); ++rit) {
            const int b = *rit;
            if (b == m.slack) continue;
            const int k = top.parent_branch[b];
            i_branch[k] = i_acc[b];
            i_acc[top.parent_bus[b]] += i_acc[b];
        }
        // Forward: update voltages root-to-leaf.
        double max_dv = 0.0;
        for (int b : top.order) {
            if (b == m.slack) {
                v[b] = cx(1.0, 0.0);
                continue;
            }
            const int k = top.parent_branch[b];
            const auto& br = m.branches[k];
            const cx z(br.r, br.x);
            // i_branch flows parent -> b when the bus consumes.
            const cx v_new = v[top.parent_bus[b]] - z * i_branch[k];
            max_dv = std::max(max_dv, std::abs(v_new - v[b]));
            v[b] = v_new;
            if (!std::isfinite(v[b].real()) || !std::isfinite(v[b].imag()))
                throw NumericError("power flow diverged to NaN/Inf at bus '" + m.buses[b].id + "'");
        }
        // Mismatch: |S_calc - S_spec| at every non-slack bus.
        mismatch = 0.0;
        std::vector<cx> s_calc(n, cx(0.0, 0.0));
        for (int b = 0; b < n; ++b) {
            if (b == m.slack) continue;
            const int k = top.parent_branch[b];
            cx into = v[b] * std::conj(i_branch[k]);  // power delivered into bus b
            cx out(0.0, 0.0);
            for (int c = 0; c < n; ++c)
                if (top.parent_bus[c] == b) out += v[b] * std::conj(i_branch[top.parent_branch[c]]);
            const cx s_bus = out - into;  // net injection the network sees at bus b
            mismatch = std::max(mismatch, std::abs(s_bus - s_spec[b]));
        }
        if (mismatch <= tol && max_dv <= tol) break;
    }

    op.iterations = std::min(it, max_iter);
    op.converged = mismatch <= tol;
    for (int b = 0; b < n; ++b) op.v[b] = std::abs(v[b]);
    for (int k = 0; k < nb; ++k) op.i[k] = std::abs(i_branch[k]);
    // Slack transfer = power flowing from the slack bus into its children.
    cx s_sl(0.0, 0.0);
    for (int b = 0; b < n; ++b)
        if (top.parent_bus[b] == m.slack) s_sl += v[m.slack] * std::conj(i_branch[top.parent_branch[b]]);
    op.p_slack = s_sl.real();
    op.q_slack = s_sl.imag();
    // Sanity: declared converged only if the solution is physically plausible.
    if (op.converged)
        for (double vm : op.v)
            if (vm < 0.2) op.converged = false;
    return op;
}

double losses(const GridModel& m, const OperatingPoint& op) {
    if (!op.converged) throw ModelError("losses requested on a non-converged operating point");
    double total = 0.0;
    for (int k = 0; k < m.num_branches(); ++k) total += m.branches[k].r * op.i[k] * op.i[k];
    return total;
}

SensitivityMatrices finite_diff_sensitivities(const GridModel& m, const InjectionSet& inj,
                                              double h) {
    check_injections(m, inj);
    const int n = m.num_buses();
    const int nb = m.num_branches();
    const OperatingPoint base = solve_bfs(m, inj);
    if (!base.converged) throw ModelError("finite differences: base case did not converge");

    SensitivityMatrices s;
    for (int b = 0; b < n; ++b) s.monitored_buses.push_back(m.buses[b].id);
    for (int k = 0; k < nb; ++k) s.monitored_branches.push_back(m.branches[k].id);
    for (int b = 0; b < n; ++b)
        if (b != m.slack) s.controllable_buses.push_back(m.buses[b].id);
    const int nc = s.n_controllable();
    s.k_vp.setZero(n, nc);
    s.k_vq.setZero(n, nc);
    s.k_ip.setZero(nb, nc);
    s.k_iq.setZero(nb, nc);
    s.slack_p_dp.setZero(nc);
    s.slack_p_dq.setZero(nc);
    s.slack_q_dp.setZero(nc);
    s.slack_q_dq.setZero(nc);
    s.residual_v.setZero(n);
    s.residual_i.setZero(nb);

    int col = 0;
    for (int b = 0; b < n; ++b) {
        if (b == m.slack) continue;
        for (int comp = 0; comp < 2; ++comp) {  // 0: p, 1: q
            InjectionSet up = inj, dn = inj;
            (comp == 0 ? up.p[b] : up.q[b]) += h;
            (comp == 0 ? dn.p[b] : dn.q[b]) -= h;
            const OperatingPoint opu = solve_bfs(m, up);
            const OperatingPoint opd = solve_bfs(m, dn);
            if (!opu.converged || !opd.converged)
                throw ModelError("finite differences: perturbed case at bus '" + m.buses[b].id +
                                 "' did not converge");
            for (int i = 0; i < n; ++i) {
                const double d = (opu.v[i] - opd.v[i]) / (2 * h);
                (comp == 0 ? s.k_vp : s.k_vq)(i, col) = d;
            }
            for (int k = 0; k < nb; ++k) {
                const double d = (opu.i[k] - opd.i[k]) / (2 * h);
                (comp == 0 ? s.k_ip : s.k_iq)(k, col) = d;
            }
            const double dsp = (opu.p_slack - opd.p_slack) / (2 * h);
            const double dsq = (opu.q_slack - opd.q_slack) / (2 * h);
            if (comp == 0) {
                s.slack_p_dp(col) = dsp;
                s.slack_q_dp(col) = dsq;
            } else {
                s.slack_p_dq(col) = dsp;
                s.slack_q_dq(col) = dsq;
            }
        }
        ++col;
    }
    return s;
}

}  // namespace gridflex
