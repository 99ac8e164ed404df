#include "gridflex/sensitivity.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <Eigen/Dense>

namespace gridflex {

MeasurementSeries parse_measurement_csv(const std::string& text, const std::string& slack_id) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw EstimationError("empty measurement CSV");
    // Tolerate trailing \r from CRLF files.
    auto strip = [](std::string s) {
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
        return s;
    };
    if (strip(line) != "timestamp,element_id,kind,value_pu")
        throw EstimationError("unexpected CSV header: " + line);

    struct Key {
        long t;
        std::string id;
        char kind;
    };
    std::vector<long> stamps;
    std::map<long, int> stamp_index;
    std::vector<std::string> bus_ids, branch_ids;
    std::map<std::string, int> bus_index, branch_index;
    std::vector<std::tuple<int, std::string, char, double>> rows;

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string ts, id, kind, val;
        if (!std::getline(ls, ts, ',') || !std::getline(ls, id, ',') ||
            !std::getline(ls, kind, ',') || !std::getline(ls, val, ','))
            throw EstimationError("malformed CSV row at line " + std::to_string(line_no));
        long t = std::stol(ts);
        if (!stamp_index.count(t)) {
            stamp_index[t] = static_cast<int>(stamps.size());
            stamps.push_back(t);
        }
        if (kind.size() != 1 || std::string("vpqi").find(kind[0]) == std::string::npos)
            throw EstimationError("unknown measurement kind '" + kind + "' at line " +
                                  std::to_string(line_no));
        if (kind[0] == 'i') {
            if (!branch_index.count(id)) {
                branch_index[id] = static_cast<int>(branch_ids.size());
                branch_ids.push_back(id);
            }
        } else if (!bus_index.count(id)) {
            bus_index[id] = static_cast<int>(bus_ids.size());
            bus_ids.push_back(id);
        }
        rows.emplace_back(stamp_index[t], id, kind[0], std::stod(val));
    }
    if (stamps.size() < 2) throw EstimationError("measurement series has fewer than 2 timestamps");
    for (size_t k = 1; k < stamps.size(); ++k)
        if (stamps[k] <= stamps[k - 1])
            throw EstimationError("timestamps not strictly increasing");
    const long step = stamps[1] - stamps[0];
    for (size_t k = 1; k < stamps.size(); ++k)
        if (stamps[k] - stamps[k - 1] != step)
            throw EstimationError("measurement series has gaps (unequal timestamp spacing)");

    if (!bus_index.count(slack_id))
        throw EstimationError("slack bus '" + slack_id + "' has no measurements");
    // Reorder buses slack-first.
    std::vector<std::string> ordered{slack_id};
    for (const auto& id : bus_ids)
        if (id != slack_id) ordered.push_back(id);
    bus_ids = ordered;
    bus_index.clear();
    for (size_t j = 0; j < bus_ids.size(); ++j) bus_index[bus_ids[j]] = static_cast<int>(j);

    MeasurementSeries s;
    s.timestamps = stamps;
    s.bus_ids = bus_ids;
    s.branch_ids = branch_ids;
    s.slack_id = slack_id;
    const int T = s.samples();
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    s.v.setConstant(T, bus_ids.size(), nan);
    s.p.setConstant(T, bus_ids.size(), nan);
    s.q.setConstant(T, bus_ids.size(), nan);
    s.i.setConstant(T, std::max<size_t>(branch_ids.size(), 0), nan);
    for (auto& [ti, id, kind, val] : rows) {
        if (kind == 'i')
            s.i(ti, branch_index[id]) = val;
        else if (kind == 'v')
            s.v(ti, bus_index[id]) = val;
        else if (kind == 'p')
            s.p(ti, bus_index[id]) = val;
        else
            s.q(ti, bus_index[id]) = val;
    }
    if (s.v.hasNaN() || s.p.hasNaN() || s.q.hasNaN() || (s.i.size() > 0 && s.i.hasNaN()))
        throw EstimationError("measurement series is not dense: missing rows for some elements");
    return s;
}

SensitivityMatrices estimate_from_measurements(const MeasurementSeries& series, int window,
                                               double ridge) {
    const int nc = static_cast<int>(series.bus_ids.size()) - 1;  // non-slack buses
    if (nc < 1) throw EstimationError("no controllable buses in the series");
    if (window > series.samples())
        throw EstimationError("window (" + std::to_string(window) + ") exceeds series length (" +
                              std::to_string(series.samples()) + ")");
    if (window < 2 * nc)
        throw EstimationError("insufficient samples: window " + std::to_string(window) +
                              " < 2 x " + std::to_string(nc) + " controllable buses");
    if (ridge < 0) throw EstimationError("ridge weight must be nonnegative");

    const int t0 = series.samples() - window;
    const int T = window - 1;  // first differences
    const int nb = static_cast<int>(series.bus_ids.size());
    const int nl = static_cast<int>(series.branch_ids.size());

    Eigen::MatrixXd X(T, 2 * nc);
    for (int t = 0; t < T; ++t)
        for (int j = 0; j < nc; ++j) {
            X(t, j) = series.p(t0 + t + 1, j + 1) - series.p(t0 + t, j + 1);
            X(t, nc + j) = series.q(t0 + t + 1, j + 1) - series.q(t0 + t, j + 1);
        }

    Eigen::MatrixXd gram = X.transpose() * X;
    if (ridge == 0.0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
        qr.setThreshold(1e-10);
        if (qr.rank() < 2 * nc)
            throw EstimationError(
                "rank-deficient regressor (collinear or constant injections); set ridge > 0");
    }
    gram.diagonal().array() += ridge;
    Eigen::LDLT<Eigen::MatrixXd> chol(gram);

    auto fit_row = [&](const Eigen::VectorXd& y, Eigen::VectorXd& beta, double& resid) {
        beta = chol.solve(X.transpose() * y);
        resid = std::sqrt((y - X * beta).squaredNorm() / T);
    };

    SensitivityMatrices out;
    out.monitored_buses = series.bus_ids;
    out.monitored_branches = series.branch_ids;
    out.controllable_buses.assign(series.bus_ids.begin() + 1, series.bus_ids.end());
    out.k_vp.setZero(nb, nc);
    out.k_vq.setZero(nb, nc);
    out.k_ip.setZero(nl, nc);
    out.k_iq.setZero(nl, nc);
    out.residual_v.setZero(nb);
    out.residual_i.setZero(nl);

    Eigen::VectorXd y(T), beta;
    double resid;
    for (int r = 0; r < nb; ++r) {
        for (int t = 0; t < T; ++t) y(t) = series.v(t0 + t + 1, r) - series.v(t0 + t, r);
        fit_row(y, beta, resid);
        out.k_vp.row(r) = beta.head(nc);
        out.k_vq.row(r) = beta.tail(nc);
        out.residual_v(r) = resid;
    }
    for (int r = 0; r < nl; ++r) {
        for (int t = 0; t < T; ++t) y(t) = series.i(t0 + t + 1, r) - series.i(t0 + t, r);
        fit_row(y, beta, resid);
        out.k_ip.row(r) = beta.head(nc);
        out.k_iq.row(r) = beta.tail(nc);
        out.residual_i(r) = resid;
    }
    // Slack transfer response (column 0 of p/q is the transformer import).
    for (int t = 0; t < T; ++t) y(t) = series.p(t0 + t + 1, 0) - series.p(t0 + t, 0);
    fit_row(y, beta, resid);
    out.slack_p_dp = beta.head(nc);
    out.slack_p_dq = beta.tail(nc);
    for (int t = 0; t < T; ++t) y(t) = series.q(t0 + t + 1, 0) - series.q(t0 + t, 0);
    fit_row(y, beta, resid);
    out.slack_q_dp = beta.head(nc);
    out.slack_q_dq = beta.tail(nc);
    return out;
}

PredictedState predict_state(const SensitivityMatrices& sens, const Eigen::VectorXd& v0,
                             const Eigen::VectorXd& i0, double p_slack0, double q_slack0,
                             const Eigen::VectorXd& dp, const Eigen::VectorXd& dq) {
    const int nc = sens.n_controllable();
    if (dp.size() != nc || dq.size() != nc)
        throw EstimationError("predict_state: dp/dq size does not match controllable buses");
    if (v0.size() != sens.k_vp.rows() || i0.size() != sens.k_ip.rows())
        throw EstimationError("predict_state: base state shape mismatch");
    PredictedState ps;
    ps.v = v0 + sens.k_vp * dp + sens.k_vq * dq;
    ps.i = i0 + sens.k_ip * dp + sens.k_iq * dq;
    ps.p_slack = p_slack0 + sens.slack_p_dp.dot(dp) + sens.slack_p_dq.dot(dq);
    ps.q_slack = q_slack0 + sens.slack_q_dp.dot(dp) + sens.slack_q_dq.dot(dq);
    return ps;
}

PredictedState predict_state(const SensitivityMatrices& sens, const OperatingPoint& base,
                             const Eigen::VectorXd& dp, const Eigen::VectorXd& dq) {
    Eigen::VectorXd v0 = Eigen::Map<const Eigen::VectorXd>(base.v.data(), base.v.size());
    Eigen::VectorXd i0 = Eigen::Map<const Eigen::VectorXd>(base.i.data(), base.i.size());
    return predict_state(sens, v0, i0, base.p_slack, base.q_slack, dp, dq);
}

}  // namespace gridflex
