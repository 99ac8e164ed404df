#include "gridflex/grid_model.hpp"

#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gridflex {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

int GridModel::bus_index(const std::string& id) const {
    for (size_t i = 0; i < buses.size(); ++i)
        if (buses[i].id == id) return static_cast<int>(i);
    throw ModelError("unknown bus id '" + id + "'");
}

namespace {

// Two unit systems: the canonical on-disk form is physical (kV, ohm, A, kW),
// serialize() emits per-unit so that round-trips are bit-exact.
enum class Units { Physical, PerUnit };

Units parse_units(const json& doc) {
    if (!doc.contains("units")) throw ModelError("missing 'units' header");
    const auto& u = doc.at("units");
    if (u.is_string() && u.get<std::string>() == "pu") return Units::PerUnit;
    if (u.is_object() && u.value("voltage", "") == "kV" && u.value("impedance", "") == "ohm" &&
        u.value("current", "") == "A" && u.value("power", "") == "kW")
        return Units::Physical;
    throw ModelError("unsupported 'units' header; expected kV/ohm/A/kW or \"pu\"");
}

double require_num(const json& o, const std::string& key, const std::string& ctx) {
    if (!o.contains(key)) throw ModelError("missing field '" + key + "' in " + ctx);
    if (!o.at(key).is_number()) throw ModelError("field '" + key + "' in " + ctx + " is not numeric");
    return o.at(key).get<double>();
}

void check_connected_radial(const GridModel& m) {
    const int n = m.num_buses();
    if (m.num_branches() != n - 1) {
        std::ostringstream os;
        os << "non-radial network: " << m.num_branches() << " branches for " << n << " buses";
        throw ModelError(os.str());
    }
    std::vector<std::vector<int>> adj(n);
    for (const auto& br : m.branches) {
        adj[br.from].push_back(br.to);
        adj[br.to].push_back(br.from);
    }
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(m.slack);
    seen[m.slack] = 1;
    int count = 0;
    while (!q.empty()) {
        int b = q.front();
        q.pop();
        ++count;
        for (int nb : adj[b])
            if (!seen[nb]) {
                seen[nb] = 1;
                q.push(nb);
            }
    }
    if (count != n) {
        for (int i = 0; i < n; ++i)
            if (!seen[i])
                throw ModelError("disconnected network: bus '" + m.buses[i].id +
                                 "' unreachable from slack");
    }
}

}  // namespace

GridModel load_network(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelError(std::string("network document parse failure: ") + e.what());
    }

    GridModel m;
    const Units units = parse_units(doc);
    m.s_base_mva = require_num(doc, "s_base_mva", "document root");
    if (m.s_base_mva <= 0) throw ModelError("s_base_mva must be positive");

    if (!doc.contains("buses") || !doc.at("buses").is_array() || doc.at("buses").empty())
        throw ModelError("document has no buses");

    std::set<std::string> ids;
    for (const auto& jb : doc.at("buses")) {
        Bus b;
        b.id = jb.value("id", "");
        if (b.id.empty()) throw ModelError("bus without id");
        if (!ids.insert(b.id).second) throw ModelError("duplicate bus id '" + b.id + "'");
        const std::string kind = jb.value("kind", "pq");
        if (kind == "slack")
            b.kind = BusKind::Slack;
        else if (kind == "pq")
            b.kind = BusKind::Pq;
        else
            throw ModelError("bus '" + b.id + "': unknown kind '" + kind + "'");
        b.base_kv = require_num(jb, "base_kv", "bus '" + b.id + "'");
        if (b.base_kv <= 0) throw ModelError("bus '" + b.id + "': base_kv must be positive");
        b.v_min = require_num(jb, "v_min", "bus '" + b.id + "'");
        b.v_max = require_num(jb, "v_max", "bus '" + b.id + "'");
        if (units == Units::Physical) {
            b.v_min /= b.base_kv;
            b.v_max /= b.base_kv;
        }
        if (!(0 < b.v_min && b.v_min < b.v_max))
            throw ModelError("bus '" + b.id + "': require 0 < v_min < v_max");
        if (b.kind == BusKind::Slack) {
            if (m.slack >= 0)
                throw ModelError("more than one slack bus: '" + m.buses[m.slack].id + "' and '" +
                                 b.id + "'");
            m.slack = static_cast<int>(m.buses.size());
        }
        m.buses.push_back(b);
    }
    if (m.slack < 0) throw ModelError("no slack bus declared");

    int branch_no = 0;
    for (const auto& jb : doc.value("branches", json::array())) {
        Branch br;
        ++branch_no;
        br.id = jb.value("id", "branch" + std::to_string(branch_no));
        const std::string from = jb.value("from_bus", "");
        const std::string to = jb.value("to_bus", "");
        try {
            br.from = m.bus_index(from);
            br.to = m.bus_index(to);
        } catch (const ModelError&) {
            throw ModelError("branch '" + br.id + "' references unknown bus '" +
                             (ids.count(from) ? to : from) + "'");
        }
        if (br.from == br.to) throw ModelError("branch '" + br.id + "' is a self-loop");
        br.r = require_num(jb, "r", "branch '" + br.id + "'");
        br.x = require_num(jb, "x", "branch '" + br.id + "'");
        br.i_max = require_num(jb, "i_max", "branch '" + br.id + "'");
        if (units == Units::Physical) {
            const double kv = m.buses[br.from].base_kv;
            const double z_base = kv * kv / m.s_base_mva;
            const double i_base_a = m.s_base_mva * 1e6 / (std::sqrt(3.0) * kv * 1e3);
            br.r /= z_base;
            br.x /= z_base;
            br.i_max /= i_base_a;
        }
        if (br.r < 0) throw ModelError("branch '" + br.id + "': r must be nonnegative");
        if (br.i_max <= 0) throw ModelError("branch '" + br.id + "': i_max must be positive");
        m.branches.push_back(br);
    }

    int der_no = 0;
    for (const auto& jd : doc.value("ders", json::array())) {
        DerUnit d;
        ++der_no;
        d.id = jd.value("id", "der" + std::to_string(der_no));
        const std::string bus = jd.value("bus", "");
        try {
            d.bus = m.bus_index(bus);
        } catch (const ModelError&) {
            throw ModelError("der '" + d.id + "' references unknown bus '" + bus + "'");
        }
        d.p_max = require_num(jd, "p_max", "der '" + d.id + "'");
        d.q_min = require_num(jd, "q_min", "der '" + d.id + "'");
        d.q_max = require_num(jd, "q_max", "der '" + d.id + "'");
        d.curtailable_fraction = require_num(jd, "curtailable_fraction", "der '" + d.id + "'");
        if (units == Units::Physical) {
            const double to_pu = 1e-3 / m.s_base_mva;  // kW -> pu
            d.p_max *= to_pu;
            d.q_min *= to_pu;
            d.q_max *= to_pu;
        }
        if (d.p_max < 0) throw ModelError("der '" + d.id + "': p_max must be nonnegative");
        if (d.q_min > d.q_max) throw ModelError("der '" + d.id + "': q_min > q_max");
        if (d.curtailable_fraction < 0 || d.curtailable_fraction > 1)
            throw ModelError("der '" + d.id + "': curtailable_fraction outside [0,1]");
        m.ders.push_back(d);
    }

    for (auto& [bus_id, path] : doc.value("attached_lv_grids", std::map<std::string, std::string>{}))
        m.attached_lv_grids[m.bus_index(bus_id)] = path;

    check_connected_radial(m);
    return m;
}

std::string serialize(const GridModel& m) {
    ordered_json doc;
    doc["units"] = "pu";
    doc["s_base_mva"] = m.s_base_mva;
    doc["buses"] = ordered_json::array();
    for (const auto& b : m.buses) {
        ordered_json jb;
        jb["id"] = b.id;
        jb["kind"] = b.kind == BusKind::Slack ? "slack" : "pq";
        jb["base_kv"] = b.base_kv;
        jb["v_min"] = b.v_min;
        jb["v_max"] = b.v_max;
        doc["buses"].push_back(jb);
    }
    doc["branches"] = ordered_json::array();
    for (const auto& br : m.branches) {
        ordered_json jb;
        jb["id"] = br.id;
        jb["from_bus"] = m.buses[br.from].id;
        jb["to_bus"] = m.buses[br.to].id;
        jb["r"] = br.r;
        jb["x"] = br.x;
        jb["i_max"] = br.i_max;
        doc["branches"].push_back(jb);
    }
    doc["ders"] = ordered_json::array();
    for (const auto& d : m.ders) {
        ordered_json jd;
        jd["id"] = d.id;
        jd["bus"] = m.buses[d.bus].id;
        jd["p_max"] = d.p_max;
        jd["q_min"] = d.q_min;
        jd["q_max"] = d.q_max;
        jd["curtailable_fraction"] = d.curtailable_fraction;
        doc["ders"].push_back(jd);
    }
    ordered_json lv = ordered_json::object();
    for (const auto& [bus, path] : m.attached_lv_grids) lv[m.buses[bus].id] = path;
    doc["attached_lv_grids"] = lv;
    return doc.dump(2);
}

TopologyReport validate_radial(const GridModel& m) {
    check_connected_radial(m);
    const int n = m.num_buses();
    TopologyReport rep;
    rep.parent_branch.assign(n, -1);
    rep.parent_bus.assign(n, -1);
    rep.depth.assign(n, 0);
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor bus, branch)
    for (int k = 0; k < m.num_branches(); ++k) {
        const auto& br = m.branches[k];
        adj[br.from].push_back({br.to, k});
        adj[br.to].push_back({br.from, k});
    }
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(m.slack);
    seen[m.slack] = 1;
    while (!q.empty()) {
        int b = q.front();
        q.pop();
        rep.order.push_back(b);
        for (auto [nb, k] : adj[b]) {
            if (seen[nb]) {
                if (rep.parent_bus[b] != nb)
                    throw ModelError("cycle detected at branch '" + m.branches[k].id + "'");
                continue;
            }
            seen[nb] = 1;
            rep.parent_bus[nb] = b;
            rep.parent_branch[nb] = k;
            rep.depth[nb] = rep.depth[b] + 1;
            q.push(nb);
        }
    }
    return rep;
}

}  // namespace gridflex
