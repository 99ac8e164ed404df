#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridflex {

/// Raised on malformed or physically inconsistent network documents.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

enum class BusKind { Slack, Pq };

struct Bus {
    std::string id;
    BusKind kind = BusKind::Pq;
    double v_min = 0.9;   // pu
    double v_max = 1.1;   // pu
    double base_kv = 0.4;
};

struct Branch {
    std::string id;
    int from = -1;  // bus index
    int to = -1;
    double r = 0.0;     // pu
    double x = 0.0;     // pu
    double i_max = 0.0; // pu
};

struct DerUnit {
    std::string id;
    int bus = -1;
    double p_max = 0.0;               // pu
    double q_min = 0.0;               // pu
    double q_max = 0.0;               // pu
    double curtailable_fraction = 0.0;
};

/// Immutable radial network in per-unit on s_base_mva. Safe to share
/// across threads once constructed.
struct GridModel {
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<DerUnit> ders;
    double s_base_mva = 1.0;
    int slack = -1;
    // MV models only: bus index -> LV network document path.
    std::map<int, std::string> attached_lv_grids;

    int bus_index(const std::string& id) const;
    const Bus& bus(const std::string& id) const { return buses[bus_index(id)]; }
    int num_buses() const { return static_cast<int>(buses.size()); }
    int num_branches() const { return static_cast<int>(branches.size()); }
};

/// Root-first traversal order with parent pointers, produced by
/// validate_radial. order[0] is the slack bus.
struct TopologyReport {
    std::vector<int> order;          // bus indices, root first
    std::vector<int> parent_branch;  // per bus, -1 for slack
    std::vector<int> parent_bus;     // per bus, -1 for slack
    std::vector<int> depth;          // per bus, 0 for slack
};

/// Parse a network document (see README for the JSON schema), convert all
/// physical quantities to per-unit and validate the radial invariants.
GridModel load_network(const std::string& text);

/// Serialize back to a per-unit document; load_network(serialize(m)) == m.
std::string serialize(const GridModel& model);

/// Recompute traversal order; throws ModelError if the model is not a
/// connected radial graph (load_network already guarantees it is).
TopologyReport validate_radial(const GridModel& model);

}  // namespace gridflex
