#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gridflex/grid_model.hpp"
#include "support/common.hpp"

using namespace gridflex;
using namespace gridflex::testing;

TEST_CASE("two-bus network parses in per-unit form") {
    const GridModel m = load_network(two_bus_json(0.01, 0.02));
    CHECK(m.num_buses() == 2);
    CHECK(m.num_branches() == 1);
    CHECK(m.slack == 0);
    CHECK(m.buses[1].id == "B1");
    CHECK(m.branches[0].r == doctest::Approx(0.01));
    CHECK(m.branches[0].x == doctest::Approx(0.02));
}

TEST_CASE("physical units convert to per-unit") {
    // 0.4 kV feeder, 1 MVA base: z_base = 0.16 ohm, i_base = 1443.4 A.
    const std::string doc = R"({
      "units": {"voltage": "kV", "impedance": "ohm", "current": "A", "power": "kW"},
      "s_base_mva": 1.0,
      "buses": [
        {"id": "B0", "kind": "slack", "base_kv": 0.4, "v_min": 0.36, "v_max": 0.44},
        {"id": "B1", "kind": "pq", "base_kv": 0.4, "v_min": 0.36, "v_max": 0.44}],
      "branches": [
        {"id": "b1", "from_bus": "B0", "to_bus": "B1", "r": 0.016, "x": 0.008,
         "i_max": 721.7}],
      "ders": [
        {"id": "pv1", "bus": "B1", "p_max": 50.0, "q_min": -20.0, "q_max": 20.0,
         "curtailable_fraction": 0.1}]})";
    const GridModel m = load_network(doc);
    CHECK(m.branches[0].r == doctest::Approx(0.1));
    CHECK(m.branches[0].x == doctest::Approx(0.05));
    CHECK(m.branches[0].i_max == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(m.buses[1].v_min == doctest::Approx(0.9));
    CHECK(m.ders[0].p_max == doctest::Approx(0.05));
    CHECK(m.ders[0].q_min == doctest::Approx(-0.02));
}

TEST_CASE("branch referencing an unknown bus names it") {
    std::string doc = two_bus_json();
    const auto pos = doc.find("\"to_bus\":\"B1\"");
    doc.replace(pos, 13, "\"to_bus\":\"B9\"");
    CHECK_THROWS_WITH_AS(load_network(doc), doctest::Contains("B9"), ModelError);
}

TEST_CASE("meshed network is rejected") {
    const std::string doc = R"({
      "units": "pu", "s_base_mva": 1.0,
      "buses": [
        {"id": "B0", "kind": "slack", "base_kv": 0.4, "v_min": 0.9, "v_max": 1.1},
        {"id": "B1", "kind": "pq", "base_kv": 0.4, "v_min": 0.9, "v_max": 1.1},
        {"id": "B2", "kind": "pq", "base_kv": 0.4, "v_min": 0.9, "v_max": 1.1}],
      "branches": [
        {"id": "b1", "from_bus": "B0", "to_bus": "B1", "r": 0.01, "x": 0.01, "i_max": 1},
        {"id": "b2", "from_bus": "B1", "to_bus": "B2", "r": 0.01, "x": 0.01, "i_max": 1},
        {"id": "b3", "from_bus": "B2", "to_bus": "B0", "r": 0.01, "x": 0.01, "i_max": 1}]})";
    CHECK_THROWS_AS(load_network(doc), ModelError);
}

TEST_CASE("disconnected bus is rejected") {
    const std::string doc = R"({
      "units": "pu", "s_base_mva": 1.0,
      "buses": [
        {"id": "B0", "kind": "slack", "base_kv": 0.4, "v_min": 0.9, "v_max": 1.1},
        {"id": "B1", "kind": "pq", "base_kv": 0.4, "v_min": 0.9, "v_max": 1.1}],
      "branches": []})";
    CHECK_THROWS_AS(load_network(doc), ModelError);
}

TEST_CASE("duplicate bus ids and missing slack are rejected") {
    std::string dup = two_bus_json();
    const auto pos = dup.find("\"id\":\"B1\"");
    dup.replace(pos, 9, "\"id\":\"B0\"");
    CHECK_THROWS_WITH_AS(load_network(dup), doctest::Contains("duplicate"), ModelError);

    std::string noslack = two_bus_json();
    const auto sp = noslack.find("slack");
    noslack.replace(sp, 5, "pq");
    CHECK_THROWS_AS(load_network(noslack), ModelError);
}

TEST_CASE("serialize round-trips exactly") {
    for (const std::string name : {"mv6.json", "lv4_a.json", "lv4_b.json", "lv4_c.json"}) {
        CAPTURE(name);
        const GridModel m = load_fixture(name);
        const std::string once = serialize(m);
        const std::string twice = serialize(load_network(once));
        CHECK(once == twice);
    }
}

TEST_CASE("radial topology report on the bundled feeder") {
    const GridModel m = load_fixture("mv6.json");
    const TopologyReport t = validate_radial(m);
    const int m0 = m.bus_index("M0"), m1 = m.bus_index("M1");
    const int m3 = m.bus_index("M3"), m5 = m.bus_index("M5");
    CHECK(t.parent_bus[m0] == -1);
    CHECK(t.depth[m0] == 0);
    CHECK(t.parent_bus[m1] == m0);
    CHECK(t.parent_bus[m5] == m3);
    CHECK(t.depth[m5] == 3);
    CHECK(t.order.size() == static_cast<size_t>(m.num_buses()));
    CHECK(t.order.front() == m0);
}

TEST_CASE("attached LV grids are recorded") {
    const GridModel m = load_fixture("mv6.json");
    REQUIRE(m.attached_lv_grids.size() == 3);
    CHECK(m.attached_lv_grids.at(m.bus_index("M2")) == "lv4_a.json");
}
