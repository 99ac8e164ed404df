#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <unistd.h>

#include <json.hpp>

#include "gridflex/scenario.hpp"
#include "support/common.hpp"

using namespace gridflex;
using namespace gridflex::testing;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() : path(std::filesystem::temp_directory_path() /
                     ("gridflex_test_" + std::to_string(::getpid()))) {
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("config loads with resolved paths and stable hash") {
    const ScenarioConfig cfg = load_config(fixture("config_today.json"));
    CHECK(cfg.label == "today");
    CHECK(cfg.alpha == 0.5);
    CHECK(cfg.gamma == 1.0);
    CHECK(cfg.directions == 8);
    CHECK(cfg.future_load_kw == 0.0);
    CHECK(std::filesystem::path(cfg.mv_network_path).is_absolute());
    CHECK(cfg.measurement_paths.size() == 3);

    const std::uint64_t h1 = config_hash(cfg);
    CHECK(h1 == config_hash(load_config(fixture("config_today.json"))));
    ScenarioConfig changed = cfg;
    changed.alpha = 0.25;
    CHECK(config_hash(changed) != h1);
    CHECK(config_hash(load_config(fixture("config_future.json"))) != h1);
}

TEST_CASE("config validation names the offending field") {
    ScenarioConfig cfg = load_config(fixture("config_today.json"));
    cfg.measurement_paths.erase("M4");
    CHECK_THROWS_WITH_AS(run_scenario(cfg), doctest::Contains("M4"), ScenarioError);
}

TEST_CASE("today scenario report is complete and violation-free") {
    const ScenarioConfig cfg = load_config(fixture("config_today.json"));
    const ScenarioReport rep = run_scenario(cfg);
    CHECK(rep.status == SolveStatus::Optimal);
    REQUIRE(rep.lv.size() == 3);
    REQUIRE(rep.realizations.size() == 3);
    CHECK(rep.realizations[0].name == "lower");
    CHECK(rep.realizations[1].name == "expected");
    CHECK(rep.realizations[2].name == "upper");
    for (const auto& r : rep.realizations) {
        CHECK(r.sol.status == SolveStatus::Optimal);
        CHECK(r.violation_chf == 0.0);
        CHECK(r.losses_kwh > 0.0);
    }
    for (const auto& lv : rep.lv)
        for (int s = 0; s < 3; ++s) CHECK(lv.areas[s].vertices.size() >= 3);

    const auto doc = nlohmann::json::parse(report_json(rep));
    CHECK(doc.at("label") == "today");
    CHECK(doc.at("realizations").size() == 3);
    CHECK(doc.at("lv_grids").size() == 3);
    CHECK(doc.at("status") == "optimal");
}

TEST_CASE("polygon emission round-trips exactly") {
    const ScenarioConfig cfg = load_config(fixture("config_today.json"));
    const ScenarioReport rep = run_scenario(cfg);
    TempDir tmp;
    emit_polygon_csv(rep, tmp.path.string());
    for (const auto& lv : rep.lv) {
        const FlexibilityArea back = read_polygon_json(
            (tmp.path / ("polygon_" + lv.bus_id + "_expected.json")).string());
        const FlexibilityArea& orig = lv.areas[1];
        REQUIRE(back.vertices.size() == orig.vertices.size());
        for (size_t k = 0; k < back.vertices.size(); ++k) {
            CHECK(back.vertices[k].x == orig.vertices[k].x);
            CHECK(back.vertices[k].y == orig.vertices[k].y);
        }
        CHECK(back.base.x == orig.base.x);
        REQUIRE(back.half_planes.size() == orig.half_planes.size());
        CHECK(back.half_planes[0].c == orig.half_planes[0].c);
    }
}

TEST_CASE("precomputed polygons reproduce the full pipeline") {
    const ScenarioConfig cfg = load_config(fixture("config_today.json"));
    const ScenarioReport full = run_scenario(cfg);
    const ScenarioReport pre = run_scenario(cfg, full.lv);
    REQUIRE(pre.realizations.size() == 3);
    for (size_t k = 0; k < 3; ++k)
        CHECK(pre.realizations[k].sol.objective ==
              doctest::Approx(full.realizations[k].sol.objective).epsilon(1e-12));
}

TEST_CASE("future scenario translates the areas by the load increment") {
    const ScenarioConfig today = load_config(fixture("config_today.json"));
    const ScenarioConfig future = load_config(fixture("config_future.json"));
    const ScenarioReport rt = run_scenario(today);
    const ScenarioReport rf = run_scenario(future);
    for (size_t g = 0; g < rt.lv.size(); ++g) {
        CHECK(rf.lv[g].areas[1].base.x ==
              doctest::Approx(rt.lv[g].areas[1].base.x - 0.1).epsilon(1e-12));
        CHECK(rf.lv[g].areas[1].base.y == doctest::Approx(rt.lv[g].areas[1].base.y));
    }
}

TEST_CASE("invalid configs are rejected up front") {
    ScenarioConfig cfg = load_config(fixture("config_today.json"));
    cfg.directions = 3;
    CHECK_THROWS_AS(run_scenario(cfg), ScenarioError);  // revalidated downstream
    CHECK_THROWS_AS(load_config(fixture("no_such_config.json")), ScenarioError);
}
