#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gridflex/conic_solver.hpp"

using namespace gridflex;

TEST_CASE("min x subject to x >= 3") {
    ProgramBuilder b;
    b.add_var("x", 3.0, std::numeric_limits<double>::infinity(), 1.0);
    auto res = solve(b.build());
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.x(0) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(res.objective == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("unit rotated cone pushes p=q to sqrt(2)/2") {
    ProgramBuilder b;
    int v = b.add_var("v", 1.0, 1.0);
    int l = b.add_var("l", 1.0, 1.0);
    int p = b.add_var("p", -10, 10, -1.0);
    int q = b.add_var("q", -10, 10, -1.0);
    b.add_cone(v, l, p, q);
    auto res = solve(b.build());
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.x(p) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-5));
    CHECK(res.x(q) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-5));
}

TEST_CASE("empty feasible set is reported infeasible") {
    ProgramBuilder b;
    int x = b.add_var("x");
    b.add_ineq({{x, -1.0}}, -1.0);  // x >= 1
    b.add_ineq({{x, 1.0}}, 0.0);    // x <= 0
    auto res = solve(b.build());
    CHECK(res.status == SolveStatus::Infeasible);
}

TEST_CASE("unbounded LP is flagged") {
    ProgramBuilder b;
    b.add_var("x", -std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity(), 1.0);
    auto res = solve(b.build());
    CHECK(res.status == SolveStatus::Unbounded);
}

TEST_CASE("equalities plus bounds") {
    // min x+y s.t. x + y + z = 2, z <= 1, x,y >= 0  -> objective 1 at z=1.
    ProgramBuilder b;
    int x = b.add_var("x", 0.0, 1e30, 1.0);
    int y = b.add_var("y", 0.0, 1e30, 1.0);
    int z = b.add_var("z", -1e30, 1.0);
    b.add_eq({{x, 1.0}, {y, 1.0}, {z, 1.0}}, 2.0);
    auto res = solve(b.build());
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.objective == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(res.x(z) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("random box LPs agree with vertex enumeration") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 4;
        ProgramBuilder b;
        std::vector<double> lo(n), hi(n), c(n);
        for (int j = 0; j < n; ++j) {
            lo[j] = -1.0 - u(rng);
            hi[j] = 1.0 + u(rng);
            c[j] = u(rng);
            b.add_var("x" + std::to_string(j), lo[j], hi[j], c[j]);
        }
        // One random coupling row keeps it from being separable.
        std::vector<std::pair<int, double>> row;
        for (int j = 0; j < n; ++j) row.push_back({j, u(rng)});
        b.add_ineq(row, 2.5);
        auto res = solve(b.build());
        REQUIRE(res.status == SolveStatus::Optimal);
        // Brute force over box corners (the row rarely cuts the optimum
        // corner; when it does, skip the comparison).
        double best = 1e30;
        bool cut = false;
        for (int mask = 0; mask < (1 << n); ++mask) {
            double obj = 0, lhs = 0;
            for (int j = 0; j < n; ++j) {
                const double xj = (mask >> j) & 1 ? hi[j] : lo[j];
                obj += c[j] * xj;
                lhs += row[j].second * xj;
            }
            if (lhs <= 2.5)
                best = std::min(best, obj);
            else if (obj < best)
                cut = true;
        }
        if (!cut) CHECK(res.objective == doctest::Approx(best).epsilon(1e-6));
        CHECK(verify_feasibility(b.build(), res.x) <= 1e-8);
    }
}

TEST_CASE("determinism: identical programs give bit-identical results") {
    auto make = [] {
        ProgramBuilder b;
        int v = b.add_var("v", 0.5, 2.0);
        int l = b.add_var("l", 0.0, 5.0, 0.3);
        int p = b.add_var("p", -3, 3, -1.0);
        int q = b.add_var("q", -3, 3, 0.2);
        b.add_cone(v, l, p, q);
        b.add_ineq({{v, 1.0}, {p, 0.5}}, 1.8);
        return b.build();
    };
    auto r1 = solve(make());
    auto r2 = solve(make());
    REQUIRE(r1.status == SolveStatus::Optimal);
    REQUIRE(r1.x.size() == r2.x.size());
    for (int j = 0; j < r1.x.size(); ++j) CHECK(r1.x(j) == r2.x(j));
}

TEST_CASE("duplicate cone membership rejected") {
    ProgramBuilder b;
    int v = b.add_var("v", 0, 1), l = b.add_var("l", 0, 1);
    int p = b.add_var("p"), q = b.add_var("q");
    b.add_cone(v, l, p, q);
    CHECK_THROWS_AS(b.add_cone(v, l, p, q), ProgramError);
}

TEST_CASE("program dump round-trips the shapes") {
    ProgramBuilder b;
    int x = b.add_var("x", 0, 1, 2.0);
    b.add_ineq({{x, 1.0}}, 0.5);
    auto text = dump_program(b.build());
    CHECK(text.find("vars 1") != std::string::npos);
    CHECK(text.find("le 0:1") != std::string::npos);
}
