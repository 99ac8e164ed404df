#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gridflex/geometry.hpp"

using namespace gridflex;

TEST_CASE("hull of a noisy square is the square") {
    std::vector<Point2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.2, 0.8}, {1, 0.5}};
    const auto hull = convex_hull(pts);
    REQUIRE(hull.size() == 4);
    CHECK(polygon_area(hull) == doctest::Approx(1.0));
    for (const auto& p : pts) CHECK(point_in_convex_polygon(hull, p));
}

TEST_CASE("hull drops collinear points and handles degenerate input") {
    const auto seg = convex_hull({{0, 0}, {1, 1}, {2, 2}});
    CHECK(seg.size() == 2);
    const auto pt = convex_hull({{3, 4}, {3, 4}});
    CHECK(pt.size() == 1);
    CHECK(polygon_area(seg) == doctest::Approx(0.0));
}

TEST_CASE("half-planes of a triangle classify points correctly") {
    const std::vector<Point2> tri{{0, 0}, {2, 0}, {0, 2}};
    const auto hps = polygon_halfplanes(tri);
    CHECK(hps.size() == 3);
    CHECK(halfplane_violation(hps, {0.5, 0.5}) < 0);
    CHECK(halfplane_violation(hps, {1.0, 1.0}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(halfplane_violation(hps, {2.0, 2.0}) > 0);
    // Violation grows linearly with distance along the outward normal.
    const double v1 = halfplane_violation(hps, {3, 3});
    const double v2 = halfplane_violation(hps, {4, 4});
    CHECK(v2 > v1);
}

TEST_CASE("degenerate half-plane encodings pin the set exactly") {
    const auto point_hps = polygon_halfplanes({{0.3, -0.4}});
    CHECK(halfplane_violation(point_hps, {0.3, -0.4}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(halfplane_violation(point_hps, {0.3, -0.3}) > 1e-3);

    const auto seg_hps = polygon_halfplanes({{0, 0}, {1, 0}});
    CHECK(halfplane_violation(seg_hps, {0.5, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(halfplane_violation(seg_hps, {0.5, 0.1}) > 1e-3);   // off the line
    CHECK(halfplane_violation(seg_hps, {1.5, 0.0}) > 1e-3);   // past the cap
}

TEST_CASE("convex intersection of overlapping squares") {
    const std::vector<Point2> a{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
    const std::vector<Point2> b{{1, 1}, {3, 1}, {3, 3}, {1, 3}};
    const auto inter = convex_hull(convex_intersection(a, b));
    CHECK(polygon_area(inter) == doctest::Approx(1.0));
    const std::vector<Point2> far{{10, 10}, {11, 10}, {11, 11}, {10, 11}};
    CHECK(convex_intersection(a, far).empty());
}

TEST_CASE("random point clouds: hull contains every sample, half-planes agree") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Point2> pts;
        for (int k = 0; k < 50; ++k) pts.push_back({dist(rng), dist(rng)});
        const auto hull = convex_hull(pts);
        const auto hps = polygon_halfplanes(hull);
        for (const auto& p : pts) {
            CHECK(point_in_convex_polygon(hull, p, 1e-9));
            CHECK(halfplane_violation(hps, p) <= 1e-9);
        }
    }
}
