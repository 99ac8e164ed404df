#pragma once

#include <vector>

namespace gridflex {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// a*x + b*y <= c
struct HalfPlane {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Convex hull, counter-clockwise, collinear points dropped (monotone chain).
std::vector<Point2> convex_hull(std::vector<Point2> pts);

/// Signed area of a CCW polygon (shoelace); 0 for degenerate inputs.
double polygon_area(const std::vector<Point2>& poly);

/// Outward-normal half-planes of a convex CCW polygon. Degenerate inputs
/// (point or segment) get equality-pair encodings that pin the set exactly.
std::vector<HalfPlane> polygon_halfplanes(const std::vector<Point2>& poly);

/// Max over half-planes of a*x + b*y - c (<= 0 means inside).
double halfplane_violation(const std::vector<HalfPlane>& hps, const Point2& p);

bool point_in_convex_polygon(const std::vector<Point2>& poly, const Point2& p, double tol = 1e-9);

/// Intersection of two convex polygons (Sutherland-Hodgman clip).
std::vector<Point2> convex_intersection(const std::vector<Point2>& subject,
                                        const std::vector<Point2>& clip);

}  // namespace gridflex
