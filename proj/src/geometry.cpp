#include "gridflex/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace gridflex {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2& a, const Point2& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    const size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<Point2> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {  // lower
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double polygon_area(const std::vector<Point2>& poly) {
    if (poly.size() < 3) return 0.0;
    double s = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % poly.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return 0.5 * s;
}

std::vector<HalfPlane> polygon_halfplanes(const std::vector<Point2>& poly) {
    std::vector<HalfPlane> hps;
    if (poly.empty()) return hps;
    if (poly.size() == 1) {
        const Point2& p = poly[0];
        hps.push_back({1, 0, p.x});
        hps.push_back({-1, 0, -p.x});
        hps.push_back({0, 1, p.y});
        hps.push_back({0, -1, -p.y});
        return hps;
    }
    if (poly.size() == 2) {
        const Point2 &a = poly[0], &b = poly[1];
        const double dx = b.x - a.x, dy = b.y - a.y;
        const double len = std::hypot(dx, dy);
        const double nx = -dy / len, ny = dx / len;  // segment normal
        hps.push_back({nx, ny, nx * a.x + ny * a.y});
        hps.push_back({-nx, -ny, -(nx * a.x + ny * a.y)});
        // Cap the segment ends.
        const double tx = dx / len, ty = dy / len;
        hps.push_back({tx, ty, tx * b.x + ty * b.y});
        hps.push_back({-tx, -ty, -(tx * a.x + ty * a.y)});
        return hps;
    }
    for (size_t i = 0; i < poly.size(); ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % poly.size()];
        // CCW polygon: outward normal is (dy, -dx).
        const double nx = b.y - a.y, ny = -(b.x - a.x);
        const double len = std::hypot(nx, ny);
        hps.push_back({nx / len, ny / len, (nx * a.x + ny * a.y) / len});
    }
    return hps;
}

double halfplane_violation(const std::vector<HalfPlane>& hps, const Point2& p) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& h : hps) worst = std::max(worst, h.a * p.x + h.b * p.y - h.c);
    return worst;
}

bool point_in_convex_polygon(const std::vector<Point2>& poly, const Point2& p, double tol) {
    return halfplane_violation(polygon_halfplanes(poly), p) <= tol;
}

std::vector<Point2> convex_intersection(const std::vector<Point2>& subject,
                                        const std::vector<Point2>& clip) {
    if (subject.empty() || clip.size() < 3) return {};
    std::vector<Point2> out = subject;
    const auto hps = polygon_halfplanes(clip);
    for (const auto& h : hps) {
        std::vector<Point2> in = std::move(out);
        out.clear();
        if (in.empty()) break;
        for (size_t i = 0; i < in.size(); ++i) {
            const Point2& a = in[i];
            const Point2& b = in[(i + 1) % in.size()];
            const double da = h.a * a.x + h.b * a.y - h.c;
            const double db = h.a * b.x + h.b * b.y - h.c;
            if (da <= 0) out.push_back(a);
            if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
                const double t = da / (da - db);
                out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
            }
        }
    }
    return out;
}

}  // namespace gridflex
