#pragma once

#include "scanpath/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace scanpath::geom {

/// Shoelace area; positive for counterclockwise order in (x, y) as stored.
inline double signed_area(std::span<const Point> poly) {
    double acc = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        acc += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * acc;
}

inline Point closest_point_on_segment(const Point& p, const Point& a, const Point& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return a;
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return a + t * ab;
}

inline double distance_to_segment(const Point& p, const Point& a, const Point& b) {
    return (p - closest_point_on_segment(p, a, b)).norm();
}

/// Nearest point on the closed polygon boundary.
inline Point closest_point_on_polygon(const Point& p, std::span<const Point> poly) {
    Point best = poly.front();
    double best_d2 = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point q = closest_point_on_segment(p, poly[i], poly[(i + 1) % n]);
        const double d2 = (q - p).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = q;
        }
    }
    return best;
}

inline double distance_to_polygon(const Point& p, std::span<const Point> poly) {
    return (closest_point_on_polygon(p, poly) - p).norm();
}

/// Even-odd containment. Points within `tol` of the boundary count as inside.
inline bool point_in_polygon(const Point& p, std::span<const Point> poly, double tol = 1e-9) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    if (distance_to_polygon(p, poly) <= tol) return true;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = poly[i];
        const Point& b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x_cross = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (p.x() < x_cross) inside = !inside;
        }
    }
    return inside;
}

/// Parameters t at which origin + t*dir meets the closed polygon boundary.
/// Edges collinear with the line contribute both endpoints.
inline std::vector<double> line_polygon_intersections(const Point& origin, const Vec2& dir,
                                                      std::span<const Point> poly) {
    std::vector<double> ts;
    const std::size_t n = poly.size();
    const double dir_len = dir.norm();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        const Vec2 edge = b - a;
        const double denom = cross(dir, edge);
        const Vec2 ao = a - origin;
        const double scale = dir_len * edge.norm();
        if (std::abs(denom) <= 1e-12 * scale) {
            // Parallel; only collinear edges matter.
            if (std::abs(cross(ao, dir)) <= 1e-12 * dir_len * std::max(1.0, ao.norm())) {
                ts.push_back(ao.dot(dir) / (dir_len * dir_len));
                ts.push_back((b - origin).dot(dir) / (dir_len * dir_len));
            }
            continue;
        }
        const double t = cross(ao, edge) / denom;
        const double s = cross(ao, dir) / denom;
        if (s >= 0.0 && s <= 1.0) ts.push_back(t);
    }
    return ts;
}

}  // namespace scanpath::geom
