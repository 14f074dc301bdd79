#pragma once

#include "scanpath/core.hpp"
#include "scanpath/geometry.hpp"
#include "scanpath/scene.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace scanpath {

/// Principal frame of a region. Rows of `axes` are the principal directions,
/// row 0 being the major axis; the matrix is a proper rotation.
struct PcaFrame {
    Point centroid = Point::Zero();
    Mat2 axes = Mat2::Identity();
    double length = 0.0;  // extent along the major axis
    double width = 0.0;   // extent along the minor axis
    double major_variance = 0.0;
    double minor_variance = 0.0;
    /// Eigenvalue ratio below 1.05; the axis is kept but is weakly determined.
    bool near_isotropic = false;

    Vec2 major_axis() const { return axes.row(0).transpose(); }
    Vec2 minor_axis() const { return axes.row(1).transpose(); }
};

struct RegionPlan {
    Blob blob;
    PcaFrame frame;
    Point entry = Point::Zero();  // p_in
    Point exit = Point::Zero();   // p_out
};

inline Point centroid(std::span<const Point> contour) {
    if (contour.size() < 3) throw Error("degenerate contour: fewer than 3 points");
    Point sum = Point::Zero();
    for (const Point& p : contour) sum += p;
    return sum / static_cast<double>(contour.size());
}

/// p' = A (p - p_c)
inline std::vector<Point> reproject(std::span<const Point> points, const PcaFrame& frame) {
    std::vector<Point> out;
    out.reserve(points.size());
    for (const Point& p : points) out.emplace_back(frame.axes * (p - frame.centroid));
    return out;
}

/// p = A^T p' + p_c
inline std::vector<Point> from_frame(std::span<const Point> points, const PcaFrame& frame) {
    std::vector<Point> out;
    out.reserve(points.size());
    for (const Point& q : points) out.emplace_back(frame.axes.transpose() * q + frame.centroid);
    return out;
}

/// Covariance of the contour points, eigen-decomposed in closed form.
inline PcaFrame pca_frame(std::span<const Point> contour) {
    PcaFrame f;
    f.centroid = centroid(contour);
    double cxx = 0.0, cxy = 0.0, cyy = 0.0;
    for (const Point& p : contour) {
        const Vec2 d = p - f.centroid;
        cxx += d.x() * d.x();
        cxy += d.x() * d.y();
        cyy += d.y() * d.y();
    }
    const double n = static_cast<double>(contour.size());
    cxx /= n;
    cxy /= n;
    cyy /= n;

    const double mean = 0.5 * (cxx + cyy);
    const double radius = std::hypot(0.5 * (cxx - cyy), cxy);
    f.major_variance = mean + radius;
    f.minor_variance = mean - radius;

    const double theta = 0.5 * std::atan2(2.0 * cxy, cxx - cyy);
    Vec2 major(std::cos(theta), std::sin(theta));
    if (major.x() < 0.0 || (std::abs(major.x()) <= 1e-12 && major.y() < 0.0)) major = -major;
    f.axes.row(0) = major.transpose();
    f.axes.row(1) = Vec2(-major.y(), major.x()).transpose();

    double lo0 = 1e300, hi0 = -1e300, lo1 = 1e300, hi1 = -1e300;
    for (const Point& p : contour) {
        const Vec2 q = f.axes * (p - f.centroid);
        lo0 = std::min(lo0, q.x());
        hi0 = std::max(hi0, q.x());
        lo1 = std::min(lo1, q.y());
        hi1 = std::max(hi1, q.y());
    }
    f.length = hi0 - lo0;
    f.width = hi1 - lo1;
    if (f.width <= 1e-9 * std::max(1.0, f.length)) throw Error("degenerate region: zero width");
    f.near_isotropic = f.major_variance < 1.05 * f.minor_variance;
    return f;
}

/// Extreme intersections of the major axis line through the centroid with the
/// contour polygon, ordered by major-axis coordinate.
inline std::pair<Point, Point> entry_exit_points(std::span<const Point> contour, const PcaFrame& frame) {
    const Vec2 u = frame.major_axis();
    const auto ts = geom::line_polygon_intersections(frame.centroid, u, contour);
    if (ts.size() < 2) throw Error("axis does not cross contour");
    const auto [lo, hi] = std::minmax_element(ts.begin(), ts.end());
    if (*hi - *lo <= 1e-9) throw Error("axis does not cross contour");
    return {frame.centroid + *lo * u, frame.centroid + *hi * u};
}

inline std::pair<Point, Point> entry_exit_points(const Blob& blob, const PcaFrame& frame) {
    return entry_exit_points(std::span<const Point>(blob.contour), frame);
}

inline RegionPlan plan_region(const Blob& blob) {
    RegionPlan plan;
    plan.blob = blob;
    plan.frame = pca_frame(blob.contour);
    std::tie(plan.entry, plan.exit) = entry_exit_points(blob, plan.frame);
    return plan;
}

}  // namespace scanpath
