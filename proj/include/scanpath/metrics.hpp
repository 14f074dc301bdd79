#pragma once

#include "scanpath/core.hpp"
#include "scanpath/geometry.hpp"
#include "scanpath/scene.hpp"
#include "scanpath/servo.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace scanpath {

struct ErrorStats {
    double mean_um = 0.0;  // ablation phase, distance to the active waypoint
    double std_um = 0.0;   // population std
    double whole_path_mean_um = 0.0;
    double whole_path_std_um = 0.0;
    /// Mean distance to the active polyline itself rather than its waypoint.
    double curve_mean_um = 0.0;
    std::size_t ablate_samples = 0;
};

struct RunReport {
    double mean_error_um = 0.0;
    double std_error_um = 0.0;
    double whole_path_mean_um = 0.0;
    double curve_mean_um = 0.0;
    std::vector<double> region_coverage;  // percent, detection order
    double coverage_percent = 0.0;        // pixel-weighted over all regions
    double tour_length = 0.0;             // px
    std::size_t iterations = 0;
};

namespace detail {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

inline MeanStd mean_std(std::span<const double> v) {
    if (v.empty()) return {};
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size()))};
}

inline constexpr std::size_t kCurveWindow = 64;

inline double distance_to_active_curve(const Point& p, std::span<const Waypoint> wps, std::size_t active) {
    const std::size_t line = wps[active].polyline;
    std::size_t lo = active > kCurveWindow ? active - kCurveWindow : 0;
    std::size_t hi = std::min(wps.size() - 1, active + kCurveWindow);
    while (wps[lo].polyline != line) ++lo;
    while (wps[hi].polyline != line) --hi;
    if (lo == hi) return (p - wps[lo].position).norm();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i < hi; ++i)
        best = std::min(best, geom::distance_to_segment(p, wps[i].position, wps[i + 1].position));
    return best;
}

}  // namespace detail

/// Tracking error per iteration is the distance from the laser to the active
/// waypoint. Ablation-phase statistics are primary; whole-path figures are
/// kept alongside.
inline ErrorStats tracking_error_stats(const TrajectoryLog& log, std::span<const Polyline> path, double scale) {
    if (log.steps.empty()) throw Error("empty trajectory log");
    const auto wps = flatten(path);
    std::vector<double> ablate, all, curve;
    for (const TrajectoryStep& s : log.steps) {
        if (s.waypoint >= wps.size()) throw Error("log waypoint index out of range");
        const double d = (s.position - wps[s.waypoint].position).norm();
        all.push_back(d);
        if (wps[s.waypoint].ablate) {
            ablate.push_back(d);
            curve.push_back(detail::distance_to_active_curve(s.position, wps, s.waypoint));
        }
    }
    if (ablate.empty()) throw Error("no ablation phase");
    const auto a = detail::mean_std(ablate);
    const auto w = detail::mean_std(all);
    const auto c = detail::mean_std(curve);
    ErrorStats out;
    out.mean_um = a.mean * scale;
    out.std_um = a.std * scale;
    out.whole_path_mean_um = w.mean * scale;
    out.whole_path_std_um = w.std * scale;
    out.curve_mean_um = c.mean * scale;
    out.ablate_samples = ablate.size();
    return out;
}

struct CoverageCount {
    std::size_t covered = 0;
    std::size_t total = 0;

    double percent() const { return total == 0 ? 0.0 : 100.0 * static_cast<double>(covered) / static_cast<double>(total); }
};

/// Blob pixels whose centre lies within d_laser/2 of some laser position.
inline CoverageCount coverage_count(const Blob& blob, std::span<const Point> laser_positions, double d_laser) {
    if (!(d_laser > 0.0)) throw Error("laser diameter must be positive");
    const BoundingBox& bb = blob.bbox;
    const int w = bb.max_x - bb.min_x + 1;
    const int h = bb.max_y - bb.min_y + 1;
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(w) * h, 0);
    const double r = 0.5 * d_laser;
    const double r2 = r * r;
    for (const Point& p : laser_positions) {
        const int x0 = std::max(bb.min_x, static_cast<int>(std::ceil(p.x() - r)));
        const int x1 = std::min(bb.max_x, static_cast<int>(std::floor(p.x() + r)));
        const int y0 = std::max(bb.min_y, static_cast<int>(std::ceil(p.y() - r)));
        const int y1 = std::min(bb.max_y, static_cast<int>(std::floor(p.y() + r)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const double dx = x - p.x(), dy = y - p.y();
                if (dx * dx + dy * dy <= r2) hit[static_cast<std::size_t>(y - bb.min_y) * w + (x - bb.min_x)] = 1;
            }
    }
    CoverageCount c;
    c.total = blob.pixels.size();
    for (const Pixel& p : blob.pixels) c.covered += hit[static_cast<std::size_t>(p.y - bb.min_y) * w + (p.x - bb.min_x)];
    return c;
}

inline std::vector<Point> laser_on_positions(const TrajectoryLog& log) {
    std::vector<Point> out;
    for (const TrajectoryStep& s : log.steps)
        if (s.laser_on) out.push_back(s.position);
    return out;
}

inline double coverage(const Blob& blob, const TrajectoryLog& log, double d_laser) {
    return coverage_count(blob, laser_on_positions(log), d_laser).percent();
}

}  // namespace scanpath
