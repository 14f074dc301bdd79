#pragma once

#include "scanpath/intra_path.hpp"
#include "scanpath/region_geometry.hpp"
#include "scanpath/tour.hpp"

#include <algorithm>
#include <span>
#include <vector>

namespace scanpath {

/// Travel and ablate polylines in tour order, starting from the laser.
/// A region entered through its exit node is scanned with its curve reversed.
inline std::vector<Polyline> compose_scan_path(const Point& laser, const Tour& tour, std::span<const RegionPlan> plans,
                                               double d_laser = kDefaultLaserDiameter, double step = kDefaultStep) {
    std::vector<Polyline> path;
    Point at = laser;
    for (std::size_t i = 1; i + 1 < tour.sequence.size(); i += 2) {
        const int entry = tour.sequence[i];
        const auto region = static_cast<std::size_t>((entry - 1) / 2);
        if (region >= plans.size()) throw Error("tour references unknown region");
        Polyline curve = region_scan_curve(plans[region], d_laser, step);
        if (entry % 2 == 0) std::reverse(curve.points.begin(), curve.points.end());
        if ((curve.points.front() - at).norm() > 1e-12)
            path.push_back(densify(Polyline{{at, curve.points.front()}, Mode::travel}, step));
        at = curve.points.back();
        path.push_back(std::move(curve));
    }
    return path;
}

/// Controller reference: each polyline resampled at a fixed arc spacing.
inline std::vector<Polyline> to_waypoints(std::span<const Polyline> path, double spacing) {
    if (!(spacing > 0.0)) throw Error("waypoint spacing must be positive");
    std::vector<Polyline> out;
    out.reserve(path.size());
    for (const Polyline& p : path) out.push_back(resample(p, spacing));
    return out;
}

}  // namespace scanpath
