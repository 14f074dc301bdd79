#pragma once

#include "scanpath/core.hpp"
#include "scanpath/geometry.hpp"
#include "scanpath/region_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace scanpath {

enum class Mode { travel, ablate };

/// Ordered waypoints in pixels. Travel segments run with the laser off,
/// ablate segments with it on.
struct Polyline {
    std::vector<Point> points;
    Mode mode = Mode::travel;

    double length() const {
        double acc = 0.0;
        for (std::size_t i = 1; i < points.size(); ++i) acc += (points[i] - points[i - 1]).norm();
        return acc;
    }
};

inline constexpr double kDefaultStep = 0.5;
inline constexpr double kDefaultLaserDiameter = 5.0;
inline constexpr double kPi = 3.14159265358979323846;

/// y' = (width/2) sin(2 pi x' / d_laser) for x' in [0, length], in PCA-frame
/// coordinates. The x' spacing is chosen so that chords never exceed `step`
/// even on the steepest flank; every quarter-period knot (crests and axis
/// crossings) is sampled exactly.
inline Polyline sinusoid_in_frame(double length, double width, double d_laser, double step) {
    if (!(length > 0.0) || !(width > 0.0) || !(d_laser > 0.0))
        throw Error("sinusoid parameters must be positive");
    if (!(step > 0.0) || step > d_laser / 4.0) throw Error("sinusoid step must lie in (0, d_laser/4]");
    const double amplitude = 0.5 * width;
    const double k = 2.0 * kPi / d_laser;
    const double quarter = d_laser / 4.0;
    const double dx_max = step / std::sqrt(1.0 + amplitude * amplitude * k * k);
    const auto count = static_cast<std::size_t>(std::ceil(length / dx_max));

    struct Sample { double x; long knot; };  // knot < 0: regular sample
    std::vector<Sample> xs;
    xs.reserve(count + static_cast<std::size_t>(length / quarter) + 2);
    for (std::size_t i = 0; i <= count; ++i)
        xs.push_back({(i == count) ? length : length * static_cast<double>(i) / static_cast<double>(count), -1});
    for (long m = 0; m * quarter <= length; ++m) xs.push_back({m * quarter, m});
    std::sort(xs.begin(), xs.end(), [](const Sample& a, const Sample& b) { return a.x != b.x ? a.x < b.x : a.knot > b.knot; });

    static constexpr double kQuarterValues[4] = {0.0, 1.0, 0.0, -1.0};
    Polyline line;
    line.mode = Mode::ablate;
    line.points.reserve(xs.size());
    bool last_is_knot = false;
    for (const Sample& s : xs) {
        if (!line.points.empty() && s.x - line.points.back().x() <= 1e-9 * d_laser) {
            // Coincident samples: a knot replaces a regular sample, never the reverse.
            if (s.knot < 0 || last_is_knot) continue;
            line.points.pop_back();
        }
        const double y = s.knot >= 0 ? amplitude * kQuarterValues[s.knot % 4] : amplitude * std::sin(k * s.x);
        line.points.emplace_back(s.x, y);
        last_is_knot = s.knot >= 0;
    }
    line.points.back().x() = length;
    return line;
}

/// Inverse PCA map A^T q + p_c, shifted by `offset`.
inline Polyline to_image_frame(const Polyline& in, const PcaFrame& frame, const Vec2& offset) {
    const Point origin = frame.centroid + offset;
    Polyline out{{}, in.mode};
    out.points.reserve(in.points.size());
    for (const Point& q : in.points) out.points.emplace_back(frame.axes.transpose() * q + origin);
    return out;
}

/// Same as to_image_frame with offset = anchor - p_c, but the frame origin
/// lands on `anchor` bit-exactly.
inline Polyline to_image_frame_anchored(const Polyline& in, const PcaFrame& frame, const Point& anchor) {
    Polyline out{{}, in.mode};
    out.points.reserve(in.points.size());
    for (const Point& q : in.points) out.points.emplace_back(frame.axes.transpose() * q + anchor);
    return out;
}

inline Point clip_point(const Point& p, std::span<const Point> contour) {
    return geom::point_in_polygon(p, contour) ? p : geom::closest_point_on_polygon(p, contour);
}

/// Projects interior points lying outside the contour onto it. The first and
/// last points are left alone.
inline Polyline clip_to_region(const Polyline& in, std::span<const Point> contour) {
    Polyline out = in;
    for (std::size_t i = 1; i + 1 < out.points.size(); ++i) out.points[i] = clip_point(out.points[i], contour);
    return out;
}

inline Polyline clip_to_region(const Polyline& in, const Blob& blob) {
    return clip_to_region(in, std::span<const Point>(blob.contour));
}

/// Drops consecutive duplicates and splits chords longer than `max_spacing`.
inline Polyline densify(const Polyline& in, double max_spacing) {
    Polyline out{{}, in.mode};
    if (in.points.empty()) return out;
    out.points.push_back(in.points.front());
    for (std::size_t i = 1; i < in.points.size(); ++i) {
        const Point a = out.points.back();
        const Point& b = in.points[i];
        const double d = (b - a).norm();
        if (d <= 1e-12) continue;
        const auto pieces = static_cast<std::size_t>(std::ceil(d / max_spacing));
        for (std::size_t j = 1; j < pieces; ++j)
            out.points.push_back(a + (b - a) * (static_cast<double>(j) / static_cast<double>(pieces)));
        out.points.push_back(b);
    }
    return out;
}

/// Uniform arc-length resampling; both endpoints are kept.
inline Polyline resample(const Polyline& in, double spacing) {
    Polyline out{{}, in.mode};
    if (in.points.empty()) return out;
    out.points.push_back(in.points.front());
    double carry = 0.0;  // arc length since the last emitted sample
    for (std::size_t i = 1; i < in.points.size(); ++i) {
        const Point a = in.points[i - 1];
        const Point b = in.points[i];
        const double seg = (b - a).norm();
        if (seg <= 0.0) continue;
        double s = spacing - carry;
        while (s < seg) {
            out.points.push_back(a + (b - a) * (s / seg));
            s += spacing;
        }
        carry = seg - (s - spacing);
    }
    if ((out.points.back() - in.points.back()).norm() > 1e-9 * spacing) out.points.push_back(in.points.back());
    else out.points.back() = in.points.back();
    return out;
}

/// The ablation curve of one region: sinusoid from p_in along the major
/// axis up to the axis coordinate of p_out, closed onto p_out, with every
/// interior point pulled inside the contour.
inline Polyline region_scan_curve(const RegionPlan& plan, double d_laser = kDefaultLaserDiameter,
                                  double step = kDefaultStep) {
    const double span = (plan.exit - plan.entry).norm();
    Polyline curve = to_image_frame_anchored(sinusoid_in_frame(span, plan.frame.width, d_laser, step),
                                             plan.frame, plan.entry);
    curve.points.push_back(plan.exit);
    const std::span<const Point> contour(plan.blob.contour);
    return clip_to_region(densify(clip_to_region(densify(curve, step), contour), step), contour);
}

}  // namespace scanpath
