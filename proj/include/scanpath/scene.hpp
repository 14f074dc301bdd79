#pragma once

#include "scanpath/core.hpp"
#include "scanpath/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace scanpath {

inline constexpr int kMinSceneSide = 16;
inline constexpr std::uint8_t kRegionThreshold = 128;
inline constexpr std::uint8_t kRegionIntensityMin = 200;
inline constexpr std::uint8_t kRegionIntensityMax = 240;
inline constexpr std::uint8_t kBackgroundIntensity = 40;
/// Intensities at or above this value are reserved for the laser spot.
inline constexpr std::uint8_t kLaserBandMin = 250;
inline constexpr std::size_t kMinBlobArea = 4;
inline constexpr double kDefaultScaleUm = 120.0;

/// Grayscale raster. Pixel (x, y) is centred on integer coordinates (x, y).
class Scene {
public:
    Scene(int width, int height, double scale_um_per_px, std::uint8_t fill = 0)
        : width_(width), height_(height), scale_(scale_um_per_px) {
        if (width < kMinSceneSide || height < kMinSceneSide)
            throw Error("scene must be at least 16x16 pixels");
        if (!(scale_um_per_px > 0.0)) throw Error("scene scale must be positive");
        pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    double scale() const { return scale_; }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
    std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
    std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }

    const std::vector<std::uint8_t>& pixels() const { return pixels_; }
    std::vector<std::uint8_t>& pixels() { return pixels_; }

    bool operator==(const Scene&) const = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    double scale_;
    std::vector<std::uint8_t> pixels_;
};

struct Pixel {
    int x = 0;
    int y = 0;
    auto operator<=>(const Pixel&) const = default;
};

struct BoundingBox {
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

/// One 8-connected foreground component and its traced boundary.
struct Blob {
    std::vector<Pixel> pixels;   // raster order
    std::vector<Point> contour;  // boundary pixel centres, counterclockwise
    BoundingBox bbox;

    std::size_t area() const { return pixels.size(); }
};

namespace detail {

// Clockwise on screen (y down), starting west.
inline constexpr std::array<Pixel, 8> kRing = {{
    {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}}};

inline int ring_index(int dx, int dy) {
    for (int i = 0; i < 8; ++i)
        if (kRing[i].x == dx && kRing[i].y == dy) return i;
    return -1;
}

/// Labels 8-connected components of `mask` (row-major, w*h). Components are
/// returned in raster order of their first pixel; pixels inside each are in
/// raster order too.
inline std::vector<std::vector<Pixel>> label_components(const std::vector<std::uint8_t>& mask, int w, int h) {
    std::vector<int> label(mask.size(), -1);
    std::vector<std::vector<Pixel>> comps;
    std::vector<Pixel> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            if (!mask[idx] || label[idx] >= 0) continue;
            const int id = static_cast<int>(comps.size());
            comps.emplace_back();
            label[idx] = id;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const Pixel p = stack.back();
                stack.pop_back();
                comps[id].push_back(p);
                for (const Pixel& d : kRing) {
                    const int nx = p.x + d.x, ny = p.y + d.y;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
                    if (mask[nidx] && label[nidx] < 0) {
                        label[nidx] = id;
                        stack.push_back({nx, ny});
                    }
                }
            }
            std::sort(comps[id].begin(), comps[id].end(),
                      [](const Pixel& a, const Pixel& b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
        }
    }
    return comps;
}

inline BoundingBox bounding_box(const std::vector<Pixel>& px) {
    BoundingBox bb{px.front().x, px.front().y, px.front().x, px.front().y};
    for (const Pixel& p : px) {
        bb.min_x = std::min(bb.min_x, p.x);
        bb.min_y = std::min(bb.min_y, p.y);
        bb.max_x = std::max(bb.max_x, p.x);
        bb.max_y = std::max(bb.max_y, p.y);
    }
    return bb;
}

/// Moore-neighbour boundary trace of one component. `pixels` must be in
/// raster order so the first entry is the top-left start pixel.
inline std::vector<Point> trace_boundary(const std::vector<Pixel>& pixels, const BoundingBox& bb) {
    const int w = bb.max_x - bb.min_x + 3;
    const int h = bb.max_y - bb.min_y + 3;
    std::vector<std::uint8_t> local(static_cast<std::size_t>(w) * h, 0);
    auto inside = [&](int x, int y) {
        const int lx = x - bb.min_x + 1, ly = y - bb.min_y + 1;
        if (lx < 0 || ly < 0 || lx >= w || ly >= h) return false;
        return local[static_cast<std::size_t>(ly) * w + lx] != 0;
    };
    for (const Pixel& p : pixels)
        local[static_cast<std::size_t>(p.y - bb.min_y + 1) * w + (p.x - bb.min_x + 1)] = 1;

    const Pixel start = pixels.front();
    std::vector<Pixel> trace;
    Pixel cur = start;
    int back = 0;  // west of the start pixel is background
    Pixel second{};
    bool started = false;
    const std::size_t limit = 4 * pixels.size() + 16;
    for (std::size_t guard = 0; guard < limit; ++guard) {
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            const int idx = (back + k) % 8;
            if (inside(cur.x + kRing[idx].x, cur.y + kRing[idx].y)) {
                found = idx;
                break;
            }
        }
        if (found < 0) {  // isolated pixel
            trace.assign(1, start);
            break;
        }
        const Pixel next{cur.x + kRing[found].x, cur.y + kRing[found].y};
        // Jacob's criterion: stop when the first move is about to repeat.
        if (started && cur == start && next == second) break;
        trace.push_back(cur);
        if (!started) {
            second = next;
            started = true;
        }
        const int prev_idx = (found + 7) % 8;
        back = ring_index(cur.x + kRing[prev_idx].x - next.x, cur.y + kRing[prev_idx].y - next.y);
        cur = next;
    }

    std::vector<Point> contour;
    contour.reserve(trace.size());
    for (const Pixel& p : trace) contour.emplace_back(p.x, p.y);
    if (geom::signed_area(contour) < 0.0) std::reverse(contour.begin() + 1, contour.end());
    return contour;
}

}  // namespace detail

/// One blob per 8-connected component of pixels with threshold <= v < exclude_from
/// and area >= kMinBlobArea, sorted by (min y, min x) of the bounding box.
/// Pixels in the laser band are excluded by default so a spot drawn into the
/// scene is never mistaken for a region.
inline std::vector<Blob> detect_regions(const Scene& scene, int threshold = kRegionThreshold,
                                        int exclude_from = kLaserBandMin) {
    if (threshold <= 0 || threshold >= 255) throw Error("detection threshold must lie in (0, 255)");
    std::vector<std::uint8_t> mask(scene.pixels().size());
    std::transform(scene.pixels().begin(), scene.pixels().end(), mask.begin(),
                   [&](std::uint8_t v) { return static_cast<std::uint8_t>(v >= threshold && v < exclude_from); });
    auto comps = detail::label_components(mask, scene.width(), scene.height());

    std::vector<Blob> blobs;
    for (auto& px : comps) {
        if (px.size() < kMinBlobArea) continue;
        Blob b;
        b.bbox = detail::bounding_box(px);
        b.contour = detail::trace_boundary(px, b.bbox);
        b.pixels = std::move(px);
        blobs.push_back(std::move(b));
    }
    std::stable_sort(blobs.begin(), blobs.end(), [](const Blob& a, const Blob& b) {
        return a.bbox.min_y != b.bbox.min_y ? a.bbox.min_y < b.bbox.min_y : a.bbox.min_x < b.bbox.min_x;
    });
    return blobs;
}

/// Intensity-weighted centroid of the unique component at or above
/// `spot_intensity`.
inline Point detect_laser_spot(const Scene& scene, int spot_intensity = kLaserBandMin) {
    std::vector<std::uint8_t> mask(scene.pixels().size());
    std::transform(scene.pixels().begin(), scene.pixels().end(), mask.begin(),
                   [&](std::uint8_t v) { return static_cast<std::uint8_t>(v >= spot_intensity); });
    const auto comps = detail::label_components(mask, scene.width(), scene.height());
    if (comps.size() != 1)
        throw Error("laser spot not uniquely detected (" + std::to_string(comps.size()) + " candidates)");
    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (const Pixel& p : comps.front()) {
        const double wgt = scene.at(p.x, p.y);
        sw += wgt;
        sx += wgt * p.x;
        sy += wgt * p.y;
    }
    return {sx / sw, sy / sw};
}

/// Ellipse-like bright patches on a uniform dark background. Regions keep a
/// gap of at least 2*d_laser between their bounding circles and the border.
inline Scene generate_synthetic_scene(int width, int height, double scale_um_per_px, int region_count,
                                      std::uint64_t seed, double d_laser = 5.0) {
    if (region_count < 0 || region_count > 12) throw Error("region_count must lie in [0, 12]");
    Scene scene(width, height, scale_um_per_px, kBackgroundIntensity);
    if (region_count == 0) return scene;

    struct Ellipse { double cx, cy, a, b, angle; };
    Rng rng(seed);
    const double margin = 2.0 * d_laser;
    const double a_max = std::min(18.0, 0.25 * std::min(width, height));
    if (a_max < 6.0) throw Error("cannot place regions: scene too small");
    std::vector<Ellipse> placed;
    for (int r = 0; r < region_count; ++r) {
        bool ok = false;
        for (int attempt = 0; attempt < 2000 && !ok; ++attempt) {
            Ellipse e;
            e.a = rng.uniform(6.0, a_max);
            e.b = std::max(4.0, e.a * rng.uniform(0.4, 0.7));
            e.angle = rng.uniform(0.0, 3.14159265358979323846);
            const double lo = e.a + margin;
            if (width - lo <= lo || height - lo <= lo) continue;
            e.cx = rng.uniform(lo, width - 1 - lo);
            e.cy = rng.uniform(lo, height - 1 - lo);
            ok = std::all_of(placed.begin(), placed.end(), [&](const Ellipse& o) {
                return std::hypot(o.cx - e.cx, o.cy - e.cy) >= o.a + e.a + margin;
            });
            if (ok) placed.push_back(e);
        }
        if (!ok) throw Error("cannot place regions: scene too small for region_count");
    }

    for (const Ellipse& e : placed) {
        const auto base = static_cast<int>(rng.integer(kRegionIntensityMin, kRegionIntensityMax - 10));
        const double c = std::cos(e.angle), s = std::sin(e.angle);
        const int x0 = static_cast<int>(std::floor(e.cx - e.a)), x1 = static_cast<int>(std::ceil(e.cx + e.a));
        const int y0 = static_cast<int>(std::floor(e.cy - e.a)), y1 = static_cast<int>(std::ceil(e.cy + e.a));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double dx = x - e.cx, dy = y - e.cy;
                const double u = (dx * c + dy * s) / e.a;
                const double v = (-dx * s + dy * c) / e.b;
                if (u * u + v * v > 1.0 || !scene.contains(x, y)) continue;
                scene.at(x, y) = static_cast<std::uint8_t>(base + rng.integer(0, 10));
            }
        }
    }
    return scene;
}

/// Draws a 3x3 spot in the laser band centred on pixel (x, y).
inline void draw_laser_spot(Scene& scene, int x, int y) {
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            if (scene.contains(x + dx, y + dy))
                scene.at(x + dx, y + dy) = (dx == 0 && dy == 0) ? 255 : kLaserBandMin;
}

/// Picks a pixel at least `clearance` px from any pixel at or above
/// `threshold` and from the border, then draws the spot there.
inline Pixel place_laser_spot(Scene& scene, std::uint64_t seed, double clearance = 10.0,
                              int threshold = kRegionThreshold) {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const int c = static_cast<int>(std::ceil(clearance));
    for (int attempt = 0; attempt < 5000; ++attempt) {
        const int x = static_cast<int>(rng.integer(c, scene.width() - 1 - c));
        const int y = static_cast<int>(rng.integer(c, scene.height() - 1 - c));
        bool clear = true;
        for (int dy = -c; dy <= c && clear; ++dy)
            for (int dx = -c; dx <= c && clear; ++dx)
                if (dx * dx + dy * dy <= clearance * clearance && scene.at(x + dx, y + dy) >= threshold)
                    clear = false;
        if (clear) {
            draw_laser_spot(scene, x, y);
            return {x, y};
        }
    }
    throw Error("cannot place laser spot: no free area");
}

}  // namespace scanpath
