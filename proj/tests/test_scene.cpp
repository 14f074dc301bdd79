#include "oracles.hpp"
#include "scanpath/pgm.hpp"
#include "scanpath/scene.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace scanpath;

namespace {

Scene dark(int w = 64, int h = 48) { return Scene(w, h, kDefaultScaleUm, kBackgroundIntensity); }

void fill_rect(Scene& s, int x0, int y0, int w, int h, std::uint8_t v = 220) {
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x) s.at(x, y) = v;
}

std::vector<std::uint8_t> foreground(const Scene& s, int threshold = kRegionThreshold) {
    std::vector<std::uint8_t> fg(s.pixels().size());
    for (std::size_t i = 0; i < fg.size(); ++i) fg[i] = s.pixels()[i] >= threshold && s.pixels()[i] < kLaserBandMin;
    return fg;
}

}  // namespace

TEST(Scene, RejectsTinyOrUnscaledRasters) {
    EXPECT_THROW(Scene(15, 32, 120.0), Error);
    EXPECT_THROW(Scene(32, 32, 0.0), Error);
    EXPECT_NO_THROW(Scene(16, 16, 1.0));
}

TEST(Synthetic, ZeroRegionsIsUniformDark) {
    const Scene s = generate_synthetic_scene(256, 256, 120, 0, 99);
    for (auto v : s.pixels()) ASSERT_EQ(v, kBackgroundIntensity);
    EXPECT_TRUE(detect_regions(s).empty());
}

TEST(Synthetic, FixedSeedIsBitIdentical) {
    EXPECT_EQ(generate_synthetic_scene(256, 256, 120, 5, 42), generate_synthetic_scene(256, 256, 120, 5, 42));
    EXPECT_NE(generate_synthetic_scene(256, 256, 120, 5, 42).pixels(),
              generate_synthetic_scene(256, 256, 120, 5, 43).pixels());
}

TEST(Synthetic, IntensityBands) {
    const Scene s = generate_synthetic_scene(256, 256, 120, 5, 42);
    for (auto v : s.pixels()) {
        ASSERT_TRUE(v <= 60 || (v >= kRegionIntensityMin && v <= kRegionIntensityMax)) << int(v);
    }
}

TEST(Synthetic, DetectionRecoversCountOver100Seeds) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int count = 1 + static_cast<int>(seed % 12);
        const Scene s = generate_synthetic_scene(384, 288, 120, count, seed);
        const auto blobs = detect_regions(s);
        ASSERT_EQ(blobs.size(), static_cast<std::size_t>(count)) << "seed " << seed;
        ASSERT_EQ(oracle::component_sizes(foreground(s), s.width(), s.height()).size(), blobs.size());
    }
}

TEST(Synthetic, FiveRegionsSeed42) {
    EXPECT_EQ(detect_regions(generate_synthetic_scene(256, 256, 120, 5, 42)).size(), 5u);
}

TEST(Synthetic, OvercrowdedSceneFails) {
    try {
        generate_synthetic_scene(40, 40, 120, 12, 1);
        FAIL() << "expected placement failure";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("cannot place regions"), std::string::npos);
    }
}

TEST(Detect, DarkSceneHasNoBlobs) { EXPECT_TRUE(detect_regions(dark()).empty()); }

TEST(Detect, ThresholdOutOfRange) {
    EXPECT_THROW(detect_regions(dark(), 0), Error);
    EXPECT_THROW(detect_regions(dark(), 255), Error);
}

TEST(Detect, SingleRectangle) {
    Scene s = dark();
    fill_rect(s, 20, 10, 10, 6);
    const auto blobs = detect_regions(s);
    ASSERT_EQ(blobs.size(), 1u);
    EXPECT_EQ(blobs[0].area(), 60u);
    EXPECT_EQ(oracle::component_sizes(foreground(s), s.width(), s.height()), std::vector<std::size_t>{60});
    const auto& c = blobs[0].contour;
    // Boundary of a 10x6 block: 2*(10+6) - 4 pixels, traced once each.
    EXPECT_EQ(c.size(), 28u);
    EXPECT_GT(geom::signed_area(c), 0.0);
    EXPECT_DOUBLE_EQ(geom::signed_area(c), 9.0 * 5.0);
    for (const auto& px : blobs[0].pixels) EXPECT_TRUE(oracle::inside_winding(Point(px.x, px.y), c));
    EXPECT_EQ(blobs[0].bbox.min_x, 20);
    EXPECT_EQ(blobs[0].bbox.max_y, 15);
}

TEST(Detect, SeparatedBlobsAreDistinct) {
    Scene s = dark();
    fill_rect(s, 5, 5, 4, 4);
    fill_rect(s, 11, 5, 4, 4);  // a dark column at x = 9, 10
    EXPECT_EQ(detect_regions(s).size(), 2u);
    EXPECT_EQ(oracle::component_sizes(foreground(s), s.width(), s.height()).size(), 2u);
}

TEST(Detect, DiagonalTouchIsOneComponent) {
    Scene s = dark();
    fill_rect(s, 5, 5, 3, 3);
    fill_rect(s, 8, 8, 3, 3);
    const auto blobs = detect_regions(s);
    ASSERT_EQ(blobs.size(), 1u);
    EXPECT_EQ(blobs[0].area(), 18u);
}

TEST(Detect, SmallSpecksAreIgnored) {
    Scene s = dark();
    fill_rect(s, 3, 3, 1, 3);  // area 3
    fill_rect(s, 30, 30, 2, 2);  // area 4
    const auto blobs = detect_regions(s);
    ASSERT_EQ(blobs.size(), 1u);
    EXPECT_EQ(blobs[0].bbox.min_x, 30);
}

TEST(Detect, SortedByBoundingBoxTopThenLeft) {
    Scene s = dark();
    fill_rect(s, 40, 20, 4, 4);
    fill_rect(s, 10, 20, 4, 4);
    fill_rect(s, 25, 5, 4, 4);
    const auto blobs = detect_regions(s);
    ASSERT_EQ(blobs.size(), 3u);
    EXPECT_EQ(blobs[0].bbox.min_x, 25);
    EXPECT_EQ(blobs[1].bbox.min_x, 10);
    EXPECT_EQ(blobs[2].bbox.min_x, 40);
}

TEST(Detect, LaserBandIsNotARegion) {
    Scene s = dark();
    fill_rect(s, 10, 10, 6, 6);
    draw_laser_spot(s, 40, 30);
    EXPECT_EQ(detect_regions(s).size(), 1u);
}

TEST(Detect, PropertiesOnSyntheticScenes) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Scene s = generate_synthetic_scene(256, 192, 120, 6, seed);
        const auto a = detect_regions(s);
        const auto b = detect_regions(s);
        ASSERT_EQ(a.size(), b.size());
        std::size_t total = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            ASSERT_EQ(a[i].pixels, b[i].pixels);
            ASSERT_EQ(a[i].contour, b[i].contour);
            ASSERT_GE(a[i].contour.size(), 3u);
            total += a[i].area();
            for (const Point& p : a[i].contour) {
                ASSERT_TRUE(s.contains(static_cast<int>(p.x()), static_cast<int>(p.y())));
            }
            ASSERT_GT(geom::signed_area(a[i].contour), 0.0);
            // Every blob pixel is inside or on its contour.
            for (const auto& px : a[i].pixels) ASSERT_TRUE(geom::point_in_polygon(Point(px.x, px.y), a[i].contour));
        }
        const auto fg = foreground(s);
        ASSERT_EQ(total, static_cast<std::size_t>(std::count(fg.begin(), fg.end(), 1)));
    }
}

TEST(LaserSpot, SinglePixel) {
    Scene s = dark();
    s.at(40, 30) = 255;
    const Point p = detect_laser_spot(s);
    EXPECT_DOUBLE_EQ(p.x(), 40.0);
    EXPECT_DOUBLE_EQ(p.y(), 30.0);
}

TEST(LaserSpot, SymmetricSquare) {
    Scene s = dark();
    draw_laser_spot(s, 10, 10);
    const Point p = detect_laser_spot(s);
    EXPECT_DOUBLE_EQ(p.x(), 10.0);
    EXPECT_DOUBLE_EQ(p.y(), 10.0);
}

TEST(LaserSpot, WeightedCentroidIsSubPixel) {
    Scene s = dark();
    s.at(20, 20) = 255;
    s.at(21, 20) = 251;
    const Point p = detect_laser_spot(s);
    EXPECT_NEAR(p.x(), 20.0 + 251.0 / 506.0, 1e-12);
}

TEST(LaserSpot, MissingOrAmbiguous) {
    Scene s = dark();
    EXPECT_THROW(detect_laser_spot(s), Error);
    s.at(5, 5) = 255;
    s.at(30, 30) = 255;
    EXPECT_THROW(detect_laser_spot(s), Error);
}

TEST(LaserSpot, PlacedSpotIsRecoveredAwayFromRegions) {
    Scene s = generate_synthetic_scene(256, 192, 120, 5, 3);
    const Pixel at = place_laser_spot(s, 3);
    const Point p = detect_laser_spot(s);
    EXPECT_DOUBLE_EQ(p.x(), at.x);
    EXPECT_DOUBLE_EQ(p.y(), at.y);
    EXPECT_EQ(detect_regions(s).size(), 5u);
}

TEST(Pgm, RoundTripAndHeaderComments) {
    const Scene s = generate_synthetic_scene(128, 96, 120, 2, 5);
    std::stringstream buf;
    pgm::write(buf, s);
    EXPECT_EQ(pgm::read(buf, 120.0), s);

    std::stringstream commented;
    commented << "P5\n# made by hand\n16 16\n255\n" << std::string(256, '\x28');
    const Scene c = pgm::read(commented, 50.0);
    EXPECT_EQ(c.width(), 16);
    EXPECT_EQ(c.at(3, 3), 0x28);
    EXPECT_EQ(c.scale(), 50.0);
}

TEST(Pgm, RejectsBadInput) {
    std::stringstream ascii("P2\n16 16\n255\n");
    EXPECT_THROW(pgm::read(ascii, 1.0), Error);
    std::stringstream deep("P5\n16 16\n65535\n");
    EXPECT_THROW(pgm::read(deep, 1.0), Error);
    std::stringstream truncated("P5\n16 16\n255\nabc");
    EXPECT_THROW(pgm::read(truncated, 1.0), Error);
}
