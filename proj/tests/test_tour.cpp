#include "oracles.hpp"
#include "scanpath/tour.hpp"

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>

using namespace scanpath;

namespace {

using Endpoints = std::vector<std::pair<Point, Point>>;

NodeSet random_instance(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 300.0), len(3.0, 30.0), ang(0.0, 6.283185307179586);
    Endpoints e;
    for (int k = 0; k < n; ++k) {
        const Point c(u(rng), u(rng));
        const double a = ang(rng), l = len(rng);
        const Vec2 d(std::cos(a) * l / 2, std::sin(a) * l / 2);
        e.emplace_back(c - d, c + d);
    }
    return build_nodes(Point(u(rng), u(rng)), e);
}

Tour make(std::vector<int> s) { return Tour{std::move(s), 0.0}; }

}  // namespace

TEST(Nodes, NumberingPairsRegions) {
    Endpoints e;
    for (int k = 0; k < 5; ++k) e.emplace_back(Point(10 * k, 0), Point(10 * k + 5, 0));
    const NodeSet set = build_nodes({-1, -1}, e);
    ASSERT_EQ(set.nodes.size(), 11u);
    EXPECT_EQ(set.regions(), 5);
    // region 2 owns nodes 3 and 4
    EXPECT_EQ(set.position(3), e[1].first);
    EXPECT_EQ(set.position(4), e[1].second);
    EXPECT_EQ(set.position(0), Point(-1, -1));
    for (std::size_t i = 0; i < set.nodes.size(); ++i) EXPECT_EQ(set.nodes[i].id, static_cast<int>(i));
}

TEST(Nodes, SingleRegion) {
    const Endpoints e{{{1, 1}, {2, 2}}};
    const NodeSet set = build_nodes({0, 0}, e);
    ASSERT_EQ(set.nodes.size(), 3u);
    EXPECT_THROW(build_nodes({0, 0}, Endpoints{}), Error);
}

TEST(Length, ThreeFourFive) {
    const NodeSet set{{{0, {0, 0}}, {1, {3, 0}}, {2, {3, 4}}}};
    const std::vector<int> s{0, 1, 2};
    EXPECT_DOUBLE_EQ(tour_length(s, set), 7.0);
}

TEST(Length, CoincidentNodesAddNothing) {
    const NodeSet set{{{0, {1, 1}}, {1, {1, 1}}, {2, {4, 5}}}};
    const std::vector<int> s{0, 1, 2};
    EXPECT_DOUBLE_EQ(tour_length(s, set), 5.0);
}

TEST(Length, MatchesLongDoubleOracle) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        const NodeSet set = random_instance(rng, 6);
        const Tour t = solve_heuristic(set);
        std::vector<Point> pts;
        for (int id : t.sequence) pts.push_back(set.position(id));
        EXPECT_NEAR(tour_length(t, set), oracle::path_length(pts), 1e-12 * oracle::path_length(pts));
    }
}

TEST(Validate, ReferenceSequenceIsFeasible) {
    std::mt19937_64 rng(1);
    const NodeSet set = random_instance(rng, 5);
    EXPECT_TRUE(validate_tour(make({0, 3, 4, 2, 1, 9, 10, 8, 7, 5, 6}), set).empty());
}

TEST(Validate, ReportsViolations) {
    std::mt19937_64 rng(1);
    const NodeSet one = random_instance(rng, 1);
    const NodeSet two = random_instance(rng, 2);
    const auto v1 = validate_tour(make({1, 0, 2}), one);
    ASSERT_FALSE(v1.empty());
    EXPECT_NE(v1.front().find("s_0"), std::string::npos);

    const auto v2 = validate_tour(make({0, 1, 3, 2, 4}), two);
    ASSERT_FALSE(v2.empty());
    bool spans = false;
    for (const auto& m : v2) spans |= m.find("(1,3) spans regions") != std::string::npos;
    EXPECT_TRUE(spans);

    // Adjacent numbers that straddle two regions.
    const auto v3 = validate_tour(make({0, 2, 3, 1, 4}), two);
    EXPECT_FALSE(v3.empty());
    EXPECT_FALSE(validate_tour(make({0, 1, 2, 3}), two).empty());
    EXPECT_FALSE(validate_tour(make({0, 1, 2, 1, 2}), two).empty());
}

TEST(Exact, SingleRegionPicksNearerEndpoint) {
    const NodeSet far_first = build_nodes({0, 0}, Endpoints{{{10, 0}, {3, 0}}});
    EXPECT_EQ(solve_exact(far_first).sequence, (std::vector<int>{0, 2, 1}));
    const NodeSet near_first = build_nodes({0, 0}, Endpoints{{{3, 0}, {10, 0}}});
    EXPECT_EQ(solve_exact(near_first).sequence, (std::vector<int>{0, 1, 2}));
    const NodeSet tie = build_nodes({0, 0}, Endpoints{{{0, 5}, {0, -5}}});
    EXPECT_EQ(solve_exact(tie).sequence, (std::vector<int>{0, 1, 2}));
}

TEST(Exact, CollinearLayout) {
    const NodeSet set = build_nodes({0, 0}, Endpoints{{{10, 0}, {20, 0}}, {{30, 0}, {40, 0}}});
    const std::vector<int> expected{0, 1, 2, 3, 4};
    EXPECT_EQ(solve_brute_force(set).sequence, expected);
    EXPECT_EQ(solve_exact(set).sequence, expected);
    EXPECT_EQ(solve_heuristic(set).sequence, expected);
    EXPECT_DOUBLE_EQ(solve_exact(set).total_length, 40.0);
}

TEST(Exact, RejectsOversizedInstances) {
    std::mt19937_64 rng(3);
    EXPECT_THROW(solve_exact(random_instance(rng, 15)), Error);
    EXPECT_THROW(solve_brute_force(random_instance(rng, 8)), Error);
    EXPECT_NO_THROW(solve_exact(random_instance(rng, 14)));
}

TEST(BruteForce, SymmetricSquareTieBreak) {
    // Laser on the symmetry axis of two mirror-image regions.
    const NodeSet set = build_nodes({0, 0}, Endpoints{{{-5, 10}, {-5, 20}}, {{5, 10}, {5, 20}}});
    // Hand enumeration of all 2! * 2^2 = 8 feasible sequences.
    const std::vector<std::vector<int>> all{{0, 1, 2, 3, 4}, {0, 1, 2, 4, 3}, {0, 2, 1, 3, 4}, {0, 2, 1, 4, 3},
                                            {0, 3, 4, 1, 2}, {0, 3, 4, 2, 1}, {0, 4, 3, 1, 2}, {0, 4, 3, 2, 1}};
    double best = 1e300;
    for (const auto& s : all) best = std::min(best, tour_length(s, set));
    std::vector<std::vector<int>> optima;
    for (const auto& s : all)
        if (tour_length(s, set) <= best + 1e-9) optima.push_back(s);
    ASSERT_EQ(optima.size(), 2u);  // mirror images
    EXPECT_DOUBLE_EQ(tour_length(optima[0], set), tour_length(optima[1], set));
    EXPECT_EQ(solve_brute_force(set).sequence, optima[0]);
    EXPECT_EQ(solve_exact(set).sequence, optima[0]);
}

TEST(Exact, EqualsBruteForceOnRandomInstances) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> nd(2, 6);
    for (int i = 0; i < 200; ++i) {
        const NodeSet set = random_instance(rng, nd(rng));
        const Tour exact = solve_exact(set);
        const Tour brute = solve_brute_force(set);
        ASSERT_EQ(exact.total_length, brute.total_length) << "instance " << i;
        ASSERT_EQ(exact.sequence, brute.sequence);
        ASSERT_TRUE(validate_tour(exact, set).empty());
        ASSERT_TRUE(validate_tour(brute, set).empty());
    }
}

TEST(Exact, ReportedLengthIsLiteralSum) {
    std::mt19937_64 rng(5);
    const NodeSet set = random_instance(rng, 9);
    const Tour t = solve_exact(set);
    EXPECT_EQ(t.total_length, tour_length(t.sequence, set));
}

TEST(Heuristic, FeasibleAndNeverBelowOptimum) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> nd(1, 9);
    for (int i = 0; i < 200; ++i) {
        const NodeSet set = random_instance(rng, nd(rng));
        const Tour h = solve_heuristic(set);
        ASSERT_TRUE(validate_tour(h, set).empty());
        ASSERT_GE(h.total_length, solve_exact(set).total_length - 1e-9);
    }
}

TEST(Heuristic, GapOnSweepDistribution) {
    // Local search carries no per-instance bound; the gap is a measured figure.
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> nd(2, 6);
    double sum = 0.0, worst = 1.0;
    const int count = 200;
    for (int i = 0; i < count; ++i) {
        const NodeSet set = random_instance(rng, nd(rng));
        const double r = solve_heuristic(set).total_length / solve_exact(set).total_length;
        sum += r;
        worst = std::max(worst, r);
    }
    RecordProperty("worst_ratio", std::to_string(worst));
    std::printf("heuristic/optimum: mean %.4f worst %.4f\n", sum / count, worst);
    EXPECT_LE(sum / count, 1.05);
}

TEST(Heuristic, SingleRegionMatchesExact) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        const NodeSet set = random_instance(rng, 1);
        EXPECT_EQ(solve_heuristic(set).sequence, solve_exact(set).sequence);
    }
}

TEST(Heuristic, TwelveRegionsIsValid) {
    std::mt19937_64 rng(12);
    const NodeSet set = random_instance(rng, 12);
    EXPECT_TRUE(validate_tour(solve_heuristic(set), set).empty());
}

TEST(Exact, RigidMotionKeepsOptimalSequence) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ang(-3.0, 3.0), off(-100.0, 100.0);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        const NodeSet set = random_instance(rng, 5);
        // Require a unique optimum with margin.
        const Tour best = solve_brute_force(set);
        bool unique = true;
        std::vector<int> order{0, 1, 2, 3, 4};
        do {
            for (unsigned mask = 0; mask < 32 && unique; ++mask) {
                std::vector<int> s{0};
                for (int k = 0; k < 5; ++k) {
                    const bool rev = (mask >> k) & 1u;
                    s.push_back(rev ? 2 * order[k] + 2 : 2 * order[k] + 1);
                    s.push_back(rev ? 2 * order[k] + 1 : 2 * order[k] + 2);
                }
                if (s != best.sequence && tour_length(s, set) < best.total_length + 1e-6) unique = false;
            }
        } while (unique && std::next_permutation(order.begin(), order.end()));
        if (!unique) continue;
        ++checked;
        const Eigen::Rotation2Dd rot(ang(rng));
        const Vec2 shift(off(rng), off(rng));
        NodeSet moved = set;
        for (Node& n : moved.nodes) n.position = rot * n.position + shift;
        EXPECT_EQ(solve_exact(moved).sequence, best.sequence);
    }
    EXPECT_GT(checked, 40);
}

TEST(Exact, AddingARegionNeverShortensTheTour) {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 50; ++i) {
        const NodeSet big = random_instance(rng, 7);
        NodeSet small = big;
        small.nodes.resize(small.nodes.size() - 2);
        EXPECT_GE(solve_exact(big).total_length, solve_exact(small).total_length - 1e-9);
    }
}

TEST(Exact, FourteenRegionsIsFast) {
    std::mt19937_64 rng(14);
    const NodeSet set = random_instance(rng, 14);
    const auto t0 = std::chrono::steady_clock::now();
    const Tour t = solve_exact(set);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_TRUE(validate_tour(t, set).empty());
    EXPECT_LE(t.total_length, solve_heuristic(set).total_length + 1e-9);
    EXPECT_LT(secs, 10.0);
}

TEST(Instance, DumpFormat) {
    const NodeSet set = build_nodes({1.5, 2}, Endpoints{{{3, 4}, {5.25, -6}}});
    std::stringstream out;
    write_instance(out, set);
    EXPECT_EQ(out.str(), "0 1.5 2\n1 3 4\n2 5.25 -6\n");
    const NodeSet back = read_instance(out);
    EXPECT_EQ(back.nodes.size(), 3u);
    EXPECT_EQ(back.position(2), Point(5.25, -6));
}
