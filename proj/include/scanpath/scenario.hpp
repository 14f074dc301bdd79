#pragma once

#include "scanpath/config.hpp"
#include "scanpath/metrics.hpp"
#include "scanpath/pgm.hpp"
#include "scanpath/region_geometry.hpp"
#include "scanpath/scan_path.hpp"
#include "scanpath/scene.hpp"
#include "scanpath/servo.hpp"
#include "scanpath/tour.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace scanpath {

struct PlanResult {
    Scene scene{kMinSceneSide, kMinSceneSide, kDefaultScaleUm};
    Point laser = Point::Zero();
    std::vector<RegionPlan> plans;
    NodeSet nodes;
    Tour tour;
    std::vector<Polyline> path;
};

struct ScenarioResult {
    PlanResult plan;
    std::vector<Polyline> waypoints;
    TrajectoryLog log;
    RunReport report;
};

inline Scene make_scene(const ScenarioConfig& cfg) {
    if (cfg.scene != "synthetic") return pgm::read_file(cfg.scene, cfg.scale_um);
    Scene scene = generate_synthetic_scene(cfg.width, cfg.height, cfg.scale_um, cfg.regions, cfg.seed, cfg.d_laser);
    place_laser_spot(scene, cfg.seed, 2.0 * cfg.d_laser, cfg.threshold);
    return scene;
}

inline PlanResult plan_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    PlanResult r;
    r.scene = make_scene(cfg);
    r.laser = detect_laser_spot(r.scene, cfg.spot_intensity);
    const auto blobs = detect_regions(r.scene, cfg.threshold, cfg.spot_intensity);
    if (blobs.empty()) throw Error("no regions detected");
    for (const Blob& b : blobs) r.plans.push_back(plan_region(b));
    r.nodes = build_nodes(r.laser, r.plans);
    r.tour = solve(r.nodes, cfg.solver);
    r.path = compose_scan_path(r.laser, r.tour, r.plans, cfg.d_laser, cfg.step);
    return r;
}

inline ScenarioResult simulate(const ScenarioConfig& cfg) {
    ScenarioResult r;
    r.plan = plan_scenario(cfg);
    r.waypoints = to_waypoints(r.plan.path, cfg.waypoint_spacing);
    ControllerConfig controller = cfg.controller;
    controller.noise_seed = cfg.seed;
    r.log = follow_path(r.waypoints, controller, cfg.plant, r.plan.laser, cfg.max_iter);

    const ErrorStats stats = tracking_error_stats(r.log, r.waypoints, cfg.scale_um);
    r.report.mean_error_um = stats.mean_um;
    r.report.std_error_um = stats.std_um;
    r.report.whole_path_mean_um = stats.whole_path_mean_um;
    r.report.curve_mean_um = stats.curve_mean_um;
    const auto on = laser_on_positions(r.log);
    CoverageCount total;
    for (const RegionPlan& p : r.plan.plans) {
        const CoverageCount c = coverage_count(p.blob, on, cfg.d_laser);
        r.report.region_coverage.push_back(c.percent());
        total.covered += c.covered;
        total.total += c.total;
    }
    r.report.coverage_percent = total.percent();
    r.report.tour_length = r.plan.tour.total_length;
    r.report.iterations = r.log.steps.size();
    return r;
}

// ---------------------------------------------------------------------------
// Renders

inline constexpr std::uint8_t kRenderPlanned = 200;
inline constexpr std::uint8_t kRenderTravel = 220;
inline constexpr std::uint8_t kRenderAblate = 255;
inline constexpr int kRenderBackgroundMax = 180;

/// The scene with intensities compressed into 0..180, leaving the upper band
/// for overlays.
inline Scene render_base(const Scene& scene) {
    Scene out = scene;
    for (auto& v : out.pixels()) v = static_cast<std::uint8_t>(v * kRenderBackgroundMax / 255);
    return out;
}

namespace detail {

inline void plot(Scene& img, const Point& p, std::uint8_t value) {
    const int x = static_cast<int>(std::lround(p.x()));
    const int y = static_cast<int>(std::lround(p.y()));
    if (img.contains(x, y)) img.at(x, y) = value;
}

}  // namespace detail

inline Scene render_planned(const Scene& scene, std::span<const Polyline> path) {
    Scene img = render_base(scene);
    for (const Polyline& line : path)
        for (const Point& p : densify(line, 0.25).points) detail::plot(img, p, kRenderPlanned);
    return img;
}

inline Scene render_executed(const Scene& scene, const TrajectoryLog& log) {
    Scene img = render_base(scene);
    for (const TrajectoryStep& s : log.steps) detail::plot(img, s.position, s.laser_on ? kRenderAblate : kRenderTravel);
    return img;
}

// ---------------------------------------------------------------------------
// Reports

inline constexpr const char* kReportHeader = "test,regions,mean_error_um,std_um,cover_pct,tour_len_px,iters";

struct BatchRow {
    int test = 0;
    int regions = 0;
    std::uint64_t seed = 0;
    std::optional<RunReport> report;  // empty on failure
    std::string status = "ok";
};

struct BatchResult {
    std::vector<BatchRow> rows;
    RunReport average;
    double average_regions = 0.0;
    double average_iterations = 0.0;
    std::size_t succeeded = 0;
};

namespace detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

inline void report_fields(std::ostream& out, double regions, const RunReport& r, double iterations) {
    out << num(regions) << ',' << num(r.mean_error_um) << ',' << num(r.std_error_um) << ','
        << num(r.coverage_percent) << ',' << num(r.tour_length) << ',' << num(iterations);
}

}  // namespace detail

inline void write_report_csv(std::ostream& out, int test, int regions, const RunReport& r) {
    out << kReportHeader << '\n' << test << ',';
    detail::report_fields(out, regions, r, static_cast<double>(r.iterations));
    out << '\n';
}

inline void write_batch_csv(std::ostream& out, const BatchResult& b) {
    out << kReportHeader << ",status\n";
    for (const BatchRow& row : b.rows) {
        out << row.test << ',';
        if (row.report) {
            detail::report_fields(out, row.regions, *row.report, static_cast<double>(row.report->iterations));
        } else {
            out << row.regions << ",,,,,";
        }
        out << ',' << detail::csv_safe(row.status) << '\n';
    }
    out << "average,";
    detail::report_fields(out, b.average_regions, b.average, b.average_iterations);
    out << ',' << (b.succeeded == b.rows.size() ? "ok" : "partial") << '\n';
}

inline void write_instance_file(const std::filesystem::path& file, const NodeSet& nodes) {
    std::ofstream out(file);
    write_instance(out, nodes);
}

inline void write_tour_file(const std::filesystem::path& file, const Tour& tour) {
    std::ofstream out(file);
    for (std::size_t i = 0; i < tour.sequence.size(); ++i) out << (i ? " " : "") << tour.sequence[i];
    out << '\n' << detail::num(tour.total_length) << '\n';
}

/// Planning artifacts only: nodes.txt, tour.txt, planned.pgm.
inline PlanResult write_plan(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    PlanResult plan = plan_scenario(cfg);
    std::filesystem::create_directories(dir);
    write_instance_file(dir / "nodes.txt", plan.nodes);
    write_tour_file(dir / "tour.txt", plan.tour);
    pgm::write_file((dir / "planned.pgm").string(), render_planned(plan.scene, plan.path));
    return plan;
}

/// Full run: planning artifacts plus trajectory.csv, report.csv and
/// executed.pgm.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& dir, int test = 1) {
    ScenarioResult r = simulate(cfg);
    std::filesystem::create_directories(dir);
    write_instance_file(dir / "nodes.txt", r.plan.nodes);
    write_tour_file(dir / "tour.txt", r.plan.tour);
    {
        std::ofstream out(dir / "trajectory.csv");
        write_trajectory_csv(out, r.log);
    }
    {
        std::ofstream out(dir / "report.csv");
        write_report_csv(out, test, static_cast<int>(r.plan.plans.size()), r.report);
    }
    pgm::write_file((dir / "planned.pgm").string(), render_planned(r.plan.scene, r.plan.path));
    pgm::write_file((dir / "executed.pgm").string(), render_executed(r.plan.scene, r.log));
    return r;
}

/// One subdirectory per test plus batch.csv. A failing test is recorded and
/// the batch continues; the average covers successful tests only.
inline BatchResult run_batch(const ScenarioConfig& base, std::span<const BatchTest> tests,
                             const std::filesystem::path& dir) {
    if (tests.empty()) throw Error("batch has no tests");
    BatchResult b;
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < tests.size(); ++i) {
        BatchRow row;
        row.test = static_cast<int>(i) + 1;
        row.regions = tests[i].regions;
        row.seed = tests[i].seed;
        ScenarioConfig cfg = base;
        cfg.scene = "synthetic";
        cfg.regions = tests[i].regions;
        cfg.seed = tests[i].seed;
        char name[32];
        std::snprintf(name, sizeof name, "test_%02d", row.test);
        try {
            row.report = run_scenario(cfg, dir / name, row.test).report;
        } catch (const Error& e) {
            row.status = std::string("error: ") + e.what();
        }
        b.rows.push_back(std::move(row));
    }

    for (const BatchRow& row : b.rows) {
        if (!row.report) continue;
        ++b.succeeded;
        b.average_regions += row.regions;
        b.average.mean_error_um += row.report->mean_error_um;
        b.average.std_error_um += row.report->std_error_um;
        b.average.coverage_percent += row.report->coverage_percent;
        b.average.tour_length += row.report->tour_length;
        b.average_iterations += static_cast<double>(row.report->iterations);
    }
    if (b.succeeded > 0) {
        const double n = static_cast<double>(b.succeeded);
        b.average_regions /= n;
        b.average.mean_error_um /= n;
        b.average.std_error_um /= n;
        b.average.coverage_percent /= n;
        b.average.tour_length /= n;
        b.average_iterations /= n;
        b.average.iterations = static_cast<std::size_t>(std::llround(b.average_iterations));
    }
    std::ofstream out(dir / "batch.csv");
    write_batch_csv(out, b);
    return b;
}

}  // namespace scanpath
