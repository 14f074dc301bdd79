#pragma once

#include "scanpath/core.hpp"
#include "scanpath/intra_path.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace scanpath {

struct ControllerConfig {
    double gain = 0.5;  // lambda, 1/s
    /// Estimated map from actuator rate to image velocity (px/s per unit).
    Mat2 interaction_estimate = Mat2::Identity();
    double convergence_threshold = 1.0;  // px
    double dt = 0.1;                     // s per iteration
    /// Std of Gaussian noise added to each spot measurement, px. Off by default.
    double measurement_noise = 0.0;
    std::uint64_t noise_seed = 0;

    void validate() const;
};

/// Lumped steering plant: image velocity = gain_matrix * actuator rate. The
/// saturated variant clamps the realized image speed to rate_limit and
/// drops motion entirely below the deadband.
struct PlantModel {
    enum class Kind { ideal, saturated_deadband };
    Kind kind = Kind::saturated_deadband;
    Mat2 gain_matrix = Mat2::Identity();
    double rate_limit = 2.0;  // px/s
    double deadband = 0.05;   // px/s

    void validate() const;
};

struct TrajectoryStep {
    int iteration = 0;
    double time = 0.0;  // s, end of the iteration
    Point position = Point::Zero();
    std::size_t waypoint = 0;  // index into the flattened path
    double error = 0.0;        // px, after the step
    Vec2 command = Vec2::Zero();
    bool laser_on = false;
};

struct TrajectoryLog {
    std::vector<TrajectoryStep> steps;
};

struct Waypoint {
    Point position;
    bool ablate = false;
    std::size_t polyline = 0;
};

namespace detail {

inline double condition_number(const Mat2& m) {
    Eigen::JacobiSVD<Mat2> svd(m);
    const auto& sv = svd.singularValues();
    if (sv(1) <= 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / sv(1);
}

inline bool well_conditioned(const Mat2& m) {
    return m.allFinite() && condition_number(m) < 1e6;
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace detail

inline void ControllerConfig::validate() const {
    if (!(gain > 0.0)) throw Error("controller gain must be positive");
    if (!(dt > 0.0)) throw Error("controller dt must be positive");
    if (!(convergence_threshold > 0.0)) throw Error("convergence threshold must be positive");
    if (measurement_noise < 0.0) throw Error("measurement noise must be non-negative");
    if (!detail::well_conditioned(interaction_estimate)) throw Error("interaction matrix singular");
}

inline void PlantModel::validate() const {
    if (!detail::well_conditioned(gain_matrix)) throw Error("plant gain matrix singular");
    if (kind == Kind::saturated_deadband && !(rate_limit > deadband && deadband >= 0.0))
        throw Error("plant requires rate_limit > deadband >= 0");
}

/// e = s - s*
inline Vec2 visual_error(const Point& current, const Point& desired) { return current - desired; }

/// u = -lambda (L^T L)^-1 L^T e
inline Vec2 control_law(const Vec2& e, const ControllerConfig& config) {
    const Mat2& L = config.interaction_estimate;
    if (!detail::well_conditioned(L)) throw Error("interaction matrix singular");
    const Mat2 pinv = (L.transpose() * L).inverse() * L.transpose();
    return -config.gain * (pinv * e);
}

inline Vec2 realized_velocity(const Vec2& command, const PlantModel& plant) {
    Vec2 v = plant.gain_matrix * command;
    if (plant.kind == PlantModel::Kind::saturated_deadband) {
        const double speed = v.norm();
        if (speed < plant.deadband) return Vec2::Zero();
        if (speed > plant.rate_limit) v *= plant.rate_limit / speed;
    }
    return v;
}

inline Point step_plant(const Point& state, const Vec2& command, const PlantModel& plant, double dt) {
    return state + realized_velocity(command, plant) * dt;
}

inline std::vector<Waypoint> flatten(std::span<const Polyline> path) {
    std::vector<Waypoint> out;
    for (std::size_t i = 0; i < path.size(); ++i)
        for (const Point& p : path[i].points) out.push_back({p, path[i].mode == Mode::ablate, i});
    return out;
}

/// Visits every waypoint in order. A waypoint is reached once the measured
/// error drops strictly below the threshold; reaching it costs no iteration,
/// so a waypoint already within the threshold is passed immediately.
inline TrajectoryLog follow_path(std::span<const Polyline> path, const ControllerConfig& controller,
                                 const PlantModel& plant, const Point& start,
                                 int max_iter_per_waypoint = 1000) {
    if (path.empty()) throw Error("empty scan path");
    controller.validate();
    plant.validate();
    const auto waypoints = flatten(path);
    Rng noise(controller.noise_seed);
    auto measure = [&](const Point& p) -> Point {
        if (controller.measurement_noise == 0.0) return p;
        return p + controller.measurement_noise * Vec2(noise.normal(), noise.normal());
    };

    TrajectoryLog log;
    Point pos = start;
    int iter = 0;
    for (std::size_t w = 0; w < waypoints.size(); ++w) {
        const Point& target = waypoints[w].position;
        int local = 0;
        for (;;) {
            const Vec2 e = visual_error(measure(pos), target);
            if (e.norm() < controller.convergence_threshold) break;
            if (local == max_iter_per_waypoint) {
                throw Error("stalled waypoint " + std::to_string(w) + " after " + std::to_string(local) +
                            " iterations: error " + detail::fmt(e.norm()) + " px (check deadband " +
                            detail::fmt(plant.deadband) + " px/s against gain*threshold " +
                            detail::fmt(controller.gain * controller.convergence_threshold) + ")");
            }
            const Vec2 u = control_law(e, controller);
            pos = step_plant(pos, u, plant, controller.dt);
            TrajectoryStep s;
            s.iteration = iter;
            s.time = (iter + 1) * controller.dt;
            s.position = pos;
            s.waypoint = w;
            s.error = (pos - target).norm();
            s.command = u;
            s.laser_on = waypoints[w].ablate;
            log.steps.push_back(s);
            ++iter;
            ++local;
        }
    }
    return log;
}

inline constexpr const char* kTrajectoryHeader = "iter,time_s,x_px,y_px,waypoint,err_px,vx,vy,laser_on";

inline void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
    out << kTrajectoryHeader << '\n';
    char buf[256];
    for (const TrajectoryStep& s : log.steps) {
        std::snprintf(buf, sizeof buf, "%d,%.6g,%.6g,%.6g,%zu,%.6g,%.6g,%.6g,%d\n", s.iteration, s.time,
                      s.position.x(), s.position.y(), s.waypoint, s.error, s.command.x(), s.command.y(),
                      s.laser_on ? 1 : 0);
        out << buf;
    }
}

}  // namespace scanpath
