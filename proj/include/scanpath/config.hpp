#pragma once

#include "scanpath/core.hpp"
#include "scanpath/intra_path.hpp"
#include "scanpath/scene.hpp"
#include "scanpath/servo.hpp"
#include "scanpath/tour.hpp"

#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace scanpath {

struct BatchTest {
    int regions = 0;
    std::uint64_t seed = 0;
};

struct ScenarioConfig {
    // scene
    std::string scene = "synthetic";  // or a PGM path
    int width = 384;
    int height = 288;
    int regions = 5;
    std::uint64_t seed = 42;
    double scale_um = kDefaultScaleUm;
    int threshold = kRegionThreshold;
    int spot_intensity = kLaserBandMin;
    // planning
    double d_laser = kDefaultLaserDiameter;
    double step = kDefaultStep;
    double waypoint_spacing = 0.02;
    Solver solver = Solver::exact;
    // control
    ControllerConfig controller;
    bool estimate_exact = true;  // interaction estimate follows the plant gain
    PlantModel plant;
    int max_iter = 1000;
    // output
    std::string out = "out";
    std::vector<BatchTest> batch;  // empty: default_batch(seed)

    ScenarioConfig() {
        plant.gain_matrix << 1.2, 0.1, -0.05, 0.9;
        controller.interaction_estimate = plant.gain_matrix;
    }

    /// Region counts of the ten reference trials, seeds base+1..base+10.
    static std::vector<BatchTest> default_batch(std::uint64_t base) {
        const int counts[] = {3, 3, 4, 4, 5, 5, 3, 3, 4, 4};
        std::vector<BatchTest> out;
        for (int i = 0; i < 10; ++i) out.push_back({counts[i], base + 1 + static_cast<std::uint64_t>(i)});
        return out;
    }

    void validate() const {
        if (!(scale_um > 0.0)) throw Error("scale_um must be positive");
        if (threshold <= 0 || threshold >= 255) throw Error("threshold must lie in (0, 255)");
        if (spot_intensity <= threshold || spot_intensity > 255) throw Error("spot_intensity must lie in (threshold, 255]");
        if (!(d_laser > 0.0)) throw Error("d_laser must be positive");
        if (!(step > 0.0) || step > d_laser / 4.0) throw Error("step must lie in (0, d_laser/4]");
        if (!(waypoint_spacing > 0.0)) throw Error("waypoint_spacing must be positive");
        if (max_iter <= 0) throw Error("max_iter must be positive");
        controller.validate();
        plant.validate();
    }
};

inline Solver parse_solver(const std::string& s) {
    if (s == "exact") return Solver::exact;
    if (s == "heuristic") return Solver::heuristic;
    if (s == "brute") return Solver::brute;
    throw Error("unknown solver '" + s + "'");
}

inline const char* solver_name(Solver s) {
    switch (s) {
        case Solver::exact: return "exact";
        case Solver::heuristic: return "heuristic";
        case Solver::brute: return "brute";
    }
    return "?";
}

/// "3:11, 4:12" -> {{3, 11}, {4, 12}}
inline std::vector<BatchTest> parse_batch(const std::string& text) {
    std::vector<BatchTest> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            if (item.find_first_not_of(" \t") == std::string::npos) continue;
            throw Error("batch entries must be regions:seed, got '" + item + "'");
        }
        try {
            out.push_back({std::stoi(item.substr(0, colon)), std::stoull(item.substr(colon + 1))});
        } catch (const std::exception&) {
            throw Error("batch entries must be regions:seed, got '" + item + "'");
        }
    }
    return out;
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size()) throw Error("config key '" + key + "' expects a number, got '" + v + "'");
    return d;
}

inline long long to_int(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    long long i = 0;
    try {
        i = std::stoll(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size()) throw Error("config key '" + key + "' expects an integer, got '" + v + "'");
    return i;
}

inline Mat2 to_mat2(const std::string& key, const std::string& v) {
    std::stringstream ss(v);
    Mat2 m;
    double a, b, c, d;
    std::string rest;
    if (!(ss >> a >> b >> c >> d) || (ss >> rest)) throw Error("config key '" + key + "' expects 4 numbers (row-major)");
    m << a, b, c, d;
    return m;
}

}  // namespace detail

/// Applies one `key = value` setting. Unknown keys are rejected.
inline void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    using detail::to_double;
    using detail::to_int;
    if (key == "scene") cfg.scene = value;
    else if (key == "width") cfg.width = static_cast<int>(to_int(key, value));
    else if (key == "height") cfg.height = static_cast<int>(to_int(key, value));
    else if (key == "regions") cfg.regions = static_cast<int>(to_int(key, value));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "scale_um") cfg.scale_um = to_double(key, value);
    else if (key == "threshold") cfg.threshold = static_cast<int>(to_int(key, value));
    else if (key == "spot_intensity") cfg.spot_intensity = static_cast<int>(to_int(key, value));
    else if (key == "d_laser") cfg.d_laser = to_double(key, value);
    else if (key == "step") cfg.step = to_double(key, value);
    else if (key == "waypoint_spacing") cfg.waypoint_spacing = to_double(key, value);
    else if (key == "solver") cfg.solver = parse_solver(value);
    else if (key == "lambda") cfg.controller.gain = to_double(key, value);
    else if (key == "converge_px") cfg.controller.convergence_threshold = to_double(key, value);
    else if (key == "dt") cfg.controller.dt = to_double(key, value);
    else if (key == "noise_px") cfg.controller.measurement_noise = to_double(key, value);
    else if (key == "estimate") {
        if (value == "exact") {
            cfg.estimate_exact = true;
        } else {
            cfg.estimate_exact = false;
            cfg.controller.interaction_estimate = detail::to_mat2(key, value);
        }
    } else if (key == "plant") {
        if (value == "ideal") cfg.plant.kind = PlantModel::Kind::ideal;
        else if (value == "saturated_deadband") cfg.plant.kind = PlantModel::Kind::saturated_deadband;
        else throw Error("unknown plant '" + value + "'");
    } else if (key == "plant_gain") cfg.plant.gain_matrix = detail::to_mat2(key, value);
    else if (key == "rate_limit") cfg.plant.rate_limit = to_double(key, value);
    else if (key == "deadband") cfg.plant.deadband = to_double(key, value);
    else if (key == "max_iter") cfg.max_iter = static_cast<int>(to_int(key, value));
    else if (key == "out") cfg.out = value;
    else if (key == "batch") cfg.batch = parse_batch(value);
    else throw Error("unknown config key '" + key + "'");
    if (cfg.estimate_exact) cfg.controller.interaction_estimate = cfg.plant.gain_matrix;
}

/// Flat `key = value` lines; `#` starts a comment.
inline ScenarioConfig parse_config(std::istream& in, ScenarioConfig cfg = {}) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("config line " + std::to_string(lineno) + ": expected key = value");
        try {
            apply_setting(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
        } catch (const Error& e) {
            throw Error("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path);
    return parse_config(in);
}

}  // namespace scanpath
