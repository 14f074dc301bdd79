#pragma once

#include "scanpath/core.hpp"
#include "scanpath/region_geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace scanpath {

struct Node {
    int id = 0;
    Point position = Point::Zero();
};

/// Node 0 is the laser; region k (1-based) owns nodes 2k-1 (entry) and 2k (exit).
struct NodeSet {
    std::vector<Node> nodes;

    int regions() const { return static_cast<int>(nodes.size() - 1) / 2; }
    const Point& position(int id) const { return nodes[static_cast<std::size_t>(id)].position; }
};

struct Tour {
    std::vector<int> sequence;
    double total_length = 0.0;
};

enum class Solver { exact, heuristic, brute };

inline NodeSet build_nodes(const Point& laser, std::span<const std::pair<Point, Point>> endpoints) {
    if (endpoints.empty()) throw Error("no regions to tour");
    NodeSet set;
    set.nodes.push_back({0, laser});
    int id = 1;
    for (const auto& [entry, exit] : endpoints) {
        set.nodes.push_back({id++, entry});
        set.nodes.push_back({id++, exit});
    }
    return set;
}

inline NodeSet build_nodes(const Point& laser, std::span<const RegionPlan> plans) {
    std::vector<std::pair<Point, Point>> endpoints;
    endpoints.reserve(plans.size());
    for (const RegionPlan& p : plans) endpoints.emplace_back(p.entry, p.exit);
    return build_nodes(laser, endpoints);
}

inline double tour_length(std::span<const int> sequence, const NodeSet& nodes) {
    double acc = 0.0;
    for (std::size_t i = 1; i < sequence.size(); ++i)
        acc += (nodes.position(sequence[i]) - nodes.position(sequence[i - 1])).norm();
    return acc;
}

inline double tour_length(const Tour& tour, const NodeSet& nodes) { return tour_length(tour.sequence, nodes); }

/// Empty iff s_0 = 0, every id appears once, and each consecutive pair
/// (s_{2i-1}, s_{2i}) is the two nodes of one region.
inline std::vector<std::string> validate_tour(const Tour& tour, const NodeSet& nodes) {
    std::vector<std::string> out;
    const auto& s = tour.sequence;
    const int n = nodes.regions();
    const std::size_t expected = static_cast<std::size_t>(2 * n + 1);
    if (s.size() != expected)
        out.push_back("sequence has " + std::to_string(s.size()) + " entries, expected " + std::to_string(expected));
    if (s.empty()) return out;
    if (s[0] != 0) out.push_back("s_0 = " + std::to_string(s[0]) + ", expected the laser node 0");

    std::vector<int> seen(expected, 0);
    for (int id : s) {
        if (id < 0 || static_cast<std::size_t>(id) >= expected) {
            out.push_back("node id " + std::to_string(id) + " out of range");
            continue;
        }
        if (++seen[static_cast<std::size_t>(id)] == 2) out.push_back("node " + std::to_string(id) + " repeated");
    }
    for (std::size_t id = 0; id < expected; ++id)
        if (seen[id] == 0) out.push_back("node " + std::to_string(id) + " missing");

    for (std::size_t i = 1; i + 1 < s.size(); i += 2) {
        const int a = s[i], b = s[i + 1];
        const std::string pair = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
        if (std::abs(a - b) != 1) out.push_back("pair " + pair + " is not adjacent-numbered");
        if ((1 + a + b) % 4 != 0 || (1 + a + b) / 4 < 1 || (1 + a + b) / 4 > n)
            out.push_back("pair " + pair + " spans regions");
    }
    return out;
}

namespace detail {

struct Visit {
    int region = 0;  // 0-based
    bool reversed = false;
};

inline int entry_node(int r, bool reversed) { return reversed ? 2 * r + 2 : 2 * r + 1; }
inline int exit_node(int r, bool reversed) { return reversed ? 2 * r + 1 : 2 * r + 2; }

inline std::vector<int> to_sequence(std::span<const Visit> visits) {
    std::vector<int> seq{0};
    for (const Visit& v : visits) {
        seq.push_back(entry_node(v.region, v.reversed));
        seq.push_back(exit_node(v.region, v.reversed));
    }
    return seq;
}

inline double tie_tolerance(double length) { return 1e-9 * std::max(1.0, length); }

inline Tour finish(std::vector<int> seq, const NodeSet& nodes) {
    Tour t;
    t.total_length = tour_length(seq, nodes);
    t.sequence = std::move(seq);
    return t;
}

}  // namespace detail

/// Exhaustive enumeration of all n! * 2^n feasible sequences. Among optima
/// within a relative 1e-9 the lexicographically smallest sequence wins.
inline Tour solve_brute_force(const NodeSet& nodes) {
    const int n = nodes.regions();
    if (n < 1) throw Error("no regions to tour");
    if (n > 7) throw Error("instance too large for brute force (n > 7)");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> best_seq;
    double best = std::numeric_limits<double>::infinity();
    std::vector<detail::Visit> visits(static_cast<std::size_t>(n));
    do {
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            for (int i = 0; i < n; ++i) visits[static_cast<std::size_t>(i)] = {order[static_cast<std::size_t>(i)], ((mask >> i) & 1u) != 0};
            auto seq = detail::to_sequence(visits);
            const double len = tour_length(seq, nodes);
            if (best_seq.empty() || len < best - detail::tie_tolerance(best)) {
                best = len;
                best_seq = std::move(seq);
            } else if (len <= best + detail::tie_tolerance(best) && seq < best_seq) {
                best_seq = std::move(seq);
            }
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return detail::finish(std::move(best_seq), nodes);
}

inline constexpr int kMaxExactRegions = 14;

/// Dynamic programme over (visited-region set, last region, orientation).
/// The table holds cost-to-go, which lets the forward reconstruction pick the
/// smallest next entry node among near-optimal continuations and so return
/// the lexicographically smallest optimal sequence.
inline Tour solve_exact(const NodeSet& nodes) {
    const int n = nodes.regions();
    if (n < 1) throw Error("no regions to tour");
    if (n > kMaxExactRegions) throw Error("instance too large for exact solver (n > 14)");

    auto dist = [&](int a, int b) { return (nodes.position(a) - nodes.position(b)).norm(); };
    const std::size_t full = (std::size_t{1} << n) - 1;
    const auto states = static_cast<std::size_t>(2 * n);
    // togo[mask * states + 2r + o]: remaining cost after finishing region r
    // in orientation o with `mask` visited.
    std::vector<double> togo((full + 1) * states, std::numeric_limits<double>::infinity());
    std::vector<double> inside(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) inside[static_cast<std::size_t>(r)] = dist(2 * r + 1, 2 * r + 2);

    auto step_cost = [&](int from_node, std::size_t mask, int r2, int o2) {
        return dist(from_node, detail::entry_node(r2, o2 != 0)) + inside[static_cast<std::size_t>(r2)] +
               togo[(mask | (std::size_t{1} << r2)) * states + static_cast<std::size_t>(2 * r2 + o2)];
    };

    for (std::size_t mask = full; mask >= 1; --mask) {
        for (int r = 0; r < n; ++r) {
            if (!(mask >> r & 1u)) continue;
            for (int o = 0; o < 2; ++o) {
                double best = (mask == full) ? 0.0 : std::numeric_limits<double>::infinity();
                const int from = detail::exit_node(r, o != 0);
                for (int r2 = 0; r2 < n; ++r2) {
                    if (mask >> r2 & 1u) continue;
                    for (int o2 = 0; o2 < 2; ++o2) best = std::min(best, step_cost(from, mask, r2, o2));
                }
                togo[mask * states + static_cast<std::size_t>(2 * r + o)] = best;
            }
        }
    }

    std::vector<int> seq{0};
    std::size_t mask = 0;
    int at = 0;
    double total = std::numeric_limits<double>::infinity();
    for (int r2 = 0; r2 < n; ++r2)
        for (int o2 = 0; o2 < 2; ++o2) total = std::min(total, step_cost(0, 0, r2, o2));
    const double tol = detail::tie_tolerance(total);
    double remaining = total;
    for (int k = 0; k < n; ++k) {
        int pick_r = -1, pick_o = 0, pick_entry = std::numeric_limits<int>::max();
        for (int r2 = 0; r2 < n; ++r2) {
            if (mask >> r2 & 1u) continue;
            for (int o2 = 0; o2 < 2; ++o2) {
                const double c = step_cost(at, mask, r2, o2);
                const int entry = detail::entry_node(r2, o2 != 0);
                if (c <= remaining + tol && entry < pick_entry) {
                    pick_r = r2;
                    pick_o = o2;
                    pick_entry = entry;
                }
            }
        }
        mask |= std::size_t{1} << pick_r;
        remaining = togo[mask * states + static_cast<std::size_t>(2 * pick_r + pick_o)];
        at = detail::exit_node(pick_r, pick_o != 0);
        seq.push_back(pick_entry);
        seq.push_back(at);
    }
    return detail::finish(std::move(seq), nodes);
}

/// Nearest-endpoint construction followed by local search, first improvement,
/// until no move helps: 2-opt on the region order, orientation flips, and
/// single-region relocation.
inline Tour solve_heuristic(const NodeSet& nodes) {
    const int n = nodes.regions();
    if (n < 1) throw Error("no regions to tour");

    std::vector<detail::Visit> visits;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    Point at = nodes.position(0);
    for (int k = 0; k < n; ++k) {
        int best_node = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int id = 1; id <= 2 * n; ++id) {
            if (used[static_cast<std::size_t>((id - 1) / 2)]) continue;
            const double d = (nodes.position(id) - at).norm();
            if (d < best_d) {
                best_d = d;
                best_node = id;
            }
        }
        const int r = (best_node - 1) / 2;
        const bool reversed = best_node % 2 == 0;
        used[static_cast<std::size_t>(r)] = true;
        visits.push_back({r, reversed});
        at = nodes.position(detail::exit_node(r, reversed));
    }

    auto cost = [&](const std::vector<detail::Visit>& v) { return tour_length(detail::to_sequence(v), nodes); };
    double current = cost(visits);
    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 0; i < n && !improved; ++i) {
            for (int j = i; j < n && !improved; ++j) {
                // flip == true: classic segment reversal (each region traversed
                // backwards); flip == false: order reversed, orientations kept.
                // With i == j these degenerate to a single-region flip / no-op.
                for (bool flip : {true, false}) {
                    if (!flip && i == j) continue;
                    auto cand = visits;
                    std::reverse(cand.begin() + i, cand.begin() + j + 1);
                    if (flip)
                        for (int m = i; m <= j; ++m) cand[static_cast<std::size_t>(m)].reversed = !cand[static_cast<std::size_t>(m)].reversed;
                    const double c = cost(cand);
                    if (c < current - detail::tie_tolerance(current)) {
                        visits = std::move(cand);
                        current = c;
                        improved = true;
                        break;
                    }
                }
            }
        }
        // Relocate one region to another slot, in either orientation.
        for (int i = 0; i < n && !improved; ++i) {
            for (int j = 0; j < n && !improved; ++j) {
                if (i == j) continue;
                for (bool flip : {false, true}) {
                    auto cand = visits;
                    detail::Visit v = cand[static_cast<std::size_t>(i)];
                    if (flip) v.reversed = !v.reversed;
                    cand.erase(cand.begin() + i);
                    cand.insert(cand.begin() + j, v);
                    const double c = cost(cand);
                    if (c < current - detail::tie_tolerance(current)) {
                        visits = std::move(cand);
                        current = c;
                        improved = true;
                        break;
                    }
                }
            }
        }
    }
    return detail::finish(detail::to_sequence(visits), nodes);
}

inline Tour solve(const NodeSet& nodes, Solver solver) {
    switch (solver) {
        case Solver::exact: return solve_exact(nodes);
        case Solver::heuristic: return solve_heuristic(nodes);
        case Solver::brute: return solve_brute_force(nodes);
    }
    throw Error("unknown solver");
}

/// Debug dump: one "id x y" line per node, ordered by id.
inline void write_instance(std::ostream& out, const NodeSet& nodes) {
    char buf[96];
    for (const Node& node : nodes.nodes) {
        std::snprintf(buf, sizeof buf, "%d %.10g %.10g\n", node.id, node.position.x(), node.position.y());
        out << buf;
    }
}

inline NodeSet read_instance(std::istream& in) {
    NodeSet set;
    int id = 0;
    double x = 0.0, y = 0.0;
    while (in >> id >> x >> y) {
        if (id != static_cast<int>(set.nodes.size())) throw Error("instance ids must be contiguous from 0");
        set.nodes.push_back({id, {x, y}});
    }
    if (set.nodes.size() < 3 || set.nodes.size() % 2 == 0) throw Error("instance must hold 2n+1 nodes");
    return set;
}

}  // namespace scanpath
