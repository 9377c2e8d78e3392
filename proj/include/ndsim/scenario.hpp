#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndsim/geometry.hpp"
#include "ndsim/quadrature.hpp"
#include "ndsim/rng.hpp"

namespace ndsim {

struct ScenarioParams {
    double road_length = 1000.0;  // m
    double road_width = 60.0;     // m, must stay below comm_radius
    double comm_radius = 200.0;   // shared node/RSU communication and sensing radius
    double rsu_spacing = 600.0;   // distance between consecutive roadside units
    int node_count = 150;
    int beam_count = 12;
    double beam_width = 2.0 * std::numbers::pi / 12.0;
    std::uint64_t seed = 1;

    void validate() const {
        if (!(road_length > 0.0)) throw std::invalid_argument("scenario: road_length must be > 0");
        if (!(road_width > 0.0) || !(road_width < comm_radius))
            throw std::invalid_argument("scenario: need 0 < road_width < comm_radius");
        if (!(rsu_spacing > 0.0)) throw std::invalid_argument("scenario: rsu_spacing must be > 0");
        if (node_count < 1) throw std::invalid_argument("scenario: node_count must be >= 1");
        if (beam_count < 1) throw std::invalid_argument("scenario: beam_count must be >= 1");
        const double full = beam_count * beam_width;
        if (std::abs(full - 2.0 * std::numbers::pi) > 1e-9)
            throw std::invalid_argument("scenario: beam_count * beam_width must equal 2*pi");
    }
};

struct RoadScenario {
    ScenarioParams params;
    std::vector<Vec2> node_positions;
    std::vector<Vec2> rsu_positions;
    double node_density = 0.0;  // nodes per m^2
};

// RSUs sit on the road centerline at x = spacing/2 + n*spacing for every
// position that fits on the segment
inline std::vector<Vec2> rsu_layout(const ScenarioParams& p) {
    std::vector<Vec2> out;
    for (double x = 0.5 * p.rsu_spacing; x <= p.road_length; x += p.rsu_spacing)
        out.push_back({x, 0.5 * p.road_width});
    return out;
}

inline RoadScenario generate_scenario(const ScenarioParams& p) {
    p.validate();
    RoadScenario scn;
    scn.params = p;
    scn.rsu_positions = rsu_layout(p);
    scn.node_density = p.node_count / (p.road_length * p.road_width);
    scn.node_positions.reserve(p.node_count);
    SplitMix64 rng(mix_seed(p.seed, 0x5ce4a51ull));
    for (int i = 0; i < p.node_count; ++i) {
        const double x = rng.uniform(0.0, p.road_length);
        const double y = rng.uniform(0.0, p.road_width);
        scn.node_positions.push_back({x, y});
    }
    return scn;
}

// neighbor relation: distance <= comm_radius, boundary inclusive
inline std::vector<int> neighbors_of(const RoadScenario& scn, int i) {
    const double r2 = scn.params.comm_radius * scn.params.comm_radius;
    std::vector<int> out;
    for (int j = 0; j < static_cast<int>(scn.node_positions.size()); ++j)
        if (j != i && dist2(scn.node_positions[i], scn.node_positions[j]) <= r2) out.push_back(j);
    return out;
}

inline std::vector<std::vector<int>> all_neighbor_sets(const RoadScenario& scn) {
    const int n = static_cast<int>(scn.node_positions.size());
    const double r2 = scn.params.comm_radius * scn.params.comm_radius;
    std::vector<std::vector<int>> out(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (dist2(scn.node_positions[i], scn.node_positions[j]) <= r2) {
                out[i].push_back(j);
                out[j].push_back(i);
            }
    return out;
}

// mean neighbor count: 2*rho/d * int_0^d int_0^d sqrt(r^2 - (x - s1)^2) dx ds1.
// The model ignores clipping at the road ends, so empirical comparisons should
// restrict to nodes at least r away from both ends (see interior helpers below).
inline double expected_neighbor_count(double rho, double r, double d,
                                      const QuadratureBudget& budget = {}) {
    if (!(d > 0.0) || !(d < r)) throw std::invalid_argument("expected_neighbor_count: need 0 < d < r");
    auto inner = [&](double s1) {
        return integrate([&](double x) { return std::sqrt(r * r - (x - s1) * (x - s1)); }, 0.0, d,
                         budget, budget.tol * 1e-3);
    };
    const double I = integrate(inner, 0.0, d, budget);
    return 2.0 * rho / d * I;
}

// mean count of common neighbors between two nodes that are already neighbors.
// Outer two dimensions run over the lateral coordinates s1, s2 of the pair; the
// longitudinal separation s3 is uniform on [0, c] with c = sqrt(r^2-(s2-s1)^2),
// and the per-(x, s3) strip depth is max(0, c1(x)+c2(x)-s3).  The s3 layer has
// a closed form, leaving three nested quadratures.
inline double expected_common_neighbor_count(double rho, double r, double d,
                                             const QuadratureBudget& budget = {}) {
    if (!(d > 0.0) || !(d < r))
        throw std::invalid_argument("expected_common_neighbor_count: need 0 < d < r");
    auto over_s2 = [&](double s1) {
        auto over_x = [&](double s2) {
            const double c = std::sqrt(r * r - (s2 - s1) * (s2 - s1));
            auto strip = [&](double x) {
                const double g = std::sqrt(r * r - (x - s1) * (x - s1)) +
                                 std::sqrt(r * r - (x - s2) * (x - s2));
                // int_0^c max(0, g - s3) ds3
                return g >= c ? g * c - 0.5 * c * c : 0.5 * g * g;
            };
            return integrate(strip, 0.0, d, budget, budget.tol * 1e-4) / c;
        };
        return integrate(over_x, 0.0, d, budget, budget.tol * 1e-2);
    };
    const double I = integrate(over_s2, 0.0, d, budget);
    return rho / (d * d) * I;
}

// empirical counterparts over a generated scenario, restricted to nodes whose
// disk is not clipped by the road ends
inline bool is_interior(const RoadScenario& scn, int i) {
    const double x = scn.node_positions[i].x;
    return x >= scn.params.comm_radius && x <= scn.params.road_length - scn.params.comm_radius;
}

struct EmpiricalCounts {
    double neighbor_sum = 0.0;
    long long neighbor_nodes = 0;
    double common_sum = 0.0;
    long long common_pairs = 0;
};

inline EmpiricalCounts empirical_neighbor_counts(const RoadScenario& scn) {
    const auto nbrs = all_neighbor_sets(scn);
    const int n = static_cast<int>(nbrs.size());
    std::vector<char> in(n);
    for (int i = 0; i < n; ++i) in[i] = is_interior(scn, i);
    EmpiricalCounts out;
    std::vector<char> mark(n, 0);
    for (int i = 0; i < n; ++i) {
        if (!in[i]) continue;
        out.neighbor_sum += static_cast<double>(nbrs[i].size());
        out.neighbor_nodes += 1;
        for (int j : nbrs[i]) mark[j] = 1;
        for (int j : nbrs[i]) {
            if (j < i || !in[j]) continue;  // each unordered interior pair once
            int common = 0;
            for (int u : nbrs[j]) common += (u != i && mark[u]);
            out.common_sum += common;
            out.common_pairs += 1;
        }
        for (int j : nbrs[i]) mark[j] = 0;
    }
    return out;
}

}  // namespace ndsim
