#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ndsim/analytics.hpp"
#include "ndsim/experiment.hpp"
#include "ndsim/occupancy.hpp"
#include "ndsim/presets.hpp"
#include "ndsim/scenario.hpp"
#include "ndsim/simulator.hpp"
#include "ndsim/stats.hpp"

namespace ndsim {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

template <typename... Parts>
inline std::string join_detail(Parts&&... parts) {
    std::ostringstream os;
    os.precision(6);
    (os << ... << parts);
    return os.str();
}

inline CheckResult check_occupancy_enumeration() {
    double worst = 0.0;
    for (int beams = 2; beams <= 4; ++beams)
        for (int nodes = 1; nodes <= 8; ++nodes) {
            const auto brute = brute_force_q_beams(nodes, beams);
            const auto exact = expected_q_beams(nodes, beams);
            for (std::size_t q = 0; q < brute.expected_beams.size(); ++q)
                worst = std::max(worst,
                                 std::abs(brute.expected_beams[q] - exact.expected_beams[q]));
            worst = std::max(worst, std::abs(brute.alpha - exact.alpha));
        }
    return {"occupancy enumeration agreement", worst <= 1e-12,
            join_detail("max |delta| = ", worst)};
}

inline CheckResult check_occupancy_conservation() {
    const auto st = expected_q_beams(60, 12);
    double total = 0.0, weighted = 0.0;
    for (std::size_t q = 0; q < st.expected_beams.size(); ++q) {
        total += st.expected_beams[q];
        weighted += static_cast<double>(q) * st.expected_beams[q];
    }
    const double d1 = std::abs(total - 12.0), d2 = std::abs(weighted - 60.0);
    return {"occupancy conservation", d1 <= 1e-9 && d2 <= 1e-9,
            join_detail("|sum-B| = ", d1, ", |weighted-N| = ", d2)};
}

inline CheckResult check_evolution_row_sums() {
    ProtocolParams p;
    p.channel_count = 3;
    p.transmit_prob = 0.5;
    p.beam_pick_rate = 0.0838;
    p.mean_beam_neighbors = 5.03;
    const auto sp = slot_probabilities(p);
    const auto gc = gossip_curves(sp, 44.0);
    const auto ev = discovery_evolution(30, gc, 200, true);
    double worst = 0.0;
    for (const auto& dist : ev.distributions) {
        double sum = 0.0;
        for (double v : dist) sum += v;
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return {"evolution rows stay stochastic", worst <= 1e-9,
            join_detail("max |row sum - 1| = ", worst)};
}

inline CheckResult check_geometry_quadrature() {
    ScenarioParams sp;  // defaults: highway segment, 150 nodes
    const double rho = sp.node_count / (sp.road_length * sp.road_width);
    QuadratureBudget budget;
    const double expect = expected_neighbor_count(rho, sp.comm_radius, sp.road_width, budget);
    double sum = 0.0;
    long long count = 0;
    for (int s = 0; s < 30; ++s) {
        ScenarioParams sp_s = sp;
        sp_s.seed = mix_seed(9000, static_cast<std::uint64_t>(s));
        const auto counts = empirical_neighbor_counts(generate_scenario(sp_s));
        sum += counts.neighbor_sum;
        count += counts.neighbor_nodes;
    }
    const double measured = sum / count;
    const double rel = std::abs(measured - expect) / expect;
    return {"geometry quadrature vs sampling", rel <= 0.05,
            join_detail("expected ", expect, ", measured ", measured, ", rel err ", rel)};
}

inline RoadScenario two_node_scenario() {
    ScenarioParams p;
    p.road_length = 1000.0;
    p.road_width = 60.0;
    p.comm_radius = 200.0;
    p.rsu_spacing = 600.0;
    p.node_count = 2;
    p.beam_count = 1;
    p.beam_width = 2.0 * std::numbers::pi;
    RoadScenario scn;
    scn.params = p;
    scn.node_positions = {{100.0, 20.0}, {150.0, 40.0}};
    return scn;
}

inline CheckResult check_two_node_handshake() {
    SimConfig cfg;
    cfg.algorithm = Algorithm::Cra;
    cfg.channel_count = 1;
    cfg.transmit_prob = 0.5;
    cfg.max_slots = 20000;
    cfg.warmup_slots = 20000;
    cfg.seed = 4242;
    const auto res = run_trial(two_node_scenario(), cfg, cfg.seed);
    const double rate = static_cast<double>(res.reception_event_count) / 2.0 / res.slots_run;
    const double expect = 2.0 * cfg.transmit_prob * (1.0 - cfg.transmit_prob);
    const double se = std::sqrt(expect * (1.0 - expect) / res.slots_run);
    const double gap = std::abs(rate - expect);
    return {"two-node handshake frequency", gap <= 3.0 * se,
            join_detail("rate ", rate, ", expected ", expect, ", |gap| = ", gap, " vs 3se = ",
                        3.0 * se)};
}

inline CheckResult check_beam_policy_uniformity() {
    const std::vector<int> menu = {1, 4, 6, 9, 11};
    SplitMix64 rng(777);
    std::vector<long> hits(menu.size(), 0);
    const long draws = 100000;
    for (long d = 0; d < draws; ++d) {
        const int b = beam_policy(Algorithm::GsimNd, menu, 12, 0, rng);
        for (std::size_t i = 0; i < menu.size(); ++i)
            if (menu[i] == b) ++hits[i];
    }
    const double expect = static_cast<double>(draws) / menu.size();
    double chi2 = 0.0;
    for (long h : hits) chi2 += (h - expect) * (h - expect) / expect;
    return {"beam policy uniform over menu", chi2 <= 13.28,
            join_detail("chi^2(4) = ", chi2, " vs 13.28")};
}

inline CheckResult check_estimator_split() {
    ScenarioParams sp;
    sp.node_count = 50;
    SimConfig cfg;
    cfg.algorithm = Algorithm::GsimNd;
    cfg.trials = 100;
    cfg.max_slots = 400;
    auto node_mean = [&](std::uint64_t seed) {
        SimConfig c = cfg;
        c.seed = seed;
        const auto trials = run_trials(sp, c, 1);
        const auto v = node_slots_to_target(trials, static_cast<int>(c.fraction_targets.size()) - 1,
                                            c.max_slots);
        return mean_ci(v);
    };
    const auto a = node_mean(111), b = node_mean(222);
    const double se = std::sqrt(a.half_width * a.half_width + b.half_width * b.half_width) / 1.96;
    const double gap = std::abs(a.mean - b.mean);
    return {"estimator split consistency", gap <= 3.0 * 1.96 * se,
            join_detail("means ", a.mean, " vs ", b.mean, ", |gap| = ", gap)};
}

inline CheckResult check_occupancy_sampling() {
    const auto exact = expected_q_beams(20, 12);
    const auto mc = mc_q_beams(20, 12, 200000, 55);
    double worst = 0.0;
    for (std::size_t q = 0; q < exact.expected_beams.size(); ++q)
        worst = std::max(worst, std::abs(exact.expected_beams[q] - mc.expected_beams[q]));
    return {"occupancy sampling sanity", worst <= 0.02,
            join_detail("max |delta| = ", worst)};
}

inline CheckResult check_mini_sandwich() {
    ScenarioParams spar;
    const TheoryInputs ti = theory_inputs(spar);
    const auto sp = slot_probabilities(protocol_params(ti, 1, 0.5));
    const auto gc = gossip_curves(sp, ti.mean_common);
    const int n = std::max(1, static_cast<int>(std::ceil(0.99 * ti.neighbor_count)));
    const double lo = lower_bound_slots(n, gc), hi = upper_bound_slots(n, sp);

    SimConfig cfg;
    cfg.algorithm = Algorithm::GsimNd;
    cfg.trials = 100;
    cfg.max_slots = 2000;
    cfg.seed = 31;
    cfg.record_slot_series = false;
    const auto trials = run_trials(spar, cfg, 1);
    const int li = static_cast<int>(cfg.fraction_targets.size()) - 1;
    const auto net = mean_ci(network_slots_to_target(trials, li, cfg.max_slots));
    return {"analytic bounds sandwich at 0.99", lo <= net.mean && net.mean <= hi,
            join_detail("lower ", lo, " <= measured ", net.mean, " <= upper ", hi)};
}

}  // namespace detail

inline ValidationReport run_validation(const std::string& level) {
    if (level != "fast" && level != "full")
        throw std::invalid_argument("validation level must be 'fast' or 'full'");
    ValidationReport rep;
    rep.checks.push_back(detail::check_occupancy_enumeration());
    rep.checks.push_back(detail::check_occupancy_conservation());
    rep.checks.push_back(detail::check_evolution_row_sums());
    rep.checks.push_back(detail::check_geometry_quadrature());
    rep.checks.push_back(detail::check_two_node_handshake());
    if (level == "full") {
        rep.checks.push_back(detail::check_beam_policy_uniformity());
        rep.checks.push_back(detail::check_estimator_split());
        rep.checks.push_back(detail::check_occupancy_sampling());
        rep.checks.push_back(detail::check_mini_sandwich());
    }
    return rep;
}

}  // namespace ndsim
