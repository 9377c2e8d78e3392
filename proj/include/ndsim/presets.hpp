#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ndsim/analytics.hpp"
#include "ndsim/config.hpp"
#include "ndsim/csv.hpp"
#include "ndsim/experiment.hpp"
#include "ndsim/occupancy.hpp"
#include "ndsim/quadrature.hpp"
#include "ndsim/scenario.hpp"
#include "ndsim/sensing.hpp"
#include "ndsim/simulator.hpp"
#include "ndsim/stats.hpp"

namespace ndsim {

// Analytical inputs derived from a scenario: expected neighbor totals from
// the geometry integrals and beam statistics from the occupancy model.
struct TheoryInputs {
    double mean_neighbors = 0.0;
    double mean_common = 0.0;
    int neighbor_count = 0;  // rounded mean, the Markov-chain state-space size
    double alpha = 0.0;
    double mean_beam_neighbors = 0.0;
};

inline TheoryInputs theory_inputs(const ScenarioParams& sp) {
    sp.validate();
    TheoryInputs ti;
    const double rho = sp.node_count / (sp.road_length * sp.road_width);
    QuadratureBudget b1, b2;
    ti.mean_neighbors = expected_neighbor_count(rho, sp.comm_radius, sp.road_width, b1);
    ti.mean_common = expected_common_neighbor_count(rho, sp.comm_radius, sp.road_width, b2);
    ti.neighbor_count = std::max(1, static_cast<int>(std::llround(ti.mean_neighbors)));
    const QBeamStats st = expected_q_beams_auto(ti.neighbor_count, sp.beam_count);
    ti.alpha = st.alpha;
    ti.mean_beam_neighbors = st.mean_nonempty_occupancy;
    return ti;
}

inline ProtocolParams protocol_params(const TheoryInputs& ti, int channels, double transmit_prob,
                                      CollisionModel model = CollisionModel::DistinctOrdered) {
    ProtocolParams p;
    p.channel_count = channels;
    p.transmit_prob = transmit_prob;
    p.beam_pick_rate = ti.alpha;
    p.mean_beam_neighbors = ti.mean_beam_neighbors;
    p.collision = model;
    return p;
}

namespace detail {

inline Table make_table(std::vector<std::string> columns, const HarnessConfig& cfg) {
    Table t;
    t.columns = std::move(columns);
    t.config_hash = config_hash_hex(cfg);
    t.seed = cfg.sim.seed;
    return t;
}

inline double curve_at(const std::vector<double>& curve, int slot) {
    if (curve.empty()) return 0.0;
    const std::size_t i = std::min<std::size_t>(slot - 1, curve.size() - 1);
    return curve[i];
}

inline int last_target_index(const SimConfig& sc) {
    return static_cast<int>(sc.fraction_targets.size()) - 1;
}

inline double capped_node_fraction(const std::vector<TrialResult>& trials, int target_index) {
    std::int64_t capped = 0, total = 0;
    for (const auto& tr : trials)
        for (const auto& nd : tr.nodes) {
            ++total;
            if (nd.target_hit_slot.at(target_index) < 0) ++capped;
        }
    return total ? static_cast<double>(capped) / static_cast<double>(total) : 0.0;
}

inline double false_convergence_rate(const std::vector<TrialResult>& trials) {
    std::int64_t fc = 0, total = 0;
    for (const auto& tr : trials) {
        fc += tr.false_convergence_count;
        total += static_cast<std::int64_t>(tr.nodes.size());
    }
    return total ? static_cast<double>(fc) / static_cast<double>(total) : 0.0;
}

}  // namespace detail

inline void preset_defaults(const std::string& name, HarnessConfig& cfg) {
    cfg.sim.algorithm = Algorithm::GsimNd;
    cfg.sim.channel_count = 1;
    cfg.sim.transmit_prob = 0.5;
    cfg.sim.record_slot_series = true;
    if (name == "fig7") {
        cfg.sim.trials = 1000;
        cfg.sim.max_slots = 300;
    } else if (name == "fig8") {
        cfg.sim.trials = 1000;
        cfg.sim.max_slots = 2000;
    } else if (name == "fig9") {
        cfg.sim.trials = 500;
        cfg.sim.max_slots = 2000;
    } else if (name == "fig10") {
        cfg.sim.trials = 1000;
        cfg.sim.max_slots = 600;
    } else if (name == "fig11") {
        cfg.sim.trials = 1000;
        cfg.sim.max_slots = 600;
    } else if (name == "fig12") {
        cfg.sim.trials = 1;
    } else if (name == "fig13") {
        cfg.sim.trials = 200;
        cfg.sim.max_slots = 600;
    } else if (name == "fig14") {
        cfg.sim.trials = 200;
        cfg.sim.max_slots = 20000;
        cfg.sim.record_slot_series = false;
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
}

namespace detail {

inline void preset_fig7(const HarnessConfig& cfg, int jobs, std::vector<std::string>& files) {
    const TheoryInputs ti = theory_inputs(cfg.scenario);
    const int horizon = cfg.sim.max_slots;

    Table theory = make_table({"k", "slot", "fraction"}, cfg);
    Table sim = make_table({"k", "slot", "fraction"}, cfg);
    for (int k : {1, 3}) {
        const auto sp = slot_probabilities(protocol_params(ti, k, cfg.sim.transmit_prob));
        const auto gc = gossip_curves(sp, ti.mean_common);
        const auto ev = discovery_evolution(ti.neighbor_count, gc, horizon);
        for (int t = 1; t <= horizon; ++t)
            theory.add_row({std::int64_t(k), std::int64_t(t),
                            ev.mean_discovered[t - 1] / ti.neighbor_count});

        SimConfig sc = cfg.sim;
        sc.channel_count = k;
        sc.seed = mix_seed(cfg.sim.seed, 0xf160701ull, static_cast<std::uint64_t>(k));
        const auto trials = run_trials(cfg.scenario, sc, jobs);
        const auto curve = pair_fraction_curve(trials);
        for (int t = 1; t <= horizon; ++t)
            sim.add_row({std::int64_t(k), std::int64_t(t), curve_at(curve, t)});
    }
    files.push_back(write_table(theory, cfg.output.dir, "fig7_theory", cfg.output.format));
    files.push_back(write_table(sim, cfg.output.dir, "fig7_sim", cfg.output.format));
}

inline void preset_fig8(const HarnessConfig& cfg, int jobs, std::vector<std::string>& files) {
    const TheoryInputs ti = theory_inputs(cfg.scenario);
    Table theory = make_table({"k", "fraction", "target_count", "lower_bound_slots",
                               "upper_bound_slots"},
                              cfg);
    Table sim = make_table({"k", "fraction", "network_mean_slots", "network_half_width",
                            "node_mean_slots", "node_half_width"},
                           cfg);
    for (int k : {1, 3}) {
        const auto sp = slot_probabilities(protocol_params(ti, k, cfg.sim.transmit_prob));
        const auto gc = gossip_curves(sp, ti.mean_common);
        for (double f : cfg.sim.fraction_targets) {
            const int n = std::max(1, static_cast<int>(std::ceil(f * ti.neighbor_count)));
            theory.add_row({std::int64_t(k), f, std::int64_t(n), lower_bound_slots(n, gc),
                            upper_bound_slots(n, sp)});
        }

        SimConfig sc = cfg.sim;
        sc.channel_count = k;
        sc.seed = mix_seed(cfg.sim.seed, 0xf160801ull, static_cast<std::uint64_t>(k));
        const auto trials = run_trials(cfg.scenario, sc, jobs);
        for (int gi = 0; gi < static_cast<int>(sc.fraction_targets.size()); ++gi) {
            const auto net = mean_ci(network_slots_to_target(trials, gi, sc.max_slots));
            const auto node = mean_ci(node_slots_to_target(trials, gi, sc.max_slots));
            sim.add_row({std::int64_t(k), sc.fraction_targets[gi], net.mean, net.half_width,
                         node.mean, node.half_width});
        }
    }
    files.push_back(write_table(theory, cfg.output.dir, "fig8_theory", cfg.output.format));
    files.push_back(write_table(sim, cfg.output.dir, "fig8_sim", cfg.output.format));
}

inline void preset_fig9(const HarnessConfig& cfg, int jobs, std::vector<std::string>& files) {
    const TheoryInputs ti = theory_inputs(cfg.scenario);
    const int horizon = cfg.sim.max_slots;

    Table theory = make_table({"k", "slot", "fraction"}, cfg);
    for (int k : {1, 3, 5}) {
        const auto sp = slot_probabilities(protocol_params(ti, k, cfg.sim.transmit_prob));
        const auto gc = gossip_curves(sp, ti.mean_common);
        const auto ev = discovery_evolution(ti.neighbor_count, gc, horizon);
        for (int t = 1; t <= horizon; ++t)
            theory.add_row({std::int64_t(k), std::int64_t(t),
                            ev.mean_discovered[t - 1] / ti.neighbor_count});
    }

    struct Arm {
        Algorithm algorithm;
        int k;
    };
    const std::vector<Arm> arms = {{Algorithm::GsimNd, 1}, {Algorithm::GsimNd, 3},
                                   {Algorithm::GsimNd, 5}, {Algorithm::Gossip, 1},
                                   {Algorithm::Gossip, 3}, {Algorithm::Gossip, 5},
                                   {Algorithm::Cra, 1},    {Algorithm::Sba, 1}};
    Table sim = make_table({"algorithm", "k", "slot", "fraction"}, cfg);
    Table summary = make_table({"algorithm", "k", "node_mean_slots", "node_half_width",
                                "network_mean_slots", "network_half_width", "capped_node_fraction",
                                "false_convergence_rate"},
                               cfg);
    const int li = last_target_index(cfg.sim);
    int arm_id = 0;
    for (const auto& arm : arms) {
        SimConfig sc = cfg.sim;
        sc.algorithm = arm.algorithm;
        sc.channel_count = arm.k;
        sc.seed = mix_seed(cfg.sim.seed, 0xf160901ull, static_cast<std::uint64_t>(arm_id++));
        const auto trials = run_trials(cfg.scenario, sc, jobs);
        const auto curve = pair_fraction_curve(trials);
        for (int t = 1; t <= horizon; ++t)
            sim.add_row({std::string(algorithm_name(arm.algorithm)), std::int64_t(arm.k),
                         std::int64_t(t), curve_at(curve, t)});
        const auto node = mean_ci(node_slots_to_target(trials, li, sc.max_slots));
        const auto net = mean_ci(network_slots_to_target(trials, li, sc.max_slots));
        summary.add_row({std::string(algorithm_name(arm.algorithm)), std::int64_t(arm.k), node.mean,
                         node.half_width, net.mean, net.half_width,
                         capped_node_fraction(trials, li), false_convergence_rate(trials)});
    }
    files.push_back(write_table(theory, cfg.output.dir, "fig9_theory", cfg.output.format));
    files.push_back(write_table(sim, cfg.output.dir, "fig9_sim", cfg.output.format));
    files.push_back(write_table(summary, cfg.output.dir, "fig9_summary", cfg.output.format));
}

inline void preset_fig10(const HarnessConfig& cfg, int jobs, std::vector<std::string>& files) {
    const TheoryInputs ti = theory_inputs(cfg.scenario);
    const auto sp = slot_probabilities(protocol_params(ti, cfg.sim.channel_count, cfg.sim.transmit_prob));
    const auto gc = gossip_curves(sp, ti.mean_common);

    Table theory = make_table({"slot", "direct", "combined"}, cfg);
    for (int t = 1; t <= cfg.sim.max_slots; ++t)
        theory.add_row({std::int64_t(t), sp.direct_discovery_prob,
                        gc.combined_total[gc.slot_index(t)]});

    const auto trials = run_trials(cfg.scenario, cfg.sim, jobs);
    const auto est = estimate_discovery_rates(trials);
    Table sim = make_table({"slot", "direct", "direct_lo", "direct_hi", "combined", "combined_lo",
                            "combined_hi", "exposure"},
                           cfg);
    for (const auto& e : est)
        sim.add_row({std::int64_t(e.slot), e.direct.p, e.direct.lo, e.direct.hi, e.combined.p,
                     e.combined.lo, e.combined.hi, std::int64_t(e.direct.exposure)});
    files.push_back(write_table(theory, cfg.output.dir, "fig10_theory", cfg.output.format));
    files.push_back(write_table(sim, cfg.output.dir, "fig10_sim", cfg.output.format));
}

inline void preset_fig11(const HarnessConfig& cfg, int jobs, std::vector<std::string>& files) {
    const TheoryInputs ti = theory_inputs(cfg.scenario);
    const std::vector<double> grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

    // pooled over the whole run: exposure-weighted, so the direct column is an
    // unbiased estimate of the stationary per-pair slot rate
    Table theory = make_table({"p_t", "direct", "combined_limit"}, cfg);
    Table sim = make_table({"p_t", "direct", "direct_lo", "direct_hi", "combined", "combined_lo",
                            "combined_hi"},
                           cfg);
    int idx = 0;
    for (double pt : grid) {
        const auto sp = slot_probabilities(protocol_params(ti, cfg.sim.channel_count, pt));
        const auto gc = gossip_curves(sp, ti.mean_common);
        theory.add_row({pt, sp.direct_discovery_prob, gc.combined_total_limit()});

        SimConfig sc = cfg.sim;
        sc.transmit_prob = pt;
        sc.seed = mix_seed(cfg.sim.seed, 0xf161101ull, static_cast<std::uint64_t>(idx++));
        const auto trials = run_trials(cfg.scenario, sc, jobs);
        const auto wr = window_rates(trials, 1, sc.max_slots);
        sim.add_row({pt, wr.direct.p, wr.direct.lo, wr.direct.hi, wr.combined.p, wr.combined.lo,
                     wr.combined.hi});
    }
    files.push_back(write_table(theory, cfg.output.dir, "fig11_theory", cfg.output.format));
    files.push_back(write_table(sim, cfg.output.dir, "fig11_sim", cfg.output.format));
}

inline void preset_fig12(const HarnessConfig& cfg, int, std::vector<std::string>& files) {
    Table theory = make_table({"node_total", "mean_neighbors", "neighbor_count", "alpha",
                               "mean_beam_neighbors", "empty_share", "q1_share", "q2_share",
                               "q3_share", "q4_share", "q5_share", "q6_share", "q7_share",
                               "q8_share"},
                              cfg);
    for (int m = 50; m <= 1000; m += 50) {
        ScenarioParams sp = cfg.scenario;
        sp.node_count = m;
        const TheoryInputs ti = theory_inputs(sp);
        const QBeamStats st = expected_q_beams_auto(ti.neighbor_count, sp.beam_count);
        std::vector<Cell> row = {std::int64_t(m), ti.mean_neighbors,
                                 std::int64_t(ti.neighbor_count), st.alpha,
                                 ti.mean_beam_neighbors};
        for (int q = 0; q <= 8; ++q) {
            const double eq = q < static_cast<int>(st.expected_beams.size())
                                  ? st.expected_beams[q]
                                  : 0.0;
            row.push_back(eq / sp.beam_count);
        }
        theory.add_row(std::move(row));
    }
    files.push_back(write_table(theory, cfg.output.dir, "fig12_theory", cfg.output.format));
}

inline void preset_fig13(const HarnessConfig& cfg, int jobs, std::vector<std::string>& files) {
    const std::vector<int> grid = {50, 100, 150, 200, 300, 500, 700, 1000};

    Table theory = make_table({"node_total", "direct", "combined_limit"}, cfg);
    Table sim = make_table({"node_total", "direct", "direct_lo", "direct_hi", "combined",
                            "combined_lo", "combined_hi"},
                           cfg);
    int idx = 0;
    for (int m : grid) {
        ScenarioParams sp_m = cfg.scenario;
        sp_m.node_count = m;
        const TheoryInputs ti = theory_inputs(sp_m);
        const auto sp = slot_probabilities(protocol_params(ti, cfg.sim.channel_count,
                                                           cfg.sim.transmit_prob));
        const auto gc = gossip_curves(sp, ti.mean_common);
        theory.add_row({std::int64_t(m), sp.direct_discovery_prob, gc.combined_total_limit()});

        SimConfig sc = cfg.sim;
        sc.seed = mix_seed(cfg.sim.seed, 0xf161301ull, static_cast<std::uint64_t>(idx++));
        const auto trials = run_trials(sp_m, sc, jobs);
        const auto wr = window_rates(trials, 1, sc.max_slots);
        sim.add_row({std::int64_t(m), wr.direct.p, wr.direct.lo, wr.direct.hi, wr.combined.p,
                     wr.combined.lo, wr.combined.hi});
    }
    files.push_back(write_table(theory, cfg.output.dir, "fig13_theory", cfg.output.format));
    files.push_back(write_table(sim, cfg.output.dir, "fig13_sim", cfg.output.format));
}

inline void preset_fig14(const HarnessConfig& cfg, int jobs, std::vector<std::string>& files) {
    struct Arm {
        Algorithm algorithm;
        int k;
    };
    const std::vector<Arm> arms = {{Algorithm::GsimNd, 1},
                                   {Algorithm::Gossip, 1},
                                   {Algorithm::Cra, 1},
                                   {Algorithm::Sba, 1}};
    const std::vector<int> grid = {50, 150, 1000};
    const int li = last_target_index(cfg.sim);

    Table theory = make_table({"node_total", "lower_bound_slots", "upper_bound_slots"}, cfg);
    Table sim = make_table({"node_total", "algorithm", "k", "node_mean_slots", "node_half_width",
                            "network_mean_slots", "network_half_width", "capped_node_fraction",
                            "false_convergence_rate"},
                           cfg);
    for (int m : grid) {
        ScenarioParams sp_m = cfg.scenario;
        sp_m.node_count = m;
        const TheoryInputs ti = theory_inputs(sp_m);
        const auto sp = slot_probabilities(protocol_params(ti, 1, cfg.sim.transmit_prob));
        const auto gc = gossip_curves(sp, ti.mean_common);
        const double f = cfg.sim.fraction_targets[li];
        const int n = std::max(1, static_cast<int>(std::ceil(f * ti.neighbor_count)));
        theory.add_row({std::int64_t(m), lower_bound_slots(n, gc), upper_bound_slots(n, sp)});

        int arm_id = 0;
        for (const auto& arm : arms) {
            SimConfig sc = cfg.sim;
            sc.algorithm = arm.algorithm;
            sc.channel_count = arm.k;
            sc.record_slot_series = false;
            sc.seed = mix_seed(cfg.sim.seed, 0xf161401ull + static_cast<std::uint64_t>(m),
                               static_cast<std::uint64_t>(arm_id++));
            const auto trials = run_trials(sp_m, sc, jobs);
            const auto node = mean_ci(node_slots_to_target(trials, li, sc.max_slots));
            const auto net = mean_ci(network_slots_to_target(trials, li, sc.max_slots));
            sim.add_row({std::int64_t(m), std::string(algorithm_name(arm.algorithm)),
                         std::int64_t(arm.k), node.mean, node.half_width, net.mean, net.half_width,
                         capped_node_fraction(trials, li), false_convergence_rate(trials)});
        }
    }
    files.push_back(write_table(theory, cfg.output.dir, "fig14_theory", cfg.output.format));
    files.push_back(write_table(sim, cfg.output.dir, "fig14_sim", cfg.output.format));
}

}  // namespace detail

inline std::vector<std::string> run_preset(const std::string& name,
                                           const std::vector<std::string>& overrides, int jobs) {
    HarnessConfig cfg;
    preset_defaults(name, cfg);
    apply_overrides(cfg, overrides);
    std::vector<std::string> files;
    if (name == "fig7") detail::preset_fig7(cfg, jobs, files);
    else if (name == "fig8") detail::preset_fig8(cfg, jobs, files);
    else if (name == "fig9") detail::preset_fig9(cfg, jobs, files);
    else if (name == "fig10") detail::preset_fig10(cfg, jobs, files);
    else if (name == "fig11") detail::preset_fig11(cfg, jobs, files);
    else if (name == "fig12") detail::preset_fig12(cfg, jobs, files);
    else if (name == "fig13") detail::preset_fig13(cfg, jobs, files);
    else if (name == "fig14") detail::preset_fig14(cfg, jobs, files);
    return files;
}

// generic sweep: one row per (value, trial) plus a mean/CI aggregate per value
inline std::vector<std::string> run_sweep(const HarnessConfig& cfg, int jobs) {
    if (!cfg.sweep.active || cfg.sweep.parameter.empty() || cfg.sweep.values.empty())
        throw ConfigError({"sweep requires sweep.parameter and a non-empty sweep.values list"});
    const int li = detail::last_target_index(cfg.sim);

    Table per_trial = detail::make_table({"value", "trial", "node_mean_slots", "network_slots",
                                          "final_mean_fraction", "false_convergence_count",
                                          "slots_run", "all_converged"},
                                         cfg);
    Table aggregate = detail::make_table({"value", "trials", "node_mean_slots", "node_half_width",
                                          "network_mean_slots", "network_half_width"},
                                         cfg);
    int idx = 0;
    for (const auto& value : cfg.sweep.values) {
        ScenarioParams sp = cfg.scenario;
        SimConfig sc = cfg.sim;
        if (cfg.sweep.parameter == "transmit_prob") sc.transmit_prob = std::stod(value);
        else if (cfg.sweep.parameter == "channel_count") sc.channel_count = std::stoi(value);
        else if (cfg.sweep.parameter == "node_count") sp.node_count = std::stoi(value);
        else if (cfg.sweep.parameter == "algorithm") {
            if (!detail::parse_algorithm(value, sc.algorithm))
                throw ConfigError({"bad algorithm in sweep: " + value});
        } else {
            throw ConfigError({"unsupported sweep parameter: " + cfg.sweep.parameter});
        }
        sc.seed = mix_seed(cfg.sim.seed, 0x5bee9ull, static_cast<std::uint64_t>(idx++));
        const auto trials = run_trials(sp, sc, jobs);
        const auto node = node_slots_to_target(trials, li, sc.max_slots);
        const auto net = network_slots_to_target(trials, li, sc.max_slots);
        for (std::size_t i = 0; i < trials.size(); ++i) {
            double frac_sum = 0.0;
            for (const auto& nd : trials[i].nodes)
                frac_sum += nd.true_count == 0
                                ? 1.0
                                : static_cast<double>(nd.discovered_count) / nd.true_count;
            per_trial.add_row({value, std::int64_t(i), node[i], net[i],
                               frac_sum / trials[i].nodes.size(),
                               std::int64_t(trials[i].false_convergence_count),
                               std::int64_t(trials[i].slots_run),
                               std::int64_t(trials[i].all_converged ? 1 : 0)});
        }
        const auto node_ci = mean_ci(node);
        const auto net_ci = mean_ci(net);
        aggregate.add_row({value, std::int64_t(trials.size()), node_ci.mean, node_ci.half_width,
                           net_ci.mean, net_ci.half_width});
    }
    std::vector<std::string> files;
    files.push_back(write_table(per_trial, cfg.output.dir, "sweep_trials", cfg.output.format));
    files.push_back(write_table(aggregate, cfg.output.dir, "sweep_aggregate", cfg.output.format));
    return files;
}

// theory-only evaluation of the configured operating point
inline std::vector<std::string> run_analyze(const HarnessConfig& cfg) {
    const TheoryInputs ti = theory_inputs(cfg.scenario);
    const auto sp = slot_probabilities(protocol_params(ti, cfg.sim.channel_count,
                                                       cfg.sim.transmit_prob));
    const auto gc = gossip_curves(sp, ti.mean_common);

    Table params = detail::make_table({"node_total", "mean_neighbors", "neighbor_count",
                                       "mean_common", "alpha", "mean_beam_neighbors",
                                       "extra_member_prob", "direct", "combined_limit",
                                       "fixed_point_slot"},
                                      cfg);
    params.add_row({std::int64_t(cfg.scenario.node_count), ti.mean_neighbors,
                    std::int64_t(ti.neighbor_count), ti.mean_common, ti.alpha,
                    ti.mean_beam_neighbors, sp.extra_member_prob, sp.direct_discovery_prob,
                    gc.combined_total_limit(), std::int64_t(gc.fixed_point_slot)});

    const int horizon = std::min(cfg.sim.max_slots, 5000);
    const auto ev = discovery_evolution(ti.neighbor_count, gc, horizon);
    Table curves = detail::make_table({"slot", "combined", "mean_discovered", "fraction"}, cfg);
    for (int t = 1; t <= horizon; ++t) {
        curves.add_row({std::int64_t(t), gc.combined_total[gc.slot_index(t)],
                        ev.mean_discovered[t - 1], ev.mean_discovered[t - 1] / ti.neighbor_count});
        if (ev.mean_discovered[t - 1] >= 0.9999 * ti.neighbor_count) break;
    }

    Table bounds = detail::make_table({"fraction", "target_count", "lower_bound_slots",
                                       "upper_bound_slots"},
                                      cfg);
    for (double f : cfg.sim.fraction_targets) {
        const int n = std::max(1, static_cast<int>(std::ceil(f * ti.neighbor_count)));
        bounds.add_row({f, std::int64_t(n), lower_bound_slots(n, gc), upper_bound_slots(n, sp)});
    }

    std::vector<std::string> files;
    files.push_back(write_table(params, cfg.output.dir, "analyze_params", cfg.output.format));
    files.push_back(write_table(curves, cfg.output.dir, "analyze_curves", cfg.output.format));
    files.push_back(write_table(bounds, cfg.output.dir, "analyze_bounds", cfg.output.format));
    return files;
}

// direct simulation of the configured experiment with per-trial outputs
inline std::vector<std::string> run_simulate(const HarnessConfig& cfg, int jobs) {
    const auto trials = run_trials(cfg.scenario, cfg.sim, jobs);

    Table summary = detail::make_table({"trial", "node", "convergence_slot", "discovered_count",
                                        "true_count", "sensing_completeness"},
                                       cfg);
    for (std::size_t i = 0; i < trials.size(); ++i)
        for (std::size_t v = 0; v < trials[i].nodes.size(); ++v) {
            const auto& nd = trials[i].nodes[v];
            summary.add_row({std::int64_t(i), std::int64_t(v), std::int64_t(nd.convergence_slot),
                             std::int64_t(nd.discovered_count), std::int64_t(nd.true_count),
                             std::string(nd.has_sensing
                                             ? (nd.sensing_complete ? "complete" : "incomplete")
                                             : "none")});
        }

    std::vector<std::string> files;
    files.push_back(write_table(summary, cfg.output.dir, "sim_summary", cfg.output.format));

    if (cfg.sim.record_slot_series) {
        Table series = detail::make_table({"trial", "slot", "fraction_discovered",
                                           "new_discovery_rate"},
                                          cfg);
        for (std::size_t i = 0; i < trials.size(); ++i) {
            const auto& tr = trials[i];
            for (std::size_t t = 0; t < tr.slot_mean_fraction.size(); ++t) {
                const double rate = tr.pairs_at_risk[t] > 0
                                        ? static_cast<double>(tr.combined_new[t]) /
                                              static_cast<double>(tr.pairs_at_risk[t])
                                        : 0.0;
                series.add_row({std::int64_t(i), std::int64_t(t + 1), tr.slot_mean_fraction[t],
                                rate});
            }
        }
        files.push_back(write_table(series, cfg.output.dir, "sim_series", cfg.output.format));
    }
    return files;
}

// positions and sensing status of one generated scenario
inline std::vector<std::string> run_scenario_gen(const HarnessConfig& cfg) {
    const RoadScenario scn = generate_scenario(cfg.scenario);
    Table nodes = detail::make_table({"node", "x", "y", "neighbor_count", "sensing"}, cfg);
    for (int i = 0; i < cfg.scenario.node_count; ++i) {
        const auto nbrs = neighbors_of(scn, i);
        const auto report = make_sensing_report(scn, i, nbrs, cfg.sim.completeness);
        nodes.add_row({std::int64_t(i), scn.node_positions[i].x, scn.node_positions[i].y,
                       std::int64_t(nbrs.size()),
                       std::string(report ? (report->complete ? "complete" : "incomplete")
                                          : "none")});
    }
    Table rsus = detail::make_table({"rsu", "x", "y"}, cfg);
    for (std::size_t i = 0; i < scn.rsu_positions.size(); ++i)
        rsus.add_row({std::int64_t(i), scn.rsu_positions[i].x, scn.rsu_positions[i].y});

    std::vector<std::string> files;
    files.push_back(write_table(nodes, cfg.output.dir, "scenario_nodes", cfg.output.format));
    files.push_back(write_table(rsus, cfg.output.dir, "scenario_rsus", cfg.output.format));
    return files;
}

}  // namespace ndsim
