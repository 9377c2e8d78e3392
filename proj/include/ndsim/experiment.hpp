#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ndsim/rng.hpp"
#include "ndsim/scenario.hpp"
#include "ndsim/simulator.hpp"
#include "ndsim/stats.hpp"

namespace ndsim {

// Trials are independent: trial i draws its scenario (when resampling) and its
// protocol stream from counter-derived seeds, so results are identical for any
// worker count and are always returned in trial order.
inline std::vector<TrialResult> run_trials(const ScenarioParams& base, const SimConfig& cfg,
                                           int jobs = 1, bool resample_scenario = true) {
    cfg.validate();
    base.validate();
    const int n = cfg.trials;
    std::vector<TrialResult> out(n);
    if (jobs < 1) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    jobs = std::min(jobs, n);

    RoadScenario shared;
    if (!resample_scenario) shared = generate_scenario(base);

    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};

    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                if (resample_scenario) {
                    ScenarioParams p = base;
                    p.seed = mix_seed(cfg.seed, 0x5ce4a10ull, static_cast<std::uint64_t>(i));
                    out[i] = run_trial(generate_scenario(p), cfg,
                                       mix_seed(cfg.seed, 0x7a1a1ull, static_cast<std::uint64_t>(i)));
                } else {
                    out[i] = run_trial(shared, cfg,
                                       mix_seed(cfg.seed, 0x7a1a1ull, static_cast<std::uint64_t>(i)));
                }
            } catch (...) {
                bool expected = false;
                if (failed.compare_exchange_strong(expected, true)) first_error = std::current_exception();
                return;
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) std::rethrow_exception(first_error);
    return out;
}

// Mean over trials of the per-slot network fraction; trials that ended early
// (all nodes converged) hold their final frozen value afterwards.
inline std::vector<double> mean_fraction_curve(const std::vector<TrialResult>& trials) {
    if (trials.empty()) throw std::invalid_argument("mean_fraction_curve: no trials");
    std::size_t horizon = 0;
    for (const auto& tr : trials) {
        if (tr.slot_mean_fraction.empty())
            throw std::invalid_argument("mean_fraction_curve: trial lacks slot series");
        horizon = std::max(horizon, tr.slot_mean_fraction.size());
    }
    std::vector<double> curve(horizon, 0.0);
    for (const auto& tr : trials)
        for (std::size_t t = 0; t < horizon; ++t)
            curve[t] += t < tr.slot_mean_fraction.size() ? tr.slot_mean_fraction[t]
                                                         : tr.slot_mean_fraction.back();
    for (auto& v : curve) v /= static_cast<double>(trials.size());
    return curve;
}

// Pair-weighted variant: cumulative discovered directed pairs over all true
// directed pairs.  This weights every neighbor relation once, so small
// clipped neighborhoods at the road ends do not dominate the early curve the
// way they do in the per-node average.
inline std::vector<double> pair_fraction_curve(const std::vector<TrialResult>& trials) {
    if (trials.empty()) throw std::invalid_argument("pair_fraction_curve: no trials");
    std::size_t horizon = 0;
    for (const auto& tr : trials) {
        if (tr.combined_new.empty() && tr.slots_run > 0)
            throw std::invalid_argument("pair_fraction_curve: trial lacks slot series");
        horizon = std::max(horizon, tr.combined_new.size());
    }
    std::vector<double> curve(horizon, 0.0);
    for (const auto& tr : trials) {
        double total = 0.0;
        for (const auto& nd : tr.nodes) total += nd.true_count;
        if (total <= 0.0) {
            for (auto& v : curve) v += 1.0;
            continue;
        }
        double found = 0.0;
        for (std::size_t t = 0; t < horizon; ++t) {
            if (t < tr.combined_new.size()) found += static_cast<double>(tr.combined_new[t]);
            curve[t] += found / total;
        }
    }
    for (auto& v : curve) v /= static_cast<double>(trials.size());
    return curve;
}

// Per-slot discovery-rate estimates pooled across trials: newly discovered
// directed pairs over pairs still at risk, direct-only and combined, with 95%
// normal-approximation intervals.  Truncates at the first slot with no
// remaining exposure anywhere.
struct RateEstimate {
    int slot = 0;
    ProportionCi direct;
    ProportionCi combined;
};

inline std::vector<RateEstimate> estimate_discovery_rates(const std::vector<TrialResult>& trials) {
    if (trials.size() < 2)
        throw std::invalid_argument("estimate_discovery_rates: need at least 2 trials");
    std::size_t horizon = 0;
    for (const auto& tr : trials) {
        if (tr.pairs_at_risk.empty())
            throw std::invalid_argument("estimate_discovery_rates: trial lacks slot series");
        horizon = std::max(horizon, tr.pairs_at_risk.size());
    }
    std::vector<RateEstimate> out;
    for (std::size_t t = 0; t < horizon; ++t) {
        std::int64_t risk = 0, direct = 0, combined = 0;
        for (const auto& tr : trials) {
            if (t >= tr.pairs_at_risk.size()) continue;
            risk += tr.pairs_at_risk[t];
            direct += tr.direct_new[t];
            combined += tr.combined_new[t];
        }
        if (risk == 0) break;
        RateEstimate e;
        e.slot = static_cast<int>(t) + 1;
        e.direct = proportion_ci(direct, risk);
        e.combined = proportion_ci(combined, risk);
        out.push_back(e);
    }
    if (out.empty())
        throw std::runtime_error("estimate_discovery_rates: insufficient data (no at-risk pairs)");
    return out;
}

// Pooled single-number rate estimates over a slot window [from_slot, to_slot].
struct WindowRates {
    ProportionCi direct;
    ProportionCi combined;
};

inline WindowRates window_rates(const std::vector<TrialResult>& trials, int from_slot, int to_slot) {
    if (from_slot < 1 || to_slot < from_slot)
        throw std::invalid_argument("window_rates: bad slot window");
    std::int64_t risk = 0, direct = 0, combined = 0;
    for (const auto& tr : trials) {
        const int last = std::min<int>(to_slot, static_cast<int>(tr.pairs_at_risk.size()));
        for (int t = from_slot - 1; t < last; ++t) {
            risk += tr.pairs_at_risk[t];
            direct += tr.direct_new[t];
            combined += tr.combined_new[t];
        }
    }
    if (risk == 0) throw std::runtime_error("window_rates: insufficient data (no at-risk pairs)");
    return {proportion_ci(direct, risk), proportion_ci(combined, risk)};
}

// Per-trial network time to a fraction target (slot at which every node held
// the target fraction); unresolved trials are charged the budget cap.
inline std::vector<double> network_slots_to_target(const std::vector<TrialResult>& trials,
                                                   int target_index, int cap) {
    std::vector<double> v;
    v.reserve(trials.size());
    for (const auto& tr : trials) {
        const int s = tr.network_target_slot.at(target_index);
        v.push_back(s >= 0 ? static_cast<double>(s) : static_cast<double>(cap));
    }
    return v;
}

// Per-trial mean over nodes of slots to a fraction target; nodes that never
// reached it (frozen below the target or out of budget) are charged the cap.
inline std::vector<double> node_slots_to_target(const std::vector<TrialResult>& trials,
                                                int target_index, int cap) {
    std::vector<double> v;
    v.reserve(trials.size());
    for (const auto& tr : trials) {
        double sum = 0.0;
        for (const auto& nd : tr.nodes) {
            const int s = nd.target_hit_slot.at(target_index);
            sum += s >= 0 ? static_cast<double>(s) : static_cast<double>(cap);
        }
        v.push_back(sum / static_cast<double>(tr.nodes.size()));
    }
    return v;
}

}  // namespace ndsim
