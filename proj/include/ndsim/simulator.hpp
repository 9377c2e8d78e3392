#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ndsim/rng.hpp"
#include "ndsim/scenario.hpp"
#include "ndsim/sensing.hpp"

namespace ndsim {

enum class Algorithm { Cra, Sba, Gossip, GsimNd };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Cra: return "cra";
        case Algorithm::Sba: return "sba";
        case Algorithm::Gossip: return "gossip";
        case Algorithm::GsimNd: return "gsimnd";
    }
    throw std::logic_error("algorithm_name: bad enum");
}

struct SimConfig {
    Algorithm algorithm = Algorithm::GsimNd;
    int channel_count = 1;       // decodable channels per sub-slot
    double transmit_prob = 0.5;  // per-slot hello transmit probability
    int max_slots = 100000;      // slot budget per trial
    int warmup_slots = 512;      // earliest slot at which the inactivity rule may fire
    int trials = 1;
    std::uint64_t seed = 1;
    CompletenessCriterion completeness = CompletenessCriterion::NeighborhoodCovered;
    bool restrict_partial_sensing = false;  // nodes with partial reports also restrict beams
    bool record_slot_series = true;
    std::vector<double> fraction_targets{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};

    // scan/random baselines exchange without payloads on a single channel
    bool gossip_enabled() const {
        return algorithm == Algorithm::Gossip || algorithm == Algorithm::GsimNd;
    }
    bool sensing_enabled() const { return algorithm == Algorithm::GsimNd; }
    int effective_channels() const {
        return (algorithm == Algorithm::Cra || algorithm == Algorithm::Sba) ? 1 : channel_count;
    }

    void validate() const {
        if (channel_count < 1) throw std::invalid_argument("channel_count must be >= 1");
        if (!(transmit_prob > 0.0 && transmit_prob < 1.0))
            throw std::invalid_argument("transmit_prob must lie strictly in (0, 1)");
        if (max_slots < 1) throw std::invalid_argument("max_slots must be >= 1");
        if (warmup_slots < 1) throw std::invalid_argument("warmup_slots must be >= 1");
        if (trials < 1) throw std::invalid_argument("trials must be >= 1");
        if (fraction_targets.empty()) throw std::invalid_argument("fraction_targets must not be empty");
        for (std::size_t i = 0; i < fraction_targets.size(); ++i) {
            if (!(fraction_targets[i] > 0.0 && fraction_targets[i] <= 1.0))
                throw std::invalid_argument("fraction_targets must lie in (0, 1]");
            if (i > 0 && !(fraction_targets[i] > fraction_targets[i - 1]))
                throw std::invalid_argument("fraction_targets must be strictly increasing");
        }
    }
};

// delivered = packets alone on their channel; returns indices into `channels`
inline std::vector<int> resolve_reception(const std::vector<int>& channels, int channel_count) {
    if (channel_count < 1) throw std::invalid_argument("resolve_reception: channel_count >= 1");
    std::vector<int> count(channel_count, 0);
    for (int c : channels) {
        if (c < 0 || c >= channel_count) throw std::invalid_argument("resolve_reception: bad channel");
        ++count[c];
    }
    std::vector<int> delivered;
    for (std::size_t i = 0; i < channels.size(); ++i)
        if (count[channels[i]] == 1) delivered.push_back(static_cast<int>(i));
    return delivered;
}

// menu = allowed beam indices (used by the sensing-assisted policy)
inline int beam_policy(Algorithm algorithm, const std::vector<int>& menu, int beam_count,
                       int slots_elapsed, SplitMix64& rng) {
    switch (algorithm) {
        case Algorithm::Sba:
            return slots_elapsed % beam_count;
        case Algorithm::Cra:
        case Algorithm::Gossip:
            return rng.below_int(beam_count);
        case Algorithm::GsimNd:
            if (menu.empty()) throw std::invalid_argument("beam_policy: empty menu");
            return menu[rng.below_int(static_cast<int>(menu.size()))];
    }
    throw std::logic_error("beam_policy: bad enum");
}

// Per-node sensing-derived state fixed at trial start: allowed beams, the
// count-rule target for nodes with covering reports, and report flags.
struct SensingSetup {
    std::vector<std::vector<int>> beam_menu;  // allowed beams per node
    std::vector<int> count_target;            // -1 when the count rule does not apply
    std::vector<std::uint8_t> complete;
    std::vector<std::uint8_t> has_report;
};

inline SensingSetup make_sensing_setup(const RoadScenario& scn, const SimConfig& cfg) {
    const int m = static_cast<int>(scn.node_positions.size());
    const int bc = scn.params.beam_count;
    std::vector<int> all_beams(bc);
    for (int b = 0; b < bc; ++b) all_beams[b] = b;

    SensingSetup s;
    s.beam_menu.assign(m, all_beams);
    s.count_target.assign(m, -1);
    s.complete.assign(m, 0);
    s.has_report.assign(m, 0);
    if (!cfg.sensing_enabled()) return s;

    for (int i = 0; i < m; ++i) {
        auto nbrs = neighbors_of(scn, i);
        auto report = make_sensing_report(scn, i, nbrs, cfg.completeness);
        if (!report) continue;
        s.has_report[i] = 1;
        s.complete[i] = report->complete ? 1 : 0;
        if (report->complete) s.count_target[i] = report->sensed_total;
        if (report->complete || cfg.restrict_partial_sensing) {
            std::vector<int> menu;
            for (int b = 0; b < bc; ++b)
                if (report->per_beam_counts[b] > 0) menu.push_back(b);
            if (!menu.empty()) s.beam_menu[i] = std::move(menu);
        }
    }
    return s;
}

struct NodeTrace {
    int convergence_slot = -1;  // -1: still active when the budget ran out
    int discovered_count = 0;
    int true_count = 0;
    bool sensing_complete = false;
    bool has_sensing = false;
    bool false_convergence = false;      // converged without the full neighbor set
    std::vector<int> target_hit_slot;    // per fraction target, -1 = never reached

    bool operator==(const NodeTrace&) const = default;
};

struct TrialResult {
    int slots_run = 0;
    bool all_converged = false;
    int false_convergence_count = 0;
    std::int64_t reception_event_count = 0;  // (node, slot) pairs with >= 1 successful reception
    std::int64_t total_direct_new = 0;       // directed pairs first learned from a packet sender id
    std::int64_t total_combined_new = 0;     // directed pairs first learned by any means
    std::int64_t total_pairs_at_risk = 0;    // sum over slots of undiscovered pairs at active nodes

    // per-slot series, filled when record_slot_series is on (index t-1)
    std::vector<double> slot_mean_fraction;
    std::vector<std::int64_t> direct_new;
    std::vector<std::int64_t> combined_new;
    std::vector<std::int64_t> pairs_at_risk;
    std::vector<int> active_nodes;

    std::vector<int> network_target_slot;  // first slot every node met the target, -1 = never
    std::vector<NodeTrace> nodes;

    bool operator==(const TrialResult&) const = default;
};

namespace detail {

class DiscSet {
  public:
    DiscSet(int nodes, int words) : words_(words), bits_(static_cast<std::size_t>(nodes) * words) {}
    std::uint64_t* row(int i) { return bits_.data() + static_cast<std::size_t>(i) * words_; }
    const std::uint64_t* row(int i) const { return bits_.data() + static_cast<std::size_t>(i) * words_; }
    bool test(int i, int j) const { return (row(i)[j >> 6] >> (j & 63)) & 1u; }
    void set(int i, int j) { row(i)[j >> 6] |= std::uint64_t(1) << (j & 63); }
    int words() const { return words_; }

  private:
    int words_;
    std::vector<std::uint64_t> bits_;
};

}  // namespace detail

inline TrialResult run_trial(const RoadScenario& scn, const SimConfig& cfg, std::uint64_t trial_seed,
                             std::vector<std::vector<int>>* discovered_out = nullptr) {
    cfg.validate();
    scn.params.validate();
    const int m = static_cast<int>(scn.node_positions.size());
    if (m < 1) throw std::invalid_argument("run_trial: scenario has no nodes");
    const int bc = scn.params.beam_count;
    const int k = cfg.effective_channels();
    const bool gossip = cfg.gossip_enabled();

    // out-edges bucketed by (source, source beam toward the neighbor);
    // each entry keeps the neighbor and the beam the neighbor must point back
    std::vector<int> bucket_start(static_cast<std::size_t>(m) * bc + 1, 0);
    std::vector<int> edge_dst;
    std::vector<std::int16_t> edge_back;
    std::vector<int> true_count(m, 0);
    {
        auto nbr_sets = all_neighbor_sets(scn);
        std::size_t total = 0;
        for (int i = 0; i < m; ++i) {
            true_count[i] = static_cast<int>(nbr_sets[i].size());
            total += nbr_sets[i].size();
        }
        std::vector<int> counts(static_cast<std::size_t>(m) * bc, 0);
        for (int i = 0; i < m; ++i)
            for (int j : nbr_sets[i])
                ++counts[static_cast<std::size_t>(i) * bc +
                         sector_of(scn.node_positions[i], scn.node_positions[j], bc)];
        for (std::size_t s = 0; s < counts.size(); ++s) bucket_start[s + 1] = bucket_start[s] + counts[s];
        edge_dst.resize(total);
        edge_back.resize(total);
        std::vector<int> fill(bucket_start.begin(), bucket_start.end() - 1);
        for (int i = 0; i < m; ++i)
            for (int j : nbr_sets[i]) {
                const int b = sector_of(scn.node_positions[i], scn.node_positions[j], bc);
                const int at = fill[static_cast<std::size_t>(i) * bc + b]++;
                edge_dst[at] = j;
                edge_back[at] = static_cast<std::int16_t>(
                    sector_of(scn.node_positions[j], scn.node_positions[i], bc));
            }
    }

    const SensingSetup sensing = make_sensing_setup(scn, cfg);

    const int words = (m + 63) / 64;
    detail::DiscSet disc(m, words);
    detail::DiscSet adj(m, words);
    for (int i = 0; i < m; ++i)
        for (int b = 0; b < bc; ++b)
            for (int e = bucket_start[static_cast<std::size_t>(i) * bc + b];
                 e < bucket_start[static_cast<std::size_t>(i) * bc + b + 1]; ++e)
                adj.set(i, edge_dst[e]);

    TrialResult res;
    res.nodes.assign(m, NodeTrace{});
    res.network_target_slot.assign(cfg.fraction_targets.size(), -1);
    const int n_targets = static_cast<int>(cfg.fraction_targets.size());
    for (int i = 0; i < m; ++i) {
        res.nodes[i].true_count = true_count[i];
        res.nodes[i].sensing_complete = sensing.complete[i] != 0;
        res.nodes[i].has_sensing = sensing.has_report[i] != 0;
        res.nodes[i].target_hit_slot.assign(n_targets, -1);
    }

    SplitMix64 rng(mix_seed(trial_seed, 0x51a7e5ull));

    std::vector<int> beam(m), hello_ch(m), fb_ch(m), t2(m, 0);
    std::vector<int> t1(m, 0);  // completed slots; frozen at convergence
    std::vector<std::uint8_t> tx(m), fb(m), converged(m, 0), new_found(m);
    std::vector<int> target_ptr(m, 0);
    std::vector<int> sat_count(n_targets, 0);
    int network_ptr = 0;
    int converged_total = 0;
    std::int64_t at_risk = 0;
    for (int i = 0; i < m; ++i) at_risk += true_count[i];

    struct Candidate {
        int rx, tx, key;
    };
    std::vector<Candidate> cand;
    std::vector<int> key_count(static_cast<std::size_t>(m) * k, 0);
    std::vector<int> touched;
    std::vector<int> event_slot(m, 0);  // last slot with a successful reception, for counting

    // zero-neighbor nodes sit at fraction 1 from the start
    auto fraction_of = [&](int i) {
        return true_count[i] == 0
                   ? 1.0
                   : static_cast<double>(res.nodes[i].discovered_count) / true_count[i];
    };

    auto advance_targets = [&](int i, int slot) {
        const double f = fraction_of(i);
        while (target_ptr[i] < n_targets && f >= cfg.fraction_targets[target_ptr[i]]) {
            res.nodes[i].target_hit_slot[target_ptr[i]] = slot;
            ++sat_count[target_ptr[i]];
            ++target_ptr[i];
        }
    };

    auto sweep_sub_slot = [&](const std::vector<std::uint8_t>& sender,
                              const std::vector<int>& channel) {
        cand.clear();
        for (int u = 0; u < m; ++u) {
            if (!sender[u]) continue;
            const std::size_t bucket = static_cast<std::size_t>(u) * bc + beam[u];
            for (int e = bucket_start[bucket]; e < bucket_start[bucket + 1]; ++e) {
                const int v = edge_dst[e];
                if (sender[v] || beam[v] != edge_back[e]) continue;
                const int key = v * k + channel[u];
                if (key_count[key]++ == 0) touched.push_back(key);
                cand.push_back({v, u, key});
            }
        }
    };

    auto clear_keys = [&] {
        for (int key : touched) key_count[key] = 0;
        touched.clear();
    };

    int t = 0;
    while (t < cfg.max_slots && converged_total < m) {
        ++t;
        if (cfg.record_slot_series) {
            res.pairs_at_risk.push_back(at_risk);
            res.active_nodes.push_back(m - converged_total);
        }
        res.total_pairs_at_risk += at_risk;

        for (int i = 0; i < m; ++i)
            beam[i] = beam_policy(cfg.algorithm, sensing.beam_menu[i], bc, t1[i], rng);
        for (int i = 0; i < m; ++i) tx[i] = rng.bernoulli(cfg.transmit_prob) ? 1 : 0;
        for (int i = 0; i < m; ++i) hello_ch[i] = rng.below_int(k);
        for (int i = 0; i < m; ++i) fb_ch[i] = rng.below_int(k);

        std::fill(new_found.begin(), new_found.end(), 0);
        std::int64_t direct_now = 0, combined_now = 0;

        auto note_direct = [&](int rx, int sender) {
            if (event_slot[rx] != t) {
                event_slot[rx] = t;
                ++res.reception_event_count;
            }
            if (converged[rx] || disc.test(rx, sender)) return;
            disc.set(rx, sender);
            ++res.nodes[rx].discovered_count;
            new_found[rx] = 1;
            ++direct_now;
            ++combined_now;
            --at_risk;
        };

        // sub-slot 1: hello exchange
        sweep_sub_slot(tx, hello_ch);
        std::fill(fb.begin(), fb.end(), 0);
        for (const auto& c : cand)
            if (key_count[c.key] == 1) {
                fb[c.rx] = 1;  // heard at least one hello cleanly
                note_direct(c.rx, c.tx);
            }
        clear_keys();

        // sub-slot 2: feedback replies carrying the sender's discovered list
        sweep_sub_slot(fb, fb_ch);
        for (const auto& c : cand) {
            if (key_count[c.key] != 1) continue;
            note_direct(c.rx, c.tx);
            if (!gossip || converged[c.rx]) continue;
            const std::uint64_t* payload = disc.row(c.tx);
            const std::uint64_t* reach = adj.row(c.rx);
            std::uint64_t* own = disc.row(c.rx);
            int gained = 0;
            for (int w = 0; w < words; ++w) {
                const std::uint64_t fresh = payload[w] & reach[w] & ~own[w];
                if (fresh) {
                    own[w] |= fresh;
                    gained += std::popcount(fresh);
                }
            }
            if (gained > 0) {
                res.nodes[c.rx].discovered_count += gained;
                new_found[c.rx] = 1;
                combined_now += gained;
                at_risk -= gained;
            }
        }
        clear_keys();

        res.total_direct_new += direct_now;
        res.total_combined_new += combined_now;
        if (cfg.record_slot_series) {
            res.direct_new.push_back(direct_now);
            res.combined_new.push_back(combined_now);
        }

        // timers, fraction targets, and convergence for active nodes
        for (int i = 0; i < m; ++i) {
            if (converged[i]) continue;
            t1[i] = t;
            t2[i] = new_found[i] ? 0 : t2[i] + 1;
            if (new_found[i] || t == 1) advance_targets(i, t);

            bool done;
            if (sensing.count_target[i] >= 0)
                done = res.nodes[i].discovered_count >= sensing.count_target[i];
            else
                done = t1[i] >= cfg.warmup_slots && 2 * t2[i] >= t1[i];
            if (done) {
                converged[i] = 1;
                ++converged_total;
                res.nodes[i].convergence_slot = t;
                at_risk -= true_count[i] - res.nodes[i].discovered_count;
                if (res.nodes[i].discovered_count != true_count[i]) {
                    res.nodes[i].false_convergence = true;
                    ++res.false_convergence_count;
                }
            }
        }
        while (network_ptr < n_targets && sat_count[network_ptr] == m)
            res.network_target_slot[network_ptr++] = t;

        if (cfg.record_slot_series) {
            double sum = 0.0;
            for (int i = 0; i < m; ++i) sum += fraction_of(i);
            res.slot_mean_fraction.push_back(sum / m);
        }
    }

    res.slots_run = t;
    res.all_converged = converged_total == m;
    if (discovered_out) {
        discovered_out->assign(m, {});
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (disc.test(i, j)) (*discovered_out)[i].push_back(j);
    }
    return res;
}

// audit helper: every discovered id must be a true geometric neighbor, and
// count-rule convergers must hold their exact neighbor set
inline void check_soundness(const RoadScenario& scn, const SimConfig& cfg, const TrialResult& res,
                            const std::vector<std::vector<int>>& discovered) {
    const int m = static_cast<int>(scn.node_positions.size());
    const double r2 = scn.params.comm_radius * scn.params.comm_radius;
    for (int i = 0; i < m; ++i) {
        int true_n = 0;
        for (int j = 0; j < m; ++j)
            if (j != i && dist2(scn.node_positions[i], scn.node_positions[j]) <= r2) ++true_n;
        if (res.nodes[i].true_count != true_n)
            throw std::logic_error("soundness: recorded true_count mismatch");
        if (static_cast<int>(discovered[i].size()) != res.nodes[i].discovered_count)
            throw std::logic_error("soundness: discovered_count disagrees with the set");
        for (int j : discovered[i])
            if (j == i || dist2(scn.node_positions[i], scn.node_positions[j]) > r2)
                throw std::logic_error("soundness: non-neighbor listed as discovered");
        const bool count_rule = cfg.sensing_enabled() && res.nodes[i].sensing_complete;
        if (count_rule && res.nodes[i].convergence_slot >= 0 &&
            res.nodes[i].discovered_count != true_n)
            throw std::logic_error("soundness: count-rule converger lacks the full set");
    }
}

}  // namespace ndsim
