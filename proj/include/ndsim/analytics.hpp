#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ndsim {

// How the probability that n simultaneous transmitters land on pairwise
// distinct channels (out of channel_count) is counted.
//   DistinctUnordered: C(k,n) / k^n   (channel subsets)
//   DistinctOrdered:   k! / ((k-n)! k^n)  (channel assignments)
enum class CollisionModel { DistinctUnordered, DistinctOrdered };

inline double collision_free_prob(int channel_count, int n, CollisionModel model) {
    if (channel_count < 1 || n < 0) throw std::invalid_argument("collision_free_prob");
    if (n > channel_count) return 0.0;
    if (n == 0) return 1.0;
    double r = 1.0;
    const double k = channel_count;
    for (int i = 0; i < n; ++i) r *= (k - i) / k;  // ordered count
    if (model == CollisionModel::DistinctUnordered) {
        for (int i = 1; i <= n; ++i) r /= i;  // divide by n! to count subsets
    }
    return r;
}

struct ProtocolParams {
    int channel_count = 1;            // orthogonal hello channels per slot
    double transmit_prob = 0.5;       // per-slot hello transmit probability
    double beam_pick_rate = 0.0;      // chance a given non-empty beam is the one pointed at
    double mean_beam_neighbors = 0.0; // expected neighbor count inside one beam
    CollisionModel collision = CollisionModel::DistinctOrdered;

    void validate() const {
        if (channel_count < 1) throw std::invalid_argument("channel_count must be >= 1");
        if (!(transmit_prob >= 0.0 && transmit_prob <= 1.0))
            throw std::invalid_argument("transmit_prob must lie in [0, 1]");
        if (!(beam_pick_rate > 0.0 && beam_pick_rate <= 1.0))
            throw std::invalid_argument("beam_pick_rate must lie in (0, 1]");
        if (!(mean_beam_neighbors >= 0.0))
            throw std::invalid_argument("mean_beam_neighbors must be non-negative");
    }
};

// Per-slot direct-exchange probabilities for a fixed (listener, neighbor)
// pair.  Index n-1 holds the chance the exchange succeeds with exactly n
// neighbors participating on distinct channels.
struct SlotProbabilities {
    std::vector<double> hello;     // listener hears n hellos, answers with feedback
    std::vector<double> feedback;  // listener's own hello draws n feedback replies
    std::vector<double> direct;    // element-wise hello + feedback
    double extra_member_prob = 0.0;      // chance a further neighbor joins an ongoing exchange
    double direct_discovery_prob = 0.0;  // total direct success probability per slot
};

inline SlotProbabilities slot_probabilities(const ProtocolParams& p) {
    p.validate();
    const int k = p.channel_count;
    const double pt = p.transmit_prob;
    const double a = p.beam_pick_rate;
    const double nb = p.mean_beam_neighbors;

    SlotProbabilities sp;
    sp.hello.assign(k, 0.0);
    sp.feedback.assign(k, 0.0);
    sp.direct.assign(k, 0.0);

    for (int n = 1; n <= k; ++n) {
        if (nb < n) break;  // fewer expected neighbors than participants
        const double pcm = collision_free_prob(k, n, p.collision);
        sp.hello[n - 1] = a * (1.0 - pt) * std::pow(a * pt, n) * pcm *
                          std::pow(1.0 - (static_cast<double>(n) / k) * a * pt, nb - n);
    }

    double hello_sum = 0.0;
    for (double v : sp.hello) hello_sum += v;
    const double apt = a * pt;
    sp.extra_member_prob = apt > 0.0 ? hello_sum / apt : 0.0;

    for (int n = 1; n <= k; ++n) {
        if (nb < n) break;
        const double pcm = collision_free_prob(k, n, p.collision);
        sp.feedback[n - 1] = apt * std::pow(sp.extra_member_prob, n) * pcm *
                             std::pow(1.0 - (static_cast<double>(n) / k) * sp.extra_member_prob, nb - n);
    }

    double total = 0.0;
    for (int n = 0; n < k; ++n) {
        sp.direct[n] = sp.hello[n] + sp.feedback[n];
        total += sp.direct[n];
    }
    sp.direct_discovery_prob = total;
    return sp;
}

namespace detail {
inline double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }
}

// Slot-indexed evolution of the gossip-assisted discovery probabilities.
// Vectors are indexed t-1 for slot t; iteration stops once the total
// assisted probability reaches a fixed point (or max_slots).
struct GossipCurves {
    std::vector<double> any_direct_cdf;              // chance >= 1 direct discovery happened by t
    std::vector<double> relay_informed;              // chance the shared neighborhood carries the node's identity
    std::vector<std::vector<double>> gossip_slot;    // [t-1][n-1]: n identities learned via gossip in slot t
    std::vector<std::vector<double>> combined_slot;  // [t-1][n-1]: direct or gossip, n identities in slot t
    std::vector<double> combined_total;              // per-slot total discovery probability
    int fixed_point_slot = 0;

    double combined_total_limit() const { return combined_total.back(); }

    // values saturate at the fixed point; later slots reuse the last entry
    int slot_index(int t) const {
        if (t < 1) throw std::invalid_argument("slot index must be >= 1");
        return std::min<int>(t, static_cast<int>(combined_total.size())) - 1;
    }
};

inline GossipCurves gossip_curves(const SlotProbabilities& sp, double mean_common_neighbors,
                                  int max_slots = 20000, double tol = 1e-12) {
    if (max_slots < 1) throw std::invalid_argument("gossip_curves: max_slots must be >= 1");
    if (!(mean_common_neighbors >= 0.0))
        throw std::invalid_argument("gossip_curves: mean_common_neighbors must be non-negative");
    const int k = static_cast<int>(sp.direct.size());
    const double ps_total = sp.direct_discovery_prob;

    GossipCurves gc;
    gc.any_direct_cdf.push_back(0.0);
    gc.relay_informed.push_back(0.0);
    gc.gossip_slot.push_back(std::vector<double>(k, 0.0));
    gc.combined_slot.push_back(sp.direct);
    gc.combined_total.push_back(ps_total);

    int t = 1;
    while (t < max_slots) {
        ++t;
        const double d_prev = 1.0 - std::pow(1.0 - ps_total, t - 1);
        const double i_prev = gc.relay_informed.back();
        const double reach = d_prev + (1.0 - d_prev) * i_prev;

        std::vector<double> at(k, 0.0);
        double at_sum = 0.0;
        for (int n = 0; n < k; ++n) {
            at[n] = detail::clamp01(mean_common_neighbors * reach * sp.feedback[n]);
            at_sum += at[n];
        }
        const double i_now = detail::clamp01(i_prev + (1.0 - i_prev) * at_sum);

        std::vector<double> pg(k, 0.0);
        for (int n = 0; n < k; ++n)
            pg[n] = detail::clamp01(sp.direct[n] + (1.0 - ps_total) * at[n]);
        const double pg_total = detail::clamp01(ps_total + (1.0 - ps_total) * at_sum);

        gc.any_direct_cdf.push_back(d_prev);
        gc.relay_informed.push_back(i_now);
        gc.gossip_slot.push_back(std::move(at));
        gc.combined_slot.push_back(std::move(pg));
        gc.combined_total.push_back(pg_total);

        if (std::abs(gc.combined_total[t - 1] - gc.combined_total[t - 2]) < tol) break;
    }
    gc.fixed_point_slot = t;
    return gc;
}

inline double harmonic_number(int n) {
    if (n < 0) throw std::invalid_argument("harmonic_number: n must be >= 0");
    double h = 0.0;
    for (int v = 1; v <= n; ++v) h += 1.0 / v;
    return h;
}

// Mean-slot bounds for discovering n neighbors, coupon-collector style:
// the upper bound assumes direct exchange only, the lower adds gossip at
// its saturated rate.
inline double upper_bound_slots(int n, const SlotProbabilities& sp) {
    const double ps = sp.direct_discovery_prob;
    if (ps <= 0.0) return std::numeric_limits<double>::infinity();
    return harmonic_number(n) / ps;
}

inline double lower_bound_slots(int n, const GossipCurves& gc) {
    const double pg = gc.combined_total_limit();
    if (pg <= 0.0) return std::numeric_limits<double>::infinity();
    return harmonic_number(n) / pg;
}

namespace detail {
inline double fbinom(int n, int m) {
    if (m < 0 || m > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= m; ++i) r = r * (n - m + i) / i;
    return r;
}
}

// Probability that a node with `undiscovered` unknown neighbors learns exactly
// n of them in slot t, renormalised across the competing outcome counts.
inline double discovery_jump_prob(int undiscovered, int n, const GossipCurves& gc, int t) {
    const int k = static_cast<int>(gc.combined_total.size() ? gc.combined_slot.front().size() : 0);
    if (n < 1 || n > k || n > undiscovered || undiscovered <= 0) return 0.0;
    const int idx = gc.slot_index(t);
    const auto& pg = gc.combined_slot[idx];
    const double pg_total = gc.combined_total[idx];
    double den = 1.0 - pg_total;
    for (int m = 1; m <= std::min(k, undiscovered); ++m)
        den += detail::fbinom(undiscovered, m) * pg[m - 1];
    if (den <= 0.0) return 0.0;
    return detail::fbinom(undiscovered, n) * pg[n - 1] / den;
}

// Slot-by-slot distribution of the number of discovered neighbors, evolved as
// a Markov chain whose jump sizes follow discovery_jump_prob.
struct DiscoveryEvolution {
    std::vector<double> mean_discovered;             // index t-1: expected count after slot t
    std::vector<double> final_distribution;          // P(n discovered) after the last slot
    std::vector<std::vector<double>> distributions;  // per-slot history (only when kept)
};

inline DiscoveryEvolution discovery_evolution(int neighbor_count, const GossipCurves& gc,
                                              int max_slots, bool keep_states = false) {
    if (neighbor_count < 0) throw std::invalid_argument("discovery_evolution: negative neighbor_count");
    if (max_slots < 1) throw std::invalid_argument("discovery_evolution: max_slots must be >= 1");
    const int k = static_cast<int>(gc.combined_slot.front().size());
    std::vector<double> p(neighbor_count + 1, 0.0), q(neighbor_count + 1, 0.0);
    p[0] = 1.0;
    DiscoveryEvolution ev;
    ev.mean_discovered.reserve(max_slots);
    for (int t = 1; t <= max_slots; ++t) {
        std::fill(q.begin(), q.end(), 0.0);
        for (int n = 0; n <= neighbor_count; ++n) {
            if (p[n] == 0.0) continue;
            const int nd = neighbor_count - n;
            double jump_total = 0.0;
            for (int w = 1; w <= std::min(k, nd); ++w) {
                const double jp = discovery_jump_prob(nd, w, gc, t);
                q[n + w] += p[n] * jp;
                jump_total += jp;
            }
            q[n] += p[n] * (1.0 - jump_total);
        }
        std::swap(p, q);
        double mean = 0.0;
        for (int n = 1; n <= neighbor_count; ++n) mean += n * p[n];
        ev.mean_discovered.push_back(mean);
        if (keep_states) ev.distributions.push_back(p);
    }
    ev.final_distribution = p;
    return ev;
}

// first slot whose expected discovered count reaches `target`, or -1
inline int crossing_slot(const std::vector<double>& mean_discovered, double target) {
    for (std::size_t i = 0; i < mean_discovered.size(); ++i)
        if (mean_discovered[i] >= target) return static_cast<int>(i) + 1;
    return -1;
}

}  // namespace ndsim
