#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ndsim/rng.hpp"

namespace ndsim {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt big_binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

// number of ways to pick the nodes occupying e beams of q nodes each:
// C(N, q*e) times the ways to split the picked q*e nodes into e ordered
// groups of q (the beam identities come from beam_choice_count below)
inline BigInt node_grouping_count(int total_nodes, int q, int e) {
    if (q < 0 || e < 0) throw std::invalid_argument("node_grouping_count: negative argument");
    if (static_cast<long long>(q) * e > total_nodes) return 0;
    BigInt r = big_binom(total_nodes, q * e);
    for (int w = 0; w < e; ++w) r *= big_binom(q * (e - w), q);
    return r;
}

// assignments of n labelled nodes into b labelled beams such that no beam ends
// up with exactly q nodes.  Recurrence over the first beam's occupancy m != q;
// the empty product DS(0, q, 0) = 1, and DS(0, q, n>0) = 0 since leftover
// nodes have nowhere to go.
inline BigInt excluded_occupancy_count(int beams, int q, int n) {
    if (beams < 0 || n < 0) throw std::invalid_argument("excluded_occupancy_count: negative argument");
    std::vector<BigInt> cur(n + 1), next(n + 1);
    cur[0] = 1;  // b = 0 column
    std::vector<std::vector<BigInt>> binom(n + 1, std::vector<BigInt>(n + 1));
    for (int i = 0; i <= n; ++i) {
        binom[i][0] = 1;
        for (int j = 1; j <= i; ++j)
            binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : BigInt(0));
    }
    for (int b = 1; b <= beams; ++b) {
        for (int nn = 0; nn <= n; ++nn) {
            BigInt acc = 0;
            for (int m = 0; m <= nn; ++m) {
                if (m == q) continue;
                acc += binom[nn][m] * cur[nn - m];
            }
            next[nn] = acc;
        }
        std::swap(cur, next);
    }
    return cur[n];
}

// choose which e beams hold exactly q nodes and distribute the remaining
// nodes over the other beams avoiding occupancy q
inline BigInt beam_choice_count(int beam_count, int e, int q, int total_nodes) {
    const long long rest = static_cast<long long>(total_nodes) - static_cast<long long>(q) * e;
    if (rest < 0 || e < 0 || e > beam_count) return 0;
    return big_binom(beam_count, e) * excluded_occupancy_count(beam_count - e, q, static_cast<int>(rest));
}

// P(exactly e beams hold exactly q nodes) under independent uniform beam
// assignment of total_nodes nodes; exact rational, then narrowed to double
inline double exact_beam_count_probability(int e, int beam_count, int total_nodes, int q) {
    if (total_nodes < 0 || beam_count < 1) throw std::invalid_argument("exact_beam_count_probability");
    BigInt num = node_grouping_count(total_nodes, q, e) * beam_choice_count(beam_count, e, q, total_nodes);
    BigInt den = 1;
    for (int i = 0; i < total_nodes; ++i) den *= beam_count;
    return BigRat(num, den).convert_to<double>();
}

struct QBeamStats {
    std::vector<double> expected_beams;  // expected_beams[q] = E[# beams holding exactly q nodes]
    double alpha = 0.0;                  // 1 / (B - E[empty beams]); per-beam pick rate over non-empty beams
    double mean_nonempty_occupancy = 0.0;
};

namespace detail {

inline QBeamStats finish_stats(std::vector<double> eq, int beam_count, int total_nodes) {
    QBeamStats s;
    s.expected_beams = std::move(eq);
    const double nonempty = beam_count - s.expected_beams[0];
    if (!(nonempty > 0.0))
        throw std::domain_error("q-beam stats: no non-empty beams expected (total_nodes == 0?)");
    s.alpha = 1.0 / nonempty;
    double weighted = 0.0;
    for (std::size_t q = 1; q < s.expected_beams.size(); ++q)
        weighted += static_cast<double>(q) * s.expected_beams[q];
    s.mean_nonempty_occupancy = s.alpha * weighted;
    return s;
}

}  // namespace detail

// exact expectations via the counting route; feasible up to a few hundred
// nodes, cost grows as O(B * N^2) big-int ops per q value
inline QBeamStats expected_q_beams(int total_nodes, int beam_count) {
    if (total_nodes < 1) throw std::invalid_argument("expected_q_beams: total_nodes must be >= 1");
    BigInt den = 1;
    for (int i = 0; i < total_nodes; ++i) den *= beam_count;
    std::vector<double> eq(total_nodes + 1, 0.0);
    for (int q = 0; q <= total_nodes; ++q) {
        BigInt acc = 0;
        const int e_max = q == 0 ? beam_count : std::min<long long>(beam_count, total_nodes / std::max(q, 1));
        for (int e = 1; e <= e_max; ++e) {
            BigInt c = node_grouping_count(total_nodes, q, e) * beam_choice_count(beam_count, e, q, total_nodes);
            acc += e * c;
        }
        eq[q] = BigRat(acc, den).convert_to<double>();
    }
    return detail::finish_stats(std::move(eq), beam_count, total_nodes);
}

// linearity-of-expectation identity: each beam's occupancy is Binomial(N, 1/B),
// so E[# beams with exactly q] = B * C(N,q) (1/B)^q (1-1/B)^(N-q).  Used as a
// cross-check against the counting route and as the scalable path for large N.
inline double binomial_q_beam_expectation(int total_nodes, int beam_count, int q) {
    if (q < 0 || q > total_nodes) return 0.0;
    if (beam_count == 1) return q == total_nodes ? 1.0 : 0.0;
    const double logp = -std::log(static_cast<double>(beam_count));
    const double logq = std::log1p(-1.0 / beam_count);
    const double lc = std::lgamma(total_nodes + 1.0) - std::lgamma(q + 1.0) -
                      std::lgamma(total_nodes - q + 1.0);
    return beam_count * std::exp(lc + q * logp + (total_nodes - q) * logq);
}

inline QBeamStats expected_q_beams_closed_form(int total_nodes, int beam_count) {
    if (total_nodes < 1) throw std::invalid_argument("expected_q_beams_closed_form: total_nodes >= 1");
    std::vector<double> eq(total_nodes + 1, 0.0);
    for (int q = 0; q <= total_nodes; ++q)
        eq[q] = binomial_q_beam_expectation(total_nodes, beam_count, q);
    return detail::finish_stats(std::move(eq), beam_count, total_nodes);
}

// picks the exact counting route while affordable, the closed form beyond
inline QBeamStats expected_q_beams_auto(int total_nodes, int beam_count, int exact_limit = 120) {
    return total_nodes <= exact_limit ? expected_q_beams(total_nodes, beam_count)
                                      : expected_q_beams_closed_form(total_nodes, beam_count);
}

// Monte Carlo estimate: throw N nodes into B beams `draws` times
inline QBeamStats mc_q_beams(int total_nodes, int beam_count, long long draws, std::uint64_t seed) {
    if (total_nodes < 1 || draws < 1) throw std::invalid_argument("mc_q_beams");
    SplitMix64 rng(mix_seed(seed, 0x0ccbea3ull));
    std::vector<double> eq(total_nodes + 1, 0.0);
    std::vector<int> occ(beam_count);
    for (long long it = 0; it < draws; ++it) {
        std::fill(occ.begin(), occ.end(), 0);
        for (int i = 0; i < total_nodes; ++i) occ[rng.below_int(beam_count)] += 1;
        for (int b = 0; b < beam_count; ++b) eq[occ[b]] += 1.0;
    }
    for (auto& v : eq) v /= static_cast<double>(draws);
    return detail::finish_stats(std::move(eq), beam_count, total_nodes);
}

// exhaustive enumeration of all B^N assignments; the independent oracle for
// the counting route (guarded, intended for small N and B)
inline QBeamStats brute_force_q_beams(int total_nodes, int beam_count) {
    double states = std::pow(static_cast<double>(beam_count), total_nodes);
    if (states > 1e7) throw std::invalid_argument("brute_force_q_beams: B^N above enumeration guard");
    const long long total = static_cast<long long>(std::llround(states));
    std::vector<double> eq(total_nodes + 1, 0.0);
    std::vector<int> occ(beam_count);
    std::vector<int> digits(total_nodes, 0);
    for (long long s = 0; s < total; ++s) {
        std::fill(occ.begin(), occ.end(), 0);
        long long v = s;
        for (int i = 0; i < total_nodes; ++i) {
            occ[v % beam_count] += 1;
            v /= beam_count;
        }
        for (int b = 0; b < beam_count; ++b) eq[occ[b]] += 1.0;
    }
    for (auto& x : eq) x /= static_cast<double>(total);
    return detail::finish_stats(std::move(eq), beam_count, total_nodes);
}

}  // namespace ndsim
