#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ndsim/occupancy.hpp"

using namespace ndsim;

namespace {

// independent oracle: walk every assignment of nodes to beams by counting in
// base B, tally beams holding exactly q nodes
std::vector<double> enumerate_expected_beams(int nodes, int beams) {
    std::vector<double> eq(nodes + 1, 0.0);
    std::vector<int> assign(nodes, 0);
    long long states = 1;
    for (int i = 0; i < nodes; ++i) states *= beams;
    for (long long s = 0; s < states; ++s) {
        std::vector<int> occ(beams, 0);
        for (int i = 0; i < nodes; ++i) ++occ[assign[i]];
        for (int b = 0; b < beams; ++b) eq[occ[b]] += 1.0;
        for (int i = 0; i < nodes; ++i) {
            if (++assign[i] < beams) break;
            assign[i] = 0;
        }
    }
    for (auto& v : eq) v /= static_cast<double>(states);
    return eq;
}

}  // namespace

TEST_CASE("counting blocks match small closed forms") {
    CHECK(node_grouping_count(4, 2, 1) == BigInt(6));
    CHECK(excluded_occupancy_count(2, 1, 2) == BigInt(2));
    CHECK(exact_beam_count_probability(0, 2, 2, 2) == Catch::Approx(0.5));
}

TEST_CASE("exact distribution equals exhaustive enumeration") {
    for (int beams = 2; beams <= 4; ++beams)
        for (int nodes = 1; nodes <= 8; ++nodes) {
            const auto oracle = enumerate_expected_beams(nodes, beams);
            const auto got = expected_q_beams(nodes, beams);
            REQUIRE(got.expected_beams.size() == oracle.size());
            for (std::size_t q = 0; q < oracle.size(); ++q)
                REQUIRE(got.expected_beams[q] == Catch::Approx(oracle[q]).margin(1e-12));
        }
}

TEST_CASE("two nodes on two beams") {
    const auto st = expected_q_beams(2, 2);
    CHECK(st.expected_beams[0] == Catch::Approx(0.5).margin(1e-15));
    CHECK(st.expected_beams[1] == Catch::Approx(1.0).margin(1e-15));
    CHECK(st.expected_beams[2] == Catch::Approx(0.5).margin(1e-15));
    CHECK(st.alpha == Catch::Approx(2.0 / 3.0).margin(1e-15));
    CHECK(st.mean_nonempty_occupancy == Catch::Approx(4.0 / 3.0).margin(1e-15));
}

TEST_CASE("per-count probabilities sum to one") {
    // for each q, the number of beams holding exactly q nodes has a proper
    // distribution over e = 0..B
    for (int beams : {2, 3, 12})
        for (int nodes : {1, 3, 7, 15})
            for (int q = 0; q <= nodes; ++q) {
                double sum = 0.0;
                for (int e = 0; e <= beams; ++e)
                    sum += exact_beam_count_probability(e, beams, nodes, q);
                REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
            }
}

TEST_CASE("conservation across the distribution") {
    for (int nodes = 1; nodes <= 40; ++nodes) {
        const auto st = expected_q_beams(nodes, 12);
        double total = 0.0, weighted = 0.0;
        for (std::size_t q = 0; q < st.expected_beams.size(); ++q) {
            total += st.expected_beams[q];
            weighted += static_cast<double>(q) * st.expected_beams[q];
        }
        REQUIRE(total == Catch::Approx(12.0).margin(1e-9));
        REQUIRE(weighted == Catch::Approx(static_cast<double>(nodes)).margin(1e-9));
    }
}

TEST_CASE("closed form agrees with exact counting") {
    for (int nodes : {5, 20, 60, 120}) {
        const auto exact = expected_q_beams(nodes, 12);
        const auto closed = expected_q_beams_closed_form(nodes, 12);
        for (std::size_t q = 0; q < exact.expected_beams.size(); ++q)
            REQUIRE(closed.expected_beams[q] ==
                    Catch::Approx(exact.expected_beams[q]).margin(1e-9));
        REQUIRE(closed.alpha == Catch::Approx(exact.alpha).margin(1e-12));
        REQUIRE(closed.mean_nonempty_occupancy ==
                Catch::Approx(exact.mean_nonempty_occupancy).margin(1e-9));
    }
}

TEST_CASE("auto route switches to the scalable path for large inputs") {
    const auto small = expected_q_beams_auto(60, 12);
    const auto exact = expected_q_beams(60, 12);
    CHECK(small.alpha == exact.alpha);

    const auto big = expected_q_beams_auto(397, 12);
    const auto closed = expected_q_beams_closed_form(397, 12);
    CHECK(big.alpha == closed.alpha);
    CHECK(big.alpha == Catch::Approx(1.0 / 12.0).margin(1e-6));  // E_0 ~ 0 at this density
    CHECK(big.mean_nonempty_occupancy == Catch::Approx(397.0 / 12.0).margin(1e-3));
}

TEST_CASE("highway operating point") {
    const auto st = expected_q_beams(60, 12);
    CHECK(st.alpha == Catch::Approx(0.083786).margin(5e-7));
    CHECK(st.mean_nonempty_occupancy == Catch::Approx(5.0272).margin(5e-5));
}

TEST_CASE("sampled distribution stays near the exact one") {
    const auto exact = expected_q_beams(20, 12);
    const auto mc = mc_q_beams(20, 12, 200000, 55);
    for (std::size_t q = 0; q < exact.expected_beams.size(); ++q)
        REQUIRE(mc.expected_beams[q] == Catch::Approx(exact.expected_beams[q]).margin(0.02));
}

TEST_CASE("library enumeration helper agrees with the exact path") {
    for (int beams : {2, 3, 4})
        for (int nodes : {1, 4, 8}) {
            const auto brute = brute_force_q_beams(nodes, beams);
            const auto exact = expected_q_beams(nodes, beams);
            for (std::size_t q = 0; q < exact.expected_beams.size(); ++q)
                REQUIRE(brute.expected_beams[q] ==
                        Catch::Approx(exact.expected_beams[q]).margin(1e-12));
        }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(expected_q_beams(0, 12), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_q_beams(30, 12), std::invalid_argument);  // enumeration guard
    CHECK_THROWS_AS(mc_q_beams(5, 4, 0, 1), std::invalid_argument);
}
