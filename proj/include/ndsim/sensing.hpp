#pragma once

#include <optional>
#include <vector>

#include "ndsim/geometry.hpp"
#include "ndsim/scenario.hpp"

namespace ndsim {

// What "complete sensing information" means for a node that can hear an RSU:
//  - NeighborhoodCovered: every geometric neighbor lies inside some RSU's
//    sensing disk (strict; the report then provably covers the whole
//    neighborhood and a count-based stop rule is exact)
//  - NodeInSensingRange: the node itself is inside a sensing disk; weaker, can
//    mark reports complete while blind spots still hide neighbors
enum class CompletenessCriterion { NeighborhoodCovered, NodeInSensingRange };

struct SensingReport {
    bool complete = false;
    std::vector<int> per_beam_counts;   // sensed neighbors per beam sector
    std::vector<int> nonempty_beams;    // sectors holding at least one sensed neighbor
    int sensed_total = 0;
};

inline bool rsu_covers(const RoadScenario& scn, const Vec2& p) {
    const double r2 = scn.params.comm_radius * scn.params.comm_radius;
    for (const auto& rsu : scn.rsu_positions)
        if (dist2(p, rsu) <= r2) return true;
    return false;
}

// A node only receives a report while inside the communication range of some
// RSU; outside, there is no report at all.  Report counts cover the sensed
// neighbors (those inside a sensing disk), binned by the subject's beam
// sectors in the shared global frame.
inline std::optional<SensingReport> make_sensing_report(
    const RoadScenario& scn, int subject, const std::vector<int>& neighbors,
    CompletenessCriterion criterion = CompletenessCriterion::NeighborhoodCovered) {
    const auto& pos = scn.node_positions;
    if (!rsu_covers(scn, pos[subject])) return std::nullopt;

    SensingReport rep;
    rep.per_beam_counts.assign(scn.params.beam_count, 0);
    bool all_covered = true;
    for (int j : neighbors) {
        if (!rsu_covers(scn, pos[j])) {
            all_covered = false;
            continue;
        }
        const int b = sector_of(pos[subject], pos[j], scn.params.beam_count);
        rep.per_beam_counts[b] += 1;
        rep.sensed_total += 1;
    }
    for (int b = 0; b < scn.params.beam_count; ++b)
        if (rep.per_beam_counts[b] > 0) rep.nonempty_beams.push_back(b);
    rep.complete = criterion == CompletenessCriterion::NeighborhoodCovered ? all_covered : true;
    return rep;
}

}  // namespace ndsim
