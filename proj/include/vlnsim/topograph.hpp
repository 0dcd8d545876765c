#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vlnsim/rng.hpp"
#include "vlnsim/scene.hpp"

namespace vlnsim {

// Temporal-object bipartite graph: time nodes are trajectory step indices,
// object nodes are semantic names, an edge (t, name) records an observation.
struct TopoGraph {
    std::vector<int> time_nodes;                     // insertion order
    std::set<std::string> object_nodes;
    std::set<std::pair<int, std::string>> edges;

    bool has_step(int t) const;
};

// Adds step t with the given observed names. Duplicate names within one step
// collapse to a single edge. Throws std::invalid_argument if t was already
// recorded.
void record_step(TopoGraph& graph, int t, const std::vector<std::string>& observed);

// Keeps the first K = round-half-away-from-zero(rho * N) elements. Prefix
// semantics give the nested-subset property: result(rho1) is a prefix of
// result(rho2) whenever rho1 < rho2.
std::vector<std::string> truncate_observation(const std::vector<std::string>& sequence,
                                              double rho);
ObservationSequence truncate_observation(const ObservationSequence& sequence, double rho);

// Alignment of a degraded graph against the ideal one.
struct MatchReport {
    double s_obj = 0.0;    // distinct-name recall
    double s_edge = 0.0;   // (t, name) association recall
    double s_match = 0.0;  // lambda * s_obj + (1 - lambda) * s_edge
    double lambda = 0.5;
    // Name precision |deg ∩ ideal| / |deg|, reported alongside the fused score so
    // false-positive probes stay measurable; 1.0 when the degraded graph is empty.
    double precision = 1.0;
};

// Throws std::invalid_argument when the ideal graph has no object nodes or edges.
MatchReport matching_score(const TopoGraph& degraded, const TopoGraph& ideal, double lambda);

// Appends spurious names drawn from `vocabulary` minus the true set, one
// Bernoulli(rate) trial per true name. Injected names are distinct within the
// step and never collide with the input names.
std::vector<std::string> inject_false_positives(const std::vector<std::string>& observed,
                                                const std::vector<std::string>& vocabulary,
                                                double rate, Rng& rng);

// Debug dump: header line with the object names, then one "t<TAB>name" line per
// edge, sorted by (t, name).
std::string dump_graph(const TopoGraph& graph);

}  // namespace vlnsim
