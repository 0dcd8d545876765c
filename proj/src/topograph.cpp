#include "vlnsim/topograph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vlnsim {

bool TopoGraph::has_step(int t) const {
    return std::find(time_nodes.begin(), time_nodes.end(), t) != time_nodes.end();
}

void record_step(TopoGraph& graph, int t, const std::vector<std::string>& observed) {
    if (graph.has_step(t))
        throw std::invalid_argument("step " + std::to_string(t) + " already recorded");
    graph.time_nodes.push_back(t);
    for (const auto& name : observed) {
        graph.object_nodes.insert(name);
        graph.edges.emplace(t, name);
    }
}

namespace {

std::size_t truncation_count(std::size_t n, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::invalid_argument("retention ratio must lie in [0, 1]");
    const auto k = static_cast<std::size_t>(std::floor(rho * static_cast<double>(n) + 0.5));
    return std::min(k, n);
}

}  // namespace

std::vector<std::string> truncate_observation(const std::vector<std::string>& sequence,
                                              double rho) {
    const auto k = truncation_count(sequence.size(), rho);
    return std::vector<std::string>(sequence.begin(), sequence.begin() + static_cast<long>(k));
}

ObservationSequence truncate_observation(const ObservationSequence& sequence, double rho) {
    const auto k = truncation_count(sequence.object_ids.size(), rho);
    ObservationSequence out;
    out.viewpoint_id = sequence.viewpoint_id;
    out.object_ids.assign(sequence.object_ids.begin(),
                          sequence.object_ids.begin() + static_cast<long>(k));
    return out;
}

namespace {

template <typename Set>
std::size_t intersection_size(const Set& a, const Set& b) {
    std::size_t count = 0;
    for (const auto& item : a) count += b.count(item);
    return count;
}

}  // namespace

MatchReport matching_score(const TopoGraph& degraded, const TopoGraph& ideal, double lambda) {
    if (ideal.object_nodes.empty() || ideal.edges.empty())
        throw std::invalid_argument("matching score undefined for an empty ideal graph");
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("lambda must lie in [0, 1]");

    const std::size_t shared_names = intersection_size(degraded.object_nodes, ideal.object_nodes);
    const std::size_t shared_edges = intersection_size(degraded.edges, ideal.edges);

    MatchReport report;
    report.lambda = lambda;
    report.s_obj = static_cast<double>(shared_names) / static_cast<double>(ideal.object_nodes.size());
    report.s_edge = static_cast<double>(shared_edges) / static_cast<double>(ideal.edges.size());
    report.s_match = lambda * report.s_obj + (1.0 - lambda) * report.s_edge;
    report.precision = degraded.object_nodes.empty()
                           ? 1.0
                           : static_cast<double>(shared_names) /
                                 static_cast<double>(degraded.object_nodes.size());
    return report;
}

std::vector<std::string> inject_false_positives(const std::vector<std::string>& observed,
                                                const std::vector<std::string>& vocabulary,
                                                double rate, Rng& rng) {
    if (!(rate >= 0.0 && rate <= 1.0))
        throw std::invalid_argument("false-positive rate must lie in [0, 1]");

    std::vector<std::string> out = observed;
    std::vector<std::string> pool;
    for (const auto& name : vocabulary)
        if (std::find(observed.begin(), observed.end(), name) == observed.end())
            pool.push_back(name);

    for (std::size_t i = 0; i < observed.size() && !pool.empty(); ++i) {
        if (rng.uniform() < rate) {
            const auto pick = static_cast<std::size_t>(rng.uniform_int(pool.size()));
            out.push_back(pool[pick]);
            pool.erase(pool.begin() + static_cast<long>(pick));
        }
    }
    return out;
}

std::string dump_graph(const TopoGraph& graph) {
    std::ostringstream os;
    os << "objects";
    for (const auto& name : graph.object_nodes) os << '\t' << name;
    os << '\n';
    for (const auto& [t, name] : graph.edges) os << t << '\t' << name << '\n';
    return os.str();
}

}  // namespace vlnsim
