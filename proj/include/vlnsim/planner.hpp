#pragma once

#include <set>
#include <string>
#include <vector>

#include "vlnsim/scene.hpp"
#include "vlnsim/topograph.hpp"

namespace vlnsim {

struct PlannerState {
    std::size_t progress_index = 0;   // next landmark to reach
    std::set<std::string> visited;    // viewpoint ids
    int step_count = 0;
    std::string current_viewpoint;
};

struct PlannerDecision {
    enum class Action { MoveTo, ExecuteSkill, Stop };
    Action action = Action::Stop;
    std::string target_viewpoint;  // MoveTo
    SkillKind skill = SkillKind::Approach;
    std::string target_object;     // ExecuteSkill
    std::string note;              // diagnostic, e.g. why a response was rejected
};

// What the planner is allowed to know about the world: the navigation graph and
// which viewpoint each recorded step happened at. Object geometry and the
// undegraded observations stay hidden; perception reaches the planner only
// through the degraded graph.
class TopologyView {
public:
    TopologyView(const Scene& scene, const std::vector<std::string>& step_viewpoints)
        : scene_(scene), step_viewpoints_(step_viewpoints) {}

    const std::vector<std::string>& neighbors(const std::string& id) const {
        return scene_.viewpoint(id).neighbors;
    }
    Vec3 position(const std::string& id) const { return scene_.viewpoint(id).position; }
    const std::string& step_viewpoint(int t) const { return step_viewpoints_.at(t); }
    double graph_distance(const std::string& from, const std::string& to) const;
    std::string next_hop(const std::string& from, const std::string& to) const;

private:
    const Scene& scene_;
    const std::vector<std::string>& step_viewpoints_;
};

class Planner {
public:
    virtual ~Planner() = default;
    virtual PlannerDecision next_action(const PlannerState& state, const TopoGraph& graph,
                                        const Episode& episode, const TopologyView& view) = 0;
};

// Deterministic landmark follower. If the next landmark has been observed in the
// degraded graph, head for the closest viewpoint it was seen at; otherwise walk
// to the nearest unvisited neighbor; with nothing observed at all, stop where it
// stands. Pure function of its arguments.
PlannerDecision scripted_next_action(const PlannerState& state, const TopoGraph& graph,
                                     const Episode& episode, const TopologyView& view);

class ScriptedPlanner final : public Planner {
public:
    PlannerDecision next_action(const PlannerState& state, const TopoGraph& graph,
                                const Episode& episode, const TopologyView& view) override {
        return scripted_next_action(state, graph, episode, view);
    }
};

// Renders the degraded graph, instruction, and candidate moves as a plain-text
// prompt for a chat-completion endpoint.
std::string serialize_prompt(const TopoGraph& graph, const Episode& episode,
                             const PlannerState& state, const TopologyView& view);

// Extracts one action token from a model response. Moves to non-neighbors,
// unknown targets, or unparseable text fall back to Stop with a diagnostic note.
PlannerDecision parse_decision(const std::string& text, const std::string& current_viewpoint,
                               const Scene& scene);

}  // namespace vlnsim
