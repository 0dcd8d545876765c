#include "vlnsim/planner.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace vlnsim {

double TopologyView::graph_distance(const std::string& from, const std::string& to) const {
    auto d = shortest_path_length(scene_, from, to);
    return d ? *d : std::numeric_limits<double>::infinity();
}

std::string TopologyView::next_hop(const std::string& from, const std::string& to) const {
    auto path = shortest_path(scene_, from, to);
    return path.size() >= 2 ? path[1] : from;
}

PlannerDecision scripted_next_action(const PlannerState& state, const TopoGraph& graph,
                                     const Episode& episode, const TopologyView& view) {
    PlannerDecision stop;  // default action

    if (state.progress_index >= episode.landmark_list.size()) {
        stop.note = "all landmarks reached";
        return stop;
    }
    const std::string& landmark = episode.landmark_list[state.progress_index];

    // Viewpoints where the landmark has been observed, excluding the current one:
    // a sighting here that did not advance progress is stale (e.g. a spurious
    // detection from an earlier visit) and is not worth chasing.
    std::set<std::string> sighted;
    for (const auto& [t, name] : graph.edges)
        if (name == landmark) {
            const std::string& vp = view.step_viewpoint(t);
            if (vp != state.current_viewpoint) sighted.insert(vp);
        }

    if (!sighted.empty()) {
        std::string best;
        double best_dist = std::numeric_limits<double>::infinity();
        for (const auto& vp : sighted) {
            const double d = view.graph_distance(state.current_viewpoint, vp);
            if (d < best_dist || (d == best_dist && vp < best)) {
                best = vp;
                best_dist = d;
            }
        }
        if (std::isfinite(best_dist)) {
            PlannerDecision move;
            move.action = PlannerDecision::Action::MoveTo;
            move.target_viewpoint = view.next_hop(state.current_viewpoint, best);
            return move;
        }
    }

    if (graph.object_nodes.empty()) {
        stop.note = "no observations available";
        return stop;
    }

    // Exploration fallback: nearest unvisited neighbor, ties by lowest id.
    const Vec3 here = view.position(state.current_viewpoint);
    std::string best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& nb : view.neighbors(state.current_viewpoint)) {
        if (state.visited.count(nb)) continue;
        const double d = (view.position(nb) - here).norm();
        if (d < best_dist || (d == best_dist && nb < best)) {
            best = nb;
            best_dist = d;
        }
    }
    if (best.empty()) {
        stop.note = "no unvisited neighbors";
        return stop;
    }
    PlannerDecision move;
    move.action = PlannerDecision::Action::MoveTo;
    move.target_viewpoint = best;
    return move;
}

std::string serialize_prompt(const TopoGraph& graph, const Episode& episode,
                             const PlannerState& state, const TopologyView& view) {
    std::ostringstream os;
    os << "instruction: " << episode.instruction << "\n";
    os << "observations:\n";
    for (int t : graph.time_nodes) {
        os << "step " << t << ":";
        bool first = true;
        for (const auto& [et, name] : graph.edges) {
            if (et != t) continue;
            os << (first ? " " : ", ") << name;
            first = false;
        }
        os << "\n";
    }
    os << "current viewpoint: " << state.current_viewpoint << "\n";
    os << "candidates:";
    bool first = true;
    for (const auto& nb : view.neighbors(state.current_viewpoint)) {
        os << (first ? " " : ", ") << nb;
        first = false;
    }
    os << "\n";
    os << "respond with exactly one action: MOVE <viewpoint>, APPROACH <object>, "
          "THROUGH <object>, or STOP\n";
    return os.str();
}

namespace {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            cur.push_back(c);
        } else if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

}  // namespace

PlannerDecision parse_decision(const std::string& text, const std::string& current_viewpoint,
                               const Scene& scene) {
    PlannerDecision stop;
    const auto tokens = tokenize(text);

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string word = upper(tokens[i]);
        if (word == "STOP") return stop;

        if (word == "MOVE" && i + 1 < tokens.size()) {
            const std::string& target = tokens[i + 1];
            const auto& nbs = scene.viewpoint(current_viewpoint).neighbors;
            if (std::find(nbs.begin(), nbs.end(), target) == nbs.end()) {
                stop.note = "rejected move to non-neighbor '" + target + "'";
                return stop;
            }
            PlannerDecision move;
            move.action = PlannerDecision::Action::MoveTo;
            move.target_viewpoint = target;
            return move;
        }

        if ((word == "APPROACH" || word == "THROUGH") && i + 1 < tokens.size()) {
            const std::string& target = tokens[i + 1];
            const SceneObject* obj = scene.find_object(target);
            if (!obj) {  // accept a unique object name as well
                const SceneObject* match = nullptr;
                for (const auto& o : scene.objects)
                    if (o.name == target) {
                        if (match) { match = nullptr; break; }
                        match = &o;
                    }
                obj = match;
            }
            if (!obj) {
                stop.note = "rejected skill on unknown object '" + target + "'";
                return stop;
            }
            PlannerDecision skill;
            skill.action = PlannerDecision::Action::ExecuteSkill;
            skill.skill = word == "APPROACH" ? SkillKind::Approach : SkillKind::Through;
            skill.target_object = obj->id;
            return skill;
        }
    }

    stop.note = "no action token found in response";
    return stop;
}

}  // namespace vlnsim
