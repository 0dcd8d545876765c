#include "vlnsim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace vlnsim {

const Viewpoint* Scene::find_viewpoint(const std::string& id) const {
    for (const auto& v : viewpoints)
        if (v.id == id) return &v;
    return nullptr;
}

const SceneObject* Scene::find_object(const std::string& id) const {
    for (const auto& o : objects)
        if (o.id == id) return &o;
    return nullptr;
}

const ObservationSequence* Scene::find_observation(const std::string& viewpoint_id) const {
    for (const auto& obs : observations)
        if (obs.viewpoint_id == viewpoint_id) return &obs;
    return nullptr;
}

const Viewpoint& Scene::viewpoint(const std::string& id) const {
    const Viewpoint* v = find_viewpoint(id);
    if (!v) throw std::invalid_argument("unknown viewpoint id: " + id);
    return *v;
}

const SceneObject& Scene::object(const std::string& id) const {
    const SceneObject* o = find_object(id);
    if (!o) throw std::invalid_argument("unknown object id: " + id);
    return *o;
}

namespace {

// Dijkstra with (distance, id) settle order; parents are only replaced on a
// strict improvement, so equal-length alternatives resolve deterministically.
std::unordered_map<std::string, std::pair<double, std::string>> dijkstra(
    const Scene& scene, const std::string& from) {
    std::unordered_map<std::string, std::pair<double, std::string>> best;  // id -> (dist, parent)
    using Entry = std::pair<double, std::string>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    std::set<std::string> settled;

    best[from] = {0.0, ""};
    queue.push({0.0, from});
    while (!queue.empty()) {
        auto [dist, id] = queue.top();
        queue.pop();
        if (settled.count(id)) continue;
        settled.insert(id);
        const Viewpoint& v = scene.viewpoint(id);
        for (const auto& nb_id : v.neighbors) {
            const Viewpoint* nb = scene.find_viewpoint(nb_id);
            if (!nb) continue;
            const double cand = dist + (nb->position - v.position).norm();
            auto it = best.find(nb_id);
            if (it == best.end() || cand < it->second.first) {
                best[nb_id] = {cand, id};
                queue.push({cand, nb_id});
            }
        }
    }
    return best;
}

}  // namespace

std::optional<double> shortest_path_length(const Scene& scene, const std::string& from,
                                           const std::string& to) {
    scene.viewpoint(from);
    scene.viewpoint(to);
    auto best = dijkstra(scene, from);
    auto it = best.find(to);
    if (it == best.end()) return std::nullopt;
    return it->second.first;
}

std::vector<std::string> shortest_path(const Scene& scene, const std::string& from,
                                       const std::string& to) {
    scene.viewpoint(from);
    scene.viewpoint(to);
    auto best = dijkstra(scene, from);
    if (!best.count(to)) return {};
    std::vector<std::string> path;
    for (std::string cur = to; !cur.empty(); cur = best.at(cur).second) path.push_back(cur);
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {

// Ids and names travel through comma/pipe-delimited record files.
bool clean_token(const std::string& s) {
    return !s.empty() && s.find_first_of(",|\t\n\r") == std::string::npos;
}

}  // namespace

std::vector<std::string> validate_scene(const Scene& scene) {
    std::vector<std::string> violations;
    auto flag = [&](const std::string& where, const std::string& what) {
        violations.push_back(where + ": " + what);
    };
    auto check_token = [&](const std::string& where, const std::string& token) {
        if (!clean_token(token))
            flag(where, "identifier '" + token + "' is empty or contains a delimiter character");
    };

    if (scene.vocabulary.empty()) flag("vocabulary", "empty vocabulary");
    for (const auto& name : scene.vocabulary) check_token("vocabulary", name);
    std::set<std::string> vocab(scene.vocabulary.begin(), scene.vocabulary.end());
    if (vocab.size() != scene.vocabulary.size()) flag("vocabulary", "duplicate names");

    std::set<std::string> vp_ids;
    for (const auto& v : scene.viewpoints) {
        const std::string where = "viewpoint " + v.id;
        check_token(where, v.id);
        if (!vp_ids.insert(v.id).second) flag(where, "duplicate viewpoint id");
        if (!v.position.allFinite()) flag(where, "non-finite position");
        std::set<std::string> seen;
        for (const auto& nb : v.neighbors) {
            if (nb == v.id) flag(where, "self-loop edge");
            if (!seen.insert(nb).second) flag(where, "duplicate neighbor " + nb);
            const Viewpoint* other = scene.find_viewpoint(nb);
            if (!other) {
                flag(where, "dangling neighbor id " + nb);
            } else if (std::find(other->neighbors.begin(), other->neighbors.end(), v.id) ==
                       other->neighbors.end()) {
                flag(where, "asymmetric adjacency: " + nb + " does not list " + v.id + " back");
            }
        }
    }

    // Connectivity over the declared (possibly asymmetric) adjacency.
    if (!scene.viewpoints.empty()) {
        std::set<std::string> reached;
        std::vector<std::string> stack = {scene.viewpoints.front().id};
        while (!stack.empty()) {
            std::string id = stack.back();
            stack.pop_back();
            if (!reached.insert(id).second) continue;
            if (const Viewpoint* v = scene.find_viewpoint(id))
                for (const auto& nb : v->neighbors)
                    if (scene.find_viewpoint(nb)) stack.push_back(nb);
        }
        if (reached.size() != scene.viewpoints.size())
            flag("viewpoints", "graph is not connected");
    }

    std::set<std::string> obj_ids;
    for (const auto& o : scene.objects) {
        const std::string where = "object " + o.id;
        check_token(where, o.id);
        if (!obj_ids.insert(o.id).second) flag(where, "duplicate object id");
        if (o.name.empty()) flag(where, "empty name");
        else if (!vocab.count(o.name)) flag(where, "name '" + o.name + "' not in vocabulary");
        if (!box_valid(o.box)) flag(where, "invalid oriented box");
    }

    std::set<std::string> observed_vps;
    for (const auto& obs : scene.observations) {
        const std::string where = "observation for " + obs.viewpoint_id;
        if (!vp_ids.count(obs.viewpoint_id)) flag(where, "unknown viewpoint id");
        if (!observed_vps.insert(obs.viewpoint_id).second) flag(where, "duplicate observation");
        std::set<std::string> seen;
        for (const auto& oid : obs.object_ids) {
            if (!obj_ids.count(oid)) flag(where, "dangling object id " + oid);
            if (!seen.insert(oid).second) flag(where, "duplicate object id " + oid);
        }
    }
    for (const auto& v : scene.viewpoints)
        if (!observed_vps.count(v.id))
            flag("observation for " + v.id, "missing observation sequence");

    for (const auto& ep : scene.episodes) {
        const std::string where = "episode " + ep.id;
        check_token(where, ep.id);
        if (!vp_ids.count(ep.start_viewpoint)) flag(where, "unknown start viewpoint");
        if (!vp_ids.count(ep.goal_viewpoint)) flag(where, "unknown goal viewpoint");
        if (ep.gt_path.empty()) {
            flag(where, "empty gt_path");
        } else {
            if (ep.gt_path.front() != ep.start_viewpoint)
                flag(where, "gt_path does not start at start_viewpoint");
            if (ep.gt_path.back() != ep.goal_viewpoint)
                flag(where, "gt_path does not end at goal_viewpoint");
            for (std::size_t i = 1; i < ep.gt_path.size(); ++i) {
                const Viewpoint* prev = scene.find_viewpoint(ep.gt_path[i - 1]);
                if (!prev || !vp_ids.count(ep.gt_path[i])) {
                    flag(where, "gt_path references unknown viewpoint " + ep.gt_path[i - 1]);
                    break;
                }
                if (std::find(prev->neighbors.begin(), prev->neighbors.end(), ep.gt_path[i]) ==
                    prev->neighbors.end())
                    flag(where, "gt_path hop " + ep.gt_path[i - 1] + " -> " + ep.gt_path[i] +
                                    " is not an edge");
            }
        }
        for (const auto& step : ep.skill_plan)
            if (!obj_ids.count(step.target_object_id))
                flag(where, "skill target references unknown object " + step.target_object_id);
        for (const auto& lm : ep.landmark_list)
            if (lm.empty()) flag(where, "empty landmark name");
    }

    return violations;
}

}  // namespace vlnsim
