#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "vlnsim/scene.hpp"

namespace vlnsim {

namespace {

// Canonical vocabulary; truncated to vocab_size, extended with generic names
// beyond 20. Order matters: small vocabularies keep a goal name first so minimal
// scenes still produce an episode.
const std::vector<std::string> kCanonicalVocab = {
    "chair",  "table",   "door",    "window", "plant",        "lamp",  "sofa",
    "bed",    "mirror",  "picture", "desk",   "shelf",        "stairs", "pillow",
    "cabinet", "refrigerator", "sink", "counter", "television", "toilet"};

// Names usable as episode goals; everything else (minus "door") fills rooms.
const std::set<std::string> kGoalNames = {
    "chair",   "table",        "sofa",    "bed",        "desk",
    "cabinet", "refrigerator", "counter", "television", "shelf"};

constexpr double kDefaultDeltaSafe = 0.3;  // must match SkillParams::delta_safe

std::string pad_id(const char* prefix, int index, int count) {
    int width = 1;
    for (int v = count - 1; v >= 10; v /= 10) ++width;
    std::string digits = std::to_string(index);
    return prefix + std::string(width - static_cast<int>(digits.size()), '0') + digits;
}

Mat3 rot_z(double angle) {
    return Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
}

struct GenState {
    const GenParams& params;
    Rng rng;
    Scene scene;
    std::vector<std::string> goal_name_pool;    // unused goal names, in order
    std::vector<std::string> filler_name_pool;
    std::map<std::string, std::string> waypoint_object;   // viewpoint -> small on-spot object
    std::map<std::string, int> relevant_count;            // viewpoint -> landmark objects hosted
    std::map<std::string, std::string> home_viewpoint;    // object -> viewpoint it belongs to
    std::map<std::string, Vec3> goal_placement_dir;       // goal object -> approach direction
    std::set<std::string> relevant_objects;               // landmark / door object ids
    std::string door_object_id;
    std::pair<std::string, std::string> door_edge;  // endpoints, or empty when absent
    int next_object = 0;
    int total_objects = 0;

    GenState(const GenParams& p, std::uint64_t seed)
        : params(p), rng(splitmix64(seed ^ fnv1a64("scene-gen"))) {}
};

void build_viewpoints(GenState& g) {
    const auto& p = g.params;
    const int count = p.rows * p.cols;
    for (int r = 0; r < p.rows; ++r)
        for (int c = 0; c < p.cols; ++c) {
            Viewpoint v;
            v.id = pad_id("v", r * p.cols + c, count);
            v.position = Vec3(c * p.spacing, r * p.spacing, 0.0);
            if (c > 0) v.neighbors.push_back(pad_id("v", r * p.cols + c - 1, count));
            if (c + 1 < p.cols) v.neighbors.push_back(pad_id("v", r * p.cols + c + 1, count));
            if (r > 0) v.neighbors.push_back(pad_id("v", (r - 1) * p.cols + c, count));
            if (r + 1 < p.rows) v.neighbors.push_back(pad_id("v", (r + 1) * p.cols + c, count));
            std::sort(v.neighbors.begin(), v.neighbors.end());
            g.scene.viewpoints.push_back(std::move(v));
        }
}

std::string add_object(GenState& g, const std::string& name, const OrientedBox& box,
                       const std::string& home_vp) {
    SceneObject obj;
    obj.id = pad_id("o", g.next_object++, g.total_objects);
    obj.name = name;
    obj.box = box;
    g.home_viewpoint[obj.id] = home_vp;
    g.scene.objects.push_back(std::move(obj));
    return g.scene.objects.back().id;
}

// One thin tall marker per viewpoint plus one clutter object per filler class.
// Markers sit almost exactly on the viewpoint, so Approach targets aimed at
// them project back onto that viewpoint with a wide margin even under
// calibrated centroid drift. Clutter sizes are banded per class (windows are
// always bigger than plants, and so on), which makes the volume ranking retain
// classes one at a time as the retention ratio grows.
void build_furniture(GenState& g) {
    for (std::size_t vi = 0; vi < g.scene.viewpoints.size(); ++vi) {
        const Viewpoint& vp = g.scene.viewpoints[vi];

        OrientedBox pole;
        pole.s = Vec3(0.1, 0.1, g.rng.uniform(1.4, 1.6));
        pole.c = vp.position +
                 Vec3(g.rng.uniform(-0.05, 0.05), g.rng.uniform(-0.05, 0.05), 0.5 * pole.s[2]);
        pole.R = rot_z(g.rng.uniform(0.0, 2.0 * M_PI));
        const std::string pole_name = g.filler_name_pool[vi % g.filler_name_pool.size()];
        g.waypoint_object[vp.id] = add_object(g, pole_name, pole, vp.id);

        for (int k = 1; k < g.params.objects_per_viewpoint; ++k) {
            const std::size_t cls = (k - 1) % g.filler_name_pool.size();
            const double base = 1.45 * std::pow(0.87, static_cast<double>(cls));
            OrientedBox box;
            box.s = Vec3(g.rng.uniform(base, 1.05 * base), g.rng.uniform(base, 1.05 * base),
                         g.rng.uniform(base, 1.05 * base));
            const double radius = g.rng.uniform(0.3, 0.7);
            const double angle = g.rng.uniform(0.0, 2.0 * M_PI);
            box.c = vp.position +
                    Vec3(radius * std::cos(angle), radius * std::sin(angle), 0.5 * box.s[2]);
            box.R = rot_z(g.rng.uniform(0.0, 2.0 * M_PI));
            add_object(g, g.filler_name_pool[cls], box, vp.id);
        }
    }
}

// Single door per scene, centered on an interior edge of the middle row with its
// thinnest axis along the edge so the Through normal points down the corridor.
void build_door(GenState& g) {
    const auto& p = g.params;
    const int row = p.rows / 2;
    const int col = (p.cols - 1) / 2;
    const int count = p.rows * p.cols;
    const std::string a = pad_id("v", row * p.cols + col, count);
    const std::string b = pad_id("v", row * p.cols + col + 1, count);

    const Vec3 pa = g.scene.viewpoint(a).position;
    const Vec3 pb = g.scene.viewpoint(b).position;
    const Vec3 dir = (pb - pa).normalized();

    OrientedBox door;
    door.s = Vec3(g.rng.uniform(0.95, 1.05), g.rng.uniform(0.08, 0.12), g.rng.uniform(2.0, 2.1));
    door.c = 0.5 * (pa + pb) + Vec3(0, 0, 0.5 * door.s[2]);
    door.R.col(0) = dir.cross(Vec3::UnitZ());
    door.R.col(1) = dir;
    door.R.col(2) = Vec3::UnitZ();

    g.door_object_id = add_object(g, "door", door, a);
    g.door_edge = {a, b};
    g.relevant_objects.insert(g.door_object_id);
    g.relevant_count[a] += 1;
    g.relevant_count[b] += 1;
}

// Replaces a clutter object at the goal viewpoint with the episode's named goal.
// The centroid sits one stopping distance beyond the viewpoint along the path's
// final heading, so the Approach skill computed from the previous viewpoint stops
// essentially on the goal viewpoint itself.
std::string place_goal_object(GenState& g, const std::string& goal_vp, const Vec3& dir_last,
                              const std::string& name) {
    OrientedBox box;
    box.s = Vec3(g.rng.uniform(0.3, 0.45), g.rng.uniform(0.3, 0.45), g.rng.uniform(0.35, 0.5));
    box.R = rot_z(g.rng.uniform(0.0, 2.0 * M_PI));
    const double r_coll = 0.5 * std::hypot(box.s[0], box.s[1]);
    box.c = g.scene.viewpoint(goal_vp).position + dir_last * (r_coll + kDefaultDeltaSafe) +
            Vec3(0, 0, 0.5 * box.s[2]);

    // Convert an existing clutter object (keep per-viewpoint counts stable).
    for (auto& obj : g.scene.objects) {
        if (g.home_viewpoint.at(obj.id) != goal_vp) continue;
        if (obj.id == g.door_object_id || g.relevant_objects.count(obj.id)) continue;
        const bool is_waypoint = g.waypoint_object.at(goal_vp) == obj.id;
        if (is_waypoint && g.params.objects_per_viewpoint > 1) continue;
        obj.name = name;
        obj.box = box;
        g.relevant_objects.insert(obj.id);
        g.relevant_count[goal_vp] += 1;
        g.goal_placement_dir[obj.id] = dir_last;
        return obj.id;
    }
    throw std::runtime_error("no object left to convert into a goal at " + goal_vp);
}

// An existing goal object can be shared only when the new episode approaches it
// from the same heading; otherwise its placement no longer matches the path.
std::string find_reusable_goal(const GenState& g, const std::string& goal_vp,
                               const Vec3& dir_last) {
    for (const auto& obj : g.scene.objects) {
        if (!g.goal_placement_dir.count(obj.id)) continue;
        if (g.home_viewpoint.at(obj.id) != goal_vp) continue;
        if (g.goal_placement_dir.at(obj.id).dot(dir_last) > 0.999) return obj.id;
    }
    return "";
}

std::string take_goal_name(GenState& g, std::size_t episode_index) {
    if (!g.goal_name_pool.empty()) {
        std::string name = g.goal_name_pool.front();
        g.goal_name_pool.erase(g.goal_name_pool.begin());
        return name;
    }
    // Name pool exhausted; duplicate names make planner decoys possible, which is
    // acceptable for oversized configs but never happens with defaults.
    std::vector<std::string> all(kGoalNames.begin(), kGoalNames.end());
    return all[episode_index % all.size()];
}

void build_skill_plan(GenState& g, Episode& ep, const std::string& goal_object) {
    for (std::size_t k = 1; k < ep.gt_path.size(); ++k) {
        const std::string& prev = ep.gt_path[k - 1];
        const std::string& cur = ep.gt_path[k];
        const bool is_door_edge =
            !g.door_object_id.empty() &&
            ((prev == g.door_edge.first && cur == g.door_edge.second) ||
             (prev == g.door_edge.second && cur == g.door_edge.first));
        if (is_door_edge)
            ep.skill_plan.push_back({SkillKind::Through, g.door_object_id});
        else if (k + 1 < ep.gt_path.size())
            ep.skill_plan.push_back({SkillKind::Approach, g.waypoint_object.at(cur)});
    }
    ep.skill_plan.push_back({SkillKind::Approach, goal_object});
}

void build_episodes(GenState& g) {
    const auto& p = g.params;
    const int count = p.rows * p.cols;

    double max_separation = 0.0;
    for (const auto& a : g.scene.viewpoints)
        for (const auto& b : g.scene.viewpoints)
            max_separation = std::max(max_separation, (a.position - b.position).norm());
    const double min_sep = std::min(p.min_start_goal_distance, max_separation);

    // Which episodes traverse the door: spread evenly by the requested fraction.
    std::vector<bool> is_door_episode(p.episodes, false);
    const bool door_possible = p.cols >= 3 &&
                               std::find(g.scene.vocabulary.begin(), g.scene.vocabulary.end(),
                                         "door") != g.scene.vocabulary.end();
    if (door_possible && p.door_fraction > 0.0) {
        for (int i = 0; i < p.episodes; ++i)
            is_door_episode[i] = static_cast<int>(std::floor((i + 1) * p.door_fraction)) >
                                 static_cast<int>(std::floor(i * p.door_fraction));
        if (std::none_of(is_door_episode.begin(), is_door_episode.end(), [](bool b) { return b; }))
            is_door_episode[0] = p.episodes > 0;
    }
    if (std::any_of(is_door_episode.begin(), is_door_episode.end(), [](bool b) { return b; }))
        build_door(g);

    for (int i = 0; i < p.episodes; ++i) {
        Episode ep;
        ep.id = pad_id("e", i, p.episodes);

        // A goal viewpoint is usable when it still has landmark capacity (at most
        // two instruction-relevant objects, so a 0.2 retention ratio keeps them
        // all) or when an existing goal object there can be shared.
        auto goal_vp_usable = [&](const std::string& vp, const Vec3& incoming) {
            return g.relevant_count[vp] < 2 || !find_reusable_goal(g, vp, incoming).empty();
        };

        std::string goal_object;
        if (is_door_episode[i]) {
            const int row = p.rows / 2;
            const int col = (p.cols - 1) / 2;
            const Vec3 along_row = Vec3::UnitX();
            std::vector<std::pair<int, int>> pairs;
            for (int sc = 0; sc <= col; ++sc)
                for (int gc = col + 1; gc < p.cols; ++gc) {
                    if (gc - sc < 2 || (gc - sc) * p.spacing < min_sep - 1e-9) continue;
                    if (!goal_vp_usable(pad_id("v", row * p.cols + gc, count), along_row))
                        continue;
                    pairs.emplace_back(sc, gc);
                }
            if (pairs.empty()) pairs.emplace_back(0, p.cols - 1);
            const auto [sc, gc] = pairs[g.rng.uniform_int(pairs.size())];
            for (int c = sc; c <= gc; ++c)
                ep.gt_path.push_back(pad_id("v", row * p.cols + c, count));
        } else {
            const int attempts = 500;
            for (int a = 0; a < attempts && ep.gt_path.empty(); ++a) {
                const auto si = g.rng.uniform_int(g.scene.viewpoints.size());
                const auto gi = g.rng.uniform_int(g.scene.viewpoints.size());
                if (si == gi) continue;
                const Viewpoint& s = g.scene.viewpoints[si];
                const Viewpoint& t = g.scene.viewpoints[gi];
                if ((s.position - t.position).norm() < min_sep - 1e-9) continue;
                auto path = shortest_path(g.scene, s.id, t.id);
                if (path.size() < 2) continue;
                const Vec3 incoming =
                    (t.position - g.scene.viewpoint(path[path.size() - 2]).position).normalized();
                if (!goal_vp_usable(t.id, incoming)) continue;
                ep.gt_path = std::move(path);
            }
            if (ep.gt_path.empty())
                throw std::runtime_error("episode placement failed; grid too constrained");
        }

        ep.start_viewpoint = ep.gt_path.front();
        ep.goal_viewpoint = ep.gt_path.back();
        const Vec3 dir_last = (g.scene.viewpoint(ep.goal_viewpoint).position -
                               g.scene.viewpoint(ep.gt_path[ep.gt_path.size() - 2]).position)
                                  .normalized();

        goal_object = find_reusable_goal(g, ep.goal_viewpoint, dir_last);
        std::string goal_name;
        if (goal_object.empty()) {
            goal_name = take_goal_name(g, static_cast<std::size_t>(i));
            goal_object = place_goal_object(g, ep.goal_viewpoint, dir_last, goal_name);
        } else {
            goal_name = g.scene.object(goal_object).name;
        }

        if (is_door_episode[i]) {
            ep.instruction = "go through the door and approach the " + goal_name;
            ep.landmark_list = {"door", goal_name};
        } else {
            ep.instruction = "walk to the " + goal_name;
            ep.landmark_list = {goal_name};
        }
        build_skill_plan(g, ep, goal_object);
        g.scene.episodes.push_back(std::move(ep));
    }
}

void build_observations(GenState& g) {
    auto volume = [&](const std::string& id) { return g.scene.object(id).box.s.prod(); };
    auto rank = [&](const std::string& lhs, const std::string& rhs) {
        const double vl = volume(lhs), vr = volume(rhs);
        if (vl != vr) return vl > vr;
        return lhs < rhs;
    };

    for (const auto& vp : g.scene.viewpoints) {
        std::vector<std::string> relevant, rest;
        for (const auto& obj : g.scene.objects) {
            const bool at_vp = g.home_viewpoint.at(obj.id) == vp.id ||
                               (obj.id == g.door_object_id &&
                                (vp.id == g.door_edge.first || vp.id == g.door_edge.second));
            if (!at_vp) continue;
            (g.relevant_objects.count(obj.id) ? relevant : rest).push_back(obj.id);
        }
        std::sort(relevant.begin(), relevant.end(), rank);
        std::sort(rest.begin(), rest.end(), rank);

        ObservationSequence obs;
        obs.viewpoint_id = vp.id;
        obs.object_ids = std::move(relevant);
        obs.object_ids.insert(obs.object_ids.end(), rest.begin(), rest.end());
        g.scene.observations.push_back(std::move(obs));
    }
}

}  // namespace

Scene generate_scene(const GenParams& params, std::uint64_t seed) {
    if (params.rows < 1 || params.cols < 1 || params.rows * params.cols < 2)
        throw std::invalid_argument("scene grid needs at least two viewpoints");
    if (params.spacing <= 0.0) throw std::invalid_argument("viewpoint spacing must be positive");
    if (params.objects_per_viewpoint < 1)
        throw std::invalid_argument("need at least one object per viewpoint");
    if (params.vocab_size < 2) throw std::invalid_argument("vocabulary needs at least two names");
    if (params.episodes < 1) throw std::invalid_argument("need at least one episode");
    if (params.door_fraction < 0.0 || params.door_fraction > 1.0)
        throw std::invalid_argument("door_fraction must lie in [0, 1]");

    GenState g(params, seed);
    g.scene.name = "scene";

    for (int i = 0; i < params.vocab_size; ++i)
        g.scene.vocabulary.push_back(i < static_cast<int>(kCanonicalVocab.size())
                                         ? kCanonicalVocab[i]
                                         : "object" + std::to_string(i));
    for (const auto& name : g.scene.vocabulary) {
        if (name == "door") continue;
        (kGoalNames.count(name) ? g.goal_name_pool : g.filler_name_pool).push_back(name);
    }
    if (g.filler_name_pool.empty()) g.filler_name_pool.push_back(g.scene.vocabulary.back());
    if (g.goal_name_pool.empty()) g.goal_name_pool.push_back(g.scene.vocabulary.front());

    g.total_objects = params.rows * params.cols * params.objects_per_viewpoint + 1;

    build_viewpoints(g);
    build_furniture(g);
    build_episodes(g);
    build_observations(g);
    return g.scene;
}

}  // namespace vlnsim
