#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vlnsim/geometry.hpp"

namespace vlnsim {

struct Viewpoint {
    std::string id;
    Vec3 position = Vec3::Zero();
    std::vector<std::string> neighbors;
};

struct SceneObject {
    std::string id;
    std::string name;
    OrientedBox box;
};

// Ideal per-viewpoint observation: instruction-relevant objects first, the rest
// by decreasing box volume, ties by id. The order is part of the scene and never
// recomputed at run time.
struct ObservationSequence {
    std::string viewpoint_id;
    std::vector<std::string> object_ids;
};

enum class SkillKind { Approach, Through };

struct SkillStep {
    SkillKind skill = SkillKind::Approach;
    std::string target_object_id;
};

struct Episode {
    std::string id;
    std::string instruction;
    std::vector<std::string> landmark_list;  // ordered object names from the instruction
    std::string start_viewpoint;
    std::string goal_viewpoint;
    std::vector<std::string> gt_path;
    std::vector<SkillStep> skill_plan;
};

// Immutable once built; episodes running in parallel share scenes read-only.
struct Scene {
    std::string name;  // file stem or generator-assigned; not serialized
    std::vector<std::string> vocabulary;
    std::vector<Viewpoint> viewpoints;
    std::vector<SceneObject> objects;
    std::vector<ObservationSequence> observations;  // one per viewpoint
    std::vector<Episode> episodes;

    const Viewpoint* find_viewpoint(const std::string& id) const;
    const SceneObject* find_object(const std::string& id) const;
    const ObservationSequence* find_observation(const std::string& viewpoint_id) const;
    const Viewpoint& viewpoint(const std::string& id) const;  // throws on unknown id
    const SceneObject& object(const std::string& id) const;   // throws on unknown id
};

// Minimum-weight path under Euclidean edge weights; nullopt when unreachable.
// Throws std::invalid_argument on unknown ids.
std::optional<double> shortest_path_length(const Scene& scene, const std::string& from,
                                           const std::string& to);

// Full path including both endpoints; deterministic tie-breaking (viewpoints are
// settled in (distance, id) order and first-found parents win). Empty when
// unreachable.
std::vector<std::string> shortest_path(const Scene& scene, const std::string& from,
                                       const std::string& to);

// All type invariants plus cross-reference checks; one human-readable line per
// violation, each prefixed with its location.
std::vector<std::string> validate_scene(const Scene& scene);

struct GenParams {
    int rows = 4;
    int cols = 4;
    double spacing = 2.0;             // meters between adjacent viewpoints
    int objects_per_viewpoint = 10;
    int vocab_size = 20;
    int episodes = 10;
    double door_fraction = 0.3;       // share of episodes that traverse the scene door
    double min_start_goal_distance = 3.5;  // straight-line separation when the grid allows
};

// Deterministic synthetic scene builder; a pure function of (params, seed).
Scene generate_scene(const GenParams& params, std::uint64_t seed);

// JSON scene file round-trip. load_scene throws std::runtime_error with the
// offending location on malformed input; structural problems that parse cleanly
// (dangling ids, asymmetric adjacency) are left for validate_scene.
Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);
std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text, const std::string& name);

}  // namespace vlnsim
