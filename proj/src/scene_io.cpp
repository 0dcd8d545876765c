#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vlnsim/scene.hpp"

namespace vlnsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::runtime_error(where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing key '") + key + "'");
    return j.at(key);
}

std::string need_string(const json& j, const char* key, const std::string& where) {
    const json& v = need(j, key, where);
    if (!v.is_string()) fail(where, std::string("key '") + key + "' must be a string");
    return v.get<std::string>();
}

Vec3 as_vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) fail(where, "expected a 3-element array");
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
        if (!j[i].is_number()) fail(where, "expected numeric components");
        v[i] = j[i].get<double>();
    }
    return v;
}

Mat3 as_mat3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) fail(where, "rotation must be a row-major 3x3 matrix");
    Mat3 m;
    for (int r = 0; r < 3; ++r) {
        const Vec3 row = as_vec3(j[r], where + " row " + std::to_string(r));
        for (int c = 0; c < 3; ++c) m(r, c) = row[c];
    }
    return m;
}

json vec3_to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json mat3_to_json(const Mat3& m) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r) rows.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
    return rows;
}

std::string skill_to_string(SkillKind kind) {
    return kind == SkillKind::Approach ? "approach" : "through";
}

SkillKind skill_from_string(const std::string& s, const std::string& where) {
    if (s == "approach") return SkillKind::Approach;
    if (s == "through") return SkillKind::Through;
    fail(where, "unknown skill '" + s + "'");
}

}  // namespace

std::string scene_to_json(const Scene& scene) {
    json j;
    j["vocabulary"] = scene.vocabulary;

    j["viewpoints"] = json::array();
    j["edges"] = json::array();
    for (const auto& v : scene.viewpoints) {
        j["viewpoints"].push_back({{"id", v.id}, {"position", vec3_to_json(v.position)}});
        for (const auto& nb : v.neighbors) j["edges"].push_back(json::array({v.id, nb}));
    }

    j["objects"] = json::array();
    for (const auto& o : scene.objects)
        j["objects"].push_back({{"id", o.id},
                                {"name", o.name},
                                {"box",
                                 {{"centroid", vec3_to_json(o.box.c)},
                                  {"dimensions", vec3_to_json(o.box.s)},
                                  {"rotation", mat3_to_json(o.box.R)}}}});

    j["observations"] = json::array();
    for (const auto& obs : scene.observations)
        j["observations"].push_back({{"viewpoint", obs.viewpoint_id}, {"objects", obs.object_ids}});

    j["episodes"] = json::array();
    for (const auto& ep : scene.episodes) {
        json plan = json::array();
        for (const auto& step : ep.skill_plan)
            plan.push_back({{"skill", skill_to_string(step.skill)}, {"target", step.target_object_id}});
        j["episodes"].push_back({{"id", ep.id},
                                 {"instruction", ep.instruction},
                                 {"landmarks", ep.landmark_list},
                                 {"start", ep.start_viewpoint},
                                 {"goal", ep.goal_viewpoint},
                                 {"gt_path", ep.gt_path},
                                 {"skill_plan", plan}});
    }
    return j.dump(2) + "\n";
}

Scene scene_from_json(const std::string& text, const std::string& name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(name, std::string("JSON parse error: ") + e.what());
    }

    Scene scene;
    scene.name = name;

    const json& vocab = need(j, "vocabulary", name);
    if (!vocab.is_array()) fail(name, "vocabulary must be an array");
    for (const auto& v : vocab) scene.vocabulary.push_back(v.get<std::string>());

    for (const auto& vj : need(j, "viewpoints", name)) {
        Viewpoint v;
        v.id = need_string(vj, "id", name + "/viewpoints");
        v.position = as_vec3(need(vj, "position", name + "/viewpoint " + v.id),
                             name + "/viewpoint " + v.id + " position");
        scene.viewpoints.push_back(std::move(v));
    }

    for (const auto& ej : need(j, "edges", name)) {
        if (!ej.is_array() || ej.size() != 2) fail(name + "/edges", "edge must be a [from, to] pair");
        const std::string from = ej[0].get<std::string>();
        const std::string to = ej[1].get<std::string>();
        bool attached = false;
        for (auto& v : scene.viewpoints)
            if (v.id == from) {
                v.neighbors.push_back(to);
                attached = true;
            }
        if (!attached) fail(name + "/edges", "edge references unknown viewpoint " + from);
    }

    for (const auto& oj : need(j, "objects", name)) {
        SceneObject o;
        o.id = need_string(oj, "id", name + "/objects");
        const std::string where = name + "/object " + o.id;
        o.name = need_string(oj, "name", where);
        const json& box = need(oj, "box", where);
        o.box.c = as_vec3(need(box, "centroid", where), where + " centroid");
        o.box.s = as_vec3(need(box, "dimensions", where), where + " dimensions");
        o.box.R = as_mat3(need(box, "rotation", where), where + " rotation");
        scene.objects.push_back(std::move(o));
    }

    for (const auto& sj : need(j, "observations", name)) {
        ObservationSequence obs;
        obs.viewpoint_id = need_string(sj, "viewpoint", name + "/observations");
        const std::string where = name + "/observation " + obs.viewpoint_id;
        for (const auto& id : need(sj, "objects", where)) obs.object_ids.push_back(id.get<std::string>());
        scene.observations.push_back(std::move(obs));
    }

    for (const auto& ej : need(j, "episodes", name)) {
        Episode ep;
        ep.id = need_string(ej, "id", name + "/episodes");
        const std::string where = name + "/episode " + ep.id;
        ep.instruction = need_string(ej, "instruction", where);
        for (const auto& lm : need(ej, "landmarks", where)) ep.landmark_list.push_back(lm.get<std::string>());
        ep.start_viewpoint = need_string(ej, "start", where);
        ep.goal_viewpoint = need_string(ej, "goal", where);
        for (const auto& v : need(ej, "gt_path", where)) ep.gt_path.push_back(v.get<std::string>());
        for (const auto& sp : need(ej, "skill_plan", where)) {
            SkillStep step;
            step.skill = skill_from_string(need_string(sp, "skill", where), where);
            step.target_object_id = need_string(sp, "target", where);
            ep.skill_plan.push_back(std::move(step));
        }
        scene.episodes.push_back(std::move(ep));
    }

    return scene;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open scene file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return scene_from_json(buf.str(), std::filesystem::path(path).stem().string());
}

void save_scene(const Scene& scene, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << scene_to_json(scene);
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace vlnsim
