#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "vlnsim/scene.hpp"

using namespace vlnsim;

namespace {

GenParams default_params() { return GenParams{}; }

Scene line_scene(int n, double spacing = 1.0) {
    Scene scene;
    scene.vocabulary = {"chair", "table"};
    for (int i = 0; i < n; ++i) {
        Viewpoint v;
        v.id = "v" + std::to_string(i);
        v.position = Vec3(i * spacing, 0, 0);
        if (i > 0) v.neighbors.push_back("v" + std::to_string(i - 1));
        if (i + 1 < n) v.neighbors.push_back("v" + std::to_string(i + 1));
        scene.viewpoints.push_back(v);
        scene.observations.push_back({v.id, {}});
    }
    return scene;
}

}  // namespace

TEST_CASE("shortest path length basics") {
    Scene scene = line_scene(3);
    CHECK(shortest_path_length(scene, "v0", "v0") == doctest::Approx(0.0));
    CHECK(shortest_path_length(scene, "v0", "v2") == doctest::Approx(2.0));

    Scene two = line_scene(2, 2.0);
    CHECK(shortest_path_length(two, "v0", "v1") == doctest::Approx(2.0));

    CHECK_THROWS_AS(shortest_path_length(scene, "v0", "nope"), std::invalid_argument);

    // Disconnected pair reports unreachable explicitly.
    Scene split = line_scene(2);
    split.viewpoints[0].neighbors.clear();
    split.viewpoints[1].neighbors.clear();
    CHECK_FALSE(shortest_path_length(split, "v0", "v1").has_value());
    CHECK(shortest_path(split, "v0", "v1").empty());
}

TEST_CASE("triangle inequality holds exhaustively on a small grid") {
    GenParams params = default_params();
    params.rows = 3;
    params.cols = 3;
    params.objects_per_viewpoint = 2;
    params.episodes = 2;
    const Scene scene = generate_scene(params, 5);
    for (const auto& a : scene.viewpoints)
        for (const auto& b : scene.viewpoints)
            for (const auto& c : scene.viewpoints) {
                const double ac = *shortest_path_length(scene, a.id, c.id);
                const double ab = *shortest_path_length(scene, a.id, b.id);
                const double bc = *shortest_path_length(scene, b.id, c.id);
                CHECK(ac <= ab + bc + 1e-9);
            }
}

TEST_CASE("generator is a pure function of params and seed") {
    const GenParams params = default_params();
    const Scene a = generate_scene(params, 7);
    const Scene b = generate_scene(params, 7);
    CHECK(scene_to_json(a) == scene_to_json(b));

    const Scene c = generate_scene(params, 8);
    CHECK(scene_to_json(a) != scene_to_json(c));
}

TEST_CASE("generated scenes validate cleanly") {
    const Scene scene = generate_scene(default_params(), 1);
    const auto violations = validate_scene(scene);
    for (const auto& v : violations) MESSAGE(v);
    CHECK(violations.empty());
    CHECK(scene.viewpoints.size() == 16);
    CHECK(scene.episodes.size() == 10);
}

TEST_CASE("generated episode paths are shortest paths with ordered landmarks") {
    const Scene scene = generate_scene(default_params(), 42);
    for (const auto& ep : scene.episodes) {
        double length = 0.0;
        for (std::size_t i = 1; i < ep.gt_path.size(); ++i)
            length += (scene.viewpoint(ep.gt_path[i]).position -
                       scene.viewpoint(ep.gt_path[i - 1]).position)
                          .norm();
        CHECK(length ==
              doctest::Approx(*shortest_path_length(scene, ep.start_viewpoint, ep.goal_viewpoint)));

        // Landmarks appear along the path in instruction order.
        std::size_t cursor = 0;
        for (const auto& vp : ep.gt_path) {
            const ObservationSequence* obs = scene.find_observation(vp);
            REQUIRE(obs != nullptr);
            while (cursor < ep.landmark_list.size()) {
                bool found = false;
                for (const auto& oid : obs->object_ids)
                    if (scene.object(oid).name == ep.landmark_list[cursor]) found = true;
                if (!found) break;
                ++cursor;
            }
        }
        CHECK(cursor == ep.landmark_list.size());
    }
}

TEST_CASE("observations rank instruction-relevant objects first") {
    const Scene scene = generate_scene(default_params(), 42);
    std::set<std::string> relevant_names;
    for (const auto& ep : scene.episodes)
        relevant_names.insert(ep.landmark_list.begin(), ep.landmark_list.end());

    for (const auto& obs : scene.observations) {
        CHECK(obs.object_ids.size() >= 10);
        // At most two relevant objects anywhere, and they come first.
        int relevant_prefix = 0;
        bool in_prefix = true;
        int relevant_total = 0;
        double prev_volume = -1.0;
        for (std::size_t i = 0; i < obs.object_ids.size(); ++i) {
            const SceneObject& obj = scene.object(obs.object_ids[i]);
            const bool is_relevant = relevant_names.count(obj.name) > 0;
            if (is_relevant) {
                ++relevant_total;
                if (in_prefix) ++relevant_prefix;
            } else {
                if (in_prefix) prev_volume = -1.0;  // volume ordering restarts after the prefix
                in_prefix = false;
                const double vol = obj.box.s.prod();
                if (prev_volume >= 0.0) CHECK(vol <= prev_volume + 1e-12);
                prev_volume = vol;
            }
        }
        CHECK(relevant_total == relevant_prefix);  // all relevant objects lead the sequence
        CHECK(relevant_total <= 2);
    }
}

TEST_CASE("minimal corridor scene") {
    GenParams params;
    params.rows = 1;
    params.cols = 2;
    params.objects_per_viewpoint = 1;
    params.vocab_size = 2;
    params.episodes = 1;
    const Scene scene = generate_scene(params, 7);
    CHECK(scene.viewpoints.size() == 2);
    REQUIRE(scene.episodes.size() == 1);
    const Episode& ep = scene.episodes.front();
    CHECK(ep.instruction == "walk to the chair");
    CHECK(ep.landmark_list == std::vector<std::string>{"chair"});
    CHECK(ep.gt_path.size() == 2);
    CHECK(validate_scene(scene).empty());

    // The chair sits at the goal viewpoint.
    bool chair_at_goal = false;
    const ObservationSequence* obs = scene.find_observation(ep.goal_viewpoint);
    REQUIRE(obs != nullptr);
    for (const auto& oid : obs->object_ids)
        if (scene.object(oid).name == "chair") chair_at_goal = true;
    CHECK(chair_at_goal);
}

TEST_CASE("generator rejects invalid parameters") {
    GenParams bad = default_params();
    bad.rows = 1;
    bad.cols = 1;
    CHECK_THROWS_AS(generate_scene(bad, 1), std::invalid_argument);

    bad = default_params();
    bad.vocab_size = 1;
    CHECK_THROWS_AS(generate_scene(bad, 1), std::invalid_argument);

    bad = default_params();
    bad.episodes = 0;
    CHECK_THROWS_AS(generate_scene(bad, 1), std::invalid_argument);

    bad = default_params();
    bad.objects_per_viewpoint = 0;
    CHECK_THROWS_AS(generate_scene(bad, 1), std::invalid_argument);
}

TEST_CASE("scene json round-trip preserves bytes") {
    const Scene scene = generate_scene(default_params(), 3);
    const std::string json = scene_to_json(scene);
    const Scene reloaded = scene_from_json(json, scene.name);
    CHECK(scene_to_json(reloaded) == json);
    CHECK(validate_scene(reloaded).empty());
}

TEST_CASE("validator reports dangling and asymmetric references") {
    Scene scene = line_scene(2);
    scene.observations[0].object_ids.push_back("o9");
    auto violations = validate_scene(scene);
    bool dangling = false;
    for (const auto& v : violations)
        if (v.find("dangling object id o9") != std::string::npos) dangling = true;
    CHECK(dangling);

    Scene asym = line_scene(2);
    asym.viewpoints[1].neighbors.clear();  // v0 -> v1 with no back edge
    violations = validate_scene(asym);
    bool flagged = false;
    for (const auto& v : violations)
        if (v.find("asymmetric adjacency") != std::string::npos) flagged = true;
    CHECK(flagged);

    Scene loop = line_scene(2);
    loop.viewpoints[0].neighbors.push_back("v0");
    violations = validate_scene(loop);
    bool self_loop = false;
    for (const auto& v : violations)
        if (v.find("self-loop") != std::string::npos) self_loop = true;
    CHECK(self_loop);

    // Ids feed delimiter-separated record files, so delimiters are rejected.
    Scene weird = line_scene(2);
    weird.viewpoints[0].id = "v,0";
    violations = validate_scene(weird);
    bool delim = false;
    for (const auto& v : violations)
        if (v.find("delimiter") != std::string::npos) delim = true;
    CHECK(delim);
}

TEST_CASE("scene file load failures carry locations") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "vlnsim_scene_io_test";
    fs::create_directories(dir);

    auto expect_error = [](const std::string& path, const std::string& needle) {
        try {
            load_scene(path);
            FAIL_CHECK("expected load_scene to throw for " << path);
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    const fs::path bad = dir / "bad.json";
    std::ofstream(bad.string()) << "{ not json";
    expect_error(bad.string(), "JSON parse error");

    const fs::path missing = dir / "missing.json";
    std::ofstream(missing.string()) << "{\"vocabulary\": []}";
    expect_error(missing.string(), "missing key 'viewpoints'");

    CHECK_THROWS_AS(load_scene((dir / "absent.json").string()), std::runtime_error);
    fs::remove_all(dir);
}
