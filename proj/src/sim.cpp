#include "vlnsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace vlnsim {

namespace {

double viewpoint_distance(const Scene& scene, const std::string& a, const std::string& b) {
    return (scene.viewpoint(a).position - scene.viewpoint(b).position).norm();
}

std::vector<std::string> object_names(const Scene& scene, const std::vector<std::string>& ids) {
    std::vector<std::string> names;
    names.reserve(ids.size());
    for (const auto& id : ids) names.push_back(scene.object(id).name);
    return names;
}

}  // namespace

EpisodeOutcome run_slow_episode(const Scene& scene, const Episode& episode,
                                const DegradationConfig& config, const SimParams& params,
                                Planner& planner, std::uint64_t seed, TopoGraph* degraded_out,
                                TopoGraph* ideal_out) {
    Rng rng(seed);
    TopoGraph degraded, ideal;
    std::vector<std::string> step_viewpoints;
    TopologyView view(scene, step_viewpoints);

    EpisodeOutcome out;
    out.shortest_length =
        shortest_path_length(scene, episode.start_viewpoint, episode.goal_viewpoint).value_or(0.0);
    const Vec3 goal_pos = scene.viewpoint(episode.goal_viewpoint).position;

    PlannerState state;
    state.current_viewpoint = episode.start_viewpoint;
    state.visited.insert(episode.start_viewpoint);

    out.min_goal_distance = (scene.viewpoint(episode.start_viewpoint).position - goal_pos).norm();
    out.trajectory.push_back(episode.start_viewpoint);

    int t = 0;
    auto observe = [&](const std::string& vp_id) {
        const ObservationSequence* obs = scene.find_observation(vp_id);
        const std::vector<std::string> ideal_ids = obs ? obs->object_ids : std::vector<std::string>{};
        const std::vector<std::string> ideal_names = object_names(scene, ideal_ids);
        std::vector<std::string> deg_names =
            object_names(scene, truncate_observation(ObservationSequence{vp_id, ideal_ids},
                                                     config.rho_ret)
                                    .object_ids);
        if (config.false_positive_rate > 0.0)
            deg_names = inject_false_positives(deg_names, scene.vocabulary,
                                               config.false_positive_rate, rng);
        record_step(ideal, t, ideal_names);
        record_step(degraded, t, deg_names);
        step_viewpoints.push_back(vp_id);
        ++t;

        // Arrival bookkeeping: tick off landmarks the agent can see right now.
        const std::set<std::string> seen(deg_names.begin(), deg_names.end());
        while (state.progress_index < episode.landmark_list.size() &&
               seen.count(episode.landmark_list[state.progress_index]))
            ++state.progress_index;
    };

    observe(episode.start_viewpoint);

    bool hit_max_steps = false;
    while (true) {
        if (state.step_count >= params.max_steps) {
            hit_max_steps = true;
            break;
        }
        const PlannerDecision decision = planner.next_action(state, degraded, episode, view);
        if (decision.action == PlannerDecision::Action::Stop) break;
        // Slow runs navigate the graph only; skill requests and moves to
        // non-neighbors end the episode where it stands.
        if (decision.action == PlannerDecision::Action::ExecuteSkill) break;
        const std::string& target = decision.target_viewpoint;
        const auto& nbs = scene.viewpoint(state.current_viewpoint).neighbors;
        if (std::find(nbs.begin(), nbs.end(), target) == nbs.end()) break;
        out.path_length += viewpoint_distance(scene, state.current_viewpoint, target);
        state.current_viewpoint = target;
        state.visited.insert(target);
        state.step_count += 1;
        out.trajectory.push_back(target);
        out.min_goal_distance = std::min(
            out.min_goal_distance, (scene.viewpoint(target).position - goal_pos).norm());
        observe(target);
    }

    out.steps = state.step_count;
    out.final_goal_distance =
        (scene.viewpoint(state.current_viewpoint).position - goal_pos).norm();
    out.success = out.final_goal_distance <= params.success_threshold;
    out.oracle_success = out.min_goal_distance <= params.success_threshold;
    if (!out.success) {
        if (hit_max_steps)
            out.failure_reason = "max_steps";
        else if (state.progress_index < episode.landmark_list.size())
            out.failure_reason = degraded.object_nodes.empty() ? "zero_recall_stop" : "landmark_not_found";
        else
            out.failure_reason = "stopped_off_goal";
    }

    if (!ideal.edges.empty()) {
        out.has_match = true;
        out.match = matching_score(degraded, ideal, config.lambda);
    }
    if (degraded_out) *degraded_out = std::move(degraded);
    if (ideal_out) *ideal_out = std::move(ideal);
    return out;
}

EpisodeOutcome run_fast_episode(const Scene& scene, const Episode& episode,
                                const DegradationConfig& config, const SimParams& params,
                                std::uint64_t seed) {
    if (episode.skill_plan.empty())
        throw std::invalid_argument("episode " + episode.id + " has no skill plan");
    if (!(config.phi_iou > 0.0 && config.phi_iou <= 1.0))
        throw std::invalid_argument("phi_iou must lie in (0, 1]");

    Rng rng(seed);
    EpisodeOutcome out;
    out.shortest_length =
        shortest_path_length(scene, episode.start_viewpoint, episode.goal_viewpoint).value_or(0.0);
    const Vec3 goal_pos = scene.viewpoint(episode.goal_viewpoint).position;

    std::string current = episode.start_viewpoint;
    out.trajectory.push_back(current);
    out.min_goal_distance = (scene.viewpoint(current).position - goal_pos).norm();

    bool skill_error = false;
    for (const auto& step : episode.skill_plan) {
        OrientedBox box = perturb_box(scene.object(step.target_object_id).box, config.phi_iou, rng);
        if (config.dim_distortion.enabled())
            box = distort_dims(box, config.dim_distortion.mode, rng,
                               config.dim_distortion.probability);

        std::string chosen;
        try {
            const SkillOutcome skill = execute_skill(step.skill, scene.viewpoint(current).position,
                                                     box, params.skills, scene.viewpoints);
            chosen = skill.chosen_viewpoint;
        } catch (const GrazingIncidenceError&) {
            out.failure_reason = "grazing_incidence";
            out.failure_skill = step.skill == SkillKind::Through ? "through" : "approach";
            skill_error = true;
            break;
        }

        // Walk the navigation graph to the projected viewpoint.
        const auto path = shortest_path(scene, current, chosen);
        for (std::size_t i = 1; i < path.size(); ++i) {
            out.path_length += viewpoint_distance(scene, path[i - 1], path[i]);
            out.trajectory.push_back(path[i]);
            out.min_goal_distance = std::min(
                out.min_goal_distance, (scene.viewpoint(path[i]).position - goal_pos).norm());
        }
        current = chosen;
        out.steps += 1;
    }

    // An aborted skill fails the episode no matter where the agent stands;
    // the infinite final distance keeps distance-based metrics consistent.
    out.final_goal_distance = skill_error
                                  ? std::numeric_limits<double>::infinity()
                                  : (scene.viewpoint(current).position - goal_pos).norm();
    out.success = out.final_goal_distance <= params.success_threshold;
    out.oracle_success = out.min_goal_distance <= params.success_threshold;
    if (out.success) {
        out.failure_reason.clear();
        out.failure_skill.clear();
    } else if (out.failure_reason.empty()) {
        out.failure_reason = "missed_goal";
    }
    return out;
}

MetricsReport compute_metrics(const std::vector<EpisodeOutcome>& outcomes,
                              double success_threshold) {
    if (outcomes.empty()) throw std::invalid_argument("compute_metrics needs at least one outcome");
    MetricsReport report;
    report.n = static_cast<int>(outcomes.size());
    double sr = 0.0, osr = 0.0, spl = 0.0;
    for (const auto& o : outcomes) {
        const bool success = o.final_goal_distance <= success_threshold;
        const bool oracle = o.min_goal_distance <= success_threshold;
        sr += success;
        osr += oracle;
        const double denom = std::max(o.path_length, o.shortest_length);
        spl += success * (denom > 0.0 ? o.shortest_length / denom : 1.0);
    }
    report.sr = 100.0 * sr / report.n;
    report.osr = 100.0 * osr / report.n;
    report.spl = 100.0 * spl / report.n;
    return report;
}

PlannerFactory scripted_planner_factory() {
    return [](const Scene&) { return std::make_unique<ScriptedPlanner>(); };
}

namespace {

struct SweepTask {
    int grid_index;
    std::size_t scene_index;
    std::size_t episode_index;
};

std::vector<SweepTask> enumerate_tasks(const std::vector<Scene>& scenes,
                                       const std::vector<DegradationConfig>& grid) {
    std::vector<SweepTask> tasks;
    for (int g = 0; g < static_cast<int>(grid.size()); ++g)
        for (std::size_t s = 0; s < scenes.size(); ++s)
            for (std::size_t e = 0; e < scenes[s].episodes.size(); ++e)
                tasks.push_back({g, s, e});
    return tasks;
}

SweepRecord run_task(const std::vector<Scene>& scenes, const std::vector<DegradationConfig>& grid,
                     SweepMode mode, const SimParams& params,
                     const PlannerFactory& planner_factory, std::uint64_t master_seed,
                     const SweepTask& task) {
    const Scene& scene = scenes[task.scene_index];
    const Episode& episode = scene.episodes[task.episode_index];
    const DegradationConfig& config = grid[task.grid_index];

    SweepRecord rec;
    rec.mode = mode;
    rec.grid_index = task.grid_index;
    rec.grid_value = mode == SweepMode::Slow ? config.rho_ret : config.phi_iou;
    rec.scene_name = scene.name;
    rec.episode_id = episode.id;
    rec.seed = derive_seed(master_seed, scene.name + "/" + episode.id,
                           static_cast<std::uint64_t>(task.grid_index));
    // Per-episode problems become failed records; a sweep never aborts.
    try {
        if (mode == SweepMode::Slow) {
            auto planner = planner_factory(scene);
            rec.outcome = run_slow_episode(scene, episode, config, params, *planner, rec.seed);
        } else {
            rec.outcome = run_fast_episode(scene, episode, config, params, rec.seed);
        }
    } catch (const std::exception& e) {
        rec.outcome = EpisodeOutcome{};
        rec.outcome.final_goal_distance = std::numeric_limits<double>::infinity();
        rec.outcome.min_goal_distance = std::numeric_limits<double>::infinity();
        rec.outcome.failure_reason = std::string("episode_error: ") + e.what();
        rec.outcome.trajectory = {episode.start_viewpoint};
    }
    return rec;
}

}  // namespace

std::vector<SweepRecord> run_sweep_serial(const std::vector<Scene>& scenes,
                                          const std::vector<DegradationConfig>& grid,
                                          SweepMode mode, const SimParams& params,
                                          const PlannerFactory& planner_factory,
                                          std::uint64_t master_seed) {
    if (grid.empty()) throw std::invalid_argument("sweep grid must not be empty");
    const auto tasks = enumerate_tasks(scenes, grid);
    std::vector<SweepRecord> records(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i)
        records[i] = run_task(scenes, grid, mode, params, planner_factory, master_seed, tasks[i]);
    return records;
}

std::vector<SweepRecord> run_sweep(const std::vector<Scene>& scenes,
                                   const std::vector<DegradationConfig>& grid, SweepMode mode,
                                   const SimParams& params, const PlannerFactory& planner_factory,
                                   std::uint64_t master_seed, int jobs) {
    if (jobs <= 1)
        return run_sweep_serial(scenes, grid, mode, params, planner_factory, master_seed);
    if (grid.empty()) throw std::invalid_argument("sweep grid must not be empty");

    const auto tasks = enumerate_tasks(scenes, grid);
    std::vector<SweepRecord> records(tasks.size());
    // Indexed writes keep the result independent of scheduling; every task derives
    // its own seed, so no rng stream is shared across iterations.
    const auto n = static_cast<long long>(tasks.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (long long i = 0; i < n; ++i)
        records[static_cast<std::size_t>(i)] = run_task(scenes, grid, mode, params,
                                                        planner_factory, master_seed,
                                                        tasks[static_cast<std::size_t>(i)]);
    return records;
}

}  // namespace vlnsim
