#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vlnsim/geometry.hpp"
#include "vlnsim/planner.hpp"
#include "vlnsim/scene.hpp"
#include "vlnsim/skills.hpp"
#include "vlnsim/topograph.hpp"

namespace vlnsim {

struct DimDistortion {
    DimDistortMode mode = DimDistortMode::SwapMinMid;
    double probability = 0.0;  // 0 disables the probe entirely

    bool enabled() const { return probability > 0.0; }
};

// Perception degradation knobs for one run.
struct DegradationConfig {
    double rho_ret = 1.0;              // retention ratio, slow runs
    double phi_iou = 1.0;              // target box IoU, fast runs
    double false_positive_rate = 0.0;  // spurious-name probe, slow runs
    DimDistortion dim_distortion;      // aspect-ratio probe, fast runs
    double lambda = 0.5;               // matching-score fusion weight
    std::uint64_t master_seed = 0;
};

struct SimParams {
    SkillParams skills;
    double success_threshold = 3.0;  // meters from the goal viewpoint
    int max_steps = 20;              // planner decisions per slow episode
};

struct EpisodeOutcome {
    bool success = false;
    bool oracle_success = false;       // passed within threshold anywhere along the way
    double path_length = 0.0;          // meters actually walked
    double shortest_length = 0.0;      // shortest start-to-goal distance
    double final_goal_distance = 0.0;
    double min_goal_distance = 0.0;
    int steps = 0;                     // moves (slow) or skills executed (fast)
    bool has_match = false;            // slow runs carry a graph comparison
    MatchReport match;
    std::vector<std::string> trajectory;  // visited viewpoints in order
    std::string failure_reason;        // empty on success
    std::string failure_skill;         // skill kind for skill-tagged failures
};

struct MetricsReport {
    double sr = 0.0;   // percent
    double osr = 0.0;  // percent
    double spl = 0.0;  // percent
    int n = 0;
};

enum class SweepMode { Slow, Fast };

struct SweepRecord {
    SweepMode mode = SweepMode::Slow;
    int grid_index = 0;
    double grid_value = 0.0;  // rho_ret (slow) or phi_iou (fast)
    std::string scene_name;
    std::string episode_id;
    std::uint64_t seed = 0;
    EpisodeOutcome outcome;
};

// Walks one episode with the planner acting on the degraded graph only. At every
// visited viewpoint the full ideal sequence goes into the ideal graph and the
// truncated (optionally false-positive-injected) one into the degraded graph;
// the two are compared when the trajectory ends. The graph out-params, when
// given, receive the final graphs (debug dumps).
EpisodeOutcome run_slow_episode(const Scene& scene, const Episode& episode,
                                const DegradationConfig& config, const SimParams& params,
                                Planner& planner, std::uint64_t seed,
                                TopoGraph* degraded_out = nullptr,
                                TopoGraph* ideal_out = nullptr);

// Executes the episode's skill plan against IoU-calibrated perturbed boxes,
// projecting each skill target onto the nearest viewpoint and walking there
// along the graph. Grazing-incidence errors become tagged failures.
EpisodeOutcome run_fast_episode(const Scene& scene, const Episode& episode,
                                const DegradationConfig& config, const SimParams& params,
                                std::uint64_t seed);

// SR = mean success, OSR = mean oracle success, SPL = mean success * l / max(p, l),
// all in percent. Success is final distance <= threshold. Throws on empty input.
MetricsReport compute_metrics(const std::vector<EpisodeOutcome>& outcomes,
                              double success_threshold = 3.0);

using PlannerFactory = std::function<std::unique_ptr<Planner>(const Scene&)>;

PlannerFactory scripted_planner_factory();

// Every (scene, episode, grid point) combination runs with a seed derived by
// stable hashing, so results do not depend on execution order. jobs <= 1 runs the
// serial reference loop; jobs > 1 fans out with OpenMP. Both orderings produce
// identical record vectors.
std::vector<SweepRecord> run_sweep(const std::vector<Scene>& scenes,
                                   const std::vector<DegradationConfig>& grid, SweepMode mode,
                                   const SimParams& params, const PlannerFactory& planner_factory,
                                   std::uint64_t master_seed, int jobs);

std::vector<SweepRecord> run_sweep_serial(const std::vector<Scene>& scenes,
                                          const std::vector<DegradationConfig>& grid,
                                          SweepMode mode, const SimParams& params,
                                          const PlannerFactory& planner_factory,
                                          std::uint64_t master_seed);

}  // namespace vlnsim
