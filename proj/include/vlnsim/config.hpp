#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vlnsim/scene.hpp"
#include "vlnsim/sim.hpp"

namespace vlnsim {

// Resolved run configuration. Defaults reproduce the standard experiment: six
// generated 4x4 scenes, ten episodes each, full retention/IoU grids.
struct RunConfig {
    std::string mode = "slow";  // slow | fast
    std::uint64_t master_seed = 42;
    int jobs = 1;
    std::string out_dir = "out";

    // Scene source: explicit files, or generation parameters (not both).
    std::vector<std::string> scene_paths;
    bool generation_keys_present = false;
    int scene_count = 6;
    GenParams gen;

    std::vector<double> rho_grid = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    std::vector<double> phi_grid = {0.05, 0.2, 0.4, 0.6, 0.8, 1.0};
    double lambda = 0.5;
    double fp_rate = 0.0;
    std::string distort_mode = "off";  // off | swap_min_mid | equalize_min_mid
    double distort_probability = 0.0;

    SimParams sim;

    std::string llm_endpoint;  // empty = scripted planner
    std::string llm_model = "local";
    int llm_timeout_s = 30;
    int llm_max_concurrency = 1;  // request-rate cap when the LLM planner is active

    double bucket_width = 0.1;
    bool dump_graphs = false;  // slow sweeps also write per-episode graph dumps
};

// Minimal TOML-style parser: `key = value` lines, # comments, quoted strings,
// [v1, v2] arrays, numbers and booleans. Unknown keys are rejected so typos
// surface immediately.
RunConfig parse_config_text(const std::string& text, const std::string& where);
RunConfig load_config(const std::string& path);

// Range and consistency checks; throws std::invalid_argument with a one-line
// message on the first problem found.
void validate_config(const RunConfig& config);

// Degradation grid for the configured mode, one entry per grid value.
std::vector<DegradationConfig> build_grid(const RunConfig& config);

}  // namespace vlnsim
