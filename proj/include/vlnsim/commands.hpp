#pragma once

#include <string>
#include <vector>

#include "vlnsim/config.hpp"
#include "vlnsim/sim.hpp"

namespace vlnsim {

// Generates the configured scene set and writes one JSON file per scene under
// <out_dir>/scenes. Returns the written paths. Scene seeds derive from the
// master seed and the scene name, so the set is a pure function of the config.
std::vector<std::string> cmd_generate(const RunConfig& config);

struct SweepOutputs {
    std::string records_path;
    std::string metrics_path;
    std::vector<SweepRecord> records;
};

// Runs the configured sweep and writes records_<mode>.csv plus
// metrics_<mode>.csv into out_dir. Generated scenes are persisted alongside.
SweepOutputs cmd_sweep(const RunConfig& config);

struct AnalyzeOutputs {
    std::string curves_path;
    std::string buckets_path;      // empty for fast-mode records
    std::string correlation_path;
};

// Aggregates a records file: per-grid-point curves, the match-score bucket
// table (slow mode), and the retention-vs-match correlation summary.
AnalyzeOutputs cmd_analyze(const std::string& records_path, const std::string& out_dir,
                           double bucket_width, double success_threshold);

// Renders the human-readable summary for a completed run directory and writes
// it to <run_dir>/report.txt. Returns the report text.
std::string cmd_report(const std::string& run_dir, double bucket_width = 0.1,
                       double success_threshold = 3.0);

}  // namespace vlnsim
