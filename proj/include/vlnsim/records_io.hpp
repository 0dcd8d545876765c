#pragma once

#include <string>
#include <vector>

#include "vlnsim/sim.hpp"
#include "vlnsim/stats.hpp"

namespace vlnsim {

// Shared numeric formatting for all emitted files; keeps reruns byte-identical.
std::string format_double(double value);

// One record per line under a self-describing header.
std::string records_to_csv(const std::vector<SweepRecord>& records);
void write_records_csv(const std::vector<SweepRecord>& records, const std::string& path);
std::vector<SweepRecord> read_records_csv(const std::string& path);

// grid_value,SR,OSR,SPL,n — one row per grid point.
std::string metrics_to_csv(const std::vector<GridPoint>& curve);

// grid_value,SR,OSR,SPL,mean_s_match,n — analysis output with the match column.
std::string curve_to_csv(const std::vector<GridPoint>& curve);

// lower,upper,n,sr with "nan" marking empty bins.
std::string buckets_to_csv(const std::vector<Bucket>& buckets);

void write_text_file(const std::string& text, const std::string& path);

}  // namespace vlnsim
