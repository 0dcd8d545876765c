#pragma once

#include <optional>
#include <vector>

#include "vlnsim/sim.hpp"

namespace vlnsim {

struct Bucket {
    double lower = 0.0;
    double upper = 0.0;
    int n = 0;
    std::optional<double> sr;  // percent; empty bins have no defined rate
};

// Right-open bins [k*w, (k+1)*w) over [0, 1], final bin closed at 1.0. Empty bins
// are kept so curves share a fixed axis. bin_width must divide 1 evenly.
std::vector<Bucket> bucket_sr(const std::vector<std::pair<double, bool>>& records,
                              double bin_width);

struct GridPoint {
    double grid_value = 0.0;
    MetricsReport metrics;
    double mean_s_match = 0.0;  // 0 when the records carry no match reports
};

// Groups sweep records by grid value (ascending) and aggregates each group.
std::vector<GridPoint> curve_by_grid(const std::vector<SweepRecord>& records,
                                     double success_threshold = 3.0);

// Sample correlation coefficient. Throws std::invalid_argument on mismatched or
// short inputs and on zero variance (correlation undefined, not zero).
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace vlnsim
