#include "vlnsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace vlnsim {

std::vector<Bucket> bucket_sr(const std::vector<std::pair<double, bool>>& records,
                              double bin_width) {
    if (!(bin_width > 0.0 && bin_width <= 1.0))
        throw std::invalid_argument("bin width must lie in (0, 1]");
    const double bins_exact = 1.0 / bin_width;
    const int bins = static_cast<int>(std::lround(bins_exact));
    if (std::abs(bins * bin_width - 1.0) > 1e-9)
        throw std::invalid_argument("bin width must divide 1 evenly");
    if (records.empty()) throw std::invalid_argument("bucket_sr needs at least one record");

    std::vector<Bucket> buckets(bins);
    std::vector<int> successes(bins, 0);
    for (int b = 0; b < bins; ++b) {
        buckets[b].lower = b * bin_width;
        buckets[b].upper = (b + 1) * bin_width;
    }
    for (const auto& [s_match, success] : records) {
        if (!(s_match >= 0.0 && s_match <= 1.0))
            throw std::invalid_argument("s_match outside [0, 1]");
        int b = static_cast<int>(std::floor(s_match / bin_width));
        b = std::min(b, bins - 1);  // 1.0 lands in the final, closed bin
        buckets[b].n += 1;
        successes[b] += success;
    }
    for (int b = 0; b < bins; ++b)
        if (buckets[b].n > 0) buckets[b].sr = 100.0 * successes[b] / buckets[b].n;
    return buckets;
}

std::vector<GridPoint> curve_by_grid(const std::vector<SweepRecord>& records,
                                     double success_threshold) {
    std::map<double, std::vector<const SweepRecord*>> groups;
    for (const auto& rec : records) groups[rec.grid_value].push_back(&rec);

    std::vector<GridPoint> curve;
    for (const auto& [value, group] : groups) {
        GridPoint point;
        point.grid_value = value;
        std::vector<EpisodeOutcome> outcomes;
        outcomes.reserve(group.size());
        double match_sum = 0.0;
        int match_count = 0;
        for (const SweepRecord* rec : group) {
            outcomes.push_back(rec->outcome);
            if (rec->outcome.has_match) {
                match_sum += rec->outcome.match.s_match;
                ++match_count;
            }
        }
        point.metrics = compute_metrics(outcomes, success_threshold);
        point.mean_s_match = match_count > 0 ? match_sum / match_count : 0.0;
        curve.push_back(std::move(point));
    }
    return curve;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("pearson needs equal-length inputs");
    if (xs.size() < 2) throw std::invalid_argument("pearson needs at least two samples");

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("correlation undefined for constant input");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace vlnsim
