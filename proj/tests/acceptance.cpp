// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run via ctest or directly from the build directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "vlnsim/commands.hpp"
#include "vlnsim/records_io.hpp"
#include "vlnsim/skills.hpp"
#include "vlnsim/stats.hpp"

using namespace vlnsim;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& what, bool ok, const std::string& detail) {
    std::printf("%s  C%02d  %s  (%s)\n", ok ? "PASS" : "FAIL", number, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

Mat3 random_rotation(Rng& rng) {
    const Vec3 axis = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)).normalized();
    return Eigen::AngleAxisd(rng.uniform(0.0, 2.0 * M_PI), axis).toRotationMatrix();
}

// Dims log-uniform in [0.05, 5] m, arbitrary orientation and placement.
OrientedBox random_box(Rng& rng) {
    OrientedBox box;
    box.c = Vec3(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    for (int i = 0; i < 3; ++i)
        box.s[i] = std::exp(rng.uniform(std::log(0.05), std::log(5.0)));
    box.R = random_rotation(rng);
    return box;
}

std::vector<Scene> default_scenes(std::uint64_t master_seed) {
    std::vector<Scene> scenes;
    for (int i = 0; i < 6; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "scene_%03d", i);
        Scene scene = generate_scene(GenParams{}, splitmix64(master_seed ^ fnv1a64(name)));
        scene.name = name;
        scenes.push_back(std::move(scene));
    }
    return scenes;
}

std::vector<DegradationConfig> make_grid(const std::vector<double>& values, bool slow) {
    std::vector<DegradationConfig> grid;
    for (double v : values) {
        DegradationConfig c;
        (slow ? c.rho_ret : c.phi_iou) = v;
        grid.push_back(c);
    }
    return grid;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool ordering_ok(const std::vector<GridPoint>& curve) {
    for (const auto& p : curve)
        if (!(p.metrics.spl <= p.metrics.sr + 1e-9 && p.metrics.sr <= p.metrics.osr + 1e-9))
            return false;
    return true;
}

void check_calibration(bool& ok, double& worst, const OrientedBox& box, double target,
                       const Eigen::Vector3i& signs) {
    const Perturbation p = calibrate_offset(box, target, signs);
    const double err = std::abs(p.achieved_iou - target);
    worst = std::max(worst, err);
    if (err > 1e-6) ok = false;
}

}  // namespace

int main() {
    const std::uint64_t kMasterSeed = 42;
    const std::vector<double> kRhoGrid = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    const std::vector<double> kPhiGrid = {0.05, 0.2, 0.4, 0.6, 0.8, 1.0};
    const SimParams params;  // 3 m success radius, defaults throughout

    // ---- C1: IoU calibration over 1000 random boxes -------------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        Rng rng(2024);
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const OrientedBox box = random_box(rng);
            const double target = rng.uniform(0.05, 0.95);
            const Eigen::Vector3i signs(rng.sign(), rng.sign(), rng.sign());
            check_calibration(ok, worst, box, target, signs);
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char detail[128];
        std::snprintf(detail, sizeof(detail), "worst |achieved-target| = %.2e, %.2f s", worst,
                      secs);
        criterion(1, "IoU calibration within 1e-6 on 1000 random boxes", ok && secs < 30.0,
                  detail);
    }

    // ---- C2: analytic IoU vs voxel oracle -----------------------------------
    {
        Rng rng(515);
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            OrientedBox box;
            box.c = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
            for (int k = 0; k < 3; ++k) box.s[k] = rng.uniform(0.5, 1.5);
            box.R = random_rotation(rng);  // rotated boxes included
            const Eigen::Vector3i signs(rng.sign(), rng.sign(), rng.sign());
            const double t = rng.uniform(0.0, 0.8 * box.s.minCoeff() * std::sqrt(3.0));
            const Vec3 delta = t * signs.cast<double>() / std::sqrt(3.0);
            OrientedBox moved = box;
            moved.c += delta;
            const double err =
                std::abs(self_translation_iou(box, delta) - voxel_iou_oracle(box, moved, 200));
            worst = std::max(worst, err);
            if (err > 2e-2) ok = false;
        }
        char detail[96];
        std::snprintf(detail, sizeof(detail), "worst |analytic-voxel| = %.4f over 50 pairs",
                      worst);
        criterion(2, "analytic IoU matches 200^3 voxel oracle within 2e-2", ok, detail);
    }

    // ---- C3: matching-score fidelity ----------------------------------------
    {
        TopoGraph ideal;
        record_step(ideal, 0, {"chair", "table"});
        record_step(ideal, 1, {"table", "door"});
        TopoGraph degraded;
        record_step(degraded, 0, {"chair"});
        record_step(degraded, 1, {"table"});
        const MatchReport r = matching_score(degraded, ideal, 0.5);

        const bool hand = std::abs(r.s_obj - 2.0 / 3.0) <= 1e-12 &&
                          std::abs(r.s_edge - 0.5) <= 1e-12 &&
                          std::abs(r.s_match - 7.0 / 12.0) <= 1e-12;
        const bool identical = matching_score(ideal, ideal, 0.5).s_match == 1.0;
        const bool empty = matching_score(TopoGraph{}, ideal, 0.5).s_match == 0.0;
        char detail[96];
        std::snprintf(detail, sizeof(detail), "s_match = %.15f vs 7/12", r.s_match);
        criterion(3, "matching score worked example exact to 1e-12", hand && identical && empty,
                  detail);
    }

    // ---- C4: nesting and monotonicity on random trajectories ----------------
    {
        Rng rng(909);
        bool ok = true;
        for (int trial = 0; trial < 100 && ok; ++trial) {
            const int steps = 2 + static_cast<int>(rng.uniform_int(6));
            std::vector<std::vector<std::string>> trajectory(steps);
            for (auto& obs : trajectory) {
                const int n = 1 + static_cast<int>(rng.uniform_int(12));
                for (int i = 0; i < n; ++i)
                    obs.push_back("obj" + std::to_string(rng.uniform_int(25)));
            }
            TopoGraph ideal;
            for (int t = 0; t < steps; ++t) record_step(ideal, t, trajectory[t]);

            double prev_match = -1.0;
            std::vector<std::vector<std::string>> prev_truncs(steps);
            for (double rho : kRhoGrid) {
                TopoGraph deg;
                for (int t = 0; t < steps; ++t) {
                    const auto cut = truncate_observation(trajectory[t], rho);
                    if (cut.size() < prev_truncs[t].size() ||
                        !std::equal(prev_truncs[t].begin(), prev_truncs[t].end(), cut.begin()))
                        ok = false;  // not a prefix extension
                    prev_truncs[t] = cut;
                    record_step(deg, t, cut);
                }
                const double s = matching_score(deg, ideal, 0.5).s_match;
                if (s < prev_match) ok = false;
                if (rho == 0.0 && s != 0.0) ok = false;
                if (rho == 1.0 && s != 1.0) ok = false;
                prev_match = s;
            }
        }
        criterion(4, "truncations nest and s_match is monotone with exact endpoints", ok,
                  "100 random trajectories x 6 retention ratios");
    }

    // ---- Shared sweeps on the default scene set -----------------------------
    const auto scenes = default_scenes(kMasterSeed);
    int episode_total = 0;
    for (const auto& s : scenes) episode_total += static_cast<int>(s.episodes.size());

    const auto slow_records = run_sweep(scenes, make_grid(kRhoGrid, true), SweepMode::Slow,
                                        params, scripted_planner_factory(), kMasterSeed, 1);
    const auto fast_records = run_sweep(scenes, make_grid(kPhiGrid, false), SweepMode::Fast,
                                        params, scripted_planner_factory(), kMasterSeed, 1);
    const auto slow_curve = curve_by_grid(slow_records, params.success_threshold);
    const auto fast_curve = curve_by_grid(fast_records, params.success_threshold);

    // ---- C5: zero-recall bound ----------------------------------------------
    {
        bool premise = true;
        for (const auto& scene : scenes)
            for (const auto& ep : scene.episodes)
                if (ep.start_viewpoint == ep.goal_viewpoint) premise = false;
        std::map<std::string, std::pair<int, int>> per_scene;  // successes, total at rho = 0
        for (const auto& rec : slow_records) {
            if (rec.grid_value != 0.0) continue;
            auto& [wins, total] = per_scene[rec.scene_name];
            wins += rec.outcome.success;
            total += 1;
        }
        bool ok = premise && !per_scene.empty();
        int zero_total = 0;
        for (const auto& [name, counts] : per_scene) {
            if (counts.first != 0) ok = false;
            zero_total += counts.second;
        }
        char detail[96];
        std::snprintf(detail, sizeof(detail), "0 successes across %d zero-recall episodes",
                      zero_total);
        criterion(5, "retention 0 gives SR = 0% exactly on every scene", ok, detail);
    }

    // ---- C6: linearity of retention vs mean match score ---------------------
    {
        std::vector<double> xs, ys;
        for (const auto& p : slow_curve) {
            xs.push_back(p.grid_value);
            ys.push_back(p.mean_s_match);
        }
        const double r = pearson(xs, ys);
        char detail[96];
        std::snprintf(detail, sizeof(detail), "pearson = %.4f over %d episodes", r,
                      episode_total);
        criterion(6, "retention-to-match-score correlation >= 0.95", r >= 0.95 && episode_total >= 60,
                  detail);
    }

    // ---- C7: slow-planner saturation -----------------------------------------
    {
        auto sr_at = [&](double rho) {
            for (const auto& p : slow_curve)
                if (p.grid_value == rho) return p.metrics.sr;
            return -1.0;
        };
        const double sr0 = sr_at(0.0), sr02 = sr_at(0.2), sr1 = sr_at(1.0);
        const bool ok = sr0 == 0.0 && sr1 > 0.0 && sr02 >= 0.8 * sr1;
        char detail[96];
        std::snprintf(detail, sizeof(detail), "SR: 0%% -> %.1f%% (rho 0.2) vs %.1f%% (rho 1.0)",
                      sr02, sr1);
        criterion(7, "SR rises steeply by retention 0.2 and plateaus", ok, detail);
    }

    // ---- C8: fast-navigator plateau ------------------------------------------
    {
        // Premise: the calibrated drift at the loosest IoU stays below half the
        // viewpoint spacing for every skill target, whatever the sign draws.
        double min_spacing = std::numeric_limits<double>::infinity();
        for (const auto& scene : scenes)
            for (const auto& a : scene.viewpoints)
                for (const auto& b : scene.viewpoints)
                    if (a.id < b.id)
                        min_spacing = std::min(min_spacing, (a.position - b.position).norm());

        double max_drift = 0.0;
        for (const auto& scene : scenes) {
            std::set<std::string> targets;
            for (const auto& ep : scene.episodes)
                for (const auto& step : ep.skill_plan) targets.insert(step.target_object_id);
            for (const auto& id : targets)
                for (int sx : {-1, 1})
                    for (int sy : {-1, 1})
                        for (int sz : {-1, 1})
                            max_drift = std::max(
                                max_drift, calibrate_offset(scene.object(id).box, 0.05,
                                                            Eigen::Vector3i(sx, sy, sz))
                                               .delta.norm());
        }
        const bool premise = max_drift < 0.5 * min_spacing;

        // Claim: identical visited viewpoint sequences at every grid point.
        std::map<std::string, std::vector<std::string>> reference;
        bool identical = true;
        for (const auto& rec : fast_records) {
            const std::string key = rec.scene_name + "/" + rec.episode_id;
            auto it = reference.find(key);
            if (it == reference.end())
                reference.emplace(key, rec.outcome.trajectory);
            else if (it->second != rec.outcome.trajectory)
                identical = false;
        }
        bool sr_flat = true;
        for (const auto& p : fast_curve)
            if (p.metrics.sr != fast_curve.front().metrics.sr) sr_flat = false;
        char detail[128];
        std::snprintf(detail, sizeof(detail),
                      "max drift %.2f m < %.2f m; SR flat at %.1f%% over %zu IoU points",
                      max_drift, 0.5 * min_spacing, fast_curve.front().metrics.sr,
                      fast_curve.size());
        criterion(8, "identical viewpoint sequences across the IoU grid", premise && identical && sr_flat,
                  detail);
    }

    // ---- C9: skill geometry and metric ordering ------------------------------
    {
        OrientedBox cube;
        cube.c = Vec3(3, 0, 0);
        const Vec3 approach = approach_target(Vec3(0, 0, 0), cube, SkillParams{});
        const Vec3 expected_approach(3.0 - (0.5 * std::sqrt(2.0) + 0.3), 0.0, 0.0);

        OrientedBox door;
        door.c = Vec3(0, 0, 1);
        door.s = Vec3(1.0, 0.1, 2.0);
        const Vec3 through_a = through_target(Vec3(0, -3, 1), door, SkillParams{});
        const Vec3 through_b = through_target(Vec3(0, 3, 1), door, SkillParams{});

        const bool geometry = (approach - expected_approach).norm() <= 1e-9 &&
                              (through_a - Vec3(0, 0.55, 1.0)).norm() <= 1e-9 &&
                              (through_b - Vec3(0, -0.55, 1.0)).norm() <= 1e-9;
        const bool ordering = ordering_ok(slow_curve) && ordering_ok(fast_curve);
        char detail[128];
        std::snprintf(detail, sizeof(detail), "approach x = %.9f, through y = %.9f, SPL<=SR<=OSR %s",
                      approach[0], through_a[1], ordering ? "holds" : "violated");
        criterion(9, "skill hand examples to 1e-9 and metric ordering everywhere",
                  geometry && ordering, detail);
    }

    // ---- C10: determinism across serial and parallel runs --------------------
    {
        const fs::path base = fs::temp_directory_path() / "vlnsim_acceptance";
        fs::remove_all(base);
        auto run = [&](const std::string& tag, const std::string& mode, int jobs,
                       std::uint64_t seed) {
            RunConfig config;
            config.mode = mode;
            config.master_seed = seed;
            config.jobs = jobs;
            config.generation_keys_present = true;
            config.out_dir = (base / tag).string();
            return cmd_sweep(config);
        };
        const auto slow_serial = run("slow_serial", "slow", 1, kMasterSeed);
        const auto slow_parallel = run("slow_parallel", "slow", 4, kMasterSeed);
        const auto fast_serial = run("fast_serial", "fast", 1, kMasterSeed);
        const auto fast_parallel = run("fast_parallel", "fast", 4, kMasterSeed);
        const auto fast_reseeded = run("fast_reseeded", "fast", 1, kMasterSeed + 1);

        const bool identical =
            slurp(slow_serial.records_path) == slurp(slow_parallel.records_path) &&
            slurp(slow_serial.metrics_path) == slurp(slow_parallel.metrics_path) &&
            slurp(fast_serial.records_path) == slurp(fast_parallel.records_path) &&
            slurp(fast_serial.metrics_path) == slurp(fast_parallel.metrics_path);
        const bool seed_sensitive =
            slurp(fast_serial.records_path) != slurp(fast_reseeded.records_path);
        criterion(10, "serial vs parallel sweeps byte-identical; seed changes records",
                  identical && seed_sensitive,
                  identical ? "4 file pairs identical, reseed differs" : "byte mismatch");
        fs::remove_all(base);
    }

    // ---- C11: failure-mode probes ---------------------------------------------
    {
        // Dimension-swap probe on the same seeds.
        std::vector<DegradationConfig> swap_grid = make_grid(kPhiGrid, false);
        for (auto& c : swap_grid) {
            c.dim_distortion.mode = DimDistortMode::SwapMinMid;
            c.dim_distortion.probability = 1.0;
        }
        const auto swapped_records = run_sweep(scenes, swap_grid, SweepMode::Fast, params,
                                               scripted_planner_factory(), kMasterSeed, 1);

        std::set<std::string> door_episodes;
        for (const auto& scene : scenes)
            for (const auto& ep : scene.episodes)
                for (const auto& step : ep.skill_plan)
                    if (step.skill == SkillKind::Through)
                        door_episodes.insert(scene.name + "/" + ep.id);

        auto door_sr = [&](const std::vector<SweepRecord>& records) {
            int wins = 0, total = 0;
            for (const auto& rec : records) {
                if (!door_episodes.count(rec.scene_name + "/" + rec.episode_id)) continue;
                wins += rec.outcome.success;
                total += 1;
            }
            return total ? 100.0 * wins / total : -1.0;
        };
        const double sr_clean = door_sr(fast_records);
        const double sr_swapped = door_sr(swapped_records);

        int through_failures = 0;
        for (const auto& rec : swapped_records)
            if (!rec.outcome.success && rec.outcome.failure_skill == "through") ++through_failures;

        // The rendered report must carry the attribution.
        const fs::path dir = fs::temp_directory_path() / "vlnsim_acceptance_probe";
        fs::remove_all(dir);
        fs::create_directories(dir);
        write_records_csv(swapped_records, (dir / "records_fast.csv").string());
        const std::string report = cmd_report(dir.string());
        const bool attributed =
            report.find("grazing_incidence (through)") != std::string::npos;
        fs::remove_all(dir);

        // False-positive probe: match score untouched at full retention, precision drops.
        std::vector<DegradationConfig> fp_grid = make_grid(kRhoGrid, true);
        for (auto& c : fp_grid) c.false_positive_rate = 0.3;
        const auto fp_records = run_sweep(scenes, fp_grid, SweepMode::Slow, params,
                                          scripted_planner_factory(), kMasterSeed, 1);
        bool match_unchanged = true;
        double precision_sum = 0.0;
        int precision_n = 0;
        for (const auto& rec : fp_records) {
            if (rec.grid_value == 1.0 && rec.outcome.match.s_match != 1.0)
                match_unchanged = false;
            if (rec.outcome.has_match && rec.grid_value > 0.0) {
                precision_sum += rec.outcome.match.precision;
                ++precision_n;
            }
        }
        for (const auto& rec : slow_records)
            if (rec.grid_value == 1.0 && rec.outcome.match.s_match != 1.0)
                match_unchanged = false;
        const double mean_precision = precision_n ? precision_sum / precision_n : 1.0;

        // Probe sweeps also honor the metric ordering demanded everywhere.
        const bool probe_ordering =
            ordering_ok(curve_by_grid(swapped_records, params.success_threshold)) &&
            ordering_ok(curve_by_grid(fp_records, params.success_threshold));

        const bool ok = door_episodes.size() >= 6 && sr_swapped < sr_clean &&
                        through_failures > 0 && attributed && match_unchanged &&
                        mean_precision < 1.0 && probe_ordering;
        char detail[160];
        std::snprintf(detail, sizeof(detail),
                      "door SR %.1f%% -> %.1f%%, %d through failures; precision %.3f < 1",
                      sr_clean, sr_swapped, through_failures, mean_precision);
        criterion(11, "distortion lowers door SR with through attribution; FPs hit precision only",
                  ok, detail);
    }

    if (g_failures == 0) {
        std::puts("acceptance: all criteria passed");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
