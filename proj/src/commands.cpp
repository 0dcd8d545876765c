#include "vlnsim/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>

#include "vlnsim/llm_planner.hpp"
#include "vlnsim/records_io.hpp"
#include "vlnsim/rng.hpp"
#include "vlnsim/stats.hpp"

namespace vlnsim {

namespace fs = std::filesystem;

namespace {

std::string scene_file_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "scene_%03d", index);
    return buf;
}

std::vector<Scene> build_scene_set(const RunConfig& config) {
    std::vector<Scene> scenes;
    if (!config.scene_paths.empty()) {
        for (const auto& path : config.scene_paths) {
            Scene scene = load_scene(path);
            const auto violations = validate_scene(scene);
            if (!violations.empty())
                throw std::runtime_error(path + ": scene invalid (" + violations.front() +
                                         (violations.size() > 1 ? "; +" +
                                              std::to_string(violations.size() - 1) + " more)" : ")"));
            scenes.push_back(std::move(scene));
        }
        return scenes;
    }
    for (int i = 0; i < config.scene_count; ++i) {
        const std::string name = scene_file_name(i);
        Scene scene = generate_scene(config.gen, splitmix64(config.master_seed ^ fnv1a64(name)));
        scene.name = name;
        scenes.push_back(std::move(scene));
    }
    return scenes;
}

void persist_scenes(const std::vector<Scene>& scenes, const std::string& out_dir,
                    std::vector<std::string>* written) {
    const fs::path dir = fs::path(out_dir) / "scenes";
    fs::create_directories(dir);
    for (const auto& scene : scenes) {
        const std::string path = (dir / (scene.name + ".json")).string();
        save_scene(scene, path);
        if (written) written->push_back(path);
    }
}

PlannerFactory make_planner_factory(const RunConfig& config) {
    if (config.llm_endpoint.empty()) return scripted_planner_factory();
    LlmConfig llm;
    llm.endpoint = config.llm_endpoint;
    llm.model = config.llm_model;
    llm.timeout_seconds = config.llm_timeout_s;
    return [llm](const Scene& scene) { return std::make_unique<LlmPlanner>(llm, scene); };
}

// Re-walks each slow episode serially and writes its degraded graph in the
// line-oriented dump format, one file per (scene, episode, grid point).
void dump_slow_graphs(const RunConfig& config, const std::vector<Scene>& scenes,
                      const std::vector<DegradationConfig>& grid) {
    const fs::path dir = fs::path(config.out_dir) / "graphs";
    fs::create_directories(dir);
    const auto factory = make_planner_factory(config);
    for (std::size_t g = 0; g < grid.size(); ++g)
        for (const auto& scene : scenes) {
            auto planner = factory(scene);
            for (const auto& episode : scene.episodes) {
                const std::uint64_t seed = derive_seed(config.master_seed,
                                                       scene.name + "/" + episode.id, g);
                TopoGraph degraded;
                run_slow_episode(scene, episode, grid[g], config.sim, *planner, seed, &degraded);
                char suffix[32];
                std::snprintf(suffix, sizeof(suffix), "_g%02zu.graph", g);
                write_text_file(dump_graph(degraded),
                                (dir / (scene.name + "_" + episode.id + suffix)).string());
            }
        }
}

std::string correlation_summary(const std::vector<SweepRecord>& records,
                                double success_threshold) {
    const bool has_match = std::any_of(records.begin(), records.end(),
                                       [](const SweepRecord& r) { return r.outcome.has_match; });
    std::ostringstream os;
    if (!has_match) {
        os << "correlation: not applicable (records carry no match scores)\n";
        return os.str();
    }
    const auto curve = curve_by_grid(records, success_threshold);
    std::vector<double> xs, ys;
    for (const auto& p : curve) {
        xs.push_back(p.grid_value);
        ys.push_back(p.mean_s_match);
    }
    try {
        os << "pearson_grid_vs_mean_s_match = " << format_double(pearson(xs, ys)) << "\n";
    } catch (const std::invalid_argument& e) {
        os << "correlation: undefined (" << e.what() << ")\n";
    }
    os << "n_grid_points = " << xs.size() << "\n";
    return os.str();
}

}  // namespace

std::vector<std::string> cmd_generate(const RunConfig& config) {
    validate_config(config);
    if (!config.scene_paths.empty())
        throw std::invalid_argument("generate requires generation parameters, not scene_paths");
    const auto scenes = build_scene_set(config);
    for (const auto& scene : scenes) {
        const auto violations = validate_scene(scene);
        if (!violations.empty())
            throw std::runtime_error("generated scene " + scene.name +
                                     " failed validation: " + violations.front());
    }
    std::vector<std::string> written;
    persist_scenes(scenes, config.out_dir, &written);
    return written;
}

SweepOutputs cmd_sweep(const RunConfig& config) {
    validate_config(config);
    const auto scenes = build_scene_set(config);
    fs::create_directories(config.out_dir);
    if (config.scene_paths.empty()) persist_scenes(scenes, config.out_dir, nullptr);

    const auto grid = build_grid(config);
    const SweepMode mode = config.mode == "slow" ? SweepMode::Slow : SweepMode::Fast;
    // A live endpoint caps the fan-out so the request rate stays bounded.
    const int jobs = config.llm_endpoint.empty() ? config.jobs
                                                 : std::min(config.jobs, config.llm_max_concurrency);
    const auto records = run_sweep(scenes, grid, mode, config.sim, make_planner_factory(config),
                                   config.master_seed, jobs);

    if (config.dump_graphs && mode == SweepMode::Slow)
        dump_slow_graphs(config, scenes, grid);

    SweepOutputs out;
    out.records = records;
    out.records_path = (fs::path(config.out_dir) / ("records_" + config.mode + ".csv")).string();
    out.metrics_path = (fs::path(config.out_dir) / ("metrics_" + config.mode + ".csv")).string();
    write_records_csv(records, out.records_path);
    write_text_file(metrics_to_csv(curve_by_grid(records, config.sim.success_threshold)),
                    out.metrics_path);
    return out;
}

AnalyzeOutputs cmd_analyze(const std::string& records_path, const std::string& out_dir,
                           double bucket_width, double success_threshold) {
    const auto records = read_records_csv(records_path);
    if (records.empty()) throw std::runtime_error(records_path + ": no records to analyze");
    const std::string mode = records.front().mode == SweepMode::Slow ? "slow" : "fast";
    fs::create_directories(out_dir);

    AnalyzeOutputs out;
    out.curves_path = (fs::path(out_dir) / ("curves_" + mode + ".csv")).string();
    write_text_file(curve_to_csv(curve_by_grid(records, success_threshold)), out.curves_path);

    const bool has_match = std::any_of(records.begin(), records.end(),
                                       [](const SweepRecord& r) { return r.outcome.has_match; });
    if (has_match) {
        std::vector<std::pair<double, bool>> pairs;
        for (const auto& rec : records)
            if (rec.outcome.has_match)
                pairs.emplace_back(rec.outcome.match.s_match,
                                   rec.outcome.final_goal_distance <= success_threshold);
        out.buckets_path = (fs::path(out_dir) / ("buckets_" + mode + ".csv")).string();
        write_text_file(buckets_to_csv(bucket_sr(pairs, bucket_width)), out.buckets_path);
    }

    out.correlation_path = (fs::path(out_dir) / ("correlation_" + mode + ".txt")).string();
    write_text_file(correlation_summary(records, success_threshold), out.correlation_path);
    return out;
}

namespace {

void append_metric_table(std::ostringstream& os, const std::string& axis,
                         const std::vector<GridPoint>& curve, bool with_match) {
    os << axis << "      SR     OSR     SPL       n";
    if (with_match) os << "   mean_s_match";
    os << "\n";
    char buf[160];
    for (const auto& p : curve) {
        std::snprintf(buf, sizeof(buf), "%6.2f  %6.1f  %6.1f  %6.1f  %6d", p.grid_value,
                      p.metrics.sr, p.metrics.osr, p.metrics.spl, p.metrics.n);
        os << buf;
        if (with_match) {
            std::snprintf(buf, sizeof(buf), "         %6.3f", p.mean_s_match);
            os << buf;
        }
        os << "\n";
    }
    os << "\n";
}

void append_failure_histogram(std::ostringstream& os, const std::vector<SweepRecord>& records) {
    std::map<std::string, int> histogram;
    for (const auto& rec : records) {
        if (rec.outcome.failure_reason.empty()) continue;
        std::string key = rec.outcome.failure_reason;
        if (!rec.outcome.failure_skill.empty()) key += " (" + rec.outcome.failure_skill + ")";
        histogram[key] += 1;
    }
    if (histogram.empty()) {
        os << "failures: none\n\n";
        return;
    }
    os << "failures by reason:\n";
    for (const auto& [reason, count] : histogram) os << "  " << reason << ": " << count << "\n";
    os << "\n";
}

void append_slow_section(std::ostringstream& os, const std::vector<SweepRecord>& records,
                         double bucket_width, double success_threshold) {
    const auto curve = curve_by_grid(records, success_threshold);
    os << "slow planner: retention ratio vs navigation metrics\n";
    append_metric_table(os, "  rho ", curve, false);

    os << "slow planner: retention ratio vs mean match score\n";
    os << "  rho    mean_s_match\n";
    char buf[96];
    for (const auto& p : curve) {
        std::snprintf(buf, sizeof(buf), "%6.2f   %6.3f\n", p.grid_value, p.mean_s_match);
        os << buf;
    }
    os << "\n";

    std::vector<std::pair<double, bool>> pairs;
    for (const auto& rec : records)
        if (rec.outcome.has_match)
            pairs.emplace_back(rec.outcome.match.s_match,
                               rec.outcome.final_goal_distance <= success_threshold);
    if (!pairs.empty()) {
        os << "slow planner: match-score bucket vs success rate\n";
        os << "  bucket          n      SR\n";
        for (const auto& b : bucket_sr(pairs, bucket_width)) {
            std::snprintf(buf, sizeof(buf), "  [%4.2f, %4.2f%s  %4d   ", b.lower, b.upper,
                          b.upper >= 1.0 ? "]" : ")", b.n);
            os << buf;
            if (b.sr) {
                std::snprintf(buf, sizeof(buf), "%6.1f\n", *b.sr);
                os << buf;
            } else {
                os << "   -\n";
            }
        }
        os << "\n";
    }

    os << correlation_summary(records, success_threshold) << "\n";
    append_failure_histogram(os, records);
}

void append_fast_section(std::ostringstream& os, const std::vector<SweepRecord>& records,
                         double success_threshold) {
    os << "fast navigator: target IoU vs navigation metrics\n";
    append_metric_table(os, "  phi ", curve_by_grid(records, success_threshold), false);
    append_failure_histogram(os, records);
}

}  // namespace

std::string cmd_report(const std::string& run_dir, double bucket_width,
                       double success_threshold) {
    const fs::path dir(run_dir);
    const std::string slow_path = (dir / "records_slow.csv").string();
    const std::string fast_path = (dir / "records_fast.csv").string();
    const bool have_slow = fs::exists(slow_path);
    const bool have_fast = fs::exists(fast_path);
    if (!have_slow && !have_fast)
        throw std::runtime_error(run_dir + ": no records_slow.csv or records_fast.csv found");

    std::ostringstream os;
    os << "run directory: " << run_dir << "\n\n";
    if (have_slow) {
        const auto records = read_records_csv(slow_path);
        os << "== slow planner sweep (" << records.size() << " records) ==\n\n";
        append_slow_section(os, records, bucket_width, success_threshold);
    }
    if (have_fast) {
        const auto records = read_records_csv(fast_path);
        os << "== fast navigator sweep (" << records.size() << " records) ==\n\n";
        append_fast_section(os, records, success_threshold);
    }

    const std::string text = os.str();
    write_text_file(text, (dir / "report.txt").string());
    return text;
}

}  // namespace vlnsim
