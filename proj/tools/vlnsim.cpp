#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vlnsim/commands.hpp"

namespace {

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> values;
    std::string cur;
    auto flush = [&]() {
        if (cur.empty()) return;
        std::size_t used = 0;
        values.push_back(std::stod(cur, &used));
        if (used != cur.size()) throw std::invalid_argument("bad grid value '" + cur + "'");
        cur.clear();
    };
    for (char c : text) {
        if (c == ',') flush();
        else if (!std::isspace(static_cast<unsigned char>(c))) cur.push_back(c);
    }
    flush();
    return values;
}

struct CliOverrides {
    std::string config_path;
    std::string mode;
    std::string out_dir;
    std::string rho_grid;
    std::string phi_grid;
    std::string distort;  // mode:probability
    std::string llm_endpoint;
    double lambda = -1.0;
    double fp_rate = -1.0;
    std::int64_t seed = -1;
    int jobs = -1;
    bool dump_graphs = false;
};

vlnsim::RunConfig resolve_config(const CliOverrides& cli) {
    vlnsim::RunConfig config;
    if (!cli.config_path.empty()) config = vlnsim::load_config(cli.config_path);
    if (!cli.mode.empty()) config.mode = cli.mode;
    if (!cli.out_dir.empty()) config.out_dir = cli.out_dir;
    if (cli.seed >= 0) config.master_seed = static_cast<std::uint64_t>(cli.seed);
    if (cli.jobs >= 0) config.jobs = cli.jobs;
    if (!cli.rho_grid.empty()) config.rho_grid = parse_grid(cli.rho_grid);
    if (!cli.phi_grid.empty()) config.phi_grid = parse_grid(cli.phi_grid);
    if (cli.lambda >= 0.0) config.lambda = cli.lambda;
    if (cli.fp_rate >= 0.0) config.fp_rate = cli.fp_rate;
    if (!cli.llm_endpoint.empty()) config.llm_endpoint = cli.llm_endpoint;
    if (!cli.distort.empty()) {
        const auto colon = cli.distort.find(':');
        config.distort_mode = cli.distort.substr(0, colon);
        config.distort_probability =
            colon == std::string::npos ? 1.0 : std::stod(cli.distort.substr(colon + 1));
    }
    if (cli.dump_graphs) config.dump_graphs = true;
    return config;
}

void add_common_flags(CLI::App* cmd, CliOverrides& cli) {
    cmd->add_option("--config", cli.config_path, "TOML-style config file");
    cmd->add_option("--mode", cli.mode, "slow or fast")->check(CLI::IsMember({"slow", "fast"}));
    cmd->add_option("--seed", cli.seed, "master seed");
    cmd->add_option("--out", cli.out_dir, "output directory");
    cmd->add_option("--jobs", cli.jobs, "worker threads for sweeps (<=1 = serial)");
    cmd->add_option("--rho-grid", cli.rho_grid, "comma-separated retention ratios");
    cmd->add_option("--phi-grid", cli.phi_grid, "comma-separated target IoUs");
    cmd->add_option("--lambda", cli.lambda, "match-score fusion weight");
    cmd->add_option("--fp-rate", cli.fp_rate, "false-positive injection rate");
    cmd->add_option("--distort", cli.distort,
                    "dimension distortion probe, e.g. swap_min_mid:1.0");
    cmd->add_option("--llm-endpoint", cli.llm_endpoint,
                    "chat-completion URL for the LLM planner (token via VLNSIM_LLM_TOKEN)");
    cmd->add_flag("--dump-graphs", cli.dump_graphs,
                  "also write per-episode graph dumps (slow sweeps)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"perception-degradation navigation simulator"};
    app.require_subcommand(1);

    CliOverrides cli;
    std::string records_path;
    std::string run_dir;

    CLI::App* generate = app.add_subcommand("generate", "write synthetic scene files");
    add_common_flags(generate, cli);

    CLI::App* sweep = app.add_subcommand("sweep", "run a degradation sweep");
    add_common_flags(sweep, cli);

    CLI::App* analyze = app.add_subcommand("analyze", "aggregate a records file");
    add_common_flags(analyze, cli);
    analyze->add_option("--records", records_path, "records CSV from a sweep")->required();

    CLI::App* report = app.add_subcommand("report", "summarize a completed run directory");
    add_common_flags(report, cli);
    report->add_option("--run", run_dir, "directory written by sweep");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            for (const auto& path : vlnsim::cmd_generate(resolve_config(cli)))
                std::cout << path << "\n";
        } else if (sweep->parsed()) {
            const auto out = vlnsim::cmd_sweep(resolve_config(cli));
            std::cout << out.records_path << "\n" << out.metrics_path << "\n";
        } else if (analyze->parsed()) {
            const auto config = resolve_config(cli);
            const auto out = vlnsim::cmd_analyze(records_path, config.out_dir,
                                                 config.bucket_width,
                                                 config.sim.success_threshold);
            std::cout << out.curves_path << "\n";
            if (!out.buckets_path.empty()) std::cout << out.buckets_path << "\n";
            std::cout << out.correlation_path << "\n";
        } else if (report->parsed()) {
            const auto config = resolve_config(cli);
            const std::string dir = run_dir.empty() ? config.out_dir : run_dir;
            std::cout << vlnsim::cmd_report(dir, config.bucket_width,
                                            config.sim.success_threshold);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
