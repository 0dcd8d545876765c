#include "vlnsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vlnsim {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

struct RawValue {
    std::string scalar;
    std::vector<std::string> list;
    bool is_list = false;
};

std::string unquote(const std::string& s, const std::string& where) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    if (!s.empty() && (s.front() == '"' || s.back() == '"'))
        throw std::runtime_error(where + ": unbalanced quotes in '" + s + "'");
    return s;
}

RawValue parse_value(const std::string& text, const std::string& where) {
    RawValue v;
    if (!text.empty() && text.front() == '[') {
        if (text.back() != ']') throw std::runtime_error(where + ": unterminated array");
        v.is_list = true;
        std::string inner = text.substr(1, text.size() - 2);
        std::string cur;
        for (char c : inner) {
            if (c == ',') {
                if (!trim(cur).empty()) v.list.push_back(unquote(trim(cur), where));
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!trim(cur).empty()) v.list.push_back(unquote(trim(cur), where));
        return v;
    }
    v.scalar = unquote(text, where);
    return v;
}

double to_double(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const double d = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return d;
    } catch (const std::exception&) {
        throw std::runtime_error(where + ": expected a number, got '" + s + "'");
    }
}

int to_int(const std::string& s, const std::string& where) {
    const double d = to_double(s, where);
    if (d != std::floor(d)) throw std::runtime_error(where + ": expected an integer, got '" + s + "'");
    return static_cast<int>(d);
}

std::uint64_t to_u64(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(where + ": expected an unsigned integer, got '" + s + "'");
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& where) {
    RunConfig config;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(strip_comment(line));
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        const std::string loc = where + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw std::runtime_error(loc + ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const RawValue value = parse_value(trim(stripped.substr(eq + 1)), loc);

        auto scalar = [&]() -> const std::string& {
            if (value.is_list) throw std::runtime_error(loc + ": '" + key + "' must be a scalar");
            return value.scalar;
        };
        auto number_list = [&]() {
            std::vector<double> out;
            if (!value.is_list) throw std::runtime_error(loc + ": '" + key + "' must be an array");
            for (const auto& item : value.list) out.push_back(to_double(item, loc));
            return out;
        };

        if (key == "mode") config.mode = scalar();
        else if (key == "master_seed") config.master_seed = to_u64(scalar(), loc);
        else if (key == "jobs") config.jobs = to_int(scalar(), loc);
        else if (key == "out_dir") config.out_dir = scalar();
        else if (key == "scene_paths") {
            if (!value.is_list) throw std::runtime_error(loc + ": scene_paths must be an array");
            config.scene_paths = value.list;
        } else if (key == "scenes") { config.scene_count = to_int(scalar(), loc); config.generation_keys_present = true; }
        else if (key == "grid_rows") { config.gen.rows = to_int(scalar(), loc); config.generation_keys_present = true; }
        else if (key == "grid_cols") { config.gen.cols = to_int(scalar(), loc); config.generation_keys_present = true; }
        else if (key == "spacing") { config.gen.spacing = to_double(scalar(), loc); config.generation_keys_present = true; }
        else if (key == "objects_per_viewpoint") { config.gen.objects_per_viewpoint = to_int(scalar(), loc); config.generation_keys_present = true; }
        else if (key == "vocab_size") { config.gen.vocab_size = to_int(scalar(), loc); config.generation_keys_present = true; }
        else if (key == "episodes_per_scene") { config.gen.episodes = to_int(scalar(), loc); config.generation_keys_present = true; }
        else if (key == "door_fraction") { config.gen.door_fraction = to_double(scalar(), loc); config.generation_keys_present = true; }
        else if (key == "min_start_goal_distance") { config.gen.min_start_goal_distance = to_double(scalar(), loc); config.generation_keys_present = true; }
        else if (key == "rho_grid") config.rho_grid = number_list();
        else if (key == "phi_grid") config.phi_grid = number_list();
        else if (key == "lambda") config.lambda = to_double(scalar(), loc);
        else if (key == "fp_rate") config.fp_rate = to_double(scalar(), loc);
        else if (key == "distort_mode") config.distort_mode = scalar();
        else if (key == "distort_probability") config.distort_probability = to_double(scalar(), loc);
        else if (key == "success_threshold") config.sim.success_threshold = to_double(scalar(), loc);
        else if (key == "delta_safe") config.sim.skills.delta_safe = to_double(scalar(), loc);
        else if (key == "delta_pass") config.sim.skills.delta_pass = to_double(scalar(), loc);
        else if (key == "collision_radius") {
            const std::string& v = scalar();
            if (v == "horizontal_diagonal")
                config.sim.skills.collision_radius = CollisionRadius::HorizontalHalfDiagonal;
            else if (v == "full_diagonal")
                config.sim.skills.collision_radius = CollisionRadius::FullHalfDiagonal;
            else
                throw std::runtime_error(loc +
                                         ": collision_radius must be horizontal_diagonal or full_diagonal");
        }
        else if (key == "max_steps") config.sim.max_steps = to_int(scalar(), loc);
        else if (key == "llm_endpoint") config.llm_endpoint = scalar();
        else if (key == "llm_model") config.llm_model = scalar();
        else if (key == "llm_timeout_s") config.llm_timeout_s = to_int(scalar(), loc);
        else if (key == "llm_max_concurrency") config.llm_max_concurrency = to_int(scalar(), loc);
        else if (key == "bucket_width") config.bucket_width = to_double(scalar(), loc);
        else if (key == "dump_graphs") {
            const std::string& v = scalar();
            if (v != "true" && v != "false")
                throw std::runtime_error(loc + ": dump_graphs must be true or false");
            config.dump_graphs = v == "true";
        }
        else throw std::runtime_error(loc + ": unknown key '" + key + "'");
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void validate_config(const RunConfig& config) {
    auto reject = [](const std::string& msg) { throw std::invalid_argument(msg); };

    if (config.mode != "slow" && config.mode != "fast")
        reject("mode must be 'slow' or 'fast', got '" + config.mode + "'");
    if (!config.scene_paths.empty() && config.generation_keys_present)
        reject("config must give either scene_paths or generation parameters, not both");
    if (config.jobs < 0) reject("jobs must be non-negative");
    if (config.scene_paths.empty() && config.scene_count < 1)
        reject("scenes must be at least 1");

    for (double rho : config.rho_grid)
        if (rho < 0.0 || rho > 1.0) reject("rho_grid values must lie in [0, 1]");
    for (double phi : config.phi_grid)
        if (!(phi > 0.0 && phi <= 1.0)) reject("phi_grid values must lie in (0, 1]");
    if (config.mode == "slow" && config.rho_grid.empty()) reject("rho_grid must not be empty");
    if (config.mode == "fast" && config.phi_grid.empty()) reject("phi_grid must not be empty");

    if (config.lambda < 0.0 || config.lambda > 1.0) reject("lambda must lie in [0, 1]");
    if (config.fp_rate < 0.0 || config.fp_rate > 1.0) reject("fp_rate must lie in [0, 1]");
    if (config.distort_mode != "off" && config.distort_mode != "swap_min_mid" &&
        config.distort_mode != "equalize_min_mid")
        reject("distort_mode must be off, swap_min_mid, or equalize_min_mid");
    if (config.distort_probability < 0.0 || config.distort_probability > 1.0)
        reject("distort_probability must lie in [0, 1]");
    if (config.distort_mode == "off" && config.distort_probability > 0.0)
        reject("distort_probability requires a distort_mode");

    if (config.llm_max_concurrency < 1) reject("llm_max_concurrency must be at least 1");
    if (config.sim.success_threshold <= 0.0) reject("success_threshold must be positive");
    if (config.sim.skills.delta_safe < 0.0 || config.sim.skills.delta_pass < 0.0)
        reject("skill buffers must be non-negative");
    if (config.sim.max_steps < 1) reject("max_steps must be at least 1");

    const double bins = 1.0 / config.bucket_width;
    if (!(config.bucket_width > 0.0) ||
        std::abs(std::lround(bins) * config.bucket_width - 1.0) > 1e-9)
        reject("bucket_width must divide 1 evenly");
}

std::vector<DegradationConfig> build_grid(const RunConfig& config) {
    DegradationConfig base;
    base.lambda = config.lambda;
    base.false_positive_rate = config.fp_rate;
    base.master_seed = config.master_seed;
    if (config.distort_mode != "off") {
        base.dim_distortion.mode = config.distort_mode == "swap_min_mid"
                                       ? DimDistortMode::SwapMinMid
                                       : DimDistortMode::EqualizeMinMid;
        base.dim_distortion.probability = config.distort_probability;
    }

    std::vector<DegradationConfig> grid;
    if (config.mode == "slow") {
        for (double rho : config.rho_grid) {
            DegradationConfig c = base;
            c.rho_ret = rho;
            grid.push_back(c);
        }
    } else {
        for (double phi : config.phi_grid) {
            DegradationConfig c = base;
            c.phi_iou = phi;
            grid.push_back(c);
        }
    }
    return grid;
}

}  // namespace vlnsim
