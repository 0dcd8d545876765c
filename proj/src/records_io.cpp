#include "vlnsim/records_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vlnsim {

namespace {

const char* kRecordsHeader =
    "mode,grid_index,grid_value,scene,episode,seed,success,oracle_success,path_length,"
    "shortest_length,final_distance,min_distance,steps,s_match,s_obj,s_edge,precision,"
    "failure_reason,failure_skill,trajectory";

// Reason strings may carry arbitrary exception text; keep the CSV grid intact.
std::string sanitize_field(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

std::string records_to_csv(const std::vector<SweepRecord>& records) {
    std::ostringstream os;
    os << kRecordsHeader << "\n";
    for (const auto& rec : records) {
        const EpisodeOutcome& o = rec.outcome;
        os << (rec.mode == SweepMode::Slow ? "slow" : "fast") << ',' << rec.grid_index << ','
           << format_double(rec.grid_value) << ',' << rec.scene_name << ',' << rec.episode_id
           << ',' << rec.seed << ',' << (o.success ? 1 : 0) << ',' << (o.oracle_success ? 1 : 0)
           << ',' << format_double(o.path_length) << ',' << format_double(o.shortest_length)
           << ',' << format_double(o.final_goal_distance) << ','
           << format_double(o.min_goal_distance) << ',' << o.steps << ',';
        if (o.has_match)
            os << format_double(o.match.s_match) << ',' << format_double(o.match.s_obj) << ','
               << format_double(o.match.s_edge) << ',' << format_double(o.match.precision);
        else
            os << ",,,";
        os << ',' << sanitize_field(o.failure_reason) << ',' << sanitize_field(o.failure_skill)
           << ',';
        for (std::size_t i = 0; i < o.trajectory.size(); ++i)
            os << (i ? "|" : "") << o.trajectory[i];
        os << "\n";
    }
    return os.str();
}

void write_records_csv(const std::vector<SweepRecord>& records, const std::string& path) {
    write_text_file(records_to_csv(records), path);
}

std::vector<SweepRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open records file");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty records file");
    if (line != kRecordsHeader)
        throw std::runtime_error(path + ": unrecognized records header");

    std::vector<SweepRecord> records;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 20)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed record");
        SweepRecord rec;
        rec.mode = f[0] == "slow" ? SweepMode::Slow : SweepMode::Fast;
        rec.grid_index = std::stoi(f[1]);
        rec.grid_value = std::stod(f[2]);
        rec.scene_name = f[3];
        rec.episode_id = f[4];
        rec.seed = std::stoull(f[5]);
        EpisodeOutcome& o = rec.outcome;
        o.success = f[6] == "1";
        o.oracle_success = f[7] == "1";
        o.path_length = std::stod(f[8]);
        o.shortest_length = std::stod(f[9]);
        o.final_goal_distance = std::stod(f[10]);
        o.min_goal_distance = std::stod(f[11]);
        o.steps = std::stoi(f[12]);
        if (!f[13].empty()) {
            o.has_match = true;
            o.match.s_match = std::stod(f[13]);
            o.match.s_obj = std::stod(f[14]);
            o.match.s_edge = std::stod(f[15]);
            o.match.precision = std::stod(f[16]);
        }
        o.failure_reason = f[17];
        o.failure_skill = f[18];
        if (!f[19].empty()) o.trajectory = split(f[19], '|');
        records.push_back(std::move(rec));
    }
    return records;
}

std::string metrics_to_csv(const std::vector<GridPoint>& curve) {
    std::ostringstream os;
    os << "grid_value,SR,OSR,SPL,n\n";
    for (const auto& p : curve)
        os << format_double(p.grid_value) << ',' << format_double(p.metrics.sr) << ','
           << format_double(p.metrics.osr) << ',' << format_double(p.metrics.spl) << ','
           << p.metrics.n << "\n";
    return os.str();
}

std::string curve_to_csv(const std::vector<GridPoint>& curve) {
    std::ostringstream os;
    os << "grid_value,SR,OSR,SPL,mean_s_match,n\n";
    for (const auto& p : curve)
        os << format_double(p.grid_value) << ',' << format_double(p.metrics.sr) << ','
           << format_double(p.metrics.osr) << ',' << format_double(p.metrics.spl) << ','
           << format_double(p.mean_s_match) << ',' << p.metrics.n << "\n";
    return os.str();
}

std::string buckets_to_csv(const std::vector<Bucket>& buckets) {
    std::ostringstream os;
    os << "lower,upper,n,sr\n";
    for (const auto& b : buckets) {
        os << format_double(b.lower) << ',' << format_double(b.upper) << ',' << b.n << ',';
        os << (b.sr ? format_double(*b.sr) : "nan") << "\n";
    }
    return os.str();
}

void write_text_file(const std::string& text, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace vlnsim
