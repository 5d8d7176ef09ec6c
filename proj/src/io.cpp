#include "ppgof/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ppgof {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

} // namespace

void write_pattern_csv(const std::string& path, const PointPattern& p) {
    std::ofstream out = open_out(path);
    const Window& w = p.window();
    out << "# window " << format_double(w.x_min) << ' ' << format_double(w.x_max) << ' '
        << format_double(w.y_min) << ' ' << format_double(w.y_max) << '\n';
    out << "x,y\n";
    for (const Point& pt : p.points())
        out << format_double(pt.x) << ',' << format_double(pt.y) << '\n';
}

LoadedPattern read_pattern_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pattern file: " + path);
    LoadedPattern loaded;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::istringstream ss(line.substr(1));
            std::string tag;
            ss >> tag;
            if (tag == "window") {
                double a, b, c, d;
                if (ss >> a >> b >> c >> d) loaded.window = Window(a, b, c, d);
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            if (line.find("x") != std::string::npos && line.find(",") != std::string::npos &&
                line.find_first_of("0123456789") == std::string::npos)
                continue; // header row
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError("malformed pattern line: " + line);
        try {
            loaded.points.push_back(
                Point{std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
        } catch (const std::exception&) {
            throw IoError("malformed pattern line: " + line);
        }
    }
    return loaded;
}

void write_curve_csv(const std::string& path, const SummaryCurve& curve) {
    std::ofstream out = open_out(path);
    out << "r,value,defined\n";
    for (std::size_t k = 0; k < curve.size(); ++k)
        out << format_double(curve.grid[k]) << ',' << format_double(curve.values[k]) << ','
            << int(curve.defined[k]) << '\n';
}

void write_diagram_csv(const std::string& path, const PersistenceDiagram& pd) {
    std::ofstream out = open_out(path);
    out << "dim,birth,death\n";
    for (const auto& pr : pd.pairs)
        out << pr.dim << ',' << format_double(pr.birth) << ','
            << (std::isinf(pr.death) ? "inf" : format_double(pr.death)) << '\n';
}

void write_envelope_csv(const std::string& path, const Envelope& env) {
    std::ofstream out = open_out(path);
    out << "r,lo,hi,obs,mean\n";
    for (std::size_t k = 0; k < env.r.size(); ++k) {
        out << format_double(env.r[k]) << ',' << format_double(env.lo[k]) << ','
            << format_double(env.hi[k]) << ','
            << (env.obs.empty() ? "" : format_double(env.obs[k])) << ','
            << (env.central.empty() ? "" : format_double(env.central[k])) << '\n';
    }
}

std::string report_to_json(const TestReport& rep, bool with_timestamp) {
    nlohmann::ordered_json j;
    j["p_value"] = rep.p_value;
    j["method"] = rep.method;
    j["statistic"] = rep.statistic;
    j["summary"] = rep.summary;
    if (!rep.measure.empty()) j["measure"] = rep.measure;
    j["m"] = rep.m;
    j["s"] = rep.s; // 0 unless the two-stage procedure ran
    j["alpha"] = rep.alpha;
    j["decision"] = rep.reject ? "reject" : "fail-to-reject";
    j["ci_halfwidth"] = rep.ci_halfwidth;
    j["seed"] = {{"seed", rep.seed.seed}, {"stream", rep.seed.stream}};
    if (std::isnan(rep.truncated_at)) j["truncated_at"] = nullptr;
    else j["truncated_at"] = rep.truncated_at;
    j["n_observed"] = rep.n_observed;
    if (rep.threshold_tie) j["threshold_tie"] = true;
    if (rep.conditioning_noop) j["conditioning_noop"] = true;
    if (!rep.stat_values.empty()) j["stat_values"] = rep.stat_values;
    if (!rep.depth_values.empty()) j["depth_values"] = rep.depth_values;
    if (with_timestamp) j["timestamp"] = std::time(nullptr);
    return j.dump(2);
}

void write_report_json(const std::string& path, const TestReport& rep) {
    std::ofstream out = open_out(path);
    out << report_to_json(rep) << '\n';
}

} // namespace ppgof
