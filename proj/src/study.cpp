#include "ppgof/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ppgof/io.hpp"
#include "ppgof/parallel.hpp"

namespace ppgof {

namespace {

namespace fs = std::filesystem;

struct Section {
    std::string name;
    KeyValues entries;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<Section> parse_sections(const std::string& text) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            std::string name = line;
            name.erase(std::remove_if(name.begin(), name.end(),
                                      [](char c) { return c == '[' || c == ']'; }),
                       name.end());
            sections.push_back({trim(name), {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value: " + line);
        if (sections.empty()) throw ConfigError("entry before any section: " + line);
        sections.back().entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return sections;
}

double get_num(const KeyValues& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("missing key: " + key);
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw ConfigError("not a number: " + key + " = " + it->second);
    }
}

double get_num(const KeyValues& kv, const std::string& key, double fallback) {
    return kv.count(key) ? get_num(kv, key) : fallback;
}

std::string get_str(const KeyValues& kv, const std::string& key, const std::string& fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

std::function<double(Point)> make_intensity(const std::string& name, const Window& w,
                                            double rho_max) {
    if (name == "const") return [rho_max](Point) { return rho_max; };
    if (name == "linear_x")
        return [rho_max, w](Point p) { return rho_max * (p.x - w.x_min) / w.width(); };
    if (name == "linear_y")
        return [rho_max, w](Point p) { return rho_max * (p.y - w.y_min) / w.height(); };
    if (name == "radial") {
        const Point centre{0.5 * (w.x_min + w.x_max), 0.5 * (w.y_min + w.y_max)};
        const double half_diag = 0.5 * std::hypot(w.width(), w.height());
        return [rho_max, centre, half_diag](Point p) {
            return rho_max * std::max(0.0, 1.0 - distance(p, centre) / half_diag);
        };
    }
    throw ConfigError("unknown intensity function: " + name);
}

} // namespace

ModelSpec model_from_keyvalues(const KeyValues& kv, const Window& w) {
    const std::string model = get_str(kv, "model", "");
    if (model.empty()) throw ConfigError("section needs a model key");
    ModelSpec spec;
    if (model == "binomial") {
        spec = BinomialModel{long(get_num(kv, "n"))};
    } else if (model == "poisson") {
        spec = PoissonModel{get_num(kv, "lambda")};
    } else if (model == "matern") {
        spec = MaternClusterModel{get_num(kv, "kappa"), get_num(kv, "radius"), get_num(kv, "mu")};
    } else if (model == "thomas") {
        spec = ThomasModel{get_num(kv, "kappa"), get_num(kv, "sigma"), get_num(kv, "mu")};
    } else if (model == "strauss") {
        spec = StraussModel{get_num(kv, "beta"), get_num(kv, "gamma"), get_num(kv, "radius")};
    } else if (model == "ssi") {
        spec = SSIModel{long(get_num(kv, "n")), get_num(kv, "r_inhibit")};
    } else if (model == "inhom") {
        const double rho_max = get_num(kv, "rho_max");
        spec = InhomPoissonModel{rho_max,
                                 make_intensity(get_str(kv, "intensity", "const"), w, rho_max)};
    } else {
        throw ConfigError("unknown model: " + model);
    }
    validate(spec);
    return spec;
}

namespace {

EdgeCorrection correction_from_name(const std::string& name) {
    if (name == "translation") return EdgeCorrection::Translation;
    if (name == "border") return EdgeCorrection::Border;
    if (name == "none") return EdgeCorrection::None;
    throw ConfigError("unknown edge correction: " + name);
}

std::vector<SummaryChoice> summaries_from_string(const std::string& text, const KeyValues& kv) {
    std::vector<SummaryChoice> out;
    std::istringstream ss(text);
    std::string part;
    while (std::getline(ss, part, '+')) {
        SummaryChoice choice;
        choice.kind = summary_from_name(trim(part));
        choice.correction = correction_from_name(get_str(kv, "correction", "translation"));
        choice.bandwidth = get_num(kv, "bandwidth", 0.0);
        choice.test_grid_side = int(get_num(kv, "test_grid_side", 128));
        out.push_back(choice);
    }
    if (out.empty()) throw ConfigError("empty summary selector");
    return out;
}

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c == ',' || c == '\n') c = ' ';
    return out;
}

} // namespace

StudyConfig parse_study_config_text(const std::string& text) {
    StudyConfig cfg;
    const std::vector<Section> sections = parse_sections(text);

    // the [study] section fixes the window first; models may depend on it
    for (const Section& s : sections) {
        if (s.name != "study") continue;
        const auto it = s.entries.find("window");
        if (it != s.entries.end()) {
            std::istringstream ss(it->second);
            double a, b, c, d;
            if (!(ss >> a >> b >> c >> d))
                throw ConfigError("window needs four numbers: " + it->second);
            cfg.window = Window(a, b, c, d);
        }
    }

    bool have_null = false;
    for (const Section& s : sections) {
        if (s.name == "study") {
            cfg.replications = long(get_num(s.entries, "replications", double(cfg.replications)));
            cfg.m = long(get_num(s.entries, "m", double(cfg.m)));
            cfg.alpha = get_num(s.entries, "alpha", cfg.alpha);
            cfg.seed.seed = std::uint64_t(get_num(s.entries, "seed", 0.0));
            cfg.threads = unsigned(get_num(s.entries, "threads", 0.0));
            cfg.grid_n = std::size_t(get_num(s.entries, "grid_n", double(cfg.grid_n)));
            cfg.r_max = get_num(s.entries, "r_max", 0.0);
            const std::string cond = get_str(s.entries, "condition", "true");
            cfg.condition_csr = cond == "true" || cond == "1" || cond == "yes";
        } else if (s.name == "null") {
            cfg.null_model = model_from_keyvalues(s.entries, cfg.window);
            have_null = true;
        } else if (s.name == "alternative") {
            StudyAlternative alt;
            alt.model = model_from_keyvalues(s.entries, cfg.window);
            alt.name = get_str(s.entries, "name", model_name(alt.model));
            alt.replications = long(get_num(s.entries, "replications", 0.0));
            cfg.alternatives.push_back(std::move(alt));
        } else if (s.name == "test") {
            StudyTest test;
            const std::string summary = get_str(s.entries, "summary", "L");
            test.summaries = summaries_from_string(summary, s.entries);
            test.stat = stat_from_name(get_str(s.entries, "stat", "fun"));
            test.measure = measure_from_name(get_str(s.entries, "measure", "erl"));
            test.m = long(get_num(s.entries, "m", 0.0));
            test.point_index = std::size_t(get_num(s.entries, "r_index", 0.0));
            std::string fallback = summary + "-" + stat_name(test.stat);
            if (is_vector_stat(test.stat)) fallback += "-" + measure_name(test.measure);
            test.name = get_str(s.entries, "name", fallback);
            cfg.tests.push_back(std::move(test));
        } else {
            throw ConfigError("unknown section: [" + s.name + "]");
        }
    }
    if (!have_null) throw ConfigError("config needs a [null] section");
    if (cfg.alternatives.empty()) throw ConfigError("config needs at least one [[alternative]]");
    if (cfg.tests.empty()) throw ConfigError("config needs at least one [[test]]");
    if (cfg.replications < 1) throw ConfigError("replications must be >= 1");
    return cfg;
}

StudyConfig parse_study_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_study_config_text(buf.str());
}

namespace {

std::string cell_path(const std::string& out_dir, std::size_t a, std::size_t t) {
    return out_dir + "/cell_" + std::to_string(a) + "_" + std::to_string(t) + ".csv";
}

const char* kCellHeader = "alternative,test,replications,rejections,rate,mc_se,status\n";

void write_cell(const std::string& path, const StudyConfig& cfg, const StudyCell& cell) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write cell result: " + path);
    out << kCellHeader;
    out << sanitize(cfg.alternatives[cell.alternative_index].name) << ','
        << sanitize(cfg.tests[cell.test_index].name) << ',' << cell.replications << ','
        << cell.rejections << ',' << format_double(cell.rate) << ',' << format_double(cell.mc_se)
        << ',' << (cell.failed ? "failed: " + sanitize(cell.error) : std::string("ok")) << '\n';
}

bool read_cell(const std::string& path, StudyCell& cell) {
    std::ifstream in(path);
    if (!in) return false;
    std::string header, row;
    if (!std::getline(in, header) || !std::getline(in, row)) return false;
    std::vector<std::string> fields;
    std::istringstream ss(row);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 7) return false;
    cell.replications = std::stol(fields[2]);
    cell.rejections = std::stol(fields[3]);
    cell.rate = std::stod(fields[4]);
    cell.mc_se = std::stod(fields[5]);
    cell.failed = fields[6].rfind("ok", 0) != 0;
    if (cell.failed) cell.error = fields[6];
    return true;
}

} // namespace

StudyResult run_power_study(const StudyConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    StudyResult result;
    result.config = cfg;

    const double r_max = cfg.r_max > 0.0 ? cfg.r_max : 0.25 * cfg.window.min_side();
    const EvalGrid grid = EvalGrid::linspace(0.0, r_max, cfg.grid_n);
    const unsigned threads = resolve_threads(cfg.threads);

    std::size_t cell_index = 0;
    for (std::size_t a = 0; a < cfg.alternatives.size(); ++a) {
        for (std::size_t t = 0; t < cfg.tests.size(); ++t, ++cell_index) {
            StudyCell cell;
            cell.alternative_index = a;
            cell.test_index = t;
            const std::string path = cell_path(out_dir, a, t);
            if (read_cell(path, cell)) {
                result.cells.push_back(cell);
                continue;
            }

            const StudyAlternative& alt = cfg.alternatives[a];
            const StudyTest& test = cfg.tests[t];
            const long reps = alt.replications > 0 ? alt.replications : cfg.replications;
            cell.replications = reps;

            TestConfig tc;
            tc.null_model = cfg.null_model;
            tc.condition_csr = cfg.condition_csr;
            tc.summaries = test.summaries;
            tc.grid = grid;
            tc.stat = test.stat;
            tc.measure = test.measure;
            tc.point_index = test.point_index;
            tc.m = test.m > 0 ? test.m : cfg.m;
            tc.alpha = cfg.alpha;
            tc.threads = 1; // replications parallelize on the outside

            const auto start = std::chrono::steady_clock::now();
            std::vector<char> rejected(static_cast<std::size_t>(reps), 0);
            std::vector<std::string> errors(static_cast<std::size_t>(reps));
            const RngSeed cell_seed = cfg.seed.sub(0xce11).sub(cell_index);
            parallel_for(std::size_t(reps), threads, [&](std::size_t rep) {
                try {
                    const RngSeed rep_seed = cell_seed.sub(rep);
                    const PointPattern observed =
                        simulate(alt.model, cfg.window, rep_seed.sub(0xab5));
                    TestConfig mine = tc;
                    mine.seed = rep_seed;
                    const TestReport rep_report = monte_carlo_test(mine, observed);
                    rejected[rep] = rep_report.reject ? 1 : 0;
                } catch (const std::exception& e) {
                    errors[rep] = e.what();
                }
            });
            cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                               .count();

            for (long rep = 0; rep < reps; ++rep) {
                if (!errors[std::size_t(rep)].empty()) {
                    cell.failed = true;
                    cell.error = errors[std::size_t(rep)];
                    break;
                }
                if (rejected[std::size_t(rep)]) ++cell.rejections;
            }
            if (!cell.failed) {
                cell.rate = double(cell.rejections) / double(reps);
                cell.mc_se = std::sqrt(cell.rate * (1.0 - cell.rate) / double(reps));
            }
            write_cell(path, cfg, cell);
            result.cells.push_back(cell);
        }
    }

    // deterministic results table assembled from the cells
    {
        std::ofstream out(out_dir + "/results.csv");
        if (!out) throw IoError("cannot write results.csv");
        out << "alternative,test,summary,stat,measure,m,replications,rejections,rate,mc_se,status\n";
        for (const StudyCell& cell : result.cells) {
            const StudyAlternative& alt = cfg.alternatives[cell.alternative_index];
            const StudyTest& test = cfg.tests[cell.test_index];
            std::string summary;
            for (const auto& choice : test.summaries) {
                if (!summary.empty()) summary += "+";
                summary += summary_name(choice.kind);
            }
            out << sanitize(alt.name) << ',' << sanitize(test.name) << ',' << summary << ','
                << stat_name(test.stat) << ','
                << (is_vector_stat(test.stat) ? measure_name(test.measure) : std::string()) << ','
                << (test.m > 0 ? test.m : cfg.m) << ',' << cell.replications << ','
                << cell.rejections << ',' << format_double(cell.rate) << ','
                << format_double(cell.mc_se) << ','
                << (cell.failed ? "failed: " + sanitize(cell.error) : std::string("ok")) << '\n';
        }
    }

    // wall-clock per cell; run-dependent, kept out of results.csv
    {
        std::ofstream out(out_dir + "/timing.csv");
        if (out) {
            out << "alternative,test,seconds\n";
            for (const StudyCell& cell : result.cells)
                out << sanitize(cfg.alternatives[cell.alternative_index].name) << ','
                    << sanitize(cfg.tests[cell.test_index].name) << ','
                    << format_double(cell.seconds) << '\n';
        }
    }
    return result;
}

} // namespace ppgof
