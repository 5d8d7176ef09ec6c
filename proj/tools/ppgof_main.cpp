// Command-line front end: simulation, summary curves, persistence diagrams,
// goodness-of-fit tests and the batch power-study harness.

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppgof/io.hpp"
#include "ppgof/mathutil.hpp"
#include "ppgof/procedures.hpp"
#include "ppgof/study.hpp"

namespace {

using namespace ppgof;

struct ModelFlags {
    std::string model = "poisson";
    double lambda = 100.0;
    long n = 100;
    double kappa = 50.0;
    double radius = 0.1;
    double mu = 5.0;
    double sigma = 0.02;
    double beta = 100.0;
    double gamma = 0.5;
    double r_inhibit = 0.05;
    double rho_max = 100.0;
    std::string intensity = "const";

    void attach(CLI::App* app, const std::string& prefix = "--") {
        app->add_option(prefix + "model", model,
                        "binomial | poisson | matern | thomas | strauss | ssi | inhom");
        app->add_option(prefix + "lambda", lambda, "poisson intensity");
        app->add_option(prefix + "n", n, "point count (binomial, ssi)");
        app->add_option(prefix + "kappa", kappa, "parent intensity (matern, thomas)");
        app->add_option(prefix + "radius", radius, "cluster / interaction radius");
        app->add_option(prefix + "mu", mu, "mean offspring per parent");
        app->add_option(prefix + "sigma", sigma, "offspring displacement sd (thomas)");
        app->add_option(prefix + "beta", beta, "strauss activity");
        app->add_option(prefix + "gamma", gamma, "strauss interaction in [0,1]");
        app->add_option(prefix + "r-inhibit", r_inhibit, "ssi inhibition distance");
        app->add_option(prefix + "rho-max", rho_max, "inhomogeneous intensity bound");
        app->add_option(prefix + "intensity", intensity, "const | linear_x | linear_y | radial");
    }

    ModelSpec build(const Window& w) const {
        KeyValues kv{{"model", model}};
        kv["lambda"] = std::to_string(lambda);
        kv["n"] = std::to_string(n);
        kv["kappa"] = std::to_string(kappa);
        kv["radius"] = std::to_string(radius);
        kv["mu"] = std::to_string(mu);
        kv["sigma"] = std::to_string(sigma);
        kv["beta"] = std::to_string(beta);
        kv["gamma"] = std::to_string(gamma);
        kv["r_inhibit"] = std::to_string(r_inhibit);
        kv["rho_max"] = std::to_string(rho_max);
        kv["intensity"] = intensity;
        return model_from_keyvalues(kv, w);
    }
};

Window window_from_vec(const std::vector<double>& v) {
    if (v.size() != 4) throw ConfigError("--window needs x_min x_max y_min y_max");
    return Window(v[0], v[1], v[2], v[3]);
}

PointPattern load_pattern(const std::string& path, const std::vector<double>& window_flag) {
    const LoadedPattern loaded = read_pattern_csv(path);
    if (!window_flag.empty()) return PointPattern(loaded.points, window_from_vec(window_flag));
    if (loaded.window) return PointPattern(loaded.points, *loaded.window);
    throw ConfigError("no window: pass --window or store a '# window ...' line in the file");
}

EvalGrid grid_for(const Window& w, std::size_t n, double r_min, double r_max) {
    const double hi = r_max > 0.0 ? r_max : 0.25 * w.min_side();
    return EvalGrid::linspace(r_min, hi, n);
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgs*>(&e) ||
        dynamic_cast<const InvalidSpec*>(&e) || dynamic_cast<const IoError*>(&e) ||
        dynamic_cast<const IndexOutOfGrid*>(&e) || dynamic_cast<const AlphaTooSmall*>(&e))
        return 2;
    return 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"goodness-of-fit testing for planar point patterns"};
    app.require_subcommand(1);

    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = automatic)");

    // ---- simulate ----------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "draw one realization of a point process model");
    ModelFlags sim_model;
    sim_model.attach(sim);
    std::vector<double> sim_window{0.0, 1.0, 0.0, 1.0};
    std::uint64_t sim_seed = 0, sim_stream = 0;
    std::string sim_out;
    sim->add_option("--window", sim_window, "x_min x_max y_min y_max")->expected(4);
    sim->add_option("--seed", sim_seed, "master seed");
    sim->add_option("--stream", sim_stream, "substream index");
    sim->add_option("--out", sim_out, "output pattern CSV")->required();

    // ---- summary ------------------------------------------------------
    auto* sum = app.add_subcommand("summary", "evaluate a functional summary statistic");
    std::string sum_in, sum_out, sum_stat = "L", sum_corr = "translation";
    std::vector<double> sum_window;
    std::size_t sum_grid_n = 513;
    double sum_r_min = 0.0, sum_r_max = 0.0, sum_bandwidth = 0.0;
    int sum_side = 128;
    sum->add_option("--in", sum_in, "pattern CSV")->required();
    sum->add_option("--window", sum_window, "x_min x_max y_min y_max")->expected(4);
    sum->add_option("--stat", sum_stat, "K L pcf F G Gstar J betti0 betti1 apf0 apf1 nd0 euler");
    sum->add_option("--correction", sum_corr, "translation | border | none");
    sum->add_option("--grid-n", sum_grid_n, "evaluation points");
    sum->add_option("--r-min", sum_r_min, "grid start");
    sum->add_option("--r-max", sum_r_max, "grid end (0 = min side / 4)");
    sum->add_option("--bandwidth", sum_bandwidth, "pcf kernel bandwidth (0 = intensity rule)");
    sum->add_option("--test-grid-side", sum_side, "lattice side for the empty space function");
    sum->add_option("--out", sum_out, "output curve CSV")->required();

    // ---- persistence ---------------------------------------------------
    auto* pers = app.add_subcommand("persistence", "persistence diagram of the alpha filtration");
    std::string pers_in, pers_out;
    std::vector<double> pers_window;
    pers->add_option("--in", pers_in, "pattern CSV")->required();
    pers->add_option("--window", pers_window, "x_min x_max y_min y_max")->expected(4);
    pers->add_option("--out", pers_out, "output diagram CSV")->required();

    // ---- test ----------------------------------------------------------
    auto* test = app.add_subcommand("test", "Monte Carlo goodness-of-fit test");
    std::string test_in, test_report, test_envelope;
    std::vector<double> test_window;
    std::string test_summary = "L", test_stat = "fun", test_measure = "erl";
    std::string test_corr = "translation";
    long test_m = 0, test_s = 99;
    double test_alpha = 0.05, test_bandwidth = 0.0, test_r_max = 0.0;
    std::size_t test_grid_n = 513, test_r_index = 0;
    int test_side = 128;
    std::uint64_t test_seed = 0;
    bool test_bits = false, no_condition = false;
    ModelFlags null_model;
    null_model.model = "poisson";
    test->add_option("--in", test_in, "observed pattern CSV")->required();
    test->add_option("--window", test_window, "x_min x_max y_min y_max")->expected(4);
    null_model.attach(test, "--null-");
    test->add_flag("--no-condition", no_condition,
                   "simulate the Poisson null directly instead of conditioning on the count");
    test->add_option("--summary", test_summary, "summary statistic; join with + to combine");
    test->add_option("--stat", test_stat, "mad dclf st qdir st-dclf qdir-dclf crps point int fun score");
    test->add_option("--measure", test_measure, "rank erl cont area (vector statistics)");
    test->add_option("--correction", test_corr, "translation | border | none");
    test->add_option("--m", test_m, "simulations (0 = variant default)");
    test->add_option("--s", test_s, "second-stage count for --bits");
    test->add_option("--alpha", test_alpha, "significance level");
    test->add_option("--seed", test_seed, "master seed");
    test->add_option("--grid-n", test_grid_n, "evaluation points");
    test->add_option("--r-max", test_r_max, "grid end (0 = min side / 4)");
    test->add_option("--r-index", test_r_index, "grid index for --stat point");
    test->add_option("--bandwidth", test_bandwidth, "pcf kernel bandwidth");
    test->add_option("--test-grid-side", test_side, "lattice side for F and J");
    test->add_flag("--bits", test_bits, "balanced two-stage test for the composite null");
    test->add_option("--report", test_report, "output report JSON")->required();
    test->add_option("--envelope", test_envelope, "output envelope CSV");

    // ---- power-study -----------------------------------------------------
    auto* study = app.add_subcommand("power-study", "rejection-rate grid over alternatives");
    std::string study_config, study_out = "study-out";
    study->add_option("--config", study_config, "study config file")->required();
    study->add_option("--out-dir", study_out, "output directory (per-cell files enable resume)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*sim) {
            const Window w = window_from_vec(sim_window);
            const ModelSpec spec = sim_model.build(w);
            const PointPattern p = simulate(spec, w, RngSeed{sim_seed, sim_stream});
            write_pattern_csv(sim_out, p);
            std::printf("%zu points -> %s\n", p.size(), sim_out.c_str());
        } else if (*sum) {
            const PointPattern p = load_pattern(sum_in, sum_window);
            SummaryChoice choice;
            choice.kind = summary_from_name(sum_stat);
            choice.bandwidth = sum_bandwidth;
            choice.test_grid_side = sum_side;
            if (sum_corr == "translation") choice.correction = EdgeCorrection::Translation;
            else if (sum_corr == "border") choice.correction = EdgeCorrection::Border;
            else if (sum_corr == "none") choice.correction = EdgeCorrection::None;
            else throw ConfigError("unknown edge correction: " + sum_corr);
            const EvalGrid grid = grid_for(p.window(), sum_grid_n, sum_r_min, sum_r_max);
            write_curve_csv(sum_out, evaluate_summary(choice, p, grid));
            std::printf("%s curve (%zu points) -> %s\n", sum_stat.c_str(), grid.size(),
                        sum_out.c_str());
        } else if (*pers) {
            const PointPattern p = load_pattern(pers_in, pers_window);
            const PersistenceDiagram pd = persistence(alpha_filtration(p));
            write_diagram_csv(pers_out, pd);
            std::printf("%zu persistence pairs -> %s\n", pd.pairs.size(), pers_out.c_str());
        } else if (*test) {
            const PointPattern observed = load_pattern(test_in, test_window);
            TestConfig cfg;
            cfg.null_model = null_model.build(observed.window());
            cfg.condition_csr = !no_condition;
            KeyValues summary_kv{{"correction", test_corr},
                                 {"bandwidth", std::to_string(test_bandwidth)},
                                 {"test_grid_side", std::to_string(test_side)}};
            cfg.summaries.clear();
            {
                std::istringstream ss(test_summary);
                std::string part;
                while (std::getline(ss, part, '+')) {
                    SummaryChoice choice;
                    choice.kind = summary_from_name(part);
                    choice.bandwidth = test_bandwidth;
                    choice.test_grid_side = test_side;
                    if (test_corr == "translation") choice.correction = EdgeCorrection::Translation;
                    else if (test_corr == "border") choice.correction = EdgeCorrection::Border;
                    else if (test_corr == "none") choice.correction = EdgeCorrection::None;
                    else throw ConfigError("unknown edge correction: " + test_corr);
                    cfg.summaries.push_back(choice);
                }
            }
            if (cfg.summaries.empty()) throw ConfigError("empty --summary");
            cfg.grid = grid_for(observed.window(), test_grid_n, 0.0, test_r_max);
            cfg.stat = stat_from_name(test_stat);
            cfg.measure = measure_from_name(test_measure);
            cfg.point_index = test_r_index;
            if (cfg.stat == StatVariant::POINT && test_r_index >= cfg.grid->size())
                throw IndexOutOfGrid("--r-index beyond the evaluation grid");
            cfg.m = test_m;
            cfg.s = test_s;
            cfg.alpha = test_alpha;
            cfg.seed = RngSeed{test_seed, 0};
            cfg.threads = threads;
            cfg.want_envelope = !test_envelope.empty();

            TestReport report;
            if (test_bits) {
                if (!std::holds_alternative<PoissonModel>(cfg.null_model))
                    throw ConfigError("--bits ships an intensity estimator for the Poisson family only");
                cfg.condition_csr = false;
                const RefitFn refit = [](const PointPattern& x) -> ModelSpec {
                    return PoissonModel{x.intensity_estimate()};
                };
                report = bits_test(cfg, observed, refit);
            } else {
                report = monte_carlo_test(cfg, observed);
            }
            write_report_json(test_report, report);
            if (!test_envelope.empty()) {
                if (report.envelope) {
                    write_envelope_csv(test_envelope, *report.envelope);
                } else {
                    std::fprintf(stderr,
                                 "note: --stat %s has no envelope representation; none written\n",
                                 test_stat.c_str());
                }
            }
            std::printf("p = %g (%s) -> %s\n", report.p_value,
                        report.reject ? "reject" : "fail-to-reject", test_report.c_str());
        } else if (*study) {
            StudyConfig cfg = parse_study_config(study_config);
            if (threads > 0) cfg.threads = threads;
            const StudyResult result = run_power_study(cfg, study_out);
            long failed = 0;
            for (const auto& cell : result.cells) failed += cell.failed ? 1 : 0;
            std::printf("%zu cells -> %s/results.csv (%ld failed)\n", result.cells.size(),
                        study_out.c_str(), failed);
            return failed > 0 ? 3 : 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    }
    return 0;
}
