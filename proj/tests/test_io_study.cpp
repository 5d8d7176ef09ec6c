#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ppgof/io.hpp"
#include "ppgof/study.hpp"
#include "support.hpp"

using namespace ppgof;
namespace fs = std::filesystem;

namespace {
const Window unit_square(0.0, 1.0, 0.0, 1.0);

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
#ifdef PPGOF_CLI_PATH
    const int status = std::system((std::string(PPGOF_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
#else
    (void)args;
    return -1;
#endif
}
} // namespace

TEST_CASE("pattern CSV round trip with the window sidecar") {
    TempDir dir("ppgof-io-pattern");
    const PointPattern p = simulate(BinomialModel{25}, unit_square, {501, 0});
    const std::string path = dir.file("p.csv");
    write_pattern_csv(path, p);

    const LoadedPattern loaded = read_pattern_csv(path);
    REQUIRE(loaded.window.has_value());
    CHECK(loaded.window->x_min == 0.0);
    CHECK(loaded.window->y_max == 1.0);
    REQUIRE(loaded.points.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(loaded.points[i].x == p[i].x); // exact round trip
        CHECK(loaded.points[i].y == p[i].y);
    }

    // comments and blank lines are skipped
    std::ofstream extra(dir.file("hand.csv"));
    extra << "# a comment\n\nx,y\n0.25,0.75\n# trailing\n0.5,0.5\n";
    extra.close();
    const LoadedPattern hand = read_pattern_csv(dir.file("hand.csv"));
    CHECK_FALSE(hand.window.has_value());
    REQUIRE(hand.points.size() == 2);
    CHECK(hand.points[1].x == 0.5);

    CHECK_THROWS_AS(read_pattern_csv(dir.file("missing.csv")), IoError);
}

TEST_CASE("curve, diagram and envelope CSV formats") {
    TempDir dir("ppgof-io-csv");
    const EvalGrid grid = EvalGrid::linspace(0.0, 1.0, 3);
    SummaryCurve curve(grid, {0.5, 1.5, 2.5}, {1, 1, 0}, "L");
    write_curve_csv(dir.file("curve.csv"), curve);
    CHECK(slurp(dir.file("curve.csv")) == "r,value,defined\n0,0.5,1\n0.5,1.5,1\n1,2.5,0\n");

    PersistenceDiagram pd;
    pd.pairs.push_back({0.0, 0.25, 0});
    pd.pairs.push_back({0.0, std::numeric_limits<double>::infinity(), 0});
    pd.pairs.push_back({0.1, 0.2, 1});
    write_diagram_csv(dir.file("pd.csv"), pd);
    CHECK(slurp(dir.file("pd.csv")) == "dim,birth,death\n0,0,0.25\n0,0,inf\n1,0.1,0.2\n");

    Envelope env;
    env.r = {0.0, 0.5};
    env.lo = {-1.0, -2.0};
    env.hi = {1.0, 2.0};
    env.obs = {0.1, 0.2};
    env.central = {0.0, 0.0};
    write_envelope_csv(dir.file("env.csv"), env);
    CHECK(slurp(dir.file("env.csv")) == "r,lo,hi,obs,mean\n0,-1,1,0.1,0\n0.5,-2,2,0.2,0\n");
}

TEST_CASE("report JSON carries the contract fields") {
    TestReport rep;
    rep.p_value = 0.04;
    rep.method = "mc";
    rep.statistic = "mad";
    rep.summary = "L";
    rep.m = 99;
    rep.alpha = 0.05;
    rep.reject = true;
    rep.ci_halfwidth = 0.01;
    rep.seed = {42, 7};
    rep.n_observed = 100;

    const std::string json = report_to_json(rep, false);
    for (const char* field : {"\"p_value\"", "\"method\"", "\"statistic\"", "\"m\"", "\"alpha\"",
                              "\"decision\"", "\"ci_halfwidth\"", "\"seed\"", "\"truncated_at\""})
        CHECK(json.find(field) != std::string::npos);
    CHECK(json.find("\"decision\": \"reject\"") != std::string::npos);
    CHECK(json.find("timestamp") == std::string::npos);
    CHECK(report_to_json(rep, true).find("timestamp") != std::string::npos);

    // identical reports serialize identically without the timestamp
    CHECK(report_to_json(rep, false) == report_to_json(rep, false));
}

TEST_CASE("study config parsing") {
    const std::string text = R"(
# comment line
[study]
window = 0 2 0 1
replications = 8
m = 19
alpha = 0.1
seed = 99
grid_n = 65

[null]
model = poisson
lambda = 50

[[alternative]]
name = clustered
model = matern
kappa = 20
radius = 0.1
mu = 4

[[alternative]]
model = strauss
beta = 60
gamma = 0
radius = 0.04
replications = 4

[[test]]
summary = L
stat = fun
measure = erl

[[test]]
name = g-mad
summary = G
stat = mad
m = 9
)";
    const StudyConfig cfg = parse_study_config_text(text);
    CHECK(cfg.window.x_max == 2.0);
    CHECK(cfg.replications == 8);
    CHECK(cfg.m == 19);
    CHECK(cfg.alpha == 0.1);
    CHECK(cfg.seed.seed == 99);
    CHECK(cfg.grid_n == 65);
    REQUIRE(cfg.alternatives.size() == 2);
    CHECK(cfg.alternatives[0].name == "clustered");
    CHECK(cfg.alternatives[1].name == "strauss");
    CHECK(cfg.alternatives[1].replications == 4);
    REQUIRE(cfg.tests.size() == 2);
    CHECK(cfg.tests[0].name == "L-fun-erl");
    CHECK(cfg.tests[1].name == "g-mad");
    CHECK(cfg.tests[1].m == 9);

    CHECK_THROWS_AS(parse_study_config_text("[study]\nm = 9\n"), ConfigError); // no null
    CHECK_THROWS_AS(parse_study_config_text("[bogus]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_study_config_text("key = 1\n"), ConfigError);
}

TEST_CASE("model construction from key-value pairs") {
    CHECK(std::holds_alternative<BinomialModel>(
        model_from_keyvalues({{"model", "binomial"}, {"n", "30"}}, unit_square)));
    CHECK_THROWS_AS(model_from_keyvalues({{"model", "unknown"}}, unit_square), ConfigError);
    CHECK_THROWS_AS(model_from_keyvalues({{"model", "poisson"}}, unit_square), ConfigError);
    CHECK_THROWS_AS(
        model_from_keyvalues(
            {{"model", "strauss"}, {"beta", "10"}, {"gamma", "1.5"}, {"radius", "0.05"}},
            unit_square),
        InvalidSpec);

    // named intensity surfaces in the inhomogeneous model
    const ModelSpec inhom = model_from_keyvalues(
        {{"model", "inhom"}, {"rho_max", "80"}, {"intensity", "linear_x"}}, unit_square);
    const auto& m = std::get<InhomPoissonModel>(inhom);
    CHECK(m.intensity({0.0, 0.5}) == doctest::Approx(0.0));
    CHECK(m.intensity({1.0, 0.5}) == doctest::Approx(80.0));
}

TEST_CASE("power study runs, resumes and stays deterministic") {
    const std::string config_text = R"(
[study]
window = 0 1 0 1
replications = 6
m = 9
alpha = 0.2
seed = 314
grid_n = 33

[null]
model = poisson
lambda = 30

[[alternative]]
name = null-model
model = poisson
lambda = 30

[[alternative]]
name = clustered
model = matern
kappa = 15
radius = 0.08
mu = 4

[[test]]
summary = L
stat = mad
)";
    const StudyConfig cfg = parse_study_config_text(config_text);

    TempDir a("ppgof-study-a");
    TempDir b("ppgof-study-b");
    const StudyResult first = run_power_study(cfg, a.path.string());
    REQUIRE(first.cells.size() == 2);
    for (const auto& cell : first.cells) {
        CHECK_FALSE(cell.failed);
        CHECK(cell.replications == 6);
        CHECK(cell.rejections >= 0);
        CHECK(cell.rejections <= 6);
    }

    // byte-identical results for the same seed in a fresh directory
    const StudyResult second = run_power_study(cfg, b.path.string());
    CHECK(slurp(a.file("results.csv")) == slurp(b.file("results.csv")));
    CHECK(fs::exists(a.file("timing.csv")));

    // resuming re-uses finished cells: poison one cell file and rerun
    {
        std::ofstream poison(a.file("cell_0_0.csv"));
        poison << "alternative,test,replications,rejections,rate,mc_se,status\n";
        poison << "null-model,L-mad,6,5,0.833,0.1,ok\n";
    }
    const StudyResult resumed = run_power_study(cfg, a.path.string());
    CHECK(resumed.cells[0].rejections == 5); // taken from the poisoned file
    CHECK(resumed.cells[1].rejections == second.cells[1].rejections);
}

TEST_CASE("study records partial failures and keeps running") {
    const std::string config_text = R"(
[study]
replications = 3
m = 5
seed = 55
grid_n = 17

[null]
model = poisson
lambda = 20

[[alternative]]
name = impossible
model = ssi
n = 100000
r_inhibit = 0.05

[[alternative]]
name = fine
model = poisson
lambda = 20

[[test]]
summary = L
stat = mad
)";
    TempDir dir("ppgof-study-fail");
    const StudyResult res = run_power_study(parse_study_config_text(config_text), dir.path.string());
    REQUIRE(res.cells.size() == 2);
    CHECK(res.cells[0].failed);
    CHECK(res.cells[0].error.find("retry budget") != std::string::npos);
    CHECK_FALSE(res.cells[1].failed);
    CHECK(slurp(dir.file("results.csv")).find("failed:") != std::string::npos);
}

#ifdef PPGOF_CLI_PATH
TEST_CASE("cli end-to-end: simulate, summary, persistence, test") {
    TempDir dir("ppgof-cli");
    const std::string pattern = dir.file("p.csv");

    CHECK(run_cli("simulate --model binomial --n 50 --window 0 1 0 1 --seed 7 --out " + pattern) == 0);
    const LoadedPattern loaded = read_pattern_csv(pattern);
    CHECK(loaded.points.size() == 50);

    CHECK(run_cli("summary --in " + pattern + " --stat L --grid-n 65 --out " + dir.file("l.csv")) == 0);
    CHECK(slurp(dir.file("l.csv")).rfind("r,value,defined", 0) == 0);

    CHECK(run_cli("persistence --in " + pattern + " --out " + dir.file("pd.csv")) == 0);
    CHECK(slurp(dir.file("pd.csv")).rfind("dim,birth,death", 0) == 0);

    CHECK(run_cli("test --in " + pattern +
                  " --summary L --stat mad --m 19 --seed 3 --grid-n 65 --report " +
                  dir.file("rep.json") + " --envelope " + dir.file("env.csv")) == 0);
    CHECK(slurp(dir.file("rep.json")).find("\"p_value\"") != std::string::npos);
    CHECK(slurp(dir.file("env.csv")).rfind("r,lo,hi,obs,mean", 0) == 0);

    // bits against the Poisson family
    CHECK(run_cli("test --in " + pattern +
                  " --summary L --stat mad --m 9 --s 9 --bits --seed 3 --grid-n 33 --report " +
                  dir.file("bits.json")) == 0);
    CHECK(slurp(dir.file("bits.json")).find("\"method\": \"bits\"") != std::string::npos);
}

TEST_CASE("cli exit codes for config and usage errors") {
    TempDir dir("ppgof-cli-err");
    // invalid strauss gamma
    CHECK(run_cli("simulate --model strauss --beta 10 --gamma 1.5 --radius 0.05 --window 0 1 0 1 --out " +
                  dir.file("x.csv")) == 2);
    // missing pattern file
    CHECK(run_cli("test --in " + dir.file("absent.csv") + " --report " + dir.file("r.json")) == 2);
    // point index beyond the grid
    const std::string pattern = dir.file("p.csv");
    REQUIRE(run_cli("simulate --model binomial --n 20 --window 0 1 0 1 --out " + pattern) == 0);
    CHECK(run_cli("test --in " + pattern + " --stat point --r-index 100000 --grid-n 65 --report " +
                  dir.file("r.json")) == 2);
    // unknown flag
    CHECK(run_cli("simulate --bogus 1 --out " + dir.file("y.csv")) == 2);
}
#endif

TEST_CASE("hard-core alternative is caught by the G-based deviation test") {
    const std::string config_text = R"(
[study]
replications = 30
m = 99
alpha = 0.05
seed = 616
grid_n = 65
r_max = 0.1

[null]
model = poisson
lambda = 109

[[alternative]]
name = hard-core
model = strauss
beta = 200
gamma = 0
radius = 0.04

[[test]]
summary = G
stat = mad
)";
    TempDir dir("ppgof-study-power");
    const StudyResult res = run_power_study(parse_study_config_text(config_text), dir.path.string());
    REQUIRE(res.cells.size() == 1);
    CHECK_FALSE(res.cells[0].failed);
    CHECK(res.cells[0].rate > 0.8);
}

#ifdef PPGOF_CLI_PATH
TEST_CASE("cli one-step combination and power study") {
    TempDir dir("ppgof-cli-combi");
    const std::string pattern = dir.file("p.csv");
    REQUIRE(run_cli("simulate --model matern --kappa 40 --radius 0.1 --mu 5 --window 0 1 0 1 "
                    "--seed 2 --out " + pattern) == 0);

    CHECK(run_cli("test --in " + pattern +
                  " --summary L+betti1 --stat fun --measure erl --m 19 --grid-n 65 --seed 5 "
                  "--report " + dir.file("combi.json") + " --envelope " + dir.file("combi.csv")) == 0);
    CHECK(slurp(dir.file("combi.json")).find("\"summary\": \"L+betti1\"") != std::string::npos);
    // two concatenated 65-point blocks plus the header line
    std::istringstream env(slurp(dir.file("combi.csv")));
    std::string line;
    long lines = 0;
    while (std::getline(env, line)) ++lines;
    CHECK(lines == 131);

    std::ofstream config(dir.file("study.conf"));
    config << "[study]\nreplications = 3\nm = 9\nseed = 8\ngrid_n = 17\n"
           << "[null]\nmodel = poisson\nlambda = 30\n"
           << "[[alternative]]\nname = a\nmodel = poisson\nlambda = 30\n"
           << "[[test]]\nsummary = L\nstat = mad\n";
    config.close();
    CHECK(run_cli("power-study --config " + dir.file("study.conf") + " --out-dir " +
                  (dir.path / "out").string()) == 0);
    CHECK(slurp((dir.path / "out" / "results.csv").string()).find("a,L-mad") != std::string::npos);
}
#endif

TEST_CASE("study grid shape: alternatives times tests") {
    const std::string config_text = R"(
[study]
replications = 2
m = 5
seed = 77
grid_n = 9

[null]
model = poisson
lambda = 15

[[alternative]]
name = a1
model = poisson
lambda = 15

[[alternative]]
name = a2
model = binomial
n = 15

[[test]]
summary = L
stat = mad

[[test]]
summary = K
stat = dclf

[[test]]
summary = G
stat = int
)";
    TempDir dir("ppgof-study-shape");
    const StudyResult res = run_power_study(parse_study_config_text(config_text), dir.path.string());
    CHECK(res.cells.size() == 6);
    std::istringstream csv(slurp(dir.file("results.csv")));
    std::string line;
    long rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 7); // header plus one row per cell
}
