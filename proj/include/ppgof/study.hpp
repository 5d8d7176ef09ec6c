#pragma once

#include <map>
#include <string>
#include <vector>

#include "ppgof/procedures.hpp"

namespace ppgof {

// model construction shared by the config parser and the CLI flags
using KeyValues = std::map<std::string, std::string>;
ModelSpec model_from_keyvalues(const KeyValues& kv, const Window& w);

// One alternative model sampled as the "observed" data in a power cell.
struct StudyAlternative {
    std::string name;
    ModelSpec model;
    long replications = 0; // 0 = study default
};

// One test configuration column of the power grid.
struct StudyTest {
    std::string name;
    std::vector<SummaryChoice> summaries;
    StatVariant stat = StatVariant::FUN;
    DepthMeasure measure = DepthMeasure::Erl;
    long m = 0; // 0 = study default
    std::size_t point_index = 0;
};

struct StudyConfig {
    Window window{0.0, 1.0, 0.0, 1.0};
    ModelSpec null_model = PoissonModel{100.0};
    bool condition_csr = true;
    long replications = 100;
    long m = 99;
    double alpha = 0.05;
    RngSeed seed;
    unsigned threads = 0;
    std::size_t grid_n = 513;
    double r_max = 0.0; // 0 = quarter of the shorter window side
    std::vector<StudyAlternative> alternatives;
    std::vector<StudyTest> tests;
};

// INI-style sections: [study], [null], repeated [[alternative]] and [[test]]
StudyConfig parse_study_config(const std::string& path);
StudyConfig parse_study_config_text(const std::string& text);

struct StudyCell {
    std::size_t alternative_index = 0;
    std::size_t test_index = 0;
    long replications = 0;
    long rejections = 0;
    double rate = 0.0;
    double mc_se = 0.0;
    bool failed = false;
    std::string error;
    double seconds = 0.0;
};

struct StudyResult {
    StudyConfig config;
    std::vector<StudyCell> cells;
};

// Runs every (alternative, test) cell; per-cell results land in out_dir as
// cell_<a>_<t>.csv and finished cells are skipped on resume. Writes
// results.csv (deterministic) and timing.csv (wall-clock, run-dependent).
StudyResult run_power_study(const StudyConfig& cfg, const std::string& out_dir);

} // namespace ppgof
