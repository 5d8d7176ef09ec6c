#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ppgof/models.hpp"
#include "ppgof/orderings.hpp"
#include "ppgof/statistics.hpp"
#include "ppgof/summaries.hpp"

namespace ppgof {

// Global envelope band on the evaluation grid.
struct Envelope {
    enum class Tag { DepthMeasure, MADFamily, Analytic, Pointwise };
    Tag tag = Tag::DepthMeasure;
    std::vector<double> r;
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<double> obs; // may be empty (analytic construction)
    std::vector<double> central;
};

struct TestConfig {
    ModelSpec null_model = PoissonModel{100.0};
    bool condition_csr = true; // Poisson null handled via the binomial process
    std::vector<SummaryChoice> summaries = {SummaryChoice{}}; // > 1 combines one-step
    std::optional<EvalGrid> grid; // default: 513 points on [0, min_side/4]
    StatVariant stat = StatVariant::FUN;
    std::size_t point_index = 0; // POINT only, fixed before seeing data
    DepthMeasure measure = DepthMeasure::Erl; // vector statistics only
    long m = 0; // 0 = variant default (99 scalar, 499 depth, 2499 extreme rank)
    long s = 99; // second-stage count for the two-stage test
    double alpha = 0.05;
    RngSeed seed;
    WeightFn weight; // optional pointwise weight for deviation statistics
    bool want_envelope = false;
    unsigned threads = 0; // 0 = automatic
};

struct TestReport {
    double p_value = 1.0;
    std::string method; // "mc" or "bits"
    std::string statistic;
    std::string summary;
    std::string measure; // empty for scalar statistics
    long m = 0;
    long s = 0; // bits only
    double alpha = 0.05;
    bool reject = false;
    double ci_halfwidth = 0.0;
    RngSeed seed;
    double truncated_at; // NaN when the grid was not cut
    std::vector<double> stat_values; // scalar statistic per row
    std::vector<double> depth_values; // depth per row (vector statistics)
    std::optional<Envelope> envelope;
    bool threshold_tie = false; // depth ties straddling the envelope threshold
    bool conditioning_noop = false; // conditioning requested on a non-Poisson null
    long n_observed = 0;

    TestReport();
};

long default_m(StatVariant stat, DepthMeasure measure);

// classical Monte Carlo test for a simple null hypothesis
TestReport monte_carlo_test(const TestConfig& cfg, const PointPattern& observed);

// balanced independent two-stage test for composite nulls; `refit` fits the
// family to a pattern
using RefitFn = std::function<ModelSpec(const PointPattern&)>;
TestReport bits_test(const TestConfig& cfg, const PointPattern& observed, const RefitFn& refit);

struct GlobalEnvelopeResult {
    Envelope envelope;
    bool reject = false;
    bool threshold_tie = false;
    double threshold = 0.0; // depth threshold nu_alpha
};

// envelope of the depth-measure Monte Carlo test: pointwise extremes over
// the rows whose depth clears the threshold
GlobalEnvelopeResult global_envelope(const CurveMatrix& cm, DepthMeasure measure, double alpha,
                                     Extremeness sidedness = Extremeness::TwoSided);

struct MadEnvelopeResult {
    Envelope envelope;
    bool reject = false;
    double d_alpha = 0.0;
};

// envelope of the MAD-family tests, centred on the observed row's
// leave-one-out mean
MadEnvelopeResult mad_family_envelope(const CurveMatrix& cm, StatVariant variant, double alpha,
                                      const WeightFn& weight = {});

// pointwise band under a normality assumption with multiple-testing
// corrected local level
Envelope analytic_envelope(const std::vector<double>& reference, const std::vector<double>& sds,
                           const std::vector<double>& r, double alpha);

// k-th lowest / highest simulation values per point, k = beta (m+1) / 2
Envelope simulation_pointwise_envelope(const CurveMatrix& cm, double beta);

struct CombinedTestResult {
    double p_value = 1.0;
    std::vector<double> depth_values;
    GlobalEnvelopeResult envelope;
};

// one-step combining: concatenate the discretized summaries into long
// vectors and run the depth ordering on those
CombinedTestResult combine_one_step(const std::vector<CurveMatrix>& matrices, DepthMeasure measure,
                                    double alpha, Extremeness sidedness = Extremeness::TwoSided);

// Scalar first-stage summaries for the two-step combination. Depth-valued
// columns are inverted internally so large values are extreme everywhere.
struct StageOneColumn {
    std::vector<double> values; // one entry per row 0..m
    Extremeness tag = Extremeness::LargeOnly;
    bool is_depth = false;
};

struct TwoStepResult {
    double p_value = 1.0;
    std::vector<double> erl_depths;
};

TwoStepResult combine_two_step(const std::vector<StageOneColumn>& columns);

} // namespace ppgof
