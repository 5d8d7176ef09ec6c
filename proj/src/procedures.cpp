#include "ppgof/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppgof/mathutil.hpp"
#include "ppgof/parallel.hpp"

namespace ppgof {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// simulation substream layout off the master seed
constexpr std::uint64_t kStreamStageOne = 1;
constexpr std::uint64_t kStreamStageTwo = 2;
constexpr std::uint64_t kStreamTies = 3;

struct MatrixBundle {
    std::vector<CurveMatrix> per_summary; // one per summary choice
    double truncated_at = kNaN;
};

EvalGrid effective_grid(const TestConfig& cfg, const Window& w) {
    return cfg.grid ? *cfg.grid : EvalGrid::default_for(w);
}

// curves for the observed pattern plus the simulations, one matrix per
// summary choice
MatrixBundle build_matrices(const TestConfig& cfg, const ModelSpec& null_model,
                            const PointPattern& observed, RngSeed block, long m) {
    const EvalGrid grid = effective_grid(cfg, observed.window());
    const unsigned threads = resolve_threads(cfg.threads);

    std::vector<std::vector<SummaryCurve>> curves(cfg.summaries.size());
    for (std::size_t s = 0; s < cfg.summaries.size(); ++s) {
        curves[s].reserve(std::size_t(m) + 1);
        curves[s].push_back(evaluate_summary(cfg.summaries[s], observed, grid));
    }

    const std::size_t m_count = static_cast<std::size_t>(m);
    std::vector<std::vector<SummaryCurve>> sim_curves(m_count);
    parallel_for(std::size_t(m), threads, [&](std::size_t i) {
        const PointPattern sim = simulate(null_model, observed.window(), block.sub(i + 1));
        std::vector<SummaryCurve>& mine = sim_curves[i];
        mine.reserve(cfg.summaries.size());
        for (const auto& choice : cfg.summaries) mine.push_back(evaluate_summary(choice, sim, grid));
    });
    for (auto& mine : sim_curves)
        for (std::size_t s = 0; s < cfg.summaries.size(); ++s) curves[s].push_back(std::move(mine[s]));

    MatrixBundle bundle;
    for (auto& group : curves) {
        bundle.per_summary.push_back(CurveMatrix::from_curves(group));
        const double t = bundle.per_summary.back().truncated_at();
        if (!std::isnan(t) && (std::isnan(bundle.truncated_at) || t < bundle.truncated_at))
            bundle.truncated_at = t;
    }
    return bundle;
}

// rows of the vector statistic: the raw curves for FUN, the pointwise fair
// CRPS for SCORE
std::vector<std::vector<double>> vector_stat_rows(const CurveMatrix& cm, StatVariant stat) {
    if (stat == StatVariant::SCORE) return pointwise_scores_all(cm);
    std::vector<std::vector<double>> rows(cm.rows());
    for (std::size_t i = 0; i < cm.rows(); ++i) rows[i] = cm.row(i);
    return rows;
}

// concatenated matrix of the vector-statistic rows across all summaries;
// for SCORE the pointwise scores take the role of the summary curves
CurveMatrix vector_display_matrix(const TestConfig& cfg, const std::vector<CurveMatrix>& mats) {
    const std::size_t n_rows = mats.front().rows();
    for (const auto& cm : mats)
        if (cm.rows() != n_rows || cm.cols() != mats.front().cols())
            throw MismatchedShapes("one-step combining needs matrices with equal m and equal n");
    std::vector<double> r;
    std::vector<std::vector<double>> rows(n_rows);
    for (const auto& cm : mats) {
        r.insert(r.end(), cm.r_values().begin(), cm.r_values().end());
        auto part = vector_stat_rows(cm, cfg.stat);
        for (std::size_t i = 0; i < n_rows; ++i)
            rows[i].insert(rows[i].end(), part[i].begin(), part[i].end());
    }
    return CurveMatrix(std::move(r), std::move(rows));
}

Extremeness vector_stat_sidedness(StatVariant stat) {
    // the pointwise score already measures deviations, so only large values
    // are extreme; raw curves are two-sided
    return stat == StatVariant::SCORE ? Extremeness::LargeOnly : Extremeness::TwoSided;
}

StatValue scalar_stat(const TestConfig& cfg, const CurveMatrix& cm, std::size_t i) {
    switch (cfg.stat) {
        case StatVariant::MAD:
        case StatVariant::DCLF:
        case StatVariant::ST:
        case StatVariant::QDIR:
        case StatVariant::ST_DCLF:
        case StatVariant::QDIR_DCLF:
            return deviation_statistic(cm, i, cfg.stat, cfg.weight);
        case StatVariant::CRPS: return crps_statistic(cm, i);
        case StatVariant::POINT:
            // the index names a point of the configured grid; trimming of
            // undefined columns must not shift it
            return point_statistic(cm, i, cm.column_of_source(cfg.point_index));
        case StatVariant::INT: return integral_statistic(cm, i);
        default: break;
    }
    throw InvalidArgs("not a scalar statistic: " + stat_name(cfg.stat));
}

double p_from_extremeness(const std::vector<double>& score_like) {
    // score_like[i] small or equal to score_like[0] counts as at least as
    // extreme; ties included
    long count = 0;
    for (std::size_t i = 1; i < score_like.size(); ++i)
        if (score_like[i] <= score_like[0]) ++count;
    return double(1 + count) / double(score_like.size());
}

struct Outcome {
    double p_value = 1.0;
    std::vector<double> stat_values; // scalar path
    std::vector<double> depth_values; // vector path
};

Outcome compute_outcome(const TestConfig& cfg, const std::vector<CurveMatrix>& mats) {
    Outcome out;
    if (is_vector_stat(cfg.stat)) {
        const CurveMatrix display = vector_display_matrix(cfg, mats);
        std::vector<std::vector<double>> rows(display.rows());
        for (std::size_t i = 0; i < display.rows(); ++i) rows[i] = display.row(i);
        const RankMatrix rm = rank_matrix(rows, vector_stat_sidedness(cfg.stat));
        out.depth_values = depths(cfg.measure, rm);
        out.p_value = p_from_extremeness(out.depth_values);
    } else {
        if (mats.size() != 1)
            throw MismatchedShapes("scalar statistics combine via the two-step procedure");
        const CurveMatrix& cm = mats.front();
        std::vector<StatValue> values(cm.rows());
        for (std::size_t i = 0; i < cm.rows(); ++i) values[i] = scalar_stat(cfg, cm, i);
        const std::vector<double> ranks = order_scalars(values);
        out.p_value = p_from_extremeness(ranks);
        out.stat_values.reserve(values.size());
        for (const auto& v : values) out.stat_values.push_back(v.scalar);
    }
    return out;
}

std::string summaries_label(const TestConfig& cfg) {
    std::string label;
    for (const auto& choice : cfg.summaries) {
        if (!label.empty()) label += "+";
        label += summary_name(choice.kind);
    }
    return label;
}

TestReport base_report(const TestConfig& cfg, long m, const PointPattern& observed) {
    TestReport rep;
    rep.statistic = stat_name(cfg.stat);
    rep.summary = summaries_label(cfg);
    if (is_vector_stat(cfg.stat)) rep.measure = measure_name(cfg.measure);
    rep.m = m;
    rep.alpha = cfg.alpha;
    rep.seed = cfg.seed;
    rep.n_observed = long(observed.size());
    return rep;
}

} // namespace

TestReport::TestReport() : truncated_at(kNaN) {}

long default_m(StatVariant stat, DepthMeasure measure) {
    if (!is_vector_stat(stat)) return 99;
    return measure == DepthMeasure::Rank ? 2499 : 499;
}

TestReport monte_carlo_test(const TestConfig& cfg, const PointPattern& observed) {
    const long m = cfg.m > 0 ? cfg.m : default_m(cfg.stat, cfg.measure);
    ModelSpec null_model = cfg.null_model;
    bool noop = false;
    if (cfg.condition_csr) {
        const ConditionedModel cond = condition_on_count(cfg.null_model, long(observed.size()));
        null_model = cond.spec;
        noop = !cond.conditioned;
    }

    const MatrixBundle bundle =
        build_matrices(cfg, null_model, observed, cfg.seed.sub(kStreamStageOne), m);
    const Outcome outcome = compute_outcome(cfg, bundle.per_summary);

    TestReport rep = base_report(cfg, m, observed);
    rep.method = "mc";
    rep.p_value = outcome.p_value;
    rep.reject = outcome.p_value <= cfg.alpha;
    rep.ci_halfwidth = pvalue_ci_halfwidth(outcome.p_value, m);
    rep.truncated_at = bundle.truncated_at;
    rep.stat_values = outcome.stat_values;
    rep.depth_values = outcome.depth_values;
    rep.conditioning_noop = noop && cfg.condition_csr;

    if (cfg.want_envelope) {
        if (is_vector_stat(cfg.stat)) {
            const CurveMatrix display = vector_display_matrix(cfg, bundle.per_summary);
            GlobalEnvelopeResult ge =
                global_envelope(display, cfg.measure, cfg.alpha, vector_stat_sidedness(cfg.stat));
            rep.envelope = std::move(ge.envelope);
            rep.threshold_tie = ge.threshold_tie;
        } else if (cfg.stat == StatVariant::MAD || cfg.stat == StatVariant::ST ||
                   cfg.stat == StatVariant::QDIR) {
            MadEnvelopeResult mad =
                mad_family_envelope(bundle.per_summary.front(), cfg.stat, cfg.alpha, cfg.weight);
            rep.envelope = std::move(mad.envelope);
        }
    }
    return rep;
}

TestReport bits_test(const TestConfig& cfg, const PointPattern& observed, const RefitFn& refit) {
    if (!refit) throw EstimatorFailure("two-stage test needs a parameter estimator");
    const long m = cfg.m > 0 ? cfg.m : default_m(cfg.stat, cfg.measure);
    const long s = cfg.s;
    if (s < 1) throw InvalidArgs("two-stage test needs s >= 1");

    ModelSpec theta0;
    try {
        theta0 = refit(observed);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw EstimatorFailure(std::string("estimator failed: ") + e.what());
    }

    // stage 1: classical Monte Carlo test under the fitted model
    const MatrixBundle stage1 =
        build_matrices(cfg, theta0, observed, cfg.seed.sub(kStreamStageOne), m);
    const double p0 = compute_outcome(cfg, stage1.per_summary).p_value;

    // stage 2: the distribution of the first-stage p-value
    std::vector<double> p_second(static_cast<std::size_t>(s));
    const RngSeed stage2 = cfg.seed.sub(kStreamStageTwo);
    for (long j = 1; j <= s; ++j) {
        const RngSeed outer = stage2.sub(std::uint64_t(j));
        const PointPattern y = simulate(theta0, observed.window(), outer.sub(0));
        ModelSpec theta_j;
        try {
            theta_j = refit(y);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw EstimatorFailure(std::string("estimator failed: ") + e.what());
        }
        const MatrixBundle inner = build_matrices(cfg, theta_j, y, outer, m);
        p_second[std::size_t(j - 1)] = compute_outcome(cfg, inner.per_summary).p_value;
    }

    // adjusted p-value; the observed stage-one p sits uniformly within its
    // tie group, sampled from the master seed
    long n_less = 0, n_tied = 0;
    for (double pj : p_second) {
        if (pj < p0) ++n_less;
        else if (pj == p0) ++n_tied;
    }
    Rng tie_rng(cfg.seed.sub(kStreamTies));
    const long within_group = 1 + long(tie_rng.below(std::uint64_t(n_tied) + 1));
    const double p_adj = double(n_less + within_group) / double(s + 1);

    TestReport rep = base_report(cfg, m, observed);
    rep.method = "bits";
    rep.s = s;
    rep.p_value = p_adj;
    rep.reject = p_adj <= cfg.alpha;
    rep.ci_halfwidth = pvalue_ci_halfwidth(p_adj, s);
    rep.truncated_at = stage1.truncated_at;
    return rep;
}

GlobalEnvelopeResult global_envelope(const CurveMatrix& cm, DepthMeasure measure, double alpha,
                                     Extremeness sidedness) {
    const std::size_t n_rows = cm.rows();
    const double budget = alpha * double(n_rows);
    if (budget < 1.0) throw AlphaTooSmall("alpha * (m+1) must be at least 1");

    std::vector<std::vector<double>> rows(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) rows[i] = cm.row(i);
    const RankMatrix rm = rank_matrix(rows, sidedness);
    const std::vector<double> nu = depths(measure, rm);

    // largest depth value whose strictly-more-extreme count stays within the
    // alpha budget
    std::vector<double> sorted_nu = nu;
    std::sort(sorted_nu.begin(), sorted_nu.end());
    double threshold = sorted_nu.front();
    for (double candidate : sorted_nu) {
        const long less =
            std::lower_bound(sorted_nu.begin(), sorted_nu.end(), candidate) - sorted_nu.begin();
        if (double(less) <= budget) threshold = candidate;
        else break;
    }
    const long n_less =
        std::lower_bound(sorted_nu.begin(), sorted_nu.end(), threshold) - sorted_nu.begin();
    const long n_at = std::count(nu.begin(), nu.end(), threshold);

    GlobalEnvelopeResult out;
    out.threshold = threshold;
    out.threshold_tie = n_at > 1 && double(n_less) < std::floor(budget);

    Envelope& env = out.envelope;
    env.tag = Envelope::Tag::DepthMeasure;
    env.r = cm.r_values();
    env.obs = cm.row(0);
    env.central = column_means(cm);
    env.lo.assign(cm.cols(), std::numeric_limits<double>::infinity());
    env.hi.assign(cm.cols(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n_rows; ++i) {
        if (nu[i] < threshold) continue; // outside I_alpha
        for (std::size_t k = 0; k < cm.cols(); ++k) {
            env.lo[k] = std::min(env.lo[k], cm.at(i, k));
            env.hi[k] = std::max(env.hi[k], cm.at(i, k));
        }
    }
    for (std::size_t k = 0; k < cm.cols(); ++k) {
        if (env.obs[k] < env.lo[k] || env.obs[k] > env.hi[k]) {
            out.reject = true;
            break;
        }
    }
    return out;
}

MadEnvelopeResult mad_family_envelope(const CurveMatrix& cm, StatVariant variant, double alpha,
                                      const WeightFn& weight) {
    if (variant != StatVariant::MAD && variant != StatVariant::ST && variant != StatVariant::QDIR)
        throw InvalidArgs("envelope construction needs a maximum-type deviation statistic");
    const std::size_t n_rows = cm.rows();
    const long k = long(alpha * double(n_rows));
    if (k < 1) throw AlphaTooSmall("alpha * (m+1) must be at least 1");

    std::vector<double> stats(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i)
        stats[i] = deviation_statistic(cm, i, variant, weight).scalar;
    std::vector<double> sorted = stats;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double d_alpha = sorted[std::size_t(k - 1)]; // k-th largest

    // centred on the observed row's leave-one-out mean so that exiting the
    // band is equivalent to the observed statistic exceeding d_alpha
    const std::vector<double> centre = reference_mean(cm, 0);
    std::vector<double> s_lo(cm.cols(), 1.0), s_hi(cm.cols(), 1.0);
    if (variant == StatVariant::ST) {
        s_lo = s_hi = column_sds(cm);
    } else if (variant == StatVariant::QDIR) {
        const std::vector<double> q_lo = column_quantiles(cm, 0.025);
        const std::vector<double> q_hi = column_quantiles(cm, 0.975);
        for (std::size_t j = 0; j < cm.cols(); ++j) {
            s_lo[j] = std::abs(q_lo[j] - centre[j]);
            s_hi[j] = std::abs(q_hi[j] - centre[j]);
        }
    }
    if (weight) {
        // the statistic scales deviations by w(r); the band divides by it
        for (std::size_t j = 0; j < cm.cols(); ++j) {
            const double w = weight(cm.r_values()[j]);
            s_lo[j] = w != 0.0 ? s_lo[j] / w : std::numeric_limits<double>::infinity();
            s_hi[j] = w != 0.0 ? s_hi[j] / w : std::numeric_limits<double>::infinity();
        }
    }

    MadEnvelopeResult out;
    out.d_alpha = d_alpha;
    Envelope& env = out.envelope;
    env.tag = Envelope::Tag::MADFamily;
    env.r = cm.r_values();
    env.obs = cm.row(0);
    env.central = centre;
    env.lo.resize(cm.cols());
    env.hi.resize(cm.cols());
    for (std::size_t j = 0; j < cm.cols(); ++j) {
        env.lo[j] = centre[j] - d_alpha * s_lo[j];
        env.hi[j] = centre[j] + d_alpha * s_hi[j];
    }
    // exiting the band is by construction the statistic exceeding the
    // threshold; comparing the scalars avoids rounding asymmetry between
    // the two equal formulations
    out.reject = stats[0] > d_alpha;
    return out;
}

Envelope analytic_envelope(const std::vector<double>& reference, const std::vector<double>& sds,
                           const std::vector<double>& r, double alpha) {
    if (reference.size() != sds.size() || reference.size() != r.size())
        throw MismatchedShapes("analytic envelope inputs must share length");
    if (reference.empty()) throw InvalidArgs("analytic envelope needs at least one point");
    const double beta = sidak_local_level(alpha, long(reference.size()));
    const double q = normal_quantile(1.0 - beta / 2.0);
    Envelope env;
    env.tag = Envelope::Tag::Analytic;
    env.r = r;
    env.central = reference;
    env.lo.resize(reference.size());
    env.hi.resize(reference.size());
    for (std::size_t j = 0; j < reference.size(); ++j) {
        env.lo[j] = reference[j] - q * sds[j];
        env.hi[j] = reference[j] + q * sds[j];
    }
    return env;
}

Envelope simulation_pointwise_envelope(const CurveMatrix& cm, double beta) {
    const long m = long(cm.m());
    const double k_exact = beta * double(m + 1) / 2.0;
    const long k = std::lround(k_exact);
    if (k < 1 || std::abs(k_exact - double(k)) > 1e-9)
        throw InsufficientSimulations(
            "beta (m+1) / 2 must be a positive integer; raise the number of simulations");

    Envelope env;
    env.tag = Envelope::Tag::Pointwise;
    env.r = cm.r_values();
    env.obs = cm.row(0);
    env.central = column_means(cm);
    env.lo.resize(cm.cols());
    env.hi.resize(cm.cols());
    std::vector<double> column(static_cast<std::size_t>(m));
    for (std::size_t j = 0; j < cm.cols(); ++j) {
        for (long i = 1; i <= m; ++i) column[std::size_t(i - 1)] = cm.at(std::size_t(i), j);
        std::sort(column.begin(), column.end());
        env.lo[j] = column[std::size_t(k - 1)];
        env.hi[j] = column[std::size_t(m - k)];
    }
    return env;
}

CombinedTestResult combine_one_step(const std::vector<CurveMatrix>& matrices, DepthMeasure measure,
                                    double alpha, Extremeness sidedness) {
    if (matrices.empty()) throw InvalidArgs("one-step combining needs at least one matrix");
    const std::size_t n_rows = matrices.front().rows();
    const std::size_t n_cols = matrices.front().cols();
    for (const auto& cm : matrices)
        if (cm.rows() != n_rows || cm.cols() != n_cols)
            throw MismatchedShapes("one-step combining needs matrices with equal m and equal n");

    std::vector<double> r;
    std::vector<std::vector<double>> rows(n_rows);
    for (const auto& cm : matrices) {
        r.insert(r.end(), cm.r_values().begin(), cm.r_values().end());
        for (std::size_t i = 0; i < n_rows; ++i)
            rows[i].insert(rows[i].end(), cm.row(i).begin(), cm.row(i).end());
    }
    CurveMatrix combined(std::move(r), std::move(rows));

    CombinedTestResult out;
    out.envelope = global_envelope(combined, measure, alpha, sidedness);
    const RankMatrix rm = [&] {
        std::vector<std::vector<double>> rr(n_rows);
        for (std::size_t i = 0; i < n_rows; ++i) rr[i] = combined.row(i);
        return rank_matrix(rr, sidedness);
    }();
    out.depth_values = depths(measure, rm);
    out.p_value = p_from_extremeness(out.depth_values);
    return out;
}

TwoStepResult combine_two_step(const std::vector<StageOneColumn>& columns) {
    if (columns.empty()) throw InvalidArgs("two-step combining needs at least one column");
    const std::size_t n_rows = columns.front().values.size();
    if (n_rows < 2) throw TooFewSimulations("two-step combining needs the observed row plus m >= 1");

    std::vector<std::vector<double>> rows(n_rows, std::vector<double>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const StageOneColumn& col = columns[c];
        if (col.values.size() != n_rows)
            throw MismatchedShapes("two-step columns must share length");
        if (col.tag == Extremeness::TwoSided)
            throw MixedDirections("two-sided statistics cannot enter the one-sided combination");
        for (std::size_t i = 0; i < n_rows; ++i)
            rows[i][c] = col.is_depth ? 1.0 - col.values[i] : col.values[i];
    }

    const RankMatrix rm = rank_matrix(rows, Extremeness::LargeOnly);
    TwoStepResult out;
    out.erl_depths = depths(DepthMeasure::Erl, rm);
    out.p_value = p_from_extremeness(out.erl_depths);
    return out;
}

} // namespace ppgof
