#include "ppgof/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppgof/errors.hpp"

namespace ppgof {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// scaled deviation with the degenerate-denominator convention
double scaled(double num, double den) {
    if (den == 0.0) return num == 0.0 ? 0.0 : kInf;
    return num / den;
}

} // namespace

std::string stat_name(StatVariant v) {
    switch (v) {
        case StatVariant::MAD: return "mad";
        case StatVariant::DCLF: return "dclf";
        case StatVariant::ST: return "st";
        case StatVariant::QDIR: return "qdir";
        case StatVariant::ST_DCLF: return "st-dclf";
        case StatVariant::QDIR_DCLF: return "qdir-dclf";
        case StatVariant::CRPS: return "crps";
        case StatVariant::POINT: return "point";
        case StatVariant::INT: return "int";
        case StatVariant::FUN: return "fun";
        case StatVariant::SCORE: return "score";
    }
    return "?";
}

StatVariant stat_from_name(const std::string& name) {
    for (StatVariant v :
         {StatVariant::MAD, StatVariant::DCLF, StatVariant::ST, StatVariant::QDIR,
          StatVariant::ST_DCLF, StatVariant::QDIR_DCLF, StatVariant::CRPS, StatVariant::POINT,
          StatVariant::INT, StatVariant::FUN, StatVariant::SCORE})
        if (stat_name(v) == name) return v;
    throw InvalidArgs("unknown test statistic: " + name);
}

bool is_vector_stat(StatVariant v) {
    return v == StatVariant::FUN || v == StatVariant::SCORE;
}

CurveMatrix::CurveMatrix(std::vector<double> r_values, std::vector<std::vector<double>> rows)
    : r_(std::move(r_values)), data_(std::move(rows)), truncated_at_(kNaN) {
    if (data_.size() < 2) throw TooFewSimulations("curve matrix needs the observed row plus m >= 1");
    if (r_.empty()) throw MismatchedShapes("curve matrix needs at least one column");
    for (const auto& row : data_)
        if (row.size() != r_.size()) throw MismatchedShapes("curve rows must share the grid");
    widths_.assign(r_.size(), 0.0);
    if (r_.size() == 1) {
        widths_[0] = 1.0;
    } else {
        for (std::size_t k = 0; k + 1 < r_.size(); ++k) widths_[k] = r_[k + 1] - r_[k];
    }
    source_columns_.resize(r_.size());
    for (std::size_t k = 0; k < r_.size(); ++k) source_columns_[k] = k;
}

std::size_t CurveMatrix::column_of_source(std::size_t source_index) const {
    for (std::size_t k = 0; k < source_columns_.size(); ++k)
        if (source_columns_[k] == source_index) return k;
    throw IndexOutOfGrid("the chosen grid point is undefined or beyond the usable range");
}

CurveMatrix CurveMatrix::from_curves(const std::vector<SummaryCurve>& curves) {
    if (curves.size() < 2) throw TooFewSimulations("curve matrix needs the observed row plus m >= 1");
    const std::size_t n = curves.front().size();
    for (const auto& c : curves)
        if (c.size() != n || c.grid.values() != curves.front().grid.values())
            throw MismatchedShapes("curves must share the evaluation grid");

    std::vector<char> keep(n, 1);
    for (const auto& c : curves)
        for (std::size_t k = 0; k < n; ++k)
            if (!c.defined[k]) keep[k] = 0;

    std::vector<double> r;
    for (std::size_t k = 0; k < n; ++k)
        if (keep[k]) r.push_back(curves.front().grid[k]);
    if (r.empty()) throw MismatchedShapes("no grid column is defined in every curve");

    std::vector<std::vector<double>> rows(curves.size());
    for (std::size_t i = 0; i < curves.size(); ++i) {
        rows[i].reserve(r.size());
        for (std::size_t k = 0; k < n; ++k)
            if (keep[k]) rows[i].push_back(curves[i].values[k]);
    }
    CurveMatrix cm(std::move(r), std::move(rows));
    cm.source_columns_.clear();
    for (std::size_t k = 0; k < n; ++k)
        if (keep[k]) cm.source_columns_.push_back(k);
    // record where the usable tail ends, if the grid was cut
    double trunc = kNaN;
    for (std::size_t k = n; k-- > 0;) {
        if (keep[k]) break;
        trunc = curves.front().grid[k];
    }
    cm.set_truncated_at(trunc);
    return cm;
}

std::vector<double> column_means(const CurveMatrix& cm) {
    std::vector<double> mean(cm.cols(), 0.0);
    for (std::size_t i = 0; i < cm.rows(); ++i)
        for (std::size_t k = 0; k < cm.cols(); ++k) mean[k] += cm.at(i, k);
    for (double& v : mean) v /= double(cm.rows());
    return mean;
}

std::vector<double> column_sds(const CurveMatrix& cm) {
    const std::vector<double> mean = column_means(cm);
    std::vector<double> sd(cm.cols(), 0.0);
    for (std::size_t i = 0; i < cm.rows(); ++i)
        for (std::size_t k = 0; k < cm.cols(); ++k) {
            const double d = cm.at(i, k) - mean[k];
            sd[k] += d * d;
        }
    for (double& v : sd) v = std::sqrt(v / double(cm.rows() - 1));
    return sd;
}

std::vector<double> column_quantiles(const CurveMatrix& cm, double prob) {
    if (!(prob >= 0.0 && prob <= 1.0)) throw InvalidArgs("quantile level must be in [0, 1]");
    const std::size_t n = cm.rows();
    std::vector<double> column(n), out(cm.cols());
    for (std::size_t k = 0; k < cm.cols(); ++k) {
        for (std::size_t i = 0; i < n; ++i) column[i] = cm.at(i, k);
        std::sort(column.begin(), column.end());
        const double h = prob * double(n - 1);
        const std::size_t lo = std::size_t(h);
        const std::size_t hi = std::min(lo + 1, n - 1);
        out[k] = column[lo] + (h - double(lo)) * (column[hi] - column[lo]);
    }
    return out;
}

std::vector<double> reference_mean(const CurveMatrix& cm, std::size_t i) {
    const std::size_t m = cm.m();
    std::vector<double> mean = column_means(cm);
    for (std::size_t k = 0; k < cm.cols(); ++k)
        mean[k] = (double(m + 1) * mean[k] - cm.at(i, k)) / double(m);
    return mean;
}

std::vector<double> deviations(const CurveMatrix& cm, std::size_t i) {
    const double factor = double(cm.m() + 1) / double(cm.m());
    std::vector<double> dev = column_means(cm);
    for (std::size_t k = 0; k < cm.cols(); ++k) dev[k] = factor * (cm.at(i, k) - dev[k]);
    return dev;
}

StatValue deviation_statistic(const CurveMatrix& cm, std::size_t i, StatVariant variant,
                              const WeightFn& weight) {
    const bool studentized = variant == StatVariant::ST || variant == StatVariant::ST_DCLF;
    const bool quantile_scaled = variant == StatVariant::QDIR || variant == StatVariant::QDIR_DCLF;
    const bool integrated = variant == StatVariant::DCLF || variant == StatVariant::ST_DCLF ||
                            variant == StatVariant::QDIR_DCLF;
    if (!(integrated || variant == StatVariant::MAD || studentized || quantile_scaled))
        throw InvalidArgs("not a deviation statistic: " + stat_name(variant));
    if ((studentized || quantile_scaled) && cm.m() < 10)
        throw TooFewSimulations("scaled deviation statistics need m >= 10");

    const std::vector<double> dev = deviations(cm, i);
    std::vector<double> sd, q_lo, q_hi, ref;
    if (studentized) sd = column_sds(cm);
    if (quantile_scaled) {
        // the 0.05/2 levels are fixed constants of the statistic
        q_lo = column_quantiles(cm, 0.025);
        q_hi = column_quantiles(cm, 0.975);
        ref = reference_mean(cm, i);
    }

    const std::vector<double>& widths = cm.cell_widths();
    const std::vector<double>& r = cm.r_values();
    double acc = integrated ? 0.0 : -kInf;
    for (std::size_t k = 0; k < cm.cols(); ++k) {
        double term;
        if (studentized) {
            term = std::abs(scaled(dev[k], sd[k]));
        } else if (quantile_scaled) {
            term = dev[k] >= 0.0 ? scaled(dev[k], std::abs(q_hi[k] - ref[k]))
                                 : scaled(-dev[k], std::abs(q_lo[k] - ref[k]));
        } else {
            term = std::abs(dev[k]);
        }
        if (weight) term *= weight(r[k]);
        if (integrated) {
            acc += term * term * widths[k];
        } else {
            acc = std::max(acc, term);
        }
    }
    return StatValue{acc, {}, Extremeness::LargeOnly};
}

namespace {

// per-column absolute-difference sums: for the values v_0..v_m returns
// A[i] = sum_j |v_i - v_j| and S = sum_{j,k} |v_j - v_k|
void abs_diff_sums(const std::vector<double>& v, std::vector<double>& A, double& S) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    double prefix = 0.0, total = 0.0;
    for (double x : v) total += x;
    S = 0.0;
    for (std::size_t rank = 0; rank < n; ++rank) {
        const double x = v[order[rank]];
        const double below = prefix;
        const double above = total - prefix - x;
        // sum over smaller: rank*x - below; over larger: above - (n-1-rank)*x
        A[order[rank]] = double(rank) * x - below + above - double(n - 1 - rank) * x;
        S += A[order[rank]];
        prefix += x;
    }
}

} // namespace

std::vector<std::vector<double>> pointwise_scores_all(const CurveMatrix& cm) {
    const std::size_t m = cm.m();
    if (m < 2) throw TooFewSimulations("the fair CRPS estimator needs m >= 2");
    const std::size_t n = cm.cols();
    std::vector<std::vector<double>> scores(cm.rows(), std::vector<double>(n));
    std::vector<double> column(cm.rows()), A(cm.rows());
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < cm.rows(); ++j) column[j] = cm.at(j, k);
        double S;
        abs_diff_sums(column, A, S);
        for (std::size_t i = 0; i < cm.rows(); ++i) {
            // ensemble = all rows but i; S over the ensemble drops row i's terms
            const double ens_sum = S - 2.0 * A[i];
            scores[i][k] = A[i] / double(m) - ens_sum / (2.0 * double(m) * double(m - 1));
        }
    }
    return scores;
}

StatValue pointwise_score(const CurveMatrix& cm, std::size_t i) {
    const std::size_t m = cm.m();
    if (m < 2) throw TooFewSimulations("the fair CRPS estimator needs m >= 2");
    const std::size_t n = cm.cols();
    std::vector<double> score(n), column(cm.rows()), A(cm.rows());
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < cm.rows(); ++j) column[j] = cm.at(j, k);
        double S;
        abs_diff_sums(column, A, S);
        const double ens_sum = S - 2.0 * A[i];
        score[k] = A[i] / double(m) - ens_sum / (2.0 * double(m) * double(m - 1));
    }
    return StatValue{0.0, std::move(score), Extremeness::LargeOnly};
}

StatValue crps_statistic(const CurveMatrix& cm, std::size_t i) {
    StatValue pointwise = pointwise_score(cm, i);
    const std::vector<double>& widths = cm.cell_widths();
    double acc = 0.0;
    for (std::size_t k = 0; k < cm.cols(); ++k) acc += pointwise.vector[k] * widths[k];
    return StatValue{acc, {}, Extremeness::LargeOnly};
}

StatValue point_statistic(const CurveMatrix& cm, std::size_t i, std::size_t r_index) {
    if (r_index >= cm.cols()) throw IndexOutOfGrid("point-evaluation index beyond the grid");
    return StatValue{cm.at(i, r_index), {}, Extremeness::TwoSided};
}

StatValue integral_statistic(const CurveMatrix& cm, std::size_t i) {
    const std::vector<double>& widths = cm.cell_widths();
    double acc = 0.0;
    for (std::size_t k = 0; k < cm.cols(); ++k) acc += cm.at(i, k) * widths[k];
    return StatValue{acc, {}, Extremeness::TwoSided};
}

StatValue functional_statistic(const CurveMatrix& cm, std::size_t i) {
    return StatValue{0.0, cm.row(i), Extremeness::VectorDepth};
}

} // namespace ppgof
