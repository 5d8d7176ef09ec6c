#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ppgof/geometry.hpp"

namespace ppgof {

// How extreme values of a statistic are recognized when ranking.
enum class Extremeness { LargeOnly, TwoSided, VectorDepth };

enum class StatVariant {
    MAD,
    DCLF,
    ST,
    QDIR,
    ST_DCLF,
    QDIR_DCLF,
    CRPS,
    POINT,
    INT,
    FUN,
    SCORE,
};

std::string stat_name(StatVariant v);
StatVariant stat_from_name(const std::string& name);
bool is_vector_stat(StatVariant v);

struct StatValue {
    double scalar = 0.0;
    std::vector<double> vector;
    Extremeness tag = Extremeness::LargeOnly;

    bool is_vector() const { return !vector.empty(); }
};

// Row 0 holds the observed pattern's discretized summary curve, rows 1..m
// the curves of the null simulations, all on the shared r grid. Grid
// columns where any curve was undefined are dropped before construction.
class CurveMatrix {
  public:
    CurveMatrix(std::vector<double> r_values, std::vector<std::vector<double>> rows);

    // drops undefined columns across all curves; curves must share the grid
    static CurveMatrix from_curves(const std::vector<SummaryCurve>& curves);

    std::size_t rows() const { return data_.size(); }
    std::size_t cols() const { return r_.size(); }
    std::size_t m() const { return data_.size() - 1; }
    const std::vector<double>& row(std::size_t i) const { return data_[i]; }
    const std::vector<double>& r_values() const { return r_; }
    double at(std::size_t i, std::size_t j) const { return data_[i][j]; }

    // left Riemann cell widths (last cell zero; single column has weight 1)
    const std::vector<double>& cell_widths() const { return widths_; }

    // first grid value dropped past the usable range, NaN when none
    double truncated_at() const { return truncated_at_; }
    void set_truncated_at(double r) { truncated_at_ = r; }

    // matrix column holding the given index of the source grid; throws
    // IndexOutOfGrid when that grid point was dropped as undefined
    std::size_t column_of_source(std::size_t source_index) const;

  private:
    std::vector<double> r_;
    std::vector<double> widths_;
    std::vector<std::vector<double>> data_;
    std::vector<std::size_t> source_columns_;
    double truncated_at_;
};

using WeightFn = std::function<double(double r)>;

// leave-one-out mean over the other m rows, via the overall-mean identity
std::vector<double> reference_mean(const CurveMatrix& cm, std::size_t i);

// pointwise deviations of row i from its leave-one-out reference
std::vector<double> deviations(const CurveMatrix& cm, std::size_t i);

// Type A deviation statistics (MAD, DCLF and their studentized or
// quantile-scaled variants). Scalings use the pointwise sd and 2.5%/97.5%
// quantiles over all m+1 rows. A zero scaling denominator contributes 0
// when the deviation is 0 and +infinity otherwise.
StatValue deviation_statistic(const CurveMatrix& cm, std::size_t i, StatVariant variant,
                              const WeightFn& weight = {});

// integrated fair CRPS with row i as observation and the other m rows as
// the ensemble
StatValue crps_statistic(const CurveMatrix& cm, std::size_t i);

// pointwise fair CRPS vector (type C, one-sided)
StatValue pointwise_score(const CurveMatrix& cm, std::size_t i);

// pointwise fair CRPS for every row in one pass over the columns
std::vector<std::vector<double>> pointwise_scores_all(const CurveMatrix& cm);

StatValue point_statistic(const CurveMatrix& cm, std::size_t i, std::size_t r_index);

StatValue integral_statistic(const CurveMatrix& cm, std::size_t i);

// the raw curve as a vector statistic for depth orderings
StatValue functional_statistic(const CurveMatrix& cm, std::size_t i);

// pointwise mean over all rows
std::vector<double> column_means(const CurveMatrix& cm);

// pointwise sample standard deviation over all rows (denominator m)
std::vector<double> column_sds(const CurveMatrix& cm);

// pointwise quantile over all rows (linear interpolation of order statistics)
std::vector<double> column_quantiles(const CurveMatrix& cm, double prob);

} // namespace ppgof
