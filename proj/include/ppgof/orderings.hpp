#pragma once

#include <string>
#include <vector>

#include "ppgof/statistics.hpp"

namespace ppgof {

enum class DepthMeasure { Rank, Erl, Cont, Area };

std::string measure_name(DepthMeasure m);
DepthMeasure measure_from_name(const std::string& name);

// raw ranks 1..m+1 with tied groups averaged
std::vector<double> raw_ranks(const std::vector<double>& values);

// pointwise ranks R_i: small rank = extreme, per the sidedness of the
// statistic
std::vector<double> pointwise_ranks(const std::vector<double>& values, Extremeness sidedness);

// continuous pointwise ranks C_i (fractional position between neighbours,
// exponential boundary cases, tied groups averaged)
std::vector<double> continuous_ranks(const std::vector<double>& values, Extremeness sidedness);

// Pointwise rank matrices of an (m+1) x n collection of vector statistics.
struct RankMatrix {
    std::vector<std::vector<double>> R; // pointwise ranks
    std::vector<std::vector<double>> C; // continuous pointwise ranks
    std::vector<std::vector<double>> sorted_R; // per-row ascending rank vector

    std::size_t rows() const { return R.size(); }
    std::size_t cols() const { return R.empty() ? 0 : R.front().size(); }
};

RankMatrix rank_matrix(const std::vector<std::vector<double>>& rows, Extremeness sidedness);

// Depth of row i within the collection; values lie in (0, 1] and small
// values are extreme.
double depth(DepthMeasure measure, const RankMatrix& rm, std::size_t i);

std::vector<double> depths(DepthMeasure measure, const RankMatrix& rm);

// total order on scalar statistics: returns pointwise ranks where rank 1 is
// the most extreme value; all inputs must carry the same extremeness tag
std::vector<double> order_scalars(const std::vector<StatValue>& values);

} // namespace ppgof
