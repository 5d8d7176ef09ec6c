#include "ppgof/orderings.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ppgof/errors.hpp"

namespace ppgof {

std::string measure_name(DepthMeasure m) {
    switch (m) {
        case DepthMeasure::Rank: return "rank";
        case DepthMeasure::Erl: return "erl";
        case DepthMeasure::Cont: return "cont";
        case DepthMeasure::Area: return "area";
    }
    return "?";
}

DepthMeasure measure_from_name(const std::string& name) {
    for (DepthMeasure m :
         {DepthMeasure::Rank, DepthMeasure::Erl, DepthMeasure::Cont, DepthMeasure::Area})
        if (measure_name(m) == name) return m;
    throw InvalidArgs("unknown depth measure: " + name);
}

std::vector<double> raw_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t k = 0;
    while (k < n) {
        std::size_t l = k;
        while (l + 1 < n && values[order[l + 1]] == values[order[k]]) ++l;
        const double avg = 0.5 * double(k + l) + 1.0; // average of raw ranks k+1 .. l+1
        for (std::size_t j = k; j <= l; ++j) ranks[order[j]] = avg;
        k = l + 1;
    }
    return ranks;
}

namespace {

double apply_sidedness(double raw, double total, Extremeness sidedness) {
    switch (sidedness) {
        case Extremeness::LargeOnly: return total + 1.0 - raw;
        case Extremeness::TwoSided: return std::min(raw, total + 1.0 - raw);
        case Extremeness::VectorDepth: break;
    }
    throw InvalidArgs("pointwise ranks need a scalar sidedness");
}

} // namespace

std::vector<double> pointwise_ranks(const std::vector<double>& values, Extremeness sidedness) {
    std::vector<double> r = raw_ranks(values);
    const double total = double(values.size());
    for (double& v : r) v = apply_sidedness(v, total, sidedness);
    return r;
}

std::vector<double> continuous_ranks(const std::vector<double>& values, Extremeness sidedness) {
    const std::size_t n = values.size();
    const long m = long(n) - 1; // values are D_(0) .. D_(m)
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    auto sorted = [&](long i) { return values[order[std::size_t(i)]]; };

    std::vector<double> c(n);
    std::size_t k = 0;
    while (k < n) {
        std::size_t l = k;
        while (l + 1 < n && sorted(long(l + 1)) == sorted(long(k))) ++l;
        if (l > k) {
            // tie group occupying sorted positions k..l
            const double value = 0.5 * double(k + l + 1);
            for (std::size_t j = k; j <= l; ++j) c[order[j]] = value;
        } else {
            const long i = long(k);
            double value;
            if (i == 0) {
                value = sorted(1) < sorted(m)
                            ? std::exp(-(sorted(1) - sorted(0)) / (sorted(m) - sorted(1)))
                            : 0.0;
            } else if (i == m) {
                value = sorted(0) < sorted(m - 1)
                            ? double(m + 1) -
                                  std::exp(-(sorted(m) - sorted(m - 1)) / (sorted(m - 1) - sorted(0)))
                            : double(m + 1);
            } else {
                value = double(i) + (sorted(i) - sorted(i - 1)) / (sorted(i + 1) - sorted(i - 1));
            }
            c[order[k]] = value;
        }
        k = l + 1;
    }

    const double total = double(n);
    for (double& v : c) {
        switch (sidedness) {
            case Extremeness::LargeOnly: v = total - v; break;
            case Extremeness::TwoSided: v = std::min(v, total - v); break;
            case Extremeness::VectorDepth: throw InvalidArgs("continuous ranks need a scalar sidedness");
        }
    }
    return c;
}

RankMatrix rank_matrix(const std::vector<std::vector<double>>& rows, Extremeness sidedness) {
    const std::size_t n_rows = rows.size();
    if (n_rows == 0) throw InvalidArgs("rank matrix needs at least one row");
    const std::size_t n_cols = rows.front().size();
    for (const auto& row : rows)
        if (row.size() != n_cols) throw MismatchedShapes("rank matrix rows must share length");

    RankMatrix rm;
    rm.R.assign(n_rows, std::vector<double>(n_cols));
    rm.C.assign(n_rows, std::vector<double>(n_cols));
    std::vector<double> column(n_rows);
    for (std::size_t j = 0; j < n_cols; ++j) {
        for (std::size_t i = 0; i < n_rows; ++i) column[i] = rows[i][j];
        const std::vector<double> r = pointwise_ranks(column, sidedness);
        const std::vector<double> c = continuous_ranks(column, sidedness);
        for (std::size_t i = 0; i < n_rows; ++i) {
            rm.R[i][j] = r[i];
            rm.C[i][j] = c[i];
        }
    }
    rm.sorted_R = rm.R;
    for (auto& row : rm.sorted_R) std::sort(row.begin(), row.end());
    return rm;
}

double depth(DepthMeasure measure, const RankMatrix& rm, std::size_t i) {
    const double total = double(rm.rows());
    switch (measure) {
        case DepthMeasure::Rank:
            return rm.sorted_R[i].front() / total;
        case DepthMeasure::Cont: {
            double lo = rm.C[i].front();
            for (double v : rm.C[i]) lo = std::min(lo, v);
            return lo / total;
        }
        case DepthMeasure::Erl: {
            long count = 0;
            for (std::size_t k = 0; k < rm.rows(); ++k)
                if (rm.sorted_R[k] <= rm.sorted_R[i]) ++count; // lexicographic
            return double(count) / total;
        }
        case DepthMeasure::Area: {
            const double extreme = rm.sorted_R[i].front();
            double correction = 0.0;
            for (double c : rm.C[i])
                if (c < extreme) correction += extreme - c;
            correction /= double(rm.cols());
            return (extreme - correction) / total;
        }
    }
    throw InvalidArgs("unknown depth measure");
}

std::vector<double> depths(DepthMeasure measure, const RankMatrix& rm) {
    const std::size_t n = rm.rows();
    std::vector<double> out(n);
    if (measure == DepthMeasure::Erl) {
        // sort rows lexicographically once; the count for a row is the end
        // position of its group of lex-equal vectors
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return rm.sorted_R[a] < rm.sorted_R[b];
        });
        std::size_t k = 0;
        while (k < n) {
            std::size_t l = k;
            while (l + 1 < n && rm.sorted_R[order[l + 1]] == rm.sorted_R[order[k]]) ++l;
            for (std::size_t j = k; j <= l; ++j) out[order[j]] = double(l + 1) / double(n);
            k = l + 1;
        }
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = depth(measure, rm, i);
    return out;
}

std::vector<double> order_scalars(const std::vector<StatValue>& values) {
    if (values.empty()) throw InvalidArgs("cannot order an empty collection");
    const Extremeness tag = values.front().tag;
    std::vector<double> scalars;
    scalars.reserve(values.size());
    for (const StatValue& v : values) {
        if (v.is_vector() || v.tag == Extremeness::VectorDepth)
            throw MixedTags("scalar ordering applied to a vector statistic");
        if (v.tag != tag) throw MixedTags("statistics carry different extremeness tags");
        scalars.push_back(v.scalar);
    }
    return pointwise_ranks(scalars, tag);
}

} // namespace ppgof
