#include "ppgof/classical.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ppgof {

namespace {

constexpr double kPi = 3.14159265358979323846;

// first grid index k with grid[k] >= d, or grid.size() if none
std::size_t first_index_at_least(const EvalGrid& grid, double d) {
    const auto& r = grid.values();
    return std::size_t(std::lower_bound(r.begin(), r.end(), d) - r.begin());
}

// last grid index k with grid[k] <= d, or -1 if none
long last_index_at_most(const EvalGrid& grid, double d) {
    const auto& r = grid.values();
    return long(std::upper_bound(r.begin(), r.end(), d) - r.begin()) - 1;
}

double translation_weight(const Window& w, double dx, double dy) {
    const double overlap = (w.width() - std::abs(dx)) * (w.height() - std::abs(dy));
    return w.area() / overlap;
}

// reduced-sample ratio curves shared by F and G: for "observers" with
// boundary depth e and distance-to-target d, computes
//   #{e >= r, d <= r} / #{e >= r}
// via interval difference arrays. Entries with zero denominator are
// flagged undefined.
struct ReducedSample {
    std::vector<double> value;
    std::vector<char> defined;
};

ReducedSample reduced_sample_curve(const EvalGrid& grid, const std::vector<double>& depth,
                                   const std::vector<double>& dist) {
    const std::size_t n = grid.size();
    std::vector<long> num_diff(n + 1, 0), den_diff(n + 1, 0);
    for (std::size_t i = 0; i < depth.size(); ++i) {
        const long hi = last_index_at_most(grid, depth[i]); // e >= r_k for k <= hi
        if (hi < 0) continue;
        den_diff[0] += 1;
        den_diff[std::size_t(hi) + 1] -= 1;
        const std::size_t lo = first_index_at_least(grid, dist[i]); // d <= r_k for k >= lo
        if (long(lo) <= hi) {
            num_diff[lo] += 1;
            num_diff[std::size_t(hi) + 1] -= 1;
        }
    }
    ReducedSample out;
    out.value.resize(n, 0.0);
    out.defined.resize(n, 1);
    long num = 0, den = 0;
    for (std::size_t k = 0; k < n; ++k) {
        num += num_diff[k];
        den += den_diff[k];
        if (den <= 0) {
            out.defined[k] = 0;
        } else {
            out.value[k] = double(num) / double(den);
        }
    }
    return out;
}

} // namespace

double intensity_estimate(const PointPattern& p) { return p.intensity_estimate(); }

double default_bandwidth(const PointPattern& p) {
    const double lambda = p.intensity_estimate();
    if (lambda <= 0.0) throw EmptyPattern("bandwidth rule needs a non-empty pattern");
    return 0.15 / std::sqrt(lambda);
}

SummaryCurve estimate_K(const PointPattern& p, const EvalGrid& grid, EdgeCorrection corr) {
    const std::size_t n = p.size();
    if (n < 2) throw TooFewPoints("K estimation needs at least 2 points");
    const Window& w = p.window();
    const double lambda = p.intensity_estimate();
    const double norm = 1.0 / (lambda * lambda * w.area());
    const std::size_t g = grid.size();

    if (corr == EdgeCorrection::Border) {
        // per-point cumulative neighbour counts, outer sum restricted to
        // points deeper than r
        std::vector<double> num_diff(g + 1, 0.0);
        std::vector<long> den_diff(g + 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const long hi = last_index_at_most(grid, w.boundary_distance(p[i]));
            if (hi < 0) continue;
            den_diff[0] += 1;
            den_diff[std::size_t(hi) + 1] -= 1;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const std::size_t lo = first_index_at_least(grid, distance(p[i], p[j]));
                if (long(lo) <= hi) {
                    num_diff[lo] += 1.0;
                    num_diff[std::size_t(hi) + 1] -= 1.0;
                }
            }
        }
        std::vector<double> values(g, 0.0);
        std::vector<char> defined(g, 1);
        double num = 0.0;
        long den = 0;
        for (std::size_t k = 0; k < g; ++k) {
            num += num_diff[k];
            den += den_diff[k];
            if (den <= 0) {
                defined[k] = 0;
            } else {
                values[k] = num / (lambda * double(den));
            }
        }
        return SummaryCurve(grid, std::move(values), std::move(defined), "K");
    }

    // Translation / None: accumulate pair weights into distance bins, then
    // prefix-sum for the cumulative statistic
    std::vector<double> bins(g + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = p[i].x - p[j].x;
            const double dy = p[i].y - p[j].y;
            const double d = std::sqrt(dx * dx + dy * dy);
            const std::size_t lo = first_index_at_least(grid, d);
            if (lo >= g) continue;
            const double weight =
                corr == EdgeCorrection::Translation ? translation_weight(w, dx, dy) : 1.0;
            bins[lo] += 2.0 * weight; // both ordered pairs
        }
    }
    std::vector<double> values(g, 0.0);
    double acc = 0.0;
    for (std::size_t k = 0; k < g; ++k) {
        acc += bins[k];
        values[k] = norm * acc;
    }
    return SummaryCurve(grid, std::move(values), "K");
}

SummaryCurve estimate_L(const PointPattern& p, const EvalGrid& grid, EdgeCorrection corr) {
    SummaryCurve k = estimate_K(p, grid, corr);
    for (double& v : k.values) v = std::sqrt(std::max(0.0, v) / kPi);
    k.label = "L";
    return k;
}

SummaryCurve estimate_pcf(const PointPattern& p, const EvalGrid& grid, EdgeCorrection corr,
                          double bandwidth) {
    const std::size_t n = p.size();
    if (n < 2) throw TooFewPoints("pcf estimation needs at least 2 points");
    if (bandwidth < 0.0) throw BandwidthNonpositive("pcf bandwidth must be positive");
    const double b = bandwidth > 0.0 ? bandwidth : default_bandwidth(p);
    const Window& w = p.window();
    const double lambda = p.intensity_estimate();
    const std::size_t g = grid.size();
    const auto& r = grid.values();

    std::vector<double> acc(g, 0.0);
    std::vector<long> den_diff; // Border only
    std::vector<char> defined(g, 1);

    auto kernel = [b](double t) { return 0.75 / b * (1.0 - (t / b) * (t / b)); };

    if (corr == EdgeCorrection::Border) {
        den_diff.assign(g + 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const long hi = last_index_at_most(grid, w.boundary_distance(p[i]));
            if (hi < 0) continue;
            den_diff[0] += 1;
            den_diff[std::size_t(hi) + 1] -= 1;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double d = distance(p[i], p[j]);
                const std::size_t lo = first_index_at_least(grid, d - b);
                for (std::size_t k = lo; k < g && r[k] < d + b && long(k) <= hi; ++k)
                    acc[k] += kernel(r[k] - d);
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dx = p[i].x - p[j].x;
                const double dy = p[i].y - p[j].y;
                const double d = std::sqrt(dx * dx + dy * dy);
                const double weight =
                    corr == EdgeCorrection::Translation ? translation_weight(w, dx, dy) : 1.0;
                const std::size_t lo = first_index_at_least(grid, d - b);
                for (std::size_t k = lo; k < g && r[k] < d + b; ++k)
                    acc[k] += 2.0 * weight * kernel(r[k] - d);
            }
        }
    }

    std::vector<double> values(g, 0.0);
    long den = 0;
    for (std::size_t k = 0; k < g; ++k) {
        if (corr == EdgeCorrection::Border) den += den_diff[k];
        if (r[k] <= 0.0) {
            defined[k] = 0; // estimator diverges at zero range
            continue;
        }
        if (corr == EdgeCorrection::Border) {
            if (den <= 0) {
                defined[k] = 0;
                continue;
            }
            values[k] = acc[k] / (2.0 * kPi * r[k] * lambda * double(den));
        } else {
            values[k] = acc[k] / (2.0 * kPi * r[k] * lambda * lambda * w.area());
        }
    }
    return SummaryCurve(grid, std::move(values), std::move(defined), "pcf");
}

SummaryCurve estimate_F(const PointPattern& p, const EvalGrid& grid, int test_grid_side) {
    if (p.empty()) throw EmptyPattern("F estimation needs a non-empty pattern");
    if (test_grid_side < 1) throw InvalidArgs("test grid side must be >= 1");
    const Window& w = p.window();
    const int side = test_grid_side;
    const double cx = w.width() / side;
    const double cy = w.height() / side;

    const NearestPointGrid nn(p);
    std::vector<double> depth, dist;
    depth.reserve(std::size_t(side) * side);
    dist.reserve(std::size_t(side) * side);
    for (int iy = 0; iy < side; ++iy) {
        for (int ix = 0; ix < side; ++ix) {
            const Point u{w.x_min + (ix + 0.5) * cx, w.y_min + (iy + 0.5) * cy};
            depth.push_back(w.boundary_distance(u));
            dist.push_back(nn.nearest_distance(u));
        }
    }

    ReducedSample rs = reduced_sample_curve(grid, depth, dist);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!rs.defined[k])
            throw NoValidTestLocations("no test locations deeper than r = " +
                                       std::to_string(grid[k]));
    }
    return SummaryCurve(grid, std::move(rs.value), "F");
}

SummaryCurve estimate_G(const PointPattern& p, const EvalGrid& grid) {
    if (p.size() < 2) throw TooFewPoints("G estimation needs at least 2 points");
    const Window& w = p.window();
    std::vector<double> depth;
    depth.reserve(p.size());
    for (const Point& q : p.points()) depth.push_back(w.boundary_distance(q));
    ReducedSample rs = reduced_sample_curve(grid, depth, nn_distances(p));
    return SummaryCurve(grid, std::move(rs.value), std::move(rs.defined), "G");
}

SummaryCurve estimate_G_star(const PointPattern& p, const EvalGrid& grid) {
    SummaryCurve g = estimate_G(p, grid);
    for (double& v : g.values) v = std::asin(std::sqrt(std::clamp(v, 0.0, 1.0)));
    g.label = "Gstar";
    return g;
}

SummaryCurve estimate_J(const PointPattern& p, const EvalGrid& grid, int test_grid_side) {
    SummaryCurve f = estimate_F(p, grid, test_grid_side);
    SummaryCurve g = estimate_G(p, grid);
    std::vector<double> values(grid.size(), 0.0);
    std::vector<char> defined(grid.size(), 1);
    bool dead = false; // once F hits 1, the whole tail is undefined
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (dead || !g.defined[k] || f.values[k] >= 1.0) {
            dead = true;
            defined[k] = 0;
            continue;
        }
        values[k] = (1.0 - g.values[k]) / (1.0 - f.values[k]);
    }
    return SummaryCurve(grid, std::move(values), std::move(defined), "J");
}

} // namespace ppgof
