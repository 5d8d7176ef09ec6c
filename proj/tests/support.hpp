#pragma once

// Shared test utilities: independent oracles (brute force, enumeration,
// rasterization) and small statistical helpers used by the unit and
// acceptance suites. Everything here is implementation-independent of the
// library paths it cross-checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "ppgof/geometry.hpp"
#include "ppgof/rng.hpp"

namespace support {

// ---- incomplete gamma / chi-square ---------------------------------------

inline double gamma_p_series(double a, double x) {
    double sum = 1.0 / a, term = sum;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// upper regularized incomplete gamma Q(a, x)
inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) return 1.0;
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

// upper tail of the chi-square distribution with k degrees of freedom
inline double chi2_sf(double x, double k) { return gamma_q(k / 2.0, x / 2.0); }

// chi-square uniformity p-value for counts over equally likely cells
inline double chi2_uniform_pvalue(const std::vector<long>& counts) {
    const double total = double(std::accumulate(counts.begin(), counts.end(), 0L));
    const double expected = total / double(counts.size());
    double x = 0.0;
    for (long c : counts) x += (double(c) - expected) * (double(c) - expected) / expected;
    return chi2_sf(x, double(counts.size() - 1));
}

// ---- random inputs ---------------------------------------------------------

inline std::vector<ppgof::Point> random_points(std::size_t n, const ppgof::Window& w,
                                               ppgof::Rng& rng) {
    std::vector<ppgof::Point> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({rng.uniform(w.x_min, w.x_max), rng.uniform(w.y_min, w.y_max)});
    return pts;
}

// ---- brute-force geometry oracles -----------------------------------------

// K estimate with no correction as a direct double loop
inline std::vector<double> brute_force_K_none(const std::vector<ppgof::Point>& pts, double area,
                                              const std::vector<double>& r_values) {
    const double lambda = double(pts.size()) / area;
    std::vector<double> out(r_values.size(), 0.0);
    for (std::size_t k = 0; k < r_values.size(); ++k) {
        long count = 0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = 0; j < pts.size(); ++j)
                if (i != j && ppgof::distance(pts[i], pts[j]) <= r_values[k]) ++count;
        out[k] = double(count) / (lambda * lambda * area);
    }
    return out;
}

// total length of the Euclidean minimum spanning tree (Prim)
inline double mst_total_length(const std::vector<ppgof::Point>& pts) {
    const std::size_t n = pts.size();
    if (n < 2) return 0.0;
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<char> used(n, 0);
    best[0] = 0.0;
    double total = 0.0;
    for (std::size_t iter = 0; iter < n; ++iter) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i] && (pick == n || best[i] < best[pick])) pick = i;
        used[pick] = 1;
        total += best[pick];
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i]) best[i] = std::min(best[i], ppgof::distance(pts[pick], pts[i]));
    }
    return total;
}

// ---- pixel-grid topology oracle --------------------------------------------

struct PixelBetti {
    long beta0 = 0;
    long beta1 = 0;
};

// Betti numbers of the union of closed r-balls rasterized on a side^2 grid.
// Foreground uses 8-connectivity, background 4-connectivity; holes are the
// bounded background components. A bounded component counts as a hole only
// if it reaches depth 3px below the coverage radius: an enclosed pocket
// that is merely a sub-pixel wedge near a lens crossing stays within depth
// ~2px of r (the distance field is 1-Lipschitz), while true holes at radii
// several pixels clear of every critical value are deeper.
inline PixelBetti union_of_balls_betti(const std::vector<ppgof::Point>& pts, double r, int side) {
    double lo_x = pts[0].x, hi_x = pts[0].x, lo_y = pts[0].y, hi_y = pts[0].y;
    for (const auto& p : pts) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    const double margin = r + 2.0 * std::max(hi_x - lo_x, hi_y - lo_y) / side + 1e-9;
    lo_x -= margin;
    hi_x += margin;
    lo_y -= margin;
    hi_y += margin;
    const double extent = std::max(hi_x - lo_x, hi_y - lo_y);
    const double px = extent / side;

    auto centre = [&](int ix, int iy) {
        return ppgof::Point{lo_x + (ix + 0.5) * px, lo_y + (iy + 0.5) * px};
    };
    // covered flag plus a "deep" flag for pixels well below the radius
    std::vector<char> img(std::size_t(side) * side, 0);
    std::vector<char> deep(std::size_t(side) * side, 1);
    const double deep_r = r + 3.0 * px;
    for (const auto& p : pts) {
        const int ix_lo = std::max(0, int((p.x - deep_r - lo_x) / px) - 1);
        const int ix_hi = std::min(side - 1, int((p.x + deep_r - lo_x) / px) + 1);
        const int iy_lo = std::max(0, int((p.y - deep_r - lo_y) / px) - 1);
        const int iy_hi = std::min(side - 1, int((p.y + deep_r - lo_y) / px) + 1);
        for (int iy = iy_lo; iy <= iy_hi; ++iy) {
            for (int ix = ix_lo; ix <= ix_hi; ++ix) {
                const double d2 = ppgof::squared_distance(centre(ix, iy), p);
                if (d2 <= r * r) img[std::size_t(iy) * side + ix] = 1;
                if (d2 <= deep_r * deep_r) deep[std::size_t(iy) * side + ix] = 0;
            }
        }
    }

    std::vector<int> label(std::size_t(side) * side, -1);
    struct FloodResult {
        bool touches_border = false;
        bool has_deep = false;
    };
    auto flood = [&](int sx, int sy, int id, char value, bool diag) {
        std::queue<std::pair<int, int>> q;
        q.push({sx, sy});
        label[std::size_t(sy) * side + sx] = id;
        FloodResult res;
        while (!q.empty()) {
            const auto [x, y] = q.front();
            q.pop();
            if (x == 0 || y == 0 || x == side - 1 || y == side - 1) res.touches_border = true;
            if (deep[std::size_t(y) * side + x]) res.has_deep = true;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (!diag && dx != 0 && dy != 0) continue;
                    const int nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= side || ny >= side) continue;
                    const std::size_t at = std::size_t(ny) * side + nx;
                    if (img[at] != value || label[at] >= 0) continue;
                    label[at] = id;
                    q.push({nx, ny});
                }
            }
        }
        return res;
    };

    PixelBetti out;
    int next = 0;
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            const std::size_t at = std::size_t(y) * side + x;
            if (label[at] >= 0) continue;
            if (img[at]) {
                flood(x, y, next++, 1, true);
                ++out.beta0;
            } else {
                const FloodResult res = flood(x, y, next++, 0, false);
                if (!res.touches_border && res.has_deep) ++out.beta1;
            }
        }
    }
    return out;
}

// ---- exhaustive lexicographic ERL oracle -----------------------------------

// ERL depths by direct pairwise lexicographic comparison of sorted rank
// vectors
inline std::vector<double> erl_by_enumeration(const std::vector<std::vector<double>>& sorted_ranks) {
    const std::size_t n = sorted_ranks.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        long count = 0;
        for (std::size_t k = 0; k < n; ++k)
            if (std::lexicographical_compare(sorted_ranks[k].begin(), sorted_ranks[k].end(),
                                             sorted_ranks[i].begin(), sorted_ranks[i].end()) ||
                sorted_ranks[k] == sorted_ranks[i])
                ++count;
        out[i] = double(count) / double(n);
    }
    return out;
}

} // namespace support
