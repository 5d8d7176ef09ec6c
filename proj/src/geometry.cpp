#include "ppgof/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ppgof {

double distance(Point a, Point b) { return std::sqrt(squared_distance(a, b)); }

Window::Window(double x_lo, double x_hi, double y_lo, double y_hi)
    : x_min(x_lo), x_max(x_hi), y_min(y_lo), y_max(y_hi) {
    if (!(x_min < x_max) || !(y_min < y_max))
        throw InvalidArgs("window sides must have positive length");
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) ||
        !std::isfinite(y_max))
        throw InvalidArgs("window coordinates must be finite");
}

double Window::boundary_distance(Point p) const {
    const double dx = std::min(p.x - x_min, x_max - p.x);
    const double dy = std::min(p.y - y_min, y_max - p.y);
    return std::min(dx, dy);
}

Window Window::dilated(double margin) const {
    return Window(x_min - margin, x_max + margin, y_min - margin, y_max + margin);
}

PointPattern::PointPattern(std::vector<Point> points, Window window)
    : points_(std::move(points)), window_(window) {
    for (const Point& p : points_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw OutOfWindow("non-finite point coordinate");
        if (!window_.contains(p))
            throw OutOfWindow("point outside the observation window");
    }
    // duplicate check via sorted copy of the coordinates
    std::vector<std::pair<double, double>> sorted;
    sorted.reserve(points_.size());
    for (const Point& p : points_) sorted.emplace_back(p.x, p.y);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] == sorted[i - 1]) throw DuplicatePoint("pattern contains identical points");
}

PointPattern new_pattern(std::vector<Point> points, Window window) {
    return PointPattern(std::move(points), window);
}

std::vector<std::vector<double>> pairwise_distances(const PointPattern& p) {
    const std::size_t n = p.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            d[i][j] = d[j][i] = distance(p[i], p[j]);
    return d;
}

std::vector<double> nn_distances(const PointPattern& p) {
    const std::size_t n = p.size();
    if (n < 2) throw TooFewPoints("nearest-neighbour distances need at least 2 points");
    std::vector<double> nn(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d2 = squared_distance(p[i], p[j]);
            if (d2 < nn[i]) nn[i] = d2;
            if (d2 < nn[j]) nn[j] = d2;
        }
    for (double& v : nn) v = std::sqrt(v);
    return nn;
}

NearestPointGrid::NearestPointGrid(const PointPattern& p) : pts_(p.points()), win_(p.window()) {
    if (pts_.empty()) throw EmptyPattern("nearest-point queries need a non-empty pattern");
    const int target = std::max(1, int(std::sqrt(double(pts_.size()))));
    nx_ = target;
    ny_ = target;
    cells_.assign(std::size_t(nx_) * ny_, {});
    for (std::size_t i = 0; i < pts_.size(); ++i)
        cells_[cell_index(pts_[i])].push_back(int(i));
}

std::size_t NearestPointGrid::cell_index(Point p) const {
    int cx = std::min(nx_ - 1, std::max(0, int((p.x - win_.x_min) / win_.width() * nx_)));
    int cy = std::min(ny_ - 1, std::max(0, int((p.y - win_.y_min) / win_.height() * ny_)));
    return std::size_t(cy) * nx_ + cx;
}

double NearestPointGrid::nearest_distance(Point u) const {
    const int cx = int(cell_index(u)) % nx_;
    const int cy = int(cell_index(u)) / nx_;
    const double cell_w = win_.width() / nx_;
    const double cell_h = win_.height() / ny_;
    const double min_cell = std::min(cell_w, cell_h);
    double best = std::numeric_limits<double>::infinity();
    const int max_ring = std::max(nx_, ny_);
    for (int ring = 0; ring <= max_ring; ++ring) {
        // once a candidate is found, one more ring guarantees correctness
        if (best < std::numeric_limits<double>::infinity() &&
            double(ring - 1) * min_cell > std::sqrt(best))
            break;
        bool any_cell = false;
        for (int dy = -ring; dy <= ring; ++dy) {
            for (int dx = -ring; dx <= ring; ++dx) {
                if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                const int gx = cx + dx;
                const int gy = cy + dy;
                if (gx < 0 || gx >= nx_ || gy < 0 || gy >= ny_) continue;
                any_cell = true;
                for (int idx : cells_[std::size_t(gy) * nx_ + gx])
                    best = std::min(best, squared_distance(u, pts_[std::size_t(idx)]));
            }
        }
        if (!any_cell && best < std::numeric_limits<double>::infinity()) break;
    }
    return std::sqrt(best);
}

std::vector<double> empty_space_distances(const PointPattern& p, int test_grid_side) {
    if (p.empty()) throw EmptyPattern("empty-space distances need a non-empty pattern");
    if (test_grid_side < 1) throw InvalidArgs("test grid side must be >= 1");
    const Window& w = p.window();
    const NearestPointGrid grid(p);
    const double cx = w.width() / test_grid_side;
    const double cy = w.height() / test_grid_side;
    std::vector<double> out;
    out.reserve(std::size_t(test_grid_side) * test_grid_side);
    for (int iy = 0; iy < test_grid_side; ++iy)
        for (int ix = 0; ix < test_grid_side; ++ix)
            out.push_back(grid.nearest_distance(
                Point{w.x_min + (ix + 0.5) * cx, w.y_min + (iy + 0.5) * cy}));
    return out;
}

EvalGrid::EvalGrid(std::vector<double> r_values) : r_(std::move(r_values)) {
    if (r_.empty()) throw InvalidArgs("evaluation grid must not be empty");
    for (double v : r_) {
        if (!std::isfinite(v) || v < 0.0)
            throw InvalidArgs("grid values must be finite and non-negative");
    }
    if (r_.size() >= 2) {
        const double dr = (r_.back() - r_.front()) / double(r_.size() - 1);
        if (!(dr > 0.0)) throw InvalidArgs("grid must be strictly increasing");
        const double tol = 1e-12 * std::max(1.0, std::abs(r_.back()));
        for (std::size_t i = 1; i < r_.size(); ++i) {
            const double step = r_[i] - r_[i - 1];
            if (!(step > 0.0) || std::abs(step - dr) > tol)
                throw InvalidArgs("grid must be equidistant");
        }
    }
}

EvalGrid EvalGrid::linspace(double r_min, double r_max, std::size_t n) {
    if (n == 0) throw InvalidArgs("grid needs at least one point");
    std::vector<double> r(n);
    if (n == 1) {
        r[0] = r_min;
    } else {
        const double dr = (r_max - r_min) / double(n - 1);
        for (std::size_t i = 0; i < n; ++i) r[i] = r_min + double(i) * dr;
        r.back() = r_max;
    }
    return EvalGrid(std::move(r));
}

EvalGrid EvalGrid::default_for(const Window& w, std::size_t n) {
    return linspace(0.0, 0.25 * w.min_side(), n);
}

SummaryCurve::SummaryCurve(EvalGrid g, std::vector<double> v, std::string name)
    : grid(std::move(g)), values(std::move(v)), defined(values.size(), 1), label(std::move(name)) {
    if (values.size() != grid.size()) throw InvalidArgs("curve length must match grid length");
}

SummaryCurve::SummaryCurve(EvalGrid g, std::vector<double> v, std::vector<char> def,
                           std::string name)
    : grid(std::move(g)), values(std::move(v)), defined(std::move(def)), label(std::move(name)) {
    if (values.size() != grid.size() || defined.size() != values.size())
        throw InvalidArgs("curve length must match grid length");
}

bool SummaryCurve::all_defined() const {
    for (char d : defined)
        if (!d) return false;
    return true;
}

} // namespace ppgof
