#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ppgof/errors.hpp"

namespace ppgof {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double squared_distance(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

double distance(Point a, Point b);

// Rectangular observation window.
struct Window {
    double x_min, x_max, y_min, y_max;

    Window(double x_lo, double x_hi, double y_lo, double y_hi);

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    double min_side() const { return width() < height() ? width() : height(); }

    bool contains(Point p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }

    // distance from p to the window boundary (p assumed inside)
    double boundary_distance(Point p) const;

    // window grown by `margin` on all sides
    Window dilated(double margin) const;
};

// Finite simple planar point pattern observed in a rectangular window.
// Immutable after construction; point order is preserved.
class PointPattern {
  public:
    PointPattern(std::vector<Point> points, Window window);

    const std::vector<Point>& points() const { return points_; }
    const Window& window() const { return window_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    Point operator[](std::size_t i) const { return points_[i]; }

    double intensity_estimate() const {
        return static_cast<double>(points_.size()) / window_.area();
    }

  private:
    std::vector<Point> points_;
    Window window_;
};

PointPattern new_pattern(std::vector<Point> points, Window window);

std::vector<std::vector<double>> pairwise_distances(const PointPattern& p);

// nearest-neighbour distance of every point; requires >= 2 points
std::vector<double> nn_distances(const PointPattern& p);

// distance from each cell centre of a side x side lattice in W to the
// nearest pattern point
std::vector<double> empty_space_distances(const PointPattern& p, int test_grid_side);

// cell-bucketed nearest-point queries against a fixed pattern
class NearestPointGrid {
  public:
    explicit NearestPointGrid(const PointPattern& p);
    double nearest_distance(Point u) const;

  private:
    std::size_t cell_index(Point p) const;

    const std::vector<Point>& pts_;
    Window win_;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> cells_;
};

// Equidistant evaluation grid of spatial scales.
class EvalGrid {
  public:
    explicit EvalGrid(std::vector<double> r_values);

    static EvalGrid linspace(double r_min, double r_max, std::size_t n);

    // conventional default: n points on [0, 0.25 * min window side]
    static EvalGrid default_for(const Window& w, std::size_t n = 513);

    const std::vector<double>& values() const { return r_; }
    std::size_t size() const { return r_.size(); }
    double operator[](std::size_t i) const { return r_[i]; }
    double front() const { return r_.front(); }
    double back() const { return r_.back(); }

    // spacing; zero for a single-point grid
    double step() const { return r_.size() > 1 ? (r_.back() - r_.front()) / double(r_.size() - 1) : 0.0; }

  private:
    std::vector<double> r_;
};

// A functional summary statistic evaluated on a grid. Individual values may
// be flagged undefined (e.g. the J-function tail once F reaches 1).
struct SummaryCurve {
    EvalGrid grid;
    std::vector<double> values;
    std::vector<char> defined; // 1 = usable, 0 = undefined
    std::string label;

    SummaryCurve(EvalGrid g, std::vector<double> v, std::string name);
    SummaryCurve(EvalGrid g, std::vector<double> v, std::vector<char> def, std::string name);

    std::size_t size() const { return values.size(); }
    bool all_defined() const;
};

} // namespace ppgof
