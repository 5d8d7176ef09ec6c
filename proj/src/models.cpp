#include "ppgof/models.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ppgof {

namespace {

constexpr long kSsiRetryBudget = 10000; // consecutive rejections before SSIFailure
constexpr long kStraussProposals = 100000; // fixed-length birth-death chain

Point uniform_point(const Window& w, Rng& rng) {
    return Point{rng.uniform(w.x_min, w.x_max), rng.uniform(w.y_min, w.y_max)};
}

std::vector<Point> binomial_points(long n, const Window& w, Rng& rng) {
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) pts.push_back(uniform_point(w, rng));
    return pts;
}

// Uniform grid over the window for O(1) range counting in the Strauss chain.
class NeighborGrid {
  public:
    NeighborGrid(const Window& w, double range)
        : win_(w), range_(range), range2_(range * range) {
        nx_ = std::max(1, int(w.width() / range));
        ny_ = std::max(1, int(w.height() / range));
        cells_.assign(std::size_t(nx_) * ny_, {});
    }

    int cell_of(Point p) const {
        int cx = std::min(nx_ - 1, std::max(0, int((p.x - win_.x_min) / win_.width() * nx_)));
        int cy = std::min(ny_ - 1, std::max(0, int((p.y - win_.y_min) / win_.height() * ny_)));
        return cy * nx_ + cx;
    }

    long count_within(Point p, const std::vector<Point>& pts, long skip = -1) const {
        const int cx = cell_of(p) % nx_;
        const int cy = cell_of(p) / nx_;
        long count = 0;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int gx = cx + dx;
                const int gy = cy + dy;
                if (gx < 0 || gx >= nx_ || gy < 0 || gy >= ny_) continue;
                for (long idx : cells_[std::size_t(gy) * nx_ + gx]) {
                    if (idx == skip) continue;
                    if (squared_distance(p, pts[std::size_t(idx)]) <= range2_) ++count;
                }
            }
        }
        return count;
    }

    void insert(long idx, Point p) { cells_[std::size_t(cell_of(p))].push_back(idx); }

    void erase(long idx, Point p) {
        auto& cell = cells_[std::size_t(cell_of(p))];
        cell.erase(std::find(cell.begin(), cell.end(), idx));
    }

  private:
    Window win_;
    double range_;
    double range2_;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<long>> cells_;
};

std::vector<Point> simulate_strauss(const StraussModel& m, const Window& w, Rng& rng) {
    std::vector<Point> pts;
    NeighborGrid grid(w, m.radius);
    const double area = w.area();
    for (long step = 0; step < kStraussProposals; ++step) {
        if (rng.next_double() < 0.5) {
            // birth
            const Point u = uniform_point(w, rng);
            const long t = grid.count_within(u, pts);
            double ratio = m.beta * area / double(pts.size() + 1);
            if (t > 0) {
                if (m.gamma == 0.0) continue;
                ratio *= std::pow(m.gamma, double(t));
            }
            if (ratio >= 1.0 || rng.next_double() < ratio) {
                grid.insert(long(pts.size()), u);
                pts.push_back(u);
            }
        } else {
            // death
            if (pts.empty()) continue;
            const long idx = long(rng.below(pts.size()));
            const Point victim = pts[std::size_t(idx)];
            const long t = grid.count_within(victim, pts, idx);
            double ratio = double(pts.size()) / (m.beta * area);
            if (t > 0) {
                if (m.gamma == 0.0) {
                    // zero-density state cannot occur; accept removal
                    ratio = 1.0;
                } else {
                    ratio /= std::pow(m.gamma, double(t));
                }
            }
            if (ratio >= 1.0 || rng.next_double() < ratio) {
                // swap-remove, keeping the grid indices consistent
                const long last = long(pts.size()) - 1;
                grid.erase(idx, victim);
                if (idx != last) {
                    grid.erase(last, pts[std::size_t(last)]);
                    pts[std::size_t(idx)] = pts[std::size_t(last)];
                    grid.insert(idx, pts[std::size_t(idx)]);
                }
                pts.pop_back();
            }
        }
    }
    return pts;
}

std::vector<Point> simulate_ssi(const SSIModel& m, const Window& w, Rng& rng) {
    std::vector<Point> pts;
    const double r2 = m.r_inhibit * m.r_inhibit;
    long rejections = 0;
    while (long(pts.size()) < m.n) {
        const Point u = uniform_point(w, rng);
        bool clash = false;
        for (const Point& q : pts) {
            if (squared_distance(u, q) < r2) {
                clash = true;
                break;
            }
        }
        if (clash) {
            if (++rejections >= kSsiRetryBudget)
                throw SSIFailure("could not place all inhibition points within the retry budget");
        } else {
            rejections = 0;
            pts.push_back(u);
        }
    }
    return pts;
}

template <class OffspringFn>
std::vector<Point> simulate_cluster(double kappa, double mu, double dilation, const Window& w,
                                    Rng& rng, OffspringFn&& offspring) {
    const Window parent_window = w.dilated(dilation);
    const long n_parents = rng.poisson(kappa * parent_window.area());
    std::vector<Point> pts;
    for (long i = 0; i < n_parents; ++i) {
        const Point parent = uniform_point(parent_window, rng);
        const long kids = rng.poisson(mu);
        for (long k = 0; k < kids; ++k) {
            const Point child = offspring(parent, rng);
            if (w.contains(child)) pts.push_back(child);
        }
    }
    return pts;
}

struct Simulator {
    const Window& w;
    Rng& rng;

    std::vector<Point> operator()(const BinomialModel& m) const {
        return binomial_points(m.n, w, rng);
    }

    std::vector<Point> operator()(const PoissonModel& m) const {
        return binomial_points(rng.poisson(m.lambda * w.area()), w, rng);
    }

    std::vector<Point> operator()(const MaternClusterModel& m) const {
        return simulate_cluster(m.kappa, m.mu, m.radius, w, rng, [&](Point parent, Rng& r) {
            // uniform in the disc of radius R around the parent
            const double rad = m.radius * std::sqrt(r.next_double());
            const double ang = 6.283185307179586476925286766559 * r.next_double();
            return Point{parent.x + rad * std::cos(ang), parent.y + rad * std::sin(ang)};
        });
    }

    std::vector<Point> operator()(const ThomasModel& m) const {
        // dilation by 4 sigma; contribution from farther parents is negligible
        return simulate_cluster(m.kappa, m.mu, 4.0 * m.sigma, w, rng, [&](Point parent, Rng& r) {
            return Point{parent.x + m.sigma * r.normal(), parent.y + m.sigma * r.normal()};
        });
    }

    std::vector<Point> operator()(const StraussModel& m) const { return simulate_strauss(m, w, rng); }

    std::vector<Point> operator()(const SSIModel& m) const { return simulate_ssi(m, w, rng); }

    std::vector<Point> operator()(const InhomPoissonModel& m) const {
        std::vector<Point> pts = binomial_points(rng.poisson(m.rho_max * w.area()), w, rng);
        std::vector<Point> kept;
        kept.reserve(pts.size());
        for (const Point& p : pts)
            if (rng.next_double() < m.intensity(p) / m.rho_max) kept.push_back(p);
        return kept;
    }
};

struct Validator {
    void operator()(const BinomialModel& m) const {
        if (m.n < 0) throw InvalidSpec("binomial: n must be >= 0");
    }
    void operator()(const PoissonModel& m) const {
        if (!(m.lambda >= 0.0)) throw InvalidSpec("poisson: lambda must be >= 0");
    }
    void operator()(const MaternClusterModel& m) const {
        if (!(m.kappa >= 0.0) || !(m.mu >= 0.0)) throw InvalidSpec("matern: kappa, mu must be >= 0");
        if (!(m.radius > 0.0)) throw InvalidSpec("matern: radius must be > 0");
    }
    void operator()(const ThomasModel& m) const {
        if (!(m.kappa >= 0.0) || !(m.mu >= 0.0)) throw InvalidSpec("thomas: kappa, mu must be >= 0");
        if (!(m.sigma > 0.0)) throw InvalidSpec("thomas: sigma must be > 0");
    }
    void operator()(const StraussModel& m) const {
        if (!(m.beta >= 0.0)) throw InvalidSpec("strauss: beta must be >= 0");
        if (!(m.gamma >= 0.0 && m.gamma <= 1.0)) throw InvalidSpec("strauss: gamma must be in [0, 1]");
        if (!(m.radius > 0.0)) throw InvalidSpec("strauss: radius must be > 0");
    }
    void operator()(const SSIModel& m) const {
        if (m.n < 0) throw InvalidSpec("ssi: n must be >= 0");
        if (!(m.r_inhibit > 0.0)) throw InvalidSpec("ssi: r_inhibit must be > 0");
    }
    void operator()(const InhomPoissonModel& m) const {
        if (!(m.rho_max >= 0.0)) throw InvalidSpec("inhom: rho_max must be >= 0");
        if (m.rho_max > 0.0 && !m.intensity) throw InvalidSpec("inhom: intensity function required");
    }
};

} // namespace

void validate(const ModelSpec& spec) { std::visit(Validator{}, spec); }

std::string model_name(const ModelSpec& spec) {
    struct Namer {
        std::string operator()(const BinomialModel&) const { return "binomial"; }
        std::string operator()(const PoissonModel&) const { return "poisson"; }
        std::string operator()(const MaternClusterModel&) const { return "matern"; }
        std::string operator()(const ThomasModel&) const { return "thomas"; }
        std::string operator()(const StraussModel&) const { return "strauss"; }
        std::string operator()(const SSIModel&) const { return "ssi"; }
        std::string operator()(const InhomPoissonModel&) const { return "inhom"; }
    };
    return std::visit(Namer{}, spec);
}

PointPattern simulate(const ModelSpec& spec, const Window& window, RngSeed key) {
    validate(spec);
    Rng rng(key);
    std::vector<Point> pts = std::visit(Simulator{window, rng}, spec);
    return PointPattern(std::move(pts), window);
}

ConditionedModel condition_on_count(const ModelSpec& spec, long observed_n) {
    if (std::holds_alternative<PoissonModel>(spec))
        return ConditionedModel{BinomialModel{observed_n}, true};
    return ConditionedModel{spec, false};
}

} // namespace ppgof
