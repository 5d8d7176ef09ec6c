#include "ppgof/alpha.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace ppgof {

double circumradius(Point a, Point b, Point c) {
    const double la = distance(b, c);
    const double lb = distance(a, c);
    const double lc = distance(a, b);
    const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    const double denom = 2.0 * std::abs(cross);
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return la * lb * lc / denom;
}

Filtration alpha_filtration(const PointPattern& p) {
    const auto& pts = p.points();
    const Triangulation tri = delaunay(p);

    Filtration f;
    f.n_vertices = int(pts.size());
    f.simplices.reserve(pts.size() + tri.edges.size() + tri.triangles.size());

    for (int i = 0; i < int(pts.size()); ++i)
        f.simplices.push_back({0, {i, -1, -1}, 0.0});

    std::map<std::array<int, 3>, double> tri_value;
    for (const auto& t : tri.triangles) {
        std::array<int, 3> key = t;
        std::sort(key.begin(), key.end());
        tri_value[key] = circumradius(pts[std::size_t(t[0])], pts[std::size_t(t[1])],
                                      pts[std::size_t(t[2])]);
    }

    for (std::size_t e = 0; e < tri.edges.size(); ++e) {
        const int a = tri.edges[e][0];
        const int b = tri.edges[e][1];
        const Point pa = pts[std::size_t(a)];
        const Point pb = pts[std::size_t(b)];
        const double half = 0.5 * distance(pa, pb);
        const Point mid{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};

        bool gabriel = true;
        double min_incident = std::numeric_limits<double>::infinity();
        for (int apex : tri.edge_apex[e]) {
            if (apex < 0) continue;
            if (squared_distance(pts[std::size_t(apex)], mid) < half * half) gabriel = false;
            std::array<int, 3> key{a, b, apex};
            std::sort(key.begin(), key.end());
            min_incident = std::min(min_incident, tri_value[key]);
        }
        // a chord never exceeds the diameter, so half <= min_incident up to
        // rounding; the min keeps face values consistent in that last ulp
        const double value = gabriel ? std::min(half, min_incident) : min_incident;
        f.simplices.push_back({1, {a, b, -1}, value});
    }

    for (const auto& [key, value] : tri_value) f.simplices.push_back({2, key, value});

    std::sort(f.simplices.begin(), f.simplices.end(), [](const Simplex& l, const Simplex& r) {
        if (l.value != r.value) return l.value < r.value;
        if (l.dim != r.dim) return l.dim < r.dim;
        return l.v < r.v;
    });
    return f;
}

} // namespace ppgof
