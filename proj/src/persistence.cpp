#include "ppgof/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "ppgof/errors.hpp"

namespace ppgof {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(std::size_t(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    int find(int x) {
        while (parent[std::size_t(x)] != x) {
            parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
            x = parent[std::size_t(x)];
        }
        return x;
    }

    // returns false if already joined
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b); // keep the smaller root as survivor
        parent[std::size_t(b)] = a;
        return true;
    }
};

} // namespace

std::vector<const PersistencePair*> PersistenceDiagram::of_dim(int p) const {
    std::vector<const PersistencePair*> out;
    for (const auto& pr : pairs)
        if (pr.dim == p) out.push_back(&pr);
    return out;
}

PersistenceDiagram persistence(const Filtration& f) {
    PersistenceDiagram pd;
    if (f.n_vertices == 0) return pd;

    // edge order within the filtration, used as boundary row indices
    std::map<std::array<int, 2>, int> edge_order;
    std::vector<double> edge_value;
    std::vector<const Simplex*> triangles;
    UnionFind uf(f.n_vertices);

    for (const Simplex& s : f.simplices) {
        if (s.dim == 1) {
            const int idx = int(edge_value.size());
            edge_order[{s.v[0], s.v[1]}] = idx;
            edge_value.push_back(s.value);
            if (uf.unite(s.v[0], s.v[1]))
                pd.pairs.push_back({0.0, s.value, 0}); // merge kills the younger component
        } else if (s.dim == 2) {
            triangles.push_back(&s);
        }
    }
    pd.pairs.push_back({0.0, kInf, 0}); // the surviving component

    // dimension 1: reduce the triangle boundary columns over Z/2
    std::vector<int> pivot_owner(edge_value.size(), -1);
    std::vector<std::vector<int>> columns(triangles.size());
    for (std::size_t c = 0; c < triangles.size(); ++c) {
        const Simplex& t = *triangles[c];
        std::vector<int>& col = columns[c];
        col = {edge_order.at({t.v[0], t.v[1]}), edge_order.at({t.v[0], t.v[2]}),
               edge_order.at({t.v[1], t.v[2]})};
        std::sort(col.begin(), col.end());
        while (!col.empty()) {
            const int low = col.back();
            const int other = pivot_owner[std::size_t(low)];
            if (other < 0) break;
            // symmetric difference with the column holding this pivot
            std::vector<int> merged;
            std::set_symmetric_difference(col.begin(), col.end(), columns[std::size_t(other)].begin(),
                                          columns[std::size_t(other)].end(),
                                          std::back_inserter(merged));
            col = std::move(merged);
        }
        if (!col.empty()) {
            const int low = col.back();
            pivot_owner[std::size_t(low)] = int(c);
            const double birth = edge_value[std::size_t(low)];
            const double death = t.value;
            if (death > birth) pd.pairs.push_back({birth, death, 1});
        }
    }
    // unpaired cycle-creating edges would be infinite dim-1 features; the
    // full Delaunay complex is simply connected, so none arise here

    return pd;
}

long rank_function(const PersistenceDiagram& pd, int p, double b, double d) {
    if (b > d) throw InvalidArgs("rank function needs b <= d");
    long count = 0;
    for (const auto& pr : pd.pairs)
        if (pr.dim == p && pr.birth <= b && pr.death > d) ++count;
    return count;
}

SummaryCurve betti_curve(const PersistenceDiagram& pd, const EvalGrid& grid, int p) {
    std::vector<double> births, deaths;
    for (const auto& pr : pd.pairs) {
        if (pr.dim != p) continue;
        births.push_back(pr.birth);
        if (std::isfinite(pr.death)) deaths.push_back(pr.death);
    }
    std::sort(births.begin(), births.end());
    std::sort(deaths.begin(), deaths.end());
    std::vector<double> values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double r = grid[k];
        const auto nb = std::upper_bound(births.begin(), births.end(), r) - births.begin();
        const auto nd = std::upper_bound(deaths.begin(), deaths.end(), r) - deaths.begin();
        values[k] = double(nb - nd);
    }
    return SummaryCurve(grid, std::move(values), p == 0 ? "betti0" : "betti1");
}

SummaryCurve apf(const PersistenceDiagram& pd, const EvalGrid& grid, int p) {
    // (anchor scale, lifetime) per finite feature
    std::vector<std::pair<double, double>> events;
    for (const auto& pr : pd.pairs) {
        if (pr.dim != p || !std::isfinite(pr.death)) continue;
        events.emplace_back(p == 0 ? pr.death : pr.birth, pr.death - pr.birth);
    }
    std::sort(events.begin(), events.end());
    std::vector<double> anchor(events.size()), cumsum(events.size() + 1, 0.0);
    for (std::size_t i = 0; i < events.size(); ++i) {
        anchor[i] = events[i].first;
        cumsum[i + 1] = cumsum[i] + events[i].second;
    }
    std::vector<double> values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto idx = std::upper_bound(anchor.begin(), anchor.end(), grid[k]) - anchor.begin();
        values[k] = cumsum[std::size_t(idx)];
    }
    return SummaryCurve(grid, std::move(values), p == 0 ? "apf0" : "apf1");
}

SummaryCurve nd0(const PersistenceDiagram& pd, const EvalGrid& grid) {
    std::vector<double> deaths;
    for (const auto& pr : pd.pairs)
        if (pr.dim == 0 && std::isfinite(pr.death)) deaths.push_back(pr.death);
    std::sort(deaths.begin(), deaths.end());
    std::vector<double> values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        values[k] = double(std::upper_bound(deaths.begin(), deaths.end(), grid[k]) - deaths.begin());
    return SummaryCurve(grid, std::move(values), "nd0");
}

SummaryCurve euler_curve(const Filtration& f, const EvalGrid& grid) {
    std::vector<double> edge_values, tri_values;
    for (const Simplex& s : f.simplices) {
        if (s.dim == 1) edge_values.push_back(s.value);
        else if (s.dim == 2) tri_values.push_back(s.value);
    }
    std::sort(edge_values.begin(), edge_values.end());
    std::sort(tri_values.begin(), tri_values.end());
    std::vector<double> values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double r = grid[k];
        const auto ne = std::upper_bound(edge_values.begin(), edge_values.end(), r) -
                        edge_values.begin();
        const auto nt = std::upper_bound(tri_values.begin(), tri_values.end(), r) -
                        tri_values.begin();
        values[k] = double(f.n_vertices) - double(ne) + double(nt);
    }
    return SummaryCurve(grid, std::move(values), "euler");
}

} // namespace ppgof
