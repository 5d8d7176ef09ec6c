#include "ppgof/delaunay.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <unordered_map>

#include "ppgof/predicates.hpp"

namespace ppgof {

namespace {

constexpr int kGhost = -1;

// Incremental Bowyer-Watson triangulation. The plane is tiled by real
// triangles plus one ghost triangle per hull edge; a ghost (u, v, GHOST)
// owns the directed hull edge u->v with the exterior on its left. All
// orientation and in-circle decisions go through the exact predicates, so
// cocircular and collinear configurations are handled deterministically
// (points on a circumcircle count as outside).
class Builder {
  public:
    explicit Builder(const std::vector<Point>& pts) : pts_(pts) {}

    void insert_first_triangle(int a, int b, int c) {
        if (orient(a, b, c) < 0) std::swap(b, c);
        const int t = add_triangle(a, b, c);
        add_ghost_twins(t);
    }

    // fan over a collinear chain (sorted along its line) from apex
    void insert_fan(const std::vector<int>& chain, int apex) {
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            int a = chain[i], b = chain[i + 1];
            if (orient(a, b, apex) < 0) std::swap(a, b);
            add_triangle(a, b, apex);
        }
        for (int t = 0; t < int(tris_.size()); ++t)
            if (alive_[std::size_t(t)]) add_ghost_twins(t);
    }

    void insert(int q) {
        // seed: any triangle whose circumdisk contains q
        int seed = -1;
        for (int t = 0; t < int(tris_.size()); ++t) {
            if (alive_[std::size_t(t)] && in_circumdisk(t, q)) {
                seed = t;
                break;
            }
        }
        // unreachable for valid input; real and ghost disks tile the plane
        if (seed < 0) throw Error("triangulation: insertion point not located");

        // grow the cavity
        std::vector<int> cavity{seed};
        std::vector<char> in_cavity(tris_.size(), 0);
        in_cavity[std::size_t(seed)] = 1;
        for (std::size_t head = 0; head < cavity.size(); ++head) {
            const int t = cavity[head];
            for (int e = 0; e < 3; ++e) {
                const int nbr = owner_of_twin(t, e);
                if (nbr < 0 || in_cavity[std::size_t(nbr)]) continue;
                if (in_circumdisk(nbr, q)) {
                    in_cavity[std::size_t(nbr)] = 1;
                    cavity.push_back(nbr);
                }
            }
        }

        // boundary = directed edges whose twin lies outside the cavity
        std::vector<std::array<int, 2>> boundary;
        for (int t : cavity) {
            for (int e = 0; e < 3; ++e) {
                const int nbr = owner_of_twin(t, e);
                if (nbr >= 0 && in_cavity[std::size_t(nbr)]) continue;
                boundary.push_back(directed_edge(t, e));
            }
        }

        for (int t : cavity) remove_triangle(t);
        for (const auto& [x, y] : boundary) add_triangle_cyclic(x, y, q);
    }

    Triangulation finish() const {
        Triangulation out;
        std::map<std::pair<int, int>, std::array<int, 2>> apex;
        for (int t = 0; t < int(tris_.size()); ++t) {
            if (!alive_[std::size_t(t)]) continue;
            const auto& v = tris_[std::size_t(t)];
            if (v[0] == kGhost || v[1] == kGhost || v[2] == kGhost) continue;
            out.triangles.push_back(v);
            for (int e = 0; e < 3; ++e) {
                int a = v[e], b = v[(e + 1) % 3];
                const int c = v[(e + 2) % 3];
                if (a > b) std::swap(a, b);
                auto [it, fresh] = apex.try_emplace({a, b}, std::array<int, 2>{c, -1});
                if (!fresh) it->second[1] = c;
            }
        }
        for (const auto& [key, ap] : apex) {
            out.edges.push_back({key.first, key.second});
            out.edge_apex.push_back(ap);
        }
        return out;
    }

  private:
    double orient(int a, int b, int c) const {
        return pred::orient2d(&pts_[std::size_t(a)].x, &pts_[std::size_t(b)].x,
                              &pts_[std::size_t(c)].x);
    }

    static std::uint64_t edge_key(int a, int b) {
        return (std::uint64_t(std::uint32_t(a + 1)) << 32) | std::uint32_t(b + 1);
    }

    std::array<int, 2> directed_edge(int t, int e) const {
        const auto& v = tris_[std::size_t(t)];
        return {v[e], v[(e + 1) % 3]};
    }

    int owner_of_twin(int t, int e) const {
        const auto [a, b] = directed_edge(t, e);
        const auto it = owner_.find(edge_key(b, a));
        return it == owner_.end() ? -1 : it->second;
    }

    int add_triangle(int a, int b, int c) {
        const int id = int(tris_.size());
        tris_.push_back({a, b, c});
        alive_.push_back(1);
        owner_[edge_key(a, b)] = id;
        owner_[edge_key(b, c)] = id;
        owner_[edge_key(c, a)] = id;
        return id;
    }

    // new triangle (x, y, q) where x or y may be the ghost vertex; rotate so
    // the ghost, if present, sits in the last slot
    void add_triangle_cyclic(int x, int y, int q) {
        if (x == kGhost) add_triangle(y, q, kGhost);
        else if (y == kGhost) add_triangle(q, x, kGhost);
        else add_triangle(x, y, q);
    }

    void remove_triangle(int t) {
        alive_[std::size_t(t)] = 0;
        const auto& v = tris_[std::size_t(t)];
        owner_.erase(edge_key(v[0], v[1]));
        owner_.erase(edge_key(v[1], v[2]));
        owner_.erase(edge_key(v[2], v[0]));
    }

    // ghost twins for every directed edge of triangle t lacking an owner
    void add_ghost_twins(int t) {
        for (int e = 0; e < 3; ++e) {
            const auto [a, b] = directed_edge(t, e);
            if (a == kGhost || b == kGhost) continue;
            if (!owner_.count(edge_key(b, a))) add_triangle(b, a, kGhost);
        }
    }

    bool in_circumdisk(int t, int q) const {
        const auto& v = tris_[std::size_t(t)];
        if (v[2] == kGhost) {
            const int u = v[0], w = v[1];
            const double o = orient(u, w, q);
            if (o > 0) return true;
            if (o < 0) return false;
            // collinear with a hull edge: only the open segment interior is
            // inside the limiting circumdisk
            const Point& pu = pts_[std::size_t(u)];
            const Point& pw = pts_[std::size_t(w)];
            const Point& pq = pts_[std::size_t(q)];
            const double du = (pq.x - pu.x) * (pw.x - pu.x) + (pq.y - pu.y) * (pw.y - pu.y);
            const double dw = (pq.x - pw.x) * (pu.x - pw.x) + (pq.y - pw.y) * (pu.y - pw.y);
            return du > 0 && dw > 0;
        }
        return pred::incircle(&pts_[std::size_t(v[0])].x, &pts_[std::size_t(v[1])].x,
                              &pts_[std::size_t(v[2])].x, &pts_[std::size_t(q)].x) > 0;
    }

    const std::vector<Point>& pts_;
    std::vector<std::array<int, 3>> tris_;
    std::vector<char> alive_;
    std::unordered_map<std::uint64_t, int> owner_;
};

// sort a set of collinear points along their common line
void sort_along_line(std::vector<int>& idx, const std::vector<Point>& pts) {
    const Point a = pts[std::size_t(idx.front())];
    // pick the dominant axis of the direction for a stable projection
    double spanx = 0, spany = 0;
    for (int i : idx) {
        spanx = std::max(spanx, std::abs(pts[std::size_t(i)].x - a.x));
        spany = std::max(spany, std::abs(pts[std::size_t(i)].y - a.y));
    }
    if (spanx >= spany)
        std::sort(idx.begin(), idx.end(), [&](int l, int r) {
            return std::pair(pts[std::size_t(l)].x, pts[std::size_t(l)].y) <
                   std::pair(pts[std::size_t(r)].x, pts[std::size_t(r)].y);
        });
    else
        std::sort(idx.begin(), idx.end(), [&](int l, int r) {
            return std::pair(pts[std::size_t(l)].y, pts[std::size_t(l)].x) <
                   std::pair(pts[std::size_t(r)].y, pts[std::size_t(r)].x);
        });
}

} // namespace

Triangulation delaunay(const PointPattern& p) {
    const auto& pts = p.points();
    const int n = int(pts.size());
    Triangulation out;
    if (n == 0) return out;
    if (n == 1) return out;

    // collect the leading collinear run (in insertion order)
    std::vector<int> chain{0, 1};
    int first_off_line = -1;
    for (int i = 2; i < n; ++i) {
        if (first_off_line < 0 &&
            pred::orient2d(&pts[std::size_t(chain[0])].x, &pts[std::size_t(chain[1])].x,
                           &pts[std::size_t(i)].x) == 0.0) {
            chain.push_back(i);
        } else if (first_off_line < 0) {
            first_off_line = i;
            break;
        }
    }

    if (first_off_line < 0) {
        // every point is on one line: the Delaunay graph is the sorted path
        sort_along_line(chain, pts);
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            int a = chain[i], b = chain[i + 1];
            if (a > b) std::swap(a, b);
            out.edges.push_back({a, b});
            out.edge_apex.push_back({-1, -1});
        }
        return out;
    }

    Builder builder(pts);
    if (chain.size() == 2) {
        builder.insert_first_triangle(chain[0], chain[1], first_off_line);
    } else {
        sort_along_line(chain, pts);
        builder.insert_fan(chain, first_off_line);
    }
    for (int i = first_off_line + 1; i < n; ++i) builder.insert(i);
    return builder.finish();
}

} // namespace ppgof
