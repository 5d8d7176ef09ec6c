#pragma once

#include <array>
#include <vector>

#include "ppgof/geometry.hpp"

namespace ppgof {

// Delaunay triangulation of a simple planar pattern. For fully collinear
// input (no triangles) the edge set is the path along the line.
struct Triangulation {
    std::vector<std::array<int, 3>> triangles; // CCW vertex triples
    std::vector<std::array<int, 2>> edges; // undirected, a < b
    std::vector<std::array<int, 2>> edge_apex; // opposite vertices per edge, -1 if none
};

Triangulation delaunay(const PointPattern& p);

} // namespace ppgof
