#pragma once

#include <array>
#include <vector>

#include "ppgof/delaunay.hpp"
#include "ppgof/geometry.hpp"

namespace ppgof {

// Simplex of the alpha filtration; unused vertex slots are -1.
// The filtration parameter is the ball radius r (not squared).
struct Simplex {
    int dim; // 0, 1, 2
    std::array<int, 3> v; // vertex indices, ascending
    double value; // scale at which the simplex enters
};

// Simplices sorted by (value, dim, vertex tuple); every face appears before
// (or at the same value as) its cofaces.
struct Filtration {
    std::vector<Simplex> simplices;
    int n_vertices = 0;
};

// Alpha filtration over the Delaunay complex: vertices enter at 0, a
// triangle at its circumradius, an edge at half its length if its diametral
// disc is empty of the opposite apexes (Gabriel), otherwise at the smallest
// incident triangle value.
Filtration alpha_filtration(const PointPattern& p);

double circumradius(Point a, Point b, Point c);

} // namespace ppgof
