#pragma once

#include <vector>

#include "ppgof/alpha.hpp"
#include "ppgof/geometry.hpp"

namespace ppgof {

struct PersistencePair {
    double birth;
    double death; // +infinity for the surviving component
    int dim; // 0 or 1
};

// Multiset of (birth, death, dim) pairs; zero-persistence pairs (death ==
// birth) are not recorded.
struct PersistenceDiagram {
    std::vector<PersistencePair> pairs;

    std::vector<const PersistencePair*> of_dim(int p) const;
};

// Persistent homology of the filtration: dimension 0 via union-find over the
// edges (a merge kills the younger component), dimension 1 via boundary
// matrix reduction (a loop is born at the edge that closes it and dies at
// the triangle that fills it).
PersistenceDiagram persistence(const Filtration& f);

// number of p-dimensional features with birth <= b that are still alive
// after d; requires b <= d
long rank_function(const PersistenceDiagram& pd, int p, double b, double d);

// Betti curve: the rank function along the diagonal (r, r)
SummaryCurve betti_curve(const PersistenceDiagram& pd, const EvalGrid& grid, int p);

// accumulated persistence: lifetimes of dim-0 features summed by death
// scale, of dim-1 features by birth scale; the infinite pair is excluded
SummaryCurve apf(const PersistenceDiagram& pd, const EvalGrid& grid, int p);

// number of connected-component deaths up to scale r
SummaryCurve nd0(const PersistenceDiagram& pd, const EvalGrid& grid);

// Euler characteristic curve of the filtration
SummaryCurve euler_curve(const Filtration& f, const EvalGrid& grid);

} // namespace ppgof
