#pragma once

#include "ppgof/geometry.hpp"

namespace ppgof {

enum class EdgeCorrection { Translation, Border, None };

// points per unit area, n / |W|
double intensity_estimate(const PointPattern& p);

// default pcf bandwidth, 0.15 / sqrt(lambda_hat)
double default_bandwidth(const PointPattern& p);

// Ripley's K; Translation weights |W| / |W ∩ W_{x-y}|, Border restricts the
// outer sum to points farther than r from the boundary.
SummaryCurve estimate_K(const PointPattern& p, const EvalGrid& grid,
                        EdgeCorrection corr = EdgeCorrection::Translation);

// L(r) = sqrt(K(r) / pi) in the plane
SummaryCurve estimate_L(const PointPattern& p, const EvalGrid& grid,
                        EdgeCorrection corr = EdgeCorrection::Translation);

// kernel estimate of the pair correlation function (Epanechnikov kernel);
// grid values <= 0 are flagged undefined
SummaryCurve estimate_pcf(const PointPattern& p, const EvalGrid& grid,
                          EdgeCorrection corr = EdgeCorrection::Translation,
                          double bandwidth = 0.0);

// empty space function: border-corrected reduced-sample estimator on a
// test_grid_side x test_grid_side lattice of cell centres
SummaryCurve estimate_F(const PointPattern& p, const EvalGrid& grid, int test_grid_side = 128);

// nearest-neighbour distance distribution, border-corrected reduced sample;
// r beyond the deepest point is flagged undefined
SummaryCurve estimate_G(const PointPattern& p, const EvalGrid& grid);

// variance-stabilized G: arcsin(sqrt(G))
SummaryCurve estimate_G_star(const PointPattern& p, const EvalGrid& grid);

// J = (1 - G) / (1 - F); undefined once F reaches 1
SummaryCurve estimate_J(const PointPattern& p, const EvalGrid& grid, int test_grid_side = 128);

} // namespace ppgof
