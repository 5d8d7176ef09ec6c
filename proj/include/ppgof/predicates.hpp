#pragma once

namespace ppgof::pred {

// Sign-exact geometric predicates: double-precision evaluation with a
// forward error bound, falling back to exact rational arithmetic when the
// filter cannot certify the sign.

// > 0 if (a, b, c) wind counter-clockwise, < 0 clockwise, 0 collinear
double orient2d(const double* a, const double* b, const double* c);

// For CCW (a, b, c): > 0 if d lies inside the circumcircle, < 0 outside,
// 0 cocircular.
double incircle(const double* a, const double* b, const double* c, const double* d);

} // namespace ppgof::pred
