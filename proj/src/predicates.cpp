#include "ppgof/predicates.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

namespace ppgof::pred {

namespace {

using Rational = boost::multiprecision::cpp_rational;

// error-bound coefficients for the floating-point filters (epsilon = 2^-53)
constexpr double kEps = 1.1102230246251565e-16; // 2^-53
constexpr double kCcwBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncBound = (10.0 + 96.0 * kEps) * kEps;

double orient2d_exact(const double* a, const double* b, const double* c) {
    const Rational ax(a[0]), ay(a[1]), bx(b[0]), by(b[1]), cx(c[0]), cy(c[1]);
    const Rational det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
    const int s = det.sign();
    return s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0);
}

double incircle_exact(const double* a, const double* b, const double* c, const double* d) {
    const Rational adx = Rational(a[0]) - Rational(d[0]);
    const Rational ady = Rational(a[1]) - Rational(d[1]);
    const Rational bdx = Rational(b[0]) - Rational(d[0]);
    const Rational bdy = Rational(b[1]) - Rational(d[1]);
    const Rational cdx = Rational(c[0]) - Rational(d[0]);
    const Rational cdy = Rational(c[1]) - Rational(d[1]);
    const Rational alift = adx * adx + ady * ady;
    const Rational blift = bdx * bdx + bdy * bdy;
    const Rational clift = cdx * cdx + cdy * cdy;
    const Rational det = alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) +
                         clift * (adx * bdy - ady * bdx);
    const int s = det.sign();
    return s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0);
}

} // namespace

double orient2d(const double* a, const double* b, const double* c) {
    const double detleft = (a[0] - c[0]) * (b[1] - c[1]);
    const double detright = (a[1] - c[1]) * (b[0] - c[0]);
    const double det = detleft - detright;

    double detsum;
    if (detleft > 0.0) {
        if (detright <= 0.0) return det;
        detsum = detleft + detright;
    } else if (detleft < 0.0) {
        if (detright >= 0.0) return det;
        detsum = -detleft - detright;
    } else {
        return det;
    }

    if (std::abs(det) > kCcwBound * detsum) return det;
    return orient2d_exact(a, b, c);
}

double incircle(const double* a, const double* b, const double* c, const double* d) {
    const double adx = a[0] - d[0];
    const double ady = a[1] - d[1];
    const double bdx = b[0] - d[0];
    const double bdy = b[1] - d[1];
    const double cdx = c[0] - d[0];
    const double cdy = c[1] - d[1];

    const double bdxcdy = bdx * cdy;
    const double cdxbdy = cdx * bdy;
    const double alift = adx * adx + ady * ady;

    const double cdxady = cdx * ady;
    const double adxcdy = adx * cdy;
    const double blift = bdx * bdx + bdy * bdy;

    const double adxbdy = adx * bdy;
    const double bdxady = bdx * ady;
    const double clift = cdx * cdx + cdy * cdy;

    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                       clift * (adxbdy - bdxady);

    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                             (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                             (std::abs(adxbdy) + std::abs(bdxady)) * clift;

    if (std::abs(det) > kIncBound * permanent) return det;
    return incircle_exact(a, b, c, d);
}

} // namespace ppgof::pred
