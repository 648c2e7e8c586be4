#pragma once

// Orientation and in-circle tests with a floating-point filter. When the
// filter cannot certify the sign, the determinant is re-evaluated in exact
// rational arithmetic, so the returned sign is always exact.

#include <streetperc/geometry.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>

namespace streetperc::predicates {

namespace detail {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kInCircleBound = (10.0 + 96.0 * kEps) * kEps;

inline int sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

inline int orient_exact(Point2 a, Point2 b, Point2 c) {
    const Rational acx = Rational(a.x) - c.x, bcx = Rational(b.x) - c.x;
    const Rational acy = Rational(a.y) - c.y, bcy = Rational(b.y) - c.y;
    return sign(acx * bcy - acy * bcx);
}

inline int incircle_exact(Point2 a, Point2 b, Point2 c, Point2 d) {
    const Rational adx = Rational(a.x) - d.x, ady = Rational(a.y) - d.y;
    const Rational bdx = Rational(b.x) - d.x, bdy = Rational(b.y) - d.y;
    const Rational cdx = Rational(c.x) - d.x, cdy = Rational(c.y) - d.y;
    const Rational alift = adx * adx + ady * ady;
    const Rational blift = bdx * bdx + bdy * bdy;
    const Rational clift = cdx * cdx + cdy * cdy;
    return sign(alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                clift * (adx * bdy - bdx * ady));
}

} // namespace detail

/// +1 if a, b, c turn counter-clockwise, -1 if clockwise, 0 if collinear.
inline int orient(Point2 a, Point2 b, Point2 c) {
    const double detleft = (a.x - c.x) * (b.y - c.y);
    const double detright = (a.y - c.y) * (b.x - c.x);
    const double det = detleft - detright;
    const double bound = detail::kOrientBound * (std::abs(detleft) + std::abs(detright));
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return detail::orient_exact(a, b, c);
}

/// +1 if d lies strictly inside the circle through the counter-clockwise
/// triangle (a, b, c), -1 if strictly outside, 0 if cocircular.
inline int incircle(Point2 a, Point2 b, Point2 c, Point2 d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;
    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                             (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                             (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    const double bound = detail::kInCircleBound * permanent;
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return detail::incircle_exact(a, b, c, d);
}

/// Centre of the circle through a, b, c (non-collinear).
inline Point2 circumcenter(Point2 a, Point2 b, Point2 c) {
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2.0 * (bx * cy - by * cx);
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    return {a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
}

} // namespace streetperc::predicates
