#pragma once

#include <array>

#include <boost/multiprecision/cpp_int.hpp>

namespace gibbsgeom {

using Rational = boost::multiprecision::cpp_rational;

using Point2 = std::array<double, 2>;

// Sign of det[b-a, c-a], exact for binary-float inputs.
int orient2d(const Point2& a, const Point2& b, const Point2& c);

struct WeightedPoint2 {
  Point2 x;
  double w;
};

// Sign of the 3x3 orientation of the lifted points (x, y, |x|^2 - w^2), exact.
// Zero iff the four lifts are coplanar.
int lifted_orient(const WeightedPoint2& p0, const WeightedPoint2& p1, const WeightedPoint2& p2,
                  const WeightedPoint2& p3);

template <class T>
int sign_of(const T& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

}  // namespace gibbsgeom
