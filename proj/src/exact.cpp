#include "gibbsgeom/exact.hpp"

#include <cmath>

namespace gibbsgeom {

int orient2d(const Point2& a, const Point2& b, const Point2& c) {
  double l = (b[0] - a[0]) * (c[1] - a[1]);
  double r = (b[1] - a[1]) * (c[0] - a[0]);
  double det = l - r;
  double bound = 1e-14 * (std::abs(l) + std::abs(r));
  if (det > bound) return 1;
  if (det < -bound) return -1;
  Rational ax(a[0]), ay(a[1]), bx(b[0]), by(b[1]), cx(c[0]), cy(c[1]);
  return sign_of(Rational((bx - ax) * (cy - ay) - (by - ay) * (cx - ax)));
}

int lifted_orient(const WeightedPoint2& p0, const WeightedPoint2& p1, const WeightedPoint2& p2,
                  const WeightedPoint2& p3) {
  auto lift = [](const WeightedPoint2& p) { return p.x[0] * p.x[0] + p.x[1] * p.x[1] - p.w * p.w; };
  auto mag = [](const WeightedPoint2& p) { return p.x[0] * p.x[0] + p.x[1] * p.x[1] + p.w * p.w; };
  double h0 = lift(p0), m0 = mag(p0);
  double a[3][3], ma[3][3];
  const WeightedPoint2* ps[3] = {&p1, &p2, &p3};
  for (int i = 0; i < 3; ++i) {
    a[i][0] = ps[i]->x[0] - p0.x[0];
    a[i][1] = ps[i]->x[1] - p0.x[1];
    a[i][2] = lift(*ps[i]) - h0;
    ma[i][0] = std::abs(ps[i]->x[0]) + std::abs(p0.x[0]);
    ma[i][1] = std::abs(ps[i]->x[1]) + std::abs(p0.x[1]);
    ma[i][2] = mag(*ps[i]) + m0;
  }
  double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  double perm = ma[0][0] * (ma[1][1] * ma[2][2] + ma[1][2] * ma[2][1]) +
                ma[0][1] * (ma[1][0] * ma[2][2] + ma[1][2] * ma[2][0]) +
                ma[0][2] * (ma[1][0] * ma[2][1] + ma[1][1] * ma[2][0]);
  double bound = 1e-13 * perm;
  if (det > bound) return 1;
  if (det < -bound) return -1;
  auto rlift = [](const WeightedPoint2& p) {
    Rational x(p.x[0]), y(p.x[1]), w(p.w);
    return Rational(x * x + y * y - w * w);
  };
  Rational r[3][3];
  Rational x0(p0.x[0]), y0(p0.x[1]);
  Rational rh0 = rlift(p0);
  for (int i = 0; i < 3; ++i) {
    r[i][0] = Rational(ps[i]->x[0]) - x0;
    r[i][1] = Rational(ps[i]->x[1]) - y0;
    r[i][2] = rlift(*ps[i]) - rh0;
  }
  Rational d = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) -
               r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
               r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
  return sign_of(d);
}

}  // namespace gibbsgeom
