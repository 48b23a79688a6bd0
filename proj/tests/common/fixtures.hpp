#pragma once

#include <cmath>
#include <vector>

#include "gibbsgeom/laguerre_energy.hpp"
#include "gibbsgeom/rng.hpp"

namespace fixtures {

using namespace gibbsgeom;

// Boundary configuration around [-1,1)^2: a heavy ring near radius 2, a middle ring,
// and sparse light points far away. The inner configuration holds 1..4 points.
struct RingFixture {
  Configuration inner{2};
  Configuration xi{2};
};

inline RingFixture ring_fixture(std::uint64_t seed) {
  StreamRng r(seed, 77);
  std::vector<MarkedPoint> xi, in;
  auto ring = [&](int cnt, double rlo, double rhi, double wlo, double whi) {
    double ph = r.uniform(0, 2 * M_PI);
    for (int i = 0; i < cnt; ++i) {
      double a = ph + 2 * M_PI * (i + r.uniform(-0.2, 0.2)) / cnt, rad = r.uniform(rlo, rhi);
      xi.push_back({{rad * std::cos(a), rad * std::sin(a), 0}, WeightMark{r.uniform(wlo, whi)}});
    }
  };
  ring(16, 1.8, 2.2, 1.0, 1.5);
  ring(30, 5, 8, 0.5, 2);
  ring(20, 16, 40, 0.1, 1);
  int k = 1 + static_cast<int>(r.below(4));
  for (int i = 0; i < k; ++i) in.push_back({{r.uniform(-1, 1), r.uniform(-1, 1), 0}, WeightMark{r.uniform(0.2, 1)}});
  return {Configuration(2, in), Configuration(2, xi)};
}

constexpr double kRingA = 1;
constexpr long kRingL = 6;
constexpr long kRingN = 13;

inline bool ring_fixture_admissible(const RingFixture& f) {
  Configuration all = unite(f.inner, f.xi);
  GPWitnesses gp = check_general_position(all);
  if (!gp.gp1 || !gp.gp2) return false;
  if (laguerre_energy(all).infinite || laguerre_energy(f.xi).infinite) return false;
  CSetReport c = check_C_set(f.xi, Window::lambda_n(1, 2), kRingA, kRingL, kRingN);
  return c.c1 && c.c2 && in_Mbar_l(f.xi, static_cast<int>(kRingL), 25);
}

// Parametric crossing test for two segment facets: 1 crossing, 0 none, -1 too close to call.
inline int segments_cross(const MarkedPoint& a, const MarkedPoint& b) {
  const FacetMark& f = facet_mark(a);
  const FacetMark& g = facet_mark(b);
  double px = a.x[0], py = a.x[1], dx = f.normal[1], dy = -f.normal[0];
  double qx = b.x[0], qy = b.x[1], ex = g.normal[1], ey = -g.normal[0];
  double den = dx * ey - dy * ex;
  if (std::abs(den) < 1e-9) return -1;
  double t = ((qx - px) * ey - (qy - py) * ex) / den;
  double s = ((qx - px) * dy - (qy - py) * dx) / den;
  double mt = f.radius - std::abs(t), ms = g.radius - std::abs(s);
  if (std::abs(mt) < 1e-7 || std::abs(ms) < 1e-7) return -1;
  return (mt > 0 && ms > 0) ? 1 : 0;
}

inline long crossing_count(const Configuration& g) {
  long c = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) c += segments_cross(g[i], g[j]) == 1;
  return c;
}

inline Configuration random_weighted(std::uint64_t seed, int n, double wlo, double whi) {
  StreamRng r(seed, 2);
  std::vector<MarkedPoint> pts;
  for (int i = 0; i < n; ++i) pts.push_back({{r.uniform(-1, 1), r.uniform(-1, 1), 0}, WeightMark{r.uniform(wlo, whi)}});
  return Configuration(2, pts);
}

}  // namespace fixtures
