#include "gibbsgeom/facet.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gibbsgeom {

void set_thread_budget(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

void validate(const FacetEnergyModel& m) {
  if (m.d != 2 && m.d != 3) throw std::invalid_argument("facet model needs d in {2,3}");
  if (static_cast<int>(m.a.size()) != m.d - 1) throw std::invalid_argument("need coefficients a_2..a_d");
  if (!(m.tolerance >= 0)) throw std::invalid_argument("negative tolerance");
}

Facet facet_of(const MarkedPoint& p) {
  const FacetMark& f = facet_mark(p);
  return Facet{p.x, f.normal, f.radius};
}

std::array<Vec, 2> segment_endpoints(const Facet& f) {
  Vec t{f.normal[1], -f.normal[0], 0};
  return {f.center - f.radius * t, f.center + f.radius * t};
}

static Vec cross(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

static double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

static PairIntersection pair2(const Facet& f1, const Facet& f2, double tol) {
  PairIntersection r;
  Vec t1{f1.normal[1], -f1.normal[0], 0};
  Vec t2{f2.normal[1], -f2.normal[0], 0};
  Vec w = f2.center - f1.center;
  double c = cross2(t1, t2);
  if (std::abs(c) > tol) {
    double s = cross2(w, t2) / c;
    double u = cross2(w, t1) / c;
    double m1 = f1.radius - std::abs(s);
    double m2 = f2.radius - std::abs(u);
    if (m1 < -tol || m2 < -tol) return r;
    r.dim = 0;
    r.measure = 1;
    r.degenerate = m1 <= tol || m2 <= tol;
    return r;
  }
  // parallel within tolerance
  if (std::abs(cross2(w, t1)) > tol) return r;
  double s0 = dot(w, t1);
  double lo = std::max(-f1.radius, s0 - f2.radius);
  double hi = std::min(f1.radius, s0 + f2.radius);
  if (hi - lo < -tol) return r;
  if (hi - lo <= tol) {
    r.dim = 0;
    r.measure = 1;
    r.degenerate = true;
    return r;
  }
  r.dim = 1;
  r.measure = hi - lo;
  r.finite = false;
  return r;
}

struct Line3 {
  Vec p;
  Vec dir;  // unit
};

// Intersection line of the planes of two facets; requires nonparallel normals.
static Line3 plane_line(const Facet& f1, const Facet& f2) {
  Vec d = cross(f1.normal, f2.normal);
  double dd = dot(d, d);
  double h1 = dot(f1.normal, f1.center), h2 = dot(f2.normal, f2.center);
  // p = (h1 (n2 x d) + h2 (d x n1)) / |d|^2 lies on both planes
  Vec p = (1.0 / dd) * (h1 * cross(f2.normal, d) + h2 * cross(d, f1.normal));
  return {p, (1.0 / std::sqrt(dd)) * d};
}

struct Interval {
  double lo, hi;
  bool empty() const { return hi < lo; }
};

static Interval chord(const Facet& f, const Line3& l) {
  double t0 = dot(f.center - l.p, l.dir);
  Vec q = l.p + t0 * l.dir;
  double h2 = f.radius * f.radius - dot(q - f.center, q - f.center);
  if (h2 < 0) {
    // allow a tolerance-sized miss to surface as a touching point
    double miss = norm(q - f.center) - f.radius;
    return {t0 + miss, t0 - miss};
  }
  double h = std::sqrt(h2);
  return {t0 - h, t0 + h};
}

static PairIntersection pair3(const Facet& f1, const Facet& f2, double tol) {
  PairIntersection r;
  Vec d = cross(f1.normal, f2.normal);
  if (norm(d) <= tol) {
    if (std::abs(dot(f1.normal, f2.center - f1.center)) > tol) return r;
    double dist = norm(f2.center - f1.center);
    double gap = f1.radius + f2.radius - dist;
    if (gap < -tol) return r;
    if (gap <= tol) {
      r.dim = 0;
      r.degenerate = true;
      return r;
    }
    r.dim = 2;
    r.measure = M_PI;  // area is irrelevant once the indicator is off
    r.finite = false;
    return r;
  }
  Line3 l = plane_line(f1, f2);
  Interval a = chord(f1, l), b = chord(f2, l);
  double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
  double len = hi - lo;
  if (len < -tol) return r;
  if (len <= tol) {
    r.dim = 0;
    r.degenerate = true;
    return r;
  }
  r.dim = 1;
  r.measure = len;
  return r;
}

PairIntersection pair_intersection(const Facet& f1, const Facet& f2, int d, double tol) {
  if (d == 2) return pair2(f1, f2, tol);
  if (d == 3) return pair3(f1, f2, tol);
  throw std::invalid_argument("pair_intersection needs d in {2,3}");
}

static double det3(const Vec& a, const Vec& b, const Vec& c) { return dot(a, cross(b, c)); }

static bool coplanar(const Facet& a, const Facet& b, double tol) {
  return norm(cross(a.normal, b.normal)) <= tol && std::abs(dot(a.normal, b.center - a.center)) <= tol;
}

static TripleIntersection interval_verdict(double len, double tol) {
  TripleIntersection r;
  if (len < -tol) return r;
  if (len <= tol) {
    r.count = 1;
    r.degenerate = true;
    return r;
  }
  r.count = 0;
  r.finite = false;
  return r;
}

// Three disks in one plane: candidates are the centers and the circle-circle
// intersection points; the centroid of the admissible ones decides interior.
static TripleIntersection coplanar_three(const Facet* f[3], double tol) {
  std::vector<Vec> cand;
  for (int i = 0; i < 3; ++i) cand.push_back(f[i]->center);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      Vec w = f[j]->center - f[i]->center;
      double dist = norm(w);
      if (dist == 0) continue;
      double ri = f[i]->radius, rj = f[j]->radius;
      double a = (dist * dist + ri * ri - rj * rj) / (2 * dist);
      double h2 = ri * ri - a * a;
      Vec e = (1.0 / dist) * w;
      Vec base = f[i]->center + a * e;
      if (h2 < 0) {
        cand.push_back(base);
        continue;
      }
      Vec perp = cross(f[i]->normal, e);
      double h = std::sqrt(h2);
      cand.push_back(base + h * perp);
      cand.push_back(base - h * perp);
    }
  auto margin = [&](const Vec& p) {
    double m = INFINITY;
    for (int k = 0; k < 3; ++k) m = std::min(m, f[k]->radius - norm(p - f[k]->center));
    return m;
  };
  std::vector<Vec> ok;
  for (const auto& p : cand)
    if (margin(p) >= -tol) ok.push_back(p);
  TripleIntersection r;
  if (ok.empty()) return r;
  Vec c{};
  for (const auto& p : ok) c = c + p;
  c = (1.0 / static_cast<double>(ok.size())) * c;
  double best = margin(c);
  for (const auto& p : ok) best = std::max(best, margin(p));
  if (best > tol) {
    r.finite = false;
    return r;
  }
  r.count = 1;
  r.degenerate = true;
  return r;
}

TripleIntersection triple_intersection_h0(const Facet& f1, const Facet& f2, const Facet& f3, double tol) {
  const Facet* f[3] = {&f1, &f2, &f3};
  TripleIntersection r;
  double D = det3(f1.normal, f2.normal, f3.normal);
  if (std::abs(D) > tol) {
    Vec h{dot(f1.normal, f1.center), dot(f2.normal, f2.center), dot(f3.normal, f3.center)};
    Vec p = (1.0 / D) * (h[0] * cross(f2.normal, f3.normal) + h[1] * cross(f3.normal, f1.normal) +
                         h[2] * cross(f1.normal, f2.normal));
    double m = INFINITY;
    for (int k = 0; k < 3; ++k) m = std::min(m, f[k]->radius - norm(p - f[k]->center));
    if (m < -tol) return r;
    r.count = 1;
    r.degenerate = m <= tol;
    return r;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (pair3(*f[i], *f[j], tol).dim < 0) return r;
  bool c01 = coplanar(f1, f2, tol), c02 = coplanar(f1, f3, tol), c12 = coplanar(f2, f3, tol);
  if (c01 && c02 && c12) return coplanar_three(f, tol);
  int pi = -1, pj = -1, pk = -1;
  if (c01) pi = 0, pj = 1, pk = 2;
  else if (c02) pi = 0, pj = 2, pk = 1;
  else if (c12) pi = 1, pj = 2, pk = 0;
  if (pi >= 0) {
    Line3 l = plane_line(*f[pi], *f[pk]);
    Interval a = chord(*f[pi], l), b = chord(*f[pj], l), c = chord(*f[pk], l);
    return interval_verdict(std::min({a.hi, b.hi, c.hi}) - std::max({a.lo, b.lo, c.lo}), tol);
  }
  Line3 l = plane_line(f1, f2);
  if (std::abs(dot(f3.normal, l.dir)) <= tol && std::abs(dot(f3.normal, l.p - f3.center)) <= tol) {
    Interval a = chord(f1, l), b = chord(f2, l), c = chord(f3, l);
    return interval_verdict(std::min({a.hi, b.hi, c.hi}) - std::max({a.lo, b.lo, c.lo}), tol);
  }
  if (D != 0) {
    // nearly dependent normals: a far-away unique point would be a knife edge
    Vec h{dot(f1.normal, f1.center), dot(f2.normal, f2.center), dot(f3.normal, f3.center)};
    Vec p = (1.0 / D) * (h[0] * cross(f2.normal, f3.normal) + h[1] * cross(f3.normal, f1.normal) +
                         h[2] * cross(f1.normal, f2.normal));
    double m = INFINITY;
    for (int k = 0; k < 3; ++k) m = std::min(m, f[k]->radius - norm(p - f[k]->center));
    if (m >= -tol) r.degenerate = true;
  }
  return r;
}

std::vector<Facet> facets_of(const Configuration& g) {
  std::vector<Facet> fs;
  fs.reserve(g.size());
  for (const auto& p : g) fs.push_back(facet_of(p));
  return fs;
}

// Fixed-shape pairwise reduction; identical for serial and parallel callers.
static double tree_sum(std::vector<double> v) {
  if (v.empty()) return 0;
  while (v.size() > 1) {
    std::size_t h = (v.size() + 1) / 2;
    for (std::size_t i = 0; i + h < v.size(); ++i) v[i] += v[i + h];
    v.resize(h);
  }
  return v[0];
}

static double row_energy(const std::vector<Facet>& fs, std::size_t i, const FacetEnergyModel& m) {
  double pairs = 0, triples = 0;
  std::size_t n = fs.size();
  std::vector<std::size_t> hit;
  for (std::size_t j = i + 1; j < n; ++j) {
    PairIntersection pi = pair_intersection(fs[i], fs[j], m.d, m.tolerance);
    pairs += pi.contribution();
    if (m.d == 3 && pi.dim >= 0) hit.push_back(j);
  }
  double e = m.coefficient(2) * pairs;
  if (m.d == 3) {
    for (std::size_t a = 0; a < hit.size(); ++a)
      for (std::size_t b = a + 1; b < hit.size(); ++b)
        triples += triple_intersection_h0(fs[i], fs[hit[a]], fs[hit[b]], m.tolerance).contribution();
    e += m.coefficient(3) * triples;
  }
  return e;
}

double facet_energy(const Configuration& g, const FacetEnergyModel& m, Execution ex) {
  validate(m);
  if (g.dim() != m.d) throw std::invalid_argument("configuration dimension differs from model");
  std::vector<Facet> fs = facets_of(g);
  std::vector<double> rows(fs.size(), 0.0);
  const long n = static_cast<long>(fs.size());
  if (ex == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = row_energy(fs, static_cast<std::size_t>(i), m);
  } else {
    for (long i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = row_energy(fs, static_cast<std::size_t>(i), m);
  }
  return tree_sum(std::move(rows));
}

double facet_energy_with(const std::vector<Facet>& fs, const Facet& p, const FacetEnergyModel& m) {
  double pairs = 0, triples = 0;
  std::vector<std::size_t> hit;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    PairIntersection pi = pair_intersection(p, fs[j], m.d, m.tolerance);
    pairs += pi.contribution();
    if (m.d == 3 && pi.dim >= 0) hit.push_back(j);
  }
  double e = m.coefficient(2) * pairs;
  if (m.d == 3) {
    for (std::size_t a = 0; a < hit.size(); ++a)
      for (std::size_t b = a + 1; b < hit.size(); ++b)
        triples += triple_intersection_h0(p, fs[hit[a]], fs[hit[b]], m.tolerance).contribution();
    e += m.coefficient(3) * triples;
  }
  return e;
}

long crossing_pairs(const Configuration& g, double tol) {
  std::vector<Facet> fs = facets_of(g);
  long c = 0;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      PairIntersection pi = pair_intersection(fs[i], fs[j], g.dim(), tol);
      if (pi.dim == 0 && pi.finite && !pi.degenerate) ++c;
    }
  return c;
}

TauReport compute_tau_report(double mark_sup, long l0, const Window& lambda) {
  if (!lambda.bounded()) throw std::invalid_argument("compute_tau needs a bounded window");
  if (!(mark_sup >= 0)) throw std::invalid_argument("negative mark supremum");
  TauReport r;
  r.l1 = static_cast<long>(std::floor(lambda.max_norm() + mark_sup)) + 1;
  r.l2 = std::max(l0, r.l1);
  double need = static_cast<double>(2 * r.l2 + 1) - lambda.origin_depth();
  r.tau = std::max(1L, static_cast<long>(std::ceil(need)));
  return r;
}

long compute_tau(double mark_sup, long l0, const Window& lambda) { return compute_tau_report(mark_sup, l0, lambda).tau; }

double flawed_tau(double l, double m) { return 2 * l + 2 * m + 1; }

bool in_dilation(const Window& lambda, double r, const Vec& x) { return lambda.distance(x) <= r; }

double truncated_conditional_energy(const Configuration& gamma_lambda, const Configuration& xi,
                                    const Window& lambda, double r, const FacetEnergyModel& m) {
  for (const auto& p : xi)
    if (lambda.contains(p.x)) throw std::invalid_argument("boundary configuration meets the window");
  std::vector<MarkedPoint> all, outside;
  for (const auto& p : gamma_lambda)
    if (in_dilation(lambda, r, p.x)) all.push_back(p);
  for (const auto& p : xi)
    if (in_dilation(lambda, r, p.x)) {
      all.push_back(p);
      outside.push_back(p);
    }
  return facet_energy(Configuration(m.d, all), m) - facet_energy(Configuration(m.d, outside), m);
}

double conditional_energy_facet(const Configuration& gamma_lambda, const Configuration& xi,
                                const Window& lambda, long l0, const FacetEnergyModel& m) {
  long tau = compute_tau(mark_sup(gamma_lambda), l0, lambda);
  return truncated_conditional_energy(gamma_lambda, xi, lambda, static_cast<double>(tau), m);
}

}  // namespace gibbsgeom
