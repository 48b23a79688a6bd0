#include "gibbsgeom/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gibbsgeom/facet.hpp"
#include "gibbsgeom/rng.hpp"

namespace gibbsgeom {

using std::numbers::pi;

Vec unit_at(double angle) { return {std::cos(angle), std::sin(angle), 0}; }

double hemisphere_angle(const Vec& n) { return std::atan2(n[1], n[0]); }

CounterexampleSpec shipped_counterexample() {
  CounterexampleSpec s;
  s.N = 10;
  s.n1 = unit_at(pi / 3);
  s.n2 = unit_at(-pi / 3);
  s.u = unit_at(-pi / 4);
  s.v = unit_at(pi / 4);
  s.eps = 0.1;
  s.a = 1.0;
  s.b = 2.0;
  s.z = 10.0;
  s.q = MarkDistribution::facets(HemisphereUniform{}, UniformLaw{0.5, 2.0});
  return s;
}

static void check_unit(const Vec& n, const char* what) {
  if (std::abs(norm(n) - 1.0) > 1e-12 || n[2] != 0 || !in_upper_hemisphere(n, 2))
    throw std::invalid_argument(std::string(what) + " must be a unit vector in S^1_+");
}

void validate(const CounterexampleSpec& s) {
  if (s.N < 2 || s.N % 2) throw std::invalid_argument("N must be a positive even integer");
  check_unit(s.n1, "n1");
  check_unit(s.n2, "n2");
  check_unit(s.u, "u");
  check_unit(s.v, "v");
  if (s.n1 == s.n2) throw std::invalid_argument("n1 and n2 must differ");
  if (!(s.eps > 0 && s.a > 0 && s.a <= s.b && s.z > 0)) throw std::invalid_argument("need eps, a, z > 0 and a <= b");
  if (std::abs(hemisphere_angle(s.u) - hemisphere_angle(s.v)) <= 2 * s.eps)
    throw std::invalid_argument("direction caps overlap");
  validate(s.q, 2);
  if (!std::holds_alternative<FacetMarkDist>(s.q.kind)) throw std::invalid_argument("Q must be a facet mark law");
}

std::array<double, 2> line_intersection_distances(const Vec& x, const Vec& y, const Vec& n, const Vec& m) {
  double det = n[0] * m[1] - n[1] * m[0];
  double b0 = n[0] * x[0] + n[1] * x[1];
  double b1 = m[0] * y[0] + m[1] * y[1];
  Vec p{(b0 * m[1] - n[1] * b1) / det, (n[0] * b1 - m[0] * b0) / det, 0};
  return {norm(x - p), norm(y - p)};
}

double gamma_N_radius(const CounterexampleSpec& s) {
  auto f = line_intersection_distances({1, 0, 0}, {-1, 0, 0}, s.n1, s.n2);
  return 1.1 * std::max(f[0], f[1]);
}

Configuration gen_gamma_N(const CounterexampleSpec& s) {
  validate(s);
  double r = gamma_N_radius(s);
  int h = s.N / 2;
  std::vector<MarkedPoint> pts;
  for (int i = 0; i < h; ++i) {
    double c = 1.0 - static_cast<double>(i) / h;
    pts.push_back({{c, 0, 0}, FacetMark{s.n1, r}});
    pts.push_back({{-c, 0, 0}, FacetMark{s.n2, r}});
  }
  return Configuration(2, std::move(pts));
}

struct Cap {
  double lo, hi;
};

static Cap cap_of(const Vec& w, double eps) {
  double t = hemisphere_angle(w);
  return {std::max(t - eps, -pi / 2 + 1e-15), std::min(t + eps, pi / 2)};
}

static double sup_f(const Vec& n, const Vec& m) {
  double best = 0;
  const double g[3] = {-1, 0, 1};
  for (double x0 : g)
    for (double x1 : g)
      for (double y0 : g)
        for (double y1 : g) {
          auto f = line_intersection_distances({x0, x1, 0}, {y0, y1, 0}, n, m);
          best = std::max({best, f[0], f[1]});
        }
  return best;
}

LambdaScale find_lambda_scale(const CounterexampleSpec& s, std::uint64_t seed, long samples) {
  validate(s);
  Cap cu = cap_of(s.u, s.eps), cv = cap_of(s.v, s.eps);
  const int G = 33;
  double best = 0, bu = cu.lo, bv = cv.lo;
  double du = (cu.hi - cu.lo) / (G - 1), dv = (cv.hi - cv.lo) / (G - 1);
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j) {
      double tu = cu.lo + du * i, tv = cv.lo + dv * j;
      double f = sup_f(unit_at(tu), unit_at(tv));
      if (f > best) best = f, bu = tu, bv = tv;
    }
  for (int round = 0; round < 4; ++round) {
    double lu = std::max(cu.lo, bu - du), hu = std::min(cu.hi, bu + du);
    double lv = std::max(cv.lo, bv - dv), hv = std::min(cv.hi, bv + dv);
    du = (hu - lu) / (G - 1);
    dv = (hv - lv) / (G - 1);
    for (int i = 0; i < G; ++i)
      for (int j = 0; j < G; ++j) {
        double tu = lu + du * i, tv = lv + dv * j;
        double f = sup_f(unit_at(tu), unit_at(tv));
        if (f > best) best = f, bu = tu, bv = tv;
      }
  }
  LambdaScale out;
  out.sup_f = best;
  out.s = best > 0 ? 0.9 * s.a / best : 1.0;
  StreamRng rng(seed, 0x5CA1E);
  for (long t = 0; t < samples; ++t) {
    Vec x{rng.uniform(-out.s, out.s), rng.uniform(-out.s, out.s), 0};
    Vec y{rng.uniform(-out.s, out.s), rng.uniform(-out.s, out.s), 0};
    Vec n = unit_at(rng.uniform(cu.lo, cu.hi)), m = unit_at(rng.uniform(cv.lo, cv.hi));
    auto f = line_intersection_distances(x, y, n, m);
    if (!(f[0] < s.a && f[1] < s.a)) throw std::logic_error("lambda scale failed validation");
    ++out.validated;
  }
  return out;
}

double z_lower_bound_log_term(long k, double gamma_u, double gamma_v, double delta) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  double kd = static_cast<double>(k);
  return kd * kd - delta - gamma_u - gamma_v + kd * (std::log(gamma_u) + std::log(gamma_v)) -
         2.0 * std::lgamma(kd + 1.0);
}

double cap_probability(const CounterexampleSpec& s, const Vec& w) {
  const auto& f = std::get<FacetMarkDist>(s.q.kind);
  Cap c = cap_of(w, s.eps);
  double pdir = 0;
  if (std::holds_alternative<HemisphereUniform>(f.direction)) {
    pdir = (c.hi - c.lo) / pi;
  } else {
    const auto& a = std::get<DirectionAtoms>(f.direction);
    for (std::size_t i = 0; i < a.dirs.size(); ++i) {
      double t = hemisphere_angle(a.dirs[i]);
      if (t >= c.lo && t <= c.hi) pdir += a.probs[i];
    }
  }
  return pdir * law_prob(f.radius, s.a, s.b);
}

CapMasses cap_masses(const CounterexampleSpec& s, double scale) {
  double mass = s.z * 4.0 * scale * scale;
  CapMasses c;
  c.gamma_u = mass * cap_probability(s, s.u);
  c.gamma_v = mass * cap_probability(s, s.v);
  c.delta = mass - c.gamma_u - c.gamma_v;
  return c;
}

static double conditional_radius(const ScalarLaw& law, double a, double b, StreamRng& rng) {
  if (auto u = std::get_if<UniformLaw>(&law)) {
    double lo = std::max(u->lo, a), hi = std::min(u->hi, b);
    if (!(lo < hi)) throw std::invalid_argument("Q gives no mass to radii in (a,b)");
    double r = lo + (hi - lo) * rng.open_uniform();
    return std::clamp(r, std::nextafter(lo, hi), std::nextafter(hi, lo));
  }
  const auto& at = std::get<AtomLaw>(law);
  double tot = 0;
  for (std::size_t i = 0; i < at.values.size(); ++i)
    if (at.values[i] > a && at.values[i] < b) tot += at.probs[i];
  if (tot <= 0) throw std::invalid_argument("Q gives no mass to radii in (a,b)");
  double u = rng.uniform() * tot, c = 0;
  double last = 0;
  for (std::size_t i = 0; i < at.values.size(); ++i)
    if (at.values[i] > a && at.values[i] < b) {
      c += at.probs[i];
      last = at.values[i];
      if (u < c) return last;
    }
  return last;
}

static Vec conditional_direction(const CounterexampleSpec& s, const Vec& w, StreamRng& rng) {
  const auto& f = std::get<FacetMarkDist>(s.q.kind);
  Cap c = cap_of(w, s.eps);
  if (std::holds_alternative<HemisphereUniform>(f.direction)) return unit_at(c.lo + (c.hi - c.lo) * rng.uniform());
  const auto& a = std::get<DirectionAtoms>(f.direction);
  std::vector<std::size_t> in;
  std::vector<double> p;
  for (std::size_t i = 0; i < a.dirs.size(); ++i) {
    double t = hemisphere_angle(a.dirs[i]);
    if (t >= c.lo && t <= c.hi) in.push_back(i), p.push_back(a.probs[i]);
  }
  if (in.empty()) throw std::invalid_argument("Q gives no mass to the direction cap");
  double tot = 0;
  for (double x : p) tot += x;
  double u = rng.uniform() * tot, acc = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    acc += p[i];
    if (u < acc) return a.dirs[in[i]];
  }
  return a.dirs[in.back()];
}

ALambdaSample sample_A_Lambda_2k(long k, const CounterexampleSpec& s, double scale, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  validate(s);
  Window box = Window::box(2, {-scale, -scale, 0}, {scale, scale, 0});
  std::vector<MarkedPoint> pts;
  std::vector<int> side;
  Configuration g(2);
  StreamRng rng(seed, 0xA2C);
  for (long i = 0; i < 2 * k; ++i) {
    const Vec& w = i < k ? s.u : s.v;
    while (true) {
      MarkedPoint p;
      p.x = sample_location(box, rng);
      Vec n = conditional_direction(s, w, rng);
      p.mark = FacetMark{n, conditional_radius(std::get<FacetMarkDist>(s.q.kind).radius, s.a, s.b, rng)};
      if (g.insert(p)) break;
    }
  }
  ALambdaSample out;
  out.config = g;
  std::vector<Facet> fs = facets_of(g);
  Cap cu = cap_of(s.u, s.eps);
  std::vector<bool> in_u(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) {
    double t = hemisphere_angle(fs[i].normal);
    in_u[i] = t >= cu.lo && t <= cu.hi;
  }
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      PairIntersection pi = pair_intersection(fs[i], fs[j], 2);
      if (!(pi.dim == 0 && pi.finite && !pi.degenerate)) continue;
      if (in_u[i] != in_u[j]) ++out.cross_pairs;
      else if (in_u[i]) ++out.within_u;
      else ++out.within_v;
    }
  FacetEnergyModel m{2, {-1.0}, 1e-9};
  out.energy = facet_energy(g, m);
  return out;
}

std::vector<CounterexampleRow> counterexample_table(const CounterexampleSpec& s, long k_lo, long k_hi,
                                                    std::uint64_t seed) {
  LambdaScale ls = find_lambda_scale(s, seed);
  CapMasses cm = cap_masses(s, ls.s);
  std::vector<CounterexampleRow> rows;
  for (long k = k_lo; k <= k_hi; ++k) {
    ALambdaSample a = sample_A_Lambda_2k(k, s, ls.s, derive_seed(seed, static_cast<std::uint64_t>(k)));
    rows.push_back({k, z_lower_bound_log_term(k, cm.gamma_u, cm.gamma_v, cm.delta), a.cross_pairs, a.energy});
  }
  return rows;
}

static nlohmann::json vec2(const Vec& v) { return nlohmann::json::array({v[0], v[1]}); }

static Vec vec_or_angle(const nlohmann::json& j) {
  if (j.is_number()) return unit_at(j.get<double>());
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("direction must be an angle or a 2-vector");
  return {j.at(0).get<double>(), j.at(1).get<double>(), 0};
}

nlohmann::json to_json(const CounterexampleSpec& s) {
  return {{"N", s.N}, {"n1", vec2(s.n1)}, {"n2", vec2(s.n2)}, {"u", vec2(s.u)}, {"v", vec2(s.v)},
          {"eps", s.eps}, {"a", s.a}, {"b", s.b}, {"z", s.z}, {"q", to_json(s.q)}};
}

CounterexampleSpec counterexample_from_json(const nlohmann::json& j) {
  CounterexampleSpec s = shipped_counterexample();
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "N") s.N = it->get<int>();
    else if (k == "n1") s.n1 = vec_or_angle(*it);
    else if (k == "n2") s.n2 = vec_or_angle(*it);
    else if (k == "u") s.u = vec_or_angle(*it);
    else if (k == "v") s.v = vec_or_angle(*it);
    else if (k == "eps") s.eps = it->get<double>();
    else if (k == "a") s.a = it->get<double>();
    else if (k == "b") s.b = it->get<double>();
    else if (k == "z") s.z = it->get<double>();
    else if (k == "q") s.q = mark_distribution_from_json(*it, 2);
    else throw std::invalid_argument("unknown counterexample field: " + k);
  }
  validate(s);
  return s;
}

}  // namespace gibbsgeom
