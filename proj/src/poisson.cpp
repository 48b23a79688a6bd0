#include "gibbsgeom/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gibbsgeom {

MarkDistribution MarkDistribution::facets(DirectionLaw dir, ScalarLaw radius) {
  MarkDistribution q;
  q.kind = FacetMarkDist{std::move(dir), std::move(radius)};
  return q;
}

MarkDistribution MarkDistribution::weights(ScalarLaw law) {
  MarkDistribution q;
  q.kind = WeightDist{std::move(law)};
  return q;
}

static void validate_atoms(const std::vector<double>& probs, std::size_t n) {
  if (probs.size() != n || n == 0) throw std::invalid_argument("atom law needs one probability per atom");
  double s = 0;
  for (double p : probs) {
    if (!(p >= 0)) throw std::invalid_argument("negative atom probability");
    s += p;
  }
  if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("atom probabilities must sum to 1");
}

static void validate_positive_law(const ScalarLaw& law) {
  if (auto u = std::get_if<UniformLaw>(&law)) {
    if (!(u->lo >= 0 && u->lo < u->hi && std::isfinite(u->hi)))
      throw std::invalid_argument("uniform law needs 0 <= lo < hi < inf");
    return;
  }
  const auto& a = std::get<AtomLaw>(law);
  validate_atoms(a.probs, a.values.size());
  for (double v : a.values)
    if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument("atoms must be positive and finite");
}

void validate(const MarkDistribution& q, int dim) {
  if (auto f = std::get_if<FacetMarkDist>(&q.kind)) {
    validate_positive_law(f->radius);
    if (auto a = std::get_if<DirectionAtoms>(&f->direction)) {
      validate_atoms(a->probs, a->dirs.size());
      for (const auto& n : a->dirs) validate_point(MarkedPoint{{}, FacetMark{n, 1.0}}, dim);
    }
    return;
  }
  validate_positive_law(std::get<WeightDist>(q.kind).law);
}

double law_sup(const ScalarLaw& law) {
  if (auto u = std::get_if<UniformLaw>(&law)) return u->hi;
  const auto& a = std::get<AtomLaw>(law);
  return *std::max_element(a.values.begin(), a.values.end());
}

double law_inf(const ScalarLaw& law) {
  if (auto u = std::get_if<UniformLaw>(&law)) return u->lo;
  const auto& a = std::get<AtomLaw>(law);
  return *std::min_element(a.values.begin(), a.values.end());
}

bool in_support(const ScalarLaw& law, double v) {
  if (auto u = std::get_if<UniformLaw>(&law)) return v > u->lo && v < u->hi;
  const auto& a = std::get<AtomLaw>(law);
  return std::find(a.values.begin(), a.values.end(), v) != a.values.end();
}

double law_prob(const ScalarLaw& law, double lo, double hi) {
  if (auto u = std::get_if<UniformLaw>(&law)) {
    double len = std::min(hi, u->hi) - std::max(lo, u->lo);
    return len > 0 ? len / (u->hi - u->lo) : 0.0;
  }
  const auto& a = std::get<AtomLaw>(law);
  double p = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    if (a.values[i] > lo && a.values[i] < hi) p += a.probs[i];
  return p;
}

std::uint64_t poisson_count(double mean, double u) {
  if (!(mean >= 0)) throw std::invalid_argument("negative Poisson mean");
  if (mean == 0) return 0;
  double cdf = 0;
  double limit = mean + 40.0 * std::sqrt(mean) + 100.0;
  double logm = std::log(mean);
  for (std::uint64_t k = 0;; ++k) {
    double kd = static_cast<double>(k);
    cdf += std::exp(-mean + kd * logm - std::lgamma(kd + 1.0));
    if (u < cdf || kd > limit) return k;
  }
}

static std::size_t pick_atom(const std::vector<double>& probs, double u) {
  double c = 0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    c += probs[i];
    if (u < c) return i;
  }
  return probs.size() - 1;
}

static double sample_scalar(const ScalarLaw& law, StreamRng& rng) {
  double u = rng.open_uniform();
  if (auto un = std::get_if<UniformLaw>(&law)) {
    double v = un->lo + (un->hi - un->lo) * u;
    return std::clamp(v, std::nextafter(un->lo, un->hi), std::nextafter(un->hi, un->lo));
  }
  const auto& a = std::get<AtomLaw>(law);
  return a.values[pick_atom(a.probs, u)];
}

static Vec sample_direction(const DirectionLaw& law, int dim, StreamRng& rng) {
  if (auto a = std::get_if<DirectionAtoms>(&law)) return a->dirs[pick_atom(a->probs, rng.uniform())];
  Vec n{};
  if (dim == 1) {
    n[0] = 1;
  } else if (dim == 2) {
    double th = 2.0 * std::numbers::pi * rng.uniform();
    n = {std::cos(th), std::sin(th), 0};
  } else {
    double s = 0;
    do {
      for (int i = 0; i < 3; ++i) n[i] = rng.normal();
      s = norm(n);
    } while (s < 1e-8);
    n = (1.0 / s) * n;
  }
  return to_upper_hemisphere(n, dim);
}

Mark sample_mark(const MarkDistribution& q, int dim, StreamRng& rng) {
  if (auto f = std::get_if<FacetMarkDist>(&q.kind)) {
    Vec n = sample_direction(f->direction, dim, rng);
    double r = sample_scalar(f->radius, rng);
    return FacetMark{n, r};
  }
  return WeightMark{sample_scalar(std::get<WeightDist>(q.kind).law, rng)};
}

Mark sample_mark(const MarkDistribution& q, int dim, std::uint64_t seed, std::uint64_t stream,
                 std::uint64_t field0) {
  StreamRng rng(seed, stream, field0);
  return sample_mark(q, dim, rng);
}

Vec sample_location(const Window& w, StreamRng& rng) {
  int d = w.dim();
  Vec x{};
  if (w.is_box()) {
    const Box& b = w.as_box();
    for (int i = 0; i < d; ++i) {
      x[i] = b.lower[i] + (b.upper[i] - b.lower[i]) * rng.uniform();
      if (x[i] >= b.upper[i]) x[i] = std::nextafter(b.upper[i], b.lower[i]);
    }
    return x;
  }
  const Ball& b = w.as_ball();
  while (true) {
    for (int i = 0; i < d; ++i) x[i] = b.center[i] + b.radius * (2.0 * rng.uniform() - 1.0);
    if (w.contains(x)) return x;
    if (b.radius == 0) return b.center;
  }
}

Vec uniform_in(const Window& w, std::uint64_t seed, std::uint64_t stream, std::uint64_t field0) {
  StreamRng rng(seed, stream, field0);
  return sample_location(w, rng);
}

Configuration sample_poisson(const PoissonSpec& spec) {
  if (!(spec.z > 0)) throw std::invalid_argument("activity must be positive");
  if (!(spec.window.volume() > 0)) throw std::invalid_argument("window has zero volume");
  int d = spec.window.dim();
  validate(spec.marks, d);
  double u = to_open_unit(counter_draw(spec.seed, kCountStream, 0));
  std::uint64_t n = poisson_count(spec.z * spec.window.volume(), u);
  Configuration g(d);
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      StreamRng rng(spec.seed, i, 64 * attempt);
      MarkedPoint p;
      p.x = sample_location(spec.window, rng);
      p.mark = sample_mark(spec.marks, d, rng);
      if (g.insert(p)) break;
    }
  }
  return g;
}

HmReport check_Hm(const MarkDistribution& q, int dim, double delta) {
  HmReport r;
  if (!q.hm_verifiable) return r;
  double e = dim + 2.0 * delta;
  r.verdict = HmVerdict::holds;
  const ScalarLaw* law = nullptr;
  bool facet = false;
  if (auto f = std::get_if<FacetMarkDist>(&q.kind)) {
    law = &f->radius;
    facet = true;
  } else {
    law = &std::get<WeightDist>(q.kind).law;
  }
  if (auto a = std::get_if<AtomLaw>(law)) {
    double s = 0;
    for (std::size_t i = 0; i < a->values.size(); ++i) {
      double v = a->values[i];
      double nm = facet ? std::sqrt(1.0 + v * v) : v;
      s += a->probs[i] * std::exp(std::pow(nm, e));
    }
    r.integral = s;
  }
  return r;
}

static nlohmann::json law_to_json(const ScalarLaw& law) {
  if (auto u = std::get_if<UniformLaw>(&law)) return {{"kind", "uniform"}, {"lo", u->lo}, {"hi", u->hi}};
  const auto& a = std::get<AtomLaw>(law);
  return {{"kind", "atoms"}, {"values", a.values}, {"probs", a.probs}};
}

static ScalarLaw law_from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  require_keys(j, {"kind", "lo", "hi", "values", "probs"}, "law");
  if (kind == "uniform") return UniformLaw{j.at("lo").get<double>(), j.at("hi").get<double>()};
  if (kind == "atoms")
    return AtomLaw{j.at("values").get<std::vector<double>>(), j.at("probs").get<std::vector<double>>()};
  throw std::invalid_argument("unknown law kind: " + kind);
}

nlohmann::json to_json(const MarkDistribution& q) {
  if (auto f = std::get_if<FacetMarkDist>(&q.kind)) {
    nlohmann::json dir;
    if (std::holds_alternative<HemisphereUniform>(f->direction)) {
      dir = "hemisphere";
    } else {
      const auto& a = std::get<DirectionAtoms>(f->direction);
      nlohmann::json dirs = nlohmann::json::array();
      for (const auto& n : a.dirs) dirs.push_back({n[0], n[1], n[2]});
      dir = {{"dirs", dirs}, {"probs", a.probs}};
    }
    return {{"kind", "facet"}, {"direction", dir}, {"radius", law_to_json(f->radius)}};
  }
  return {{"kind", "weight"}, {"law", law_to_json(std::get<WeightDist>(q.kind).law)}};
}

MarkDistribution mark_distribution_from_json(const nlohmann::json& j, int dim) {
  std::string kind = j.at("kind").get<std::string>();
  require_keys(j, {"kind", "direction", "radius", "law"}, "mark distribution");
  MarkDistribution q;
  if (kind == "facet") {
    FacetMarkDist f;
    const auto& dir = j.at("direction");
    if (dir.is_string()) {
      if (dir.get<std::string>() != "hemisphere") throw std::invalid_argument("unknown direction law");
      f.direction = HemisphereUniform{};
    } else {
      DirectionAtoms a;
      require_keys(dir, {"dirs", "probs"}, "direction law");
      for (const auto& n : dir.at("dirs")) {
        Vec v{};
        for (std::size_t i = 0; i < n.size() && i < 3; ++i) v[i] = n.at(i).get<double>();
        a.dirs.push_back(v);
      }
      a.probs = dir.at("probs").get<std::vector<double>>();
      f.direction = a;
    }
    f.radius = law_from_json(j.at("radius"));
    q.kind = f;
  } else if (kind == "weight") {
    q.kind = WeightDist{law_from_json(j.at("law"))};
  } else {
    throw std::invalid_argument("unknown mark distribution kind: " + kind);
  }
  validate(q, dim);
  return q;
}

}  // namespace gibbsgeom
