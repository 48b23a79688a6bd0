#include <doctest.h>

#include <cmath>
#include <map>

#include "fixtures.hpp"
#include "gibbsgeom/gibbs.hpp"
#include "gibbsgeom/stats.hpp"

using namespace gibbsgeom;

namespace {

const MarkDistribution kSegments = MarkDistribution::facets(HemisphereUniform{}, UniformLaw{0.2, 0.6});

// Poisson segments on [-h,h)^2 drawn without the library sampler
Configuration oracle_poisson(StreamRng& r, double h, double z, double rlo, double rhi) {
  double mean = z * 4 * h * h, u = r.uniform(), p = std::exp(-mean), c = p;
  long n = 0;
  while (u > c) {
    ++n;
    p *= mean / static_cast<double>(n);
    c += p;
  }
  std::vector<MarkedPoint> pts;
  for (long i = 0; i < n; ++i) {
    double a = r.uniform(-M_PI / 2, M_PI / 2);
    pts.push_back({{r.uniform(-h, h), r.uniform(-h, h), 0}, FacetMark{{std::cos(a), std::sin(a), 0}, r.uniform(rlo, rhi)}});
  }
  return Configuration(2, pts);
}

GibbsSpec facet_spec(double a2, double z) {
  GibbsSpec s;
  s.window = Window::box(2, {-0.5, -0.5, 0}, {0.5, 0.5, 0});
  s.z = z;
  s.model = EnergyModel::facet({2, {a2}, 1e-9});
  s.marks = kSegments;
  return s;
}

}  // namespace

TEST_CASE("energy models") {
  EnergyModel z = EnergyModel::zero();
  CHECK(z.is_zero());
  CHECK_FALSE(z.is_laguerre());
  CHECK(EnergyModel::laguerre().is_laguerre());
  for (const EnergyModel& m : {z, EnergyModel::laguerre(), EnergyModel::facet({2, {1.5}, 1e-9})})
    CHECK(to_json(energy_model_from_json(to_json(m))) == to_json(m));
  CHECK_THROWS(energy_model_from_json({{"kind", "nope"}}));

  EnergyModel f = EnergyModel::facet({2, {1.0}, 1e-9});
  CounterexampleSpec cs = shipped_counterexample();
  Configuration g = gen_gamma_N(cs);
  CHECK(f.energy(g) == 25);
  CHECK(f.energy_delete_delta(g, 0) == -5);
  CHECK(f.energy_insert_delta(g.without(0), g[0]) == 5);
  Configuration tri(2, {{{0, 0, 0}, WeightMark{1}}, {{4, 0, 0}, WeightMark{1}}, {{-2, 3.4, 0}, WeightMark{1}}, {{-2, -3.6, 0}, WeightMark{1}}});
  EnergyModel l = EnergyModel::laguerre();
  CHECK(l.energy(tri) == 9);
  CHECK(l.conditional(restrict_to(tri, Window::lambda_n(1, 2)), restrict_outside(tri, Window::lambda_n(1, 2))) == 6);
}

TEST_CASE("acceptance ratios are reversible") {
  MoveMix even, skew{0.6, 0.3, 0.1};
  const double zv = 7.5;
  for (std::size_t n = 0; n < 20; ++n)
    for (double dh : {-3.0, -0.5, 0.0, 0.25, 4.0}) {
      for (const MoveMix& mx : {even, skew}) {
        double fwd = log_acceptance(Move::birth, n, zv, dh, mx);
        double back = log_acceptance(Move::death, n + 1, zv, -dh, mx);
        CHECK(fwd == doctest::Approx(-back).epsilon(1e-12).scale(1));
      }
      CHECK(std::exp(log_acceptance(Move::birth, n, zv, dh, even)) ==
            doctest::Approx(zv / static_cast<double>(n + 1) * std::exp(-dh)));
      CHECK(log_acceptance(Move::translate, n, zv, dh, even) == -dh);
    }
  CHECK(std::exp(log_acceptance(Move::death, 3, 2.0, 0, even)) == doctest::Approx(1.5));
}

TEST_CASE("free chain matches the Poisson count") {
  GibbsSpec s;
  s.window = Window::lambda_n(1, 2);
  s.z = 2;
  s.marks = MarkDistribution::weights(UniformLaw{0.5, 1.5});
  s.chain.steps = 200000;
  s.chain.burnin = 2000;
  s.chain.thinning = 10;
  s.chain.seed = 4;
  s.record_trace = false;
  ChainOutput o = run_chain(s);
  std::vector<double> n;
  for (const auto& g : o.samples) n.push_back(static_cast<double>(g.size()));
  MeanSe m = mean_se(n);
  double ess = effective_sample_size(n);
  double se = m.se * std::sqrt(static_cast<double>(n.size()) / ess);
  CHECK(std::abs(m.mean - 8) < 3 * se);
  // translates only fail when proposed on the empty configuration
  CHECK(o.acceptance_rate(Move::translate) > 0.99);
  for (const auto& g : o.samples)
    for (const auto& p : g) CHECK(s.window.contains(p.x));
}

TEST_CASE("repulsive facet chain against the rejection sampler") {
  const double a2 = 1.5, z = 6;
  GibbsSpec s = facet_spec(a2, z);
  s.chain.steps = 400000;
  s.chain.burnin = 1000;
  s.chain.thinning = 20;
  s.chain.seed = 11;
  s.record_trace = false;
  ChainOutput o = run_chain(s);

  StreamRng r(99, 5);
  std::vector<Configuration> ref;
  while (ref.size() < o.samples.size()) {
    Configuration g = oracle_poisson(r, 0.5, z, 0.2, 0.6);
    if (r.uniform() < std::exp(-a2 * static_cast<double>(fixtures::crossing_count(g)))) ref.push_back(g);
  }
  auto code = [](const Configuration& g) { return std::min<long>(static_cast<long>(g.size()), 9) * 10 + std::min(fixtures::crossing_count(g), 4L); };
  std::map<long, std::array<long, 2>> cells;
  for (const auto& g : o.samples) cells[code(g)][0]++;
  for (const auto& g : ref) cells[code(g)][1]++;
  std::vector<std::vector<long>> table(2);
  for (const auto& [k, v] : cells) table[0].push_back(v[0]), table[1].push_back(v[1]);
  ChiSquareResult c = chi_square_homogeneity(table);
  MESSAGE("chi-square p = " << c.p_value << ", dof " << c.dof);
  CHECK(c.p_value > 0.01);
  CHECK(c.dof >= 5);
}

TEST_CASE("Laguerre chain inside an admissible ring") {
  fixtures::RingFixture f;
  for (std::uint64_t seed = 0;; ++seed) {
    f = fixtures::ring_fixture(seed);
    if (fixtures::ring_fixture_admissible(f)) break;
  }
  GibbsSpec s;
  s.window = Window::lambda_n(1, 2);
  s.z = 1.5;
  s.model = EnergyModel::laguerre();
  s.marks = MarkDistribution::weights(UniformLaw{0.2, 1.0});
  s.boundary = f.xi;
  s.cutoff = Cutoff{13, 1};
  s.chain.steps = 600;
  s.chain.burnin = 0;
  s.chain.thinning = 1;
  s.verify_deltas = true;
  ChainOutput o = run_chain(s);
  REQUIRE(o.samples.size() == 600);
  long births = o.accepted[0];
  CHECK(births > 0);
  for (std::size_t i = 0; i < o.samples.size(); ++i)
    CHECK(o.sample_energies[i] == 6.0 * static_cast<double>(o.samples[i].size()));
}

TEST_CASE("partition function estimates") {
  PartitionEstimate free = estimate_partition(Window::lambda_n(1, 2), 2, EnergyModel::zero(), kSegments, 200, 1);
  CHECK(free.estimate == 1);
  CHECK(free.std_error == 0);
  CHECK_FALSE(free.divergent);

  // E[exp(-a X)] by the count: Poisson weights times per-count Monte Carlo with the test's crossing code
  const double a2 = 1.0, z = 3, h = 0.5;
  const double mean = z * 4 * h * h;
  StreamRng r(3, 3);
  double oracle = 0, var = 0, pn = std::exp(-mean);
  for (int n = 0; n < 25; ++n) {
    if (n > 0) pn *= mean / n;
    if (n < 2) {
      oracle += pn;
      continue;
    }
    const int M = 4000;
    double s = 0, s2 = 0;
    for (int t = 0; t < M; ++t) {
      std::vector<MarkedPoint> pts;
      for (int i = 0; i < n; ++i) {
        double a = r.uniform(-M_PI / 2, M_PI / 2);
        pts.push_back({{r.uniform(-h, h), r.uniform(-h, h), 0}, FacetMark{{std::cos(a), std::sin(a), 0}, r.uniform(0.2, 0.6)}});
      }
      double e = std::exp(-a2 * static_cast<double>(fixtures::crossing_count(Configuration(2, pts))));
      s += e, s2 += e * e;
    }
    double m = s / M;
    oracle += pn * m;
    var += pn * pn * (s2 / M - m * m) / M;
  }
  PartitionEstimate est = estimate_partition(Window::box(2, {-h, -h, 0}, {h, h, 0}), z, EnergyModel::facet({2, {a2}, 1e-9}), kSegments, 40000, 8);
  CHECK(std::abs(est.estimate - oracle) < 4 * std::sqrt(var + est.std_error * est.std_error));
  CHECK(est.estimate < 1);

  CounterexampleSpec cs = shipped_counterexample();
  double sc = find_lambda_scale(cs).s;
  PartitionEstimate att = estimate_partition(Window::box(2, {-sc, -sc, 0}, {sc, sc, 0}), cs.z, EnergyModel::facet({2, {-1.0}, 1e-9}), cs.q, 2000, 2, cs);
  CHECK(att.divergent);
  CHECK(att.first_exceeding_k > 0);
  CHECK(att.max_log_lower_bound > 1e3);
}

TEST_CASE("shift averages") {
  LocalStatistic one{[](const Configuration&) { return 1.0; }, Window::box(2, {0, 0, 0}, {1, 1, 0})};
  Configuration lone(2, {{{0, 0, 0}, WeightMark{1}}});
  CHECK(shift_average({lone}, one, 2) == 1);

  LocalStatistic count{[](const Configuration& g) { return static_cast<double>(g.size()); }, Window::box(2, {0, 0, 0}, {1, 1, 0})};
  std::vector<MarkedPoint> lattice;
  for (int i = -3; i < 3; ++i)
    for (int j = -3; j < 3; ++j) lattice.push_back({{i + 0.5, j + 0.5, 0}, WeightMark{1}});
  CHECK(shift_average({Configuration(2, lattice)}, count, 3) == 1);
  CHECK(shift_average({lone}, count, 2) == doctest::Approx(1.0 / 16));
  // two samples: the neighbour tiles come from the other sample
  Configuration none(2);
  CHECK(shift_average({lone, none}, count, 2) == doctest::Approx(1.0 / 32));
  CHECK_THROWS(shift_average({}, count, 2));
  CHECK_THROWS(shift_average({lone}, LocalStatistic{count.f, Window::box(2, {0, 0, 0}, {3, 1, 0})}, 2));
}

TEST_CASE("reproducible chains and checkpoints") {
  GibbsSpec s = facet_spec(1.0, 5);
  s.chain.steps = 3000;
  s.chain.burnin = 0;
  s.chain.thinning = 100;
  s.verify_deltas = true;
  ChainOutput a = run_chain(s), b = run_chain(s);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].energy == b.trace[i].energy);
  CHECK(a.final_state == b.final_state);

  GibbsSpec first = s;
  first.chain.steps = 1500;
  ChainOutput half = run_chain(first);
  nlohmann::json cp = checkpoint(half);
  GibbsSpec rest = s;
  rest.chain.steps = 1500;
  rest.initial = configuration_from_json(cp["configuration"]);
  rest.rng_counter = cp["rng"]["counter"].get<std::uint64_t>();
  ChainOutput resumed = run_chain(rest);
  CHECK(resumed.final_state == a.final_state);
  CHECK(resumed.final_energy == doctest::Approx(a.final_energy));

  auto ser = run_chains(s, 3), par = run_chains(s, 3, Execution::parallel);
  for (int c = 0; c < 3; ++c) CHECK(ser[c].final_state == par[c].final_state);
  CHECK_FALSE(ser[0].final_state == ser[1].final_state);
}

TEST_CASE("chain validation and divergence") {
  GibbsSpec s = facet_spec(1.0, 5);
  s.chain.mix = {0.5, 0.5, 0.1};
  CHECK_THROWS(run_chain(s));
  s = facet_spec(1.0, 5);
  s.marks = MarkDistribution::weights(UniformLaw{0.5, 1});
  CHECK_THROWS(run_chain(s));
  s = facet_spec(1.0, 5);
  s.boundary = Configuration(2, {{{0, 0, 0}, FacetMark{{1, 0, 0}, 1}}});
  CHECK_THROWS(run_chain(s));

  GibbsSpec att = facet_spec(-1.0, 20);
  att.window = Window::lambda_n(1, 2);
  att.marks = MarkDistribution::facets(HemisphereUniform{}, UniformLaw{2, 3});
  att.chain.steps = 100000;
  att.chain.mix = {0.8, 0.1, 0.1};
  att.divergence = {40, -500};
  att.record_trace = false;
  bool thrown = false;
  try {
    run_chain(att);
  } catch (const NonIntegrableTarget& e) {
    thrown = true;
    CHECK(e.energy < -500);
    CHECK(e.n_points > 30);
  }
  CHECK(thrown);
}

TEST_CASE("DLR check on the free model and a mutated kernel") {
  DlrSpec d;
  d.big_n = 2;
  d.z = 1;
  d.model = EnergyModel::zero();
  d.marks = kSegments;
  d.chains = 2;
  d.outer.steps = 20000;
  d.outer.burnin = 1000;
  d.outer.thinning = 100;
  d.inner_steps = 400;
  int pass = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    d.seed = seed;
    DlrReport r = dlr_consistency_test(d);
    CHECK(r.tested);
    if (r.p_value > 0.01) ++pass;
  }
  CHECK(pass >= 9);

  DlrSpec m = d;
  m.z = 3;
  m.model = EnergyModel::facet({2, {2.0}, 1e-9});
  m.marks = MarkDistribution::facets(HemisphereUniform{}, UniformLaw{0.5, 1.0});
  m.mutate_kernel = true;
  m.seed = 5;
  DlrReport bad = dlr_consistency_test(m);
  CHECK(bad.p_value < 0.001);
  nlohmann::json j = to_json(bad);
  CHECK(j.contains("pValue"));
  CHECK(j["tested"] == true);
}
