#include <doctest.h>

#include <cmath>

#include "gibbsgeom/counterexample.hpp"
#include "gibbsgeom/facet.hpp"
#include "gibbsgeom/rng.hpp"

using namespace gibbsgeom;

namespace {

// walk along the first line to where it meets the second
std::array<double, 2> walk_oracle(const Vec& x, const Vec& y, const Vec& n, const Vec& m) {
  Vec t{-n[1], n[0], 0};
  double s = dot(y - x, m) / dot(t, m);
  Vec q = x + s * t;
  return {norm(q - x), norm(q - y)};
}

}  // namespace

TEST_CASE("gamma_N layout") {
  CounterexampleSpec s = shipped_counterexample();
  double R = gamma_N_radius(s);
  for (int n : {2, 10, 20}) {
    s.N = n;
    Configuration g = gen_gamma_N(s);
    REQUIRE(g.size() == static_cast<std::size_t>(n));
    int plus = 0;
    for (const auto& p : g) {
      CHECK(facet_mark(p).radius == R);
      CHECK(std::abs(p.x[0]) <= 1);
      CHECK(std::abs(p.x[0]) > 0);
      CHECK(p.x[1] == 0);
      if (p.x[0] > 0) {
        CHECK(facet_mark(p).normal == s.n1);
        ++plus;
      } else {
        CHECK(facet_mark(p).normal == s.n2);
      }
    }
    CHECK(plus == n / 2);
    CHECK(crossing_pairs(g) == (n / 2) * (n / 2));
  }
  s.N = 3;
  CHECK_THROWS(gen_gamma_N(s));
  s.N = 0;
  CHECK_THROWS(gen_gamma_N(s));
}

TEST_CASE("line intersection distances") {
  auto d = line_intersection_distances({1, 0, 0}, {-1, 0, 0}, unit_at(M_PI / 4), unit_at(-M_PI / 4));
  CHECK(d[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(d[1] == doctest::Approx(std::sqrt(2.0)));
  StreamRng r(5, 9);
  for (int i = 0; i < 200; ++i) {
    Vec x{r.uniform(-2, 2), r.uniform(-2, 2), 0}, y{r.uniform(-2, 2), r.uniform(-2, 2), 0};
    Vec n = unit_at(r.uniform(-1.5, 1.5)), m = unit_at(r.uniform(-1.5, 1.5));
    if (std::abs(n[0] * m[1] - n[1] * m[0]) < 0.05) continue;
    auto a = line_intersection_distances(x, y, n, m), b = walk_oracle(x, y, n, m);
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-9));
    CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-9));
  }
}

TEST_CASE("lambda scale") {
  CounterexampleSpec s = shipped_counterexample();
  LambdaScale a = find_lambda_scale(s, 7, 20000);
  CHECK(a.validated == 20000);
  CHECK(a.s > 0);
  CHECK(a.s * a.sup_f == doctest::Approx(0.9 * s.a));
  // distances scale with the square, so s is linear in a
  CounterexampleSpec t = s;
  t.a = 2 * s.a;
  t.b = 2 * s.b;
  t.q = MarkDistribution::facets(HemisphereUniform{}, UniformLaw{0.5, 4.0});
  LambdaScale b = find_lambda_scale(t, 7, 20000);
  CHECK(b.s == doctest::Approx(2 * a.s).epsilon(1e-12));
  CHECK(b.sup_f == a.sup_f);

  // the reported supremum bounds random draws, and a grid corner almost reaches it
  StreamRng r(11, 3);
  double best = 0;
  for (int i = 0; i < 20000; ++i) {
    Vec x{r.uniform(-1, 1), r.uniform(-1, 1), 0}, y{r.uniform(-1, 1), r.uniform(-1, 1), 0};
    Vec n = unit_at(-M_PI / 4 + r.uniform(-0.1, 0.1)), m = unit_at(M_PI / 4 + r.uniform(-0.1, 0.1));
    auto f = walk_oracle(x, y, n, m);
    best = std::max({best, f[0], f[1]});
  }
  CHECK(best <= a.sup_f * (1 + 1e-9));
  CHECK(best > 0.8 * a.sup_f);
}

TEST_CASE("log lower bound term") {
  CHECK(z_lower_bound_log_term(1, 1, 1, 0) == doctest::Approx(1 - 2));
  CHECK(z_lower_bound_log_term(2, std::exp(1.0), 1, 0) == doctest::Approx(4 - std::exp(1.0) - 1 + 2 - 2 * std::log(2.0)));
  CHECK_THROWS(z_lower_bound_log_term(0, 1, 1, 0));
  const long double gu = 0.37L, gv = 0.41L, de = 2.5L;
  for (long k = 1; k <= 20; ++k) {
    long double prod = std::exp(-(de + gu + gv));
    for (long i = 1; i <= k; ++i) prod *= gu * gv / (static_cast<long double>(i) * i);
    for (long i = 0; i < k * k; ++i) prod *= std::exp(1.0L);
    double want = static_cast<double>(std::log(prod));
    CHECK(z_lower_bound_log_term(k, 0.37, 0.41, 2.5) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("cap masses") {
  CounterexampleSpec s = shipped_counterexample();
  // uniform direction on a half circle, radius uniform on (0.5,2) restricted to (1,2)
  CHECK(cap_probability(s, s.u) == doctest::Approx(0.2 / M_PI * (1.0 / 1.5)).epsilon(1e-12));
  CapMasses c = cap_masses(s, 0.25);
  CHECK(c.gamma_u + c.gamma_v + c.delta == doctest::Approx(s.z * 0.25));
  CHECK(c.gamma_u == c.gamma_v);
}

TEST_CASE("sampled members of A_Lambda") {
  CounterexampleSpec s = shipped_counterexample();
  double scale = find_lambda_scale(s).s;
  ALambdaSample one = sample_A_Lambda_2k(1, s, scale, 1);
  CHECK(one.config.size() == 2);
  CHECK(one.cross_pairs == 1);
  ALambdaSample five = sample_A_Lambda_2k(5, s, scale, 2);
  CHECK(five.cross_pairs == 25);
  CHECK(five.energy == -(five.cross_pairs + five.within_u + five.within_v));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ALambdaSample a = sample_A_Lambda_2k(3, s, scale, seed);
    CHECK(a.config.size() == 6);
    CHECK(a.cross_pairs == 9);
    CHECK(a.energy <= -9);
    for (const auto& p : a.config) {
      CHECK(std::abs(p.x[0]) <= scale);
      CHECK(std::abs(p.x[1]) <= scale);
      double r = facet_mark(p).radius;
      CHECK(r > s.a);
      CHECK(r < s.b);
    }
  }
}

TEST_CASE("counterexample table and json") {
  CounterexampleSpec s = shipped_counterexample();
  auto rows = counterexample_table(s, 1, 40, 3);
  REQUIRE(rows.size() == 40);
  CHECK(rows.back().log_lower_bound > 1e3);
  for (std::size_t i = 10; i < rows.size(); ++i) CHECK(rows[i].log_lower_bound > rows[i - 1].log_lower_bound);
  for (const auto& r : rows) CHECK(r.cross_pair_count == r.k * r.k);

  CounterexampleSpec back = counterexample_from_json(to_json(s));
  CHECK(to_json(back) == to_json(s));
  nlohmann::json bad = to_json(s);
  bad["u"] = bad["v"];
  CHECK_THROWS(counterexample_from_json(bad));
  bad = to_json(s);
  bad["extra"] = 1;
  CHECK_THROWS(counterexample_from_json(bad));
}
