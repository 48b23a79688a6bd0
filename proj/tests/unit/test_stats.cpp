#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gibbsgeom/rng.hpp"
#include "gibbsgeom/stats.hpp"

using namespace gibbsgeom;

namespace {

double ks_distance_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> all(a);
  all.insert(all.end(), b.begin(), b.end());
  double best = 0;
  for (double x : all) {
    double fa = static_cast<double>(std::count_if(a.begin(), a.end(), [&](double v) { return v <= x; })) / a.size();
    double fb = static_cast<double>(std::count_if(b.begin(), b.end(), [&](double v) { return v <= x; })) / b.size();
    best = std::max(best, std::abs(fa - fb));
  }
  return best;
}

}  // namespace

TEST_CASE("Kolmogorov tail") {
  CHECK(kolmogorov_q(0) == 1);
  CHECK(kolmogorov_q(0.1) == 1);
  CHECK(kolmogorov_q(1.2238) == doctest::Approx(0.10).epsilon(2e-3));
  CHECK(kolmogorov_q(1.3581) == doctest::Approx(0.05).epsilon(2e-3));
  CHECK(kolmogorov_q(1.6276) == doctest::Approx(0.01).epsilon(2e-3));
  for (double l = 0.2; l < 3; l += 0.1) CHECK(kolmogorov_q(l) >= kolmogorov_q(l + 0.1));
}

TEST_CASE("two-sample KS") {
  std::vector<double> a{1, 2, 3, 4, 5};
  KsResult same = ks_two_sample(a, a);
  CHECK(same.statistic == 0);
  CHECK(same.p_value == 1);
  KsResult apart = ks_two_sample({1, 2, 3}, {4, 5, 6});
  CHECK(apart.statistic == 1);

  StreamRng r(3, 3);
  for (int t = 0; t < 30; ++t) {
    std::vector<double> x, y;
    for (int i = 0; i < 40 + t; ++i) x.push_back(static_cast<double>(r.below(8)));
    for (int i = 0; i < 55; ++i) y.push_back(static_cast<double>(r.below(9)));
    CHECK(ks_two_sample(x, y).statistic == doctest::Approx(ks_distance_oracle(x, y)).epsilon(1e-12));
  }
  // calibration: same law rarely rejects at 1%
  int reject = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x, y;
    for (int i = 0; i < 200; ++i) x.push_back(r.normal()), y.push_back(r.normal());
    if (ks_two_sample(x, y).p_value < 0.01) ++reject;
  }
  CHECK(reject <= 8);
  std::vector<double> x, y;
  for (int i = 0; i < 300; ++i) x.push_back(r.normal()), y.push_back(r.normal() + 0.5);
  CHECK(ks_two_sample(x, y).p_value < 1e-4);
}

TEST_CASE("chi-square") {
  ChiSquareResult g = chi_square_gof({10, 20, 30}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(g.statistic == doctest::Approx(10));
  CHECK(g.dof == 2);
  CHECK(g.p_value == doctest::Approx(std::exp(-5.0)).epsilon(1e-9));

  ChiSquareResult h = chi_square_homogeneity({{10, 20}, {20, 10}});
  CHECK(h.statistic == doctest::Approx(20.0 / 3));
  CHECK(h.dof == 1);
  CHECK(h.p_value == doctest::Approx(std::erfc(std::sqrt(10.0 / 3))).epsilon(1e-9));

  // sparse tail columns are pooled
  ChiSquareResult p = chi_square_homogeneity({{50, 50, 1, 0, 1}, {50, 50, 0, 1, 1}});
  CHECK(p.dof == 2);
  CHECK(p.statistic == doctest::Approx(0));
  CHECK_THROWS(chi_square_homogeneity({{1, 2}}));
}

TEST_CASE("means and effective sample size") {
  MeanSe m = mean_se({1, 2, 3, 4});
  CHECK(m.mean == 2.5);
  CHECK(m.se == doctest::Approx(std::sqrt(5.0 / 3 / 4)));

  StreamRng r(8, 1);
  std::vector<double> iid, ar;
  double s = 0;
  for (int i = 0; i < 10000; ++i) {
    iid.push_back(r.normal());
    s = 0.9 * s + r.normal();
    ar.push_back(s);
  }
  CHECK(effective_sample_size(iid) == doctest::Approx(10000).epsilon(0.2));
  CHECK(effective_sample_size(ar) == doctest::Approx(10000 * 0.1 / 1.9).epsilon(0.35));
  CHECK(std::abs(geweke_z(iid)) < 4);
  std::vector<double> drift(iid);
  for (std::size_t i = 0; i < 1000; ++i) drift[i] += 3;
  CHECK(std::abs(geweke_z(drift)) > 10);
}
