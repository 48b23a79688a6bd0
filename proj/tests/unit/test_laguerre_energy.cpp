#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gibbsgeom/laguerre_energy.hpp"
#include "gibbsgeom/poisson.hpp"

using namespace gibbsgeom;

namespace {

Configuration weighted(std::initializer_list<std::array<double, 3>> pts) {
  std::vector<MarkedPoint> v;
  for (const auto& p : pts) v.push_back({{p[0], p[1], 0}, WeightMark{p[2]}});
  return Configuration(2, v);
}

}  // namespace

TEST_CASE("vertex energy") {
  CHECK(laguerre_energy(Configuration(2)).value == 0);
  CHECK_FALSE(laguerre_energy(Configuration(2)).infinite);
  LaguerreEnergyResult dom = laguerre_energy(weighted({{-1, 0, 2}, {0, 0, 0.1}, {1, 0, 2}, {0, 3, 1}}));
  CHECK(dom.infinite);
  CHECK(dom.empty_cells == std::vector<int>{1});
  CHECK(dom.per_cell[1] == -1);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Configuration g = fixtures::random_weighted(seed, 25, 0.05, 0.3);
    std::vector<Generator> gens = generators_of(g);
    LaguerreDiagram d = build_diagram(gens, default_bbox(gens));
    LaguerreEnergyResult e = laguerre_energy(g);
    if (e.infinite) continue;
    REQUIRE(is_normal(d).normal);
    CHECK(e.value == 3 * static_cast<long>(d.vertices.size()));
    CHECK(laguerre_energy(d).value == e.value);
    CHECK(laguerre_energy(g, Execution::parallel).per_cell == e.per_cell);
  }
}

TEST_CASE("removal difference") {
  int fixtures_seen = 0;
  for (std::uint64_t seed = 100; fixtures_seen < 100; ++seed) {
    Configuration g = fixtures::random_weighted(seed, 12 + static_cast<int>(seed % 20), 0.0001, 0.3);
    std::vector<Generator> gens = generators_of(g);
    LaguerreDiagram d = build_diagram(gens, default_bbox(gens));
    if (!d.empty_cells.empty()) continue;
    for (int i = 0; i < static_cast<int>(g.size()); ++i) {
      if (!d.cells[static_cast<std::size_t>(i)].bounded) continue;
      RemovalReport r = removal_diff(g, i);
      CHECK(r.diff == 6);
      CHECK(r.diff == laguerre_energy(g).value - laguerre_energy(g.without(static_cast<std::size_t>(i))).value);
      CHECK(3 * (r.k + r.v2) == 2 * (r.k + r.e2));
      CHECK(r.k + r.v2 == r.e2 + 1);
      CHECK(r.v2 == r.k - 2);
      CHECK(r.handshake);
      CHECK(r.tree);
      CHECK(r.vi_sum);
      CHECK(r.degrees);
      CHECK(static_cast<int>(r.new_edges.size()) == r.e2);
      ++fixtures_seen;
      break;
    }
  }

  Configuration tri = weighted({{0, 0, 1}, {4, 0, 1}, {-2, 3.4, 1}, {-2, -3.6, 1}});
  // sorted by location, the enclosed generator is index 2
  CHECK(removal_diff_value(tri, 2) == 6);
  CHECK_THROWS_AS(removal_diff(tri, 1), PreconditionViolation);
  CHECK_THROWS_AS(removal_diff(weighted({{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {1, -3, 1}}), 1), PreconditionViolation);
  CHECK_THROWS_AS(removal_diff(weighted({{-1, 0, 2}, {0, 0, 0.1}, {1, 0, 2}, {0, 3, 1}, {0, -3, 1}}), 3), PreconditionViolation);
  CHECK_THROWS(removal_diff(tri, 7));
}

TEST_CASE("conditional vertex energy") {
  Window lam = Window::lambda_n(1, 2);
  const std::vector<long> sched{13, 26, 52, 104};
  int admissible = 0;
  bool saw_three = false;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    fixtures::RingFixture f = fixtures::ring_fixture(seed);
    if (!fixtures::ring_fixture_admissible(f)) continue;
    ++admissible;
    CondEnergyResult full = conditional_energy_laguerre(f.inner, f.xi, lam, sched);
    CondEnergyResult cut = conditional_energy_laguerre(f.inner, restrict_to(f.xi, Window::lambda_n(13, 2)), lam, sched);
    REQUIRE(full.stabilized);
    CHECK(full.value.kind == CondKind::finite);
    CHECK(full.value.value == 6 * static_cast<long>(f.inner.size()));
    CHECK(cut.value == full.value);
    CHECK(full.stabilized_at == 13);
    if (f.inner.size() == 3) saw_three = true;

    CondEnergyResult none = conditional_energy_laguerre(Configuration(2), f.xi, lam, sched);
    CHECK(none.stabilized);
    CHECK(none.value.value == 0);
    CHECK(none.stabilized_at == 13);

    // an inner point hidden under a heavy neighbour empties its cell with either boundary
    Configuration hidden = weighted({{-0.5, 0, 1.2}, {0, 0, 0.05}, {0.5, 0, 1.2}});
    CHECK(conditional_energy_laguerre(hidden, f.xi, lam, sched).value.kind == CondKind::infinite);
    CHECK(conditional_energy_laguerre(hidden, restrict_to(f.xi, Window::lambda_n(13, 2)), lam, sched).value.kind ==
          CondKind::infinite);
  }
  CHECK(admissible >= 15);
  CHECK(saw_three);

  Configuration bad_boundary = weighted({{3, 0, 2}, {4, 0, 0.1}, {5, 0, 2}});
  CHECK(laguerre_energy_difference(weighted({{0, 0, 1}}), bad_boundary, 8).kind == CondKind::undefined);
  CHECK_THROWS(conditional_energy_laguerre(weighted({{0, 0, 1}}), weighted({{0.5, 0, 1}}), lam));
  CHECK_THROWS(conditional_energy_laguerre(weighted({{3, 0, 1}}), Configuration(2), lam));
  CHECK(default_schedule(weighted({{5, 0, 1}}), lam) == std::vector<long>{1, 2, 4, 8, 16});
}

TEST_CASE("C-set checks") {
  Window lam = Window::lambda_n(1, 2);
  CSetReport empty = check_C_set(Configuration(2), lam, 1, 6, 13);
  CHECK_FALSE(empty.c1);
  CHECK_FALSE(empty.c2);
  CHECK(empty.unbounded_points == empty.grid_points);
  CHECK(empty.grid_points == 21 * 21);
  CHECK_THROWS(check_C_set(Configuration(2), Window::lambda_n(3, 2), 1, 6, 2));

  int seen = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    fixtures::RingFixture f = fixtures::ring_fixture(seed);
    CSetReport r = check_C_set(f.xi, lam, 1, 6, 13);
    CSetReport p = check_C_set(f.xi, lam, 1, 6, 13, 0, Execution::parallel);
    CHECK(to_json(r) == to_json(p));
    if (!(r.c1 && r.c2)) continue;
    ++seen;
    CHECK(r.worst_radius < 3);
    for (long l : {7L, 8L, 12L}) {
      CSetReport q = check_C_set(f.xi, lam, 1, l, 13);
      CHECK(q.c1);
      CHECK(q.c2);
    }
    for (long n : {14L, 20L, 50L}) {
      CSetReport q = check_C_set(f.xi, lam, 1, 6, n);
      CHECK(q.c1);
      CHECK(q.c2);
    }
    // a tighter level fails once vertices reach l/2
    CSetReport tight = check_C_set(f.xi, lam, 1, 2, 13);
    CHECK_FALSE(tight.c2);
  }
  CHECK(seen >= 5);
  nlohmann::json j = to_json(empty);
  CHECK(j["c2"]["gridResolution"] == doctest::Approx(0.1));
  CHECK(j["worstVertexRadius"] == "inf");
}

TEST_CASE("admissibility") {
  AdmissibilityParams p;
  p.observation = Window::lambda_n(2, 2);
  CHECK_FALSE(is_admissible(weighted({{-1, 0, 2}, {0, 0, 0.1}, {1, 0, 2}, {0, 3, 1}}), p).no_empty);
  AdmissibilityReport col = is_admissible(weighted({{0, 0, 1}, {1, 1, 1}, {2, 2, 1}}), p);
  CHECK_FALSE(col.gp);
  CHECK_FALSE(col.gp1);

  // first seed whose framed sample has no empty cell
  Configuration framed(2);
  for (std::uint64_t seed = 9;; ++seed) {
    Configuration inner = sample_poisson({Window::lambda_n(2, 2), 3, MarkDistribution::weights(UniformLaw{0.05, 0.3}), seed});
    std::vector<MarkedPoint> pts(inner.begin(), inner.end());
    for (int i = 0; i < 24; ++i) {
      double a = 2 * M_PI * (i + 0.1 * std::sin(i)) / 24;
      pts.push_back({{4 * std::cos(a), 4 * std::sin(a), 0}, WeightMark{0.3}});
    }
    framed = Configuration(2, pts);
    if (!laguerre_energy(framed).infinite) break;
  }
  AdmissibilityReport r = is_admissible(framed, p);
  CHECK(r.gp);
  CHECK(r.no_empty);
  CHECK(r.tempered_level.has_value());
  CHECK(r.in_mbar);
  CHECK(r.r2_window);
  CHECK_FALSE(r.cset.has_value());
  nlohmann::json j = to_json(r);
  CHECK(j["inMbar_l"]["kRange"][0] == 1);
  CHECK(j["r2"]["verdict"] == true);

  fixtures::RingFixture f = fixtures::ring_fixture(0);
  AdmissibilityParams q;
  q.observation = Window::lambda_n(5, 2);
  q.lambda = Window::lambda_n(1, 2);
  q.l = 6;
  q.cl = 6;
  q.cn = 13;
  AdmissibilityReport s = is_admissible(unite(f.inner, f.xi), q);
  REQUIRE(s.cset.has_value());
  CHECK(s.cset->c1);
}
