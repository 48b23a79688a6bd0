// Serial reference vs OpenMP path for each parallel kernel. Argument 1 selects the parallel path.
#include <benchmark/benchmark.h>

#include <cmath>

#include "gibbsgeom/facet.hpp"
#include "gibbsgeom/laguerre.hpp"
#include "gibbsgeom/laguerre_energy.hpp"
#include "gibbsgeom/poisson.hpp"
#include "gibbsgeom/rng.hpp"

using namespace gibbsgeom;

namespace {

Execution mode(const benchmark::State& s) { return s.range(1) ? Execution::parallel : Execution::serial; }

Configuration weighted(long n) {
  StreamRng r(1, 1);
  std::vector<MarkedPoint> pts;
  for (long i = 0; i < n; ++i) pts.push_back({{r.uniform(-1, 1), r.uniform(-1, 1), 0}, WeightMark{r.uniform(0.01, 0.1)}});
  return Configuration(2, pts);
}

Configuration segments(long n) {
  StreamRng r(2, 2);
  std::vector<MarkedPoint> pts;
  for (long i = 0; i < n; ++i) {
    double a = r.uniform(-M_PI / 2, M_PI / 2);
    pts.push_back({{r.uniform(-3, 3), r.uniform(-3, 3), 0}, FacetMark{{std::cos(a), std::sin(a), 0}, r.uniform(0.2, 1)}});
  }
  return Configuration(2, pts);
}

void BM_build_diagram(benchmark::State& s) {
  std::vector<Generator> g = generators_of(weighted(s.range(0)));
  Box b = default_bbox(g);
  for (auto _ : s) benchmark::DoNotOptimize(build_diagram(g, b, mode(s)));
}

void BM_general_position(benchmark::State& s) {
  std::vector<Generator> g = generators_of(weighted(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(check_general_position(g, mode(s)));
}

void BM_laguerre_energy(benchmark::State& s) {
  std::vector<Generator> g = generators_of(weighted(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(laguerre_energy(g, mode(s)));
}

void BM_facet_energy(benchmark::State& s) {
  Configuration g = segments(s.range(0));
  FacetEnergyModel m{2, {1.0}, 1e-9};
  for (auto _ : s) benchmark::DoNotOptimize(facet_energy(g, m, mode(s)));
}

void BM_check_C_set(benchmark::State& s) {
  StreamRng r(3, 3);
  std::vector<MarkedPoint> ring;
  for (int i = 0; i < 16; ++i) {
    double a = 2 * M_PI * (i + r.uniform(-0.2, 0.2)) / 16, rad = r.uniform(1.8, 2.2);
    ring.push_back({{rad * std::cos(a), rad * std::sin(a), 0}, WeightMark{r.uniform(1, 1.5)}});
  }
  Configuration xi(2, ring);
  Window lam = Window::lambda_n(1, 2);
  const double step = 2.0 / static_cast<double>(s.range(0));
  for (auto _ : s) benchmark::DoNotOptimize(check_C_set(xi, lam, 1, 6, 13, step, mode(s)));
}

}  // namespace

BENCHMARK(BM_build_diagram)->ArgsProduct({{200, 1000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_general_position)->ArgsProduct({{100, 200}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_laguerre_energy)->ArgsProduct({{200, 1000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_facet_energy)->ArgsProduct({{500, 2000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_C_set)->ArgsProduct({{20, 60}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
