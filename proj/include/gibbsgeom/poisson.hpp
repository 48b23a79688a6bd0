#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "gibbsgeom/config.hpp"
#include "gibbsgeom/rng.hpp"

namespace gibbsgeom {

struct UniformLaw {
  double lo = 0;
  double hi = 1;
};

struct AtomLaw {
  std::vector<double> values;
  std::vector<double> probs;
};

using ScalarLaw = std::variant<UniformLaw, AtomLaw>;

struct HemisphereUniform {};

struct DirectionAtoms {
  std::vector<Vec> dirs;
  std::vector<double> probs;
};

using DirectionLaw = std::variant<HemisphereUniform, DirectionAtoms>;

struct FacetMarkDist {
  DirectionLaw direction = HemisphereUniform{};
  ScalarLaw radius = UniformLaw{0.5, 1.0};
};

struct WeightDist {
  ScalarLaw law = UniformLaw{0.5, 1.0};
};

struct MarkDistribution {
  std::variant<FacetMarkDist, WeightDist> kind = WeightDist{};
  bool hm_verifiable = true;

  static MarkDistribution facets(DirectionLaw dir, ScalarLaw radius);
  static MarkDistribution weights(ScalarLaw law);
};

void validate(const MarkDistribution& q, int dim);
double law_sup(const ScalarLaw& law);
double law_inf(const ScalarLaw& law);
bool in_support(const ScalarLaw& law, double v);
// P(lo < X < hi)
double law_prob(const ScalarLaw& law, double lo, double hi);

struct PoissonSpec {
  Window window;
  double z = 1.0;
  MarkDistribution marks;
  std::uint64_t seed = 0;
};

// Draw layout: count from stream kCountStream; point i uses stream i with fields
// 0..d-1 for the location and 8.. for the mark; collision attempt a adds 64*a.
inline constexpr std::uint64_t kCountStream = ~std::uint64_t{0};

Configuration sample_poisson(const PoissonSpec& spec);
std::uint64_t poisson_count(double mean, double u);
Vec uniform_in(const Window& w, std::uint64_t seed, std::uint64_t stream, std::uint64_t field0);
Mark sample_mark(const MarkDistribution& q, int dim, std::uint64_t seed, std::uint64_t stream,
                 std::uint64_t field0);
Mark sample_mark(const MarkDistribution& q, int dim, StreamRng& rng);
Vec sample_location(const Window& w, StreamRng& rng);

enum class HmVerdict { holds, fails, unverifiable };

struct HmReport {
  HmVerdict verdict = HmVerdict::unverifiable;
  std::optional<double> integral;  // exact for pure atom laws
};

HmReport check_Hm(const MarkDistribution& q, int dim, double delta);

nlohmann::json to_json(const MarkDistribution& q);
MarkDistribution mark_distribution_from_json(const nlohmann::json& j, int dim);

}  // namespace gibbsgeom
