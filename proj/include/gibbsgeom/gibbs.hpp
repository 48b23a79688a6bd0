#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gibbsgeom/config.hpp"
#include "gibbsgeom/counterexample.hpp"
#include "gibbsgeom/execution.hpp"
#include "gibbsgeom/facet.hpp"
#include "gibbsgeom/poisson.hpp"

namespace gibbsgeom {

// Vertex-count energy on the exact (unclipped) diagram.
struct LaguerreVertexModel {};

struct EnergyModel {
  std::variant<FacetEnergyModel, LaguerreVertexModel> kind = FacetEnergyModel{2, {0.0}, 1e-9};

  static EnergyModel facet(FacetEnergyModel m);
  static EnergyModel laguerre();
  static EnergyModel zero();

  bool is_zero() const;
  bool is_laguerre() const { return std::holds_alternative<LaguerreVertexModel>(kind); }

  // H(gamma), +inf allowed
  double energy(const Configuration& g) const;
  // H(g + p) - H(g); g must have finite energy
  double energy_insert_delta(const Configuration& g, const MarkedPoint& p) const;
  // H(g - g[i]) - H(g)
  double energy_delete_delta(const Configuration& g, std::size_t i) const;
  // H(gamma_lambda xi) - H(xi) for finite xi; +inf when the first term is infinite
  double conditional(const Configuration& gamma_lambda, const Configuration& xi) const;
};

nlohmann::json to_json(const EnergyModel& m);
EnergyModel energy_model_from_json(const nlohmann::json& j);

enum class Move { birth = 0, death = 1, translate = 2 };
const char* move_name(Move m);

struct MoveMix {
  double birth = 0.4;
  double death = 0.4;
  double translate = 0.2;
};

struct ChainSettings {
  long steps = 10000;
  long burnin = 1000;
  long thinning = 10;
  std::uint64_t seed = 1;
  MoveMix mix;
  double sigma = 0;  // translate scale, 0: 0.1 diam
};

struct Cutoff {
  long n = 1;
  double a = 1;
};

struct DivergenceGuard {
  long window = 10000;  // consecutive accepted energy-lowering births
  double floor = -1e4;
};

struct GibbsSpec {
  Window window = Window::lambda_n(1, 2);
  double z = 1;
  EnergyModel model;
  MarkDistribution marks;
  std::optional<Configuration> boundary;
  std::optional<Cutoff> cutoff;
  ChainSettings chain;
  DivergenceGuard divergence;
  Configuration initial{2};
  std::uint64_t rng_counter = 0;
  bool flip_delta_sign = false;  // mutation switch for negative controls
  bool verify_deltas = false;    // recompute the energy after each accepted move
  bool record_trace = true;
};

void validate(const GibbsSpec& s);

// log of the MH ratio before min(1, .); n is |gamma_Lambda| before the move, zv = z |Lambda|.
// Birth carries p_death / p_birth, death the inverse, so any move mix is reversible.
double log_acceptance(Move m, std::size_t n, double zv, double dh, const MoveMix& mix);

struct TraceRow {
  long step;
  Move move;
  bool accepted;
  long n_points;
  double energy;
};

struct ChainOutput {
  std::vector<Configuration> samples;
  std::vector<double> sample_energies;
  long proposed[3] = {0, 0, 0};
  long accepted[3] = {0, 0, 0};
  std::vector<TraceRow> trace;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t rng_counter = 0;  // state after the last step
  Configuration final_state{2};
  double final_energy = 0;
  double geweke = 0;

  double acceptance_rate(Move m) const;
};

struct NonIntegrableTarget : std::runtime_error {
  using std::runtime_error::runtime_error;
  long step = 0;
  double energy = 0;
  long n_points = 0;
};

inline constexpr std::uint64_t kChainStream = 0x636861696eULL;

// Boundary actually seen by the kernel: xi restricted to Lambda_n \ Lambda under a cut-off.
Configuration effective_boundary(const GibbsSpec& s);
ChainOutput run_chain(const GibbsSpec& spec);
// Independent chains with seeds derive_seed(seed, c).
std::vector<ChainOutput> run_chains(const GibbsSpec& spec, int chains, Execution ex = Execution::serial);

nlohmann::json checkpoint(const ChainOutput& out);

struct PartitionEstimate {
  double estimate = 0;
  double std_error = 0;
  long samples = 0;
  bool divergent = false;
  double max_log_lower_bound = 0;  // from the witness
  long first_exceeding_k = -1;
};

PartitionEstimate estimate_partition(const Window& window, double z, const EnergyModel& model,
                                     const MarkDistribution& marks, long n_samples, std::uint64_t seed,
                                     const std::optional<CounterexampleSpec>& witness = std::nullopt,
                                     long k_max = 200);

struct LocalStatistic {
  std::function<double(const Configuration&)> f;
  Window locality = Window::lambda_n(1, 2);
};

// (1/|Lambda_n|) sum_{kappa in Lambda_n cap Z^2} mean_s F(theta_kappa gamma_s), with independent
// tiling: tile t != 0 of sample s is filled by sample (s + t') mod S.
double shift_average(const std::vector<Configuration>& samples, const LocalStatistic& F, long n);

struct DlrSpec {
  long big_n = 4;
  Window small = Window::lambda_n(1, 2);
  double z = 1;
  EnergyModel model;
  MarkDistribution marks;
  int chains = 4;
  ChainSettings outer;
  long inner_steps = 2000;
  std::uint64_t seed = 1;
  bool mutate_kernel = false;
  double min_effective = 100;
};

struct DlrReport {
  double statistic = 0;  // max KS distance
  double p_value = 1;    // Bonferroni-adjusted
  double p_count = 1;
  double p_energy = 1;
  long samples = 0;
  double effective = 0;
  bool tested = false;
  std::string note;
  std::vector<double> a_count, a_energy, b_count, b_energy;
};

DlrReport dlr_consistency_test(const DlrSpec& spec, Execution ex = Execution::serial);

nlohmann::json to_json(const DlrReport& r);

}  // namespace gibbsgeom
