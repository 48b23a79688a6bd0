#pragma once

#include <optional>
#include <vector>

#include "gibbsgeom/config.hpp"
#include "gibbsgeom/laguerre.hpp"

namespace gibbsgeom {

struct LaguerreEnergyResult {
  bool infinite = false;
  long value = 0;  // meaningful only when finite
  std::vector<int> per_cell;  // |Delta_0(x, gamma)|, -1 for empty cells
  std::vector<int> empty_cells;
};

LaguerreEnergyResult laguerre_energy(const std::vector<Generator>& gens, Execution ex = Execution::serial);
LaguerreEnergyResult laguerre_energy(const Configuration& g, Execution ex = Execution::serial);
LaguerreEnergyResult laguerre_energy(const LaguerreDiagram& d);

struct Segment2 {
  Point2 a, b;
};

struct RemovalReport {
  long diff = 0;
  int k = 0;
  int v2 = 0;
  int e2 = 0;
  int sum_vi = 0;
  bool handshake = false;  // 3(k+|V2|) = 2(k+|E2|)
  bool tree = false;       // k+|V2| = |E2|+1
  bool vi_sum = false;     // sum v_i = 3|V2|
  bool degrees = false;    // every node of the local graph has degree 3
  std::vector<Segment2> new_edges;
};

struct PreconditionViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Throws PreconditionViolation unless gamma is in GP, E(gamma) is empty and cell i is bounded.
RemovalReport removal_diff(const Configuration& g, int i);
long removal_diff_value(const Configuration& g, int i);

enum class CondKind { finite, infinite, undefined };

struct CondValue {
  CondKind kind = CondKind::finite;
  long value = 0;
  bool operator==(const CondValue& o) const {
    return kind == o.kind && (kind != CondKind::finite || value == o.value);
  }
};

struct CondEnergyResult {
  bool stabilized = false;
  CondValue value;
  long stabilized_at = 0;
  std::vector<long> schedule;
  std::vector<CondValue> trace;
};

// H(gamma_{Lambda_n}) - H(gamma_{Lambda_n \ Lambda}) for one n
CondValue laguerre_energy_difference(const Configuration& gamma_lambda, const Configuration& xi, double n);
std::vector<long> default_schedule(const Configuration& xi, const Window& lambda);
CondEnergyResult conditional_energy_laguerre(const Configuration& gamma_lambda, const Configuration& xi,
                                             const Window& lambda, std::vector<long> schedule = {});

struct CSetReport {
  double a = 0;
  long l = 0;
  long n = 0;
  Window lambda;
  bool c1 = false;
  bool c2 = false;
  double grid_step = 0;
  long grid_points = 0;
  double worst_radius = 0;  // largest vertex norm seen over the grid
  long unbounded_points = 0;
};

double default_grid_step(const Window& lambda);
CSetReport check_C_set(const Configuration& xi, const Window& lambda, double a, long l, long n,
                       double grid_step = 0, Execution ex = Execution::serial);

struct AdmissibilityParams {
  Window observation = Window::lambda_n(10, 2);
  double delta = 0.5;
  int l = 1;
  int k_max = 0;  // 0: from the configuration extent
  std::optional<Window> lambda;  // enables the C-set fragment
  double a = 1;
  long cl = 1;
  long cn = 1;
  double grid_step = 0;
};

struct AdmissibilityReport {
  bool gp = false;
  bool gp1 = false;
  bool gp2 = false;
  bool no_empty = false;
  std::optional<long> tempered_level;
  int mbar_l = 0;
  int mbar_k_max = 0;
  bool in_mbar = false;
  bool r2_window = false;
  std::optional<CSetReport> cset;
  Window observation;
};

AdmissibilityReport is_admissible(const Configuration& g, const AdmissibilityParams& p);

nlohmann::json to_json(const CSetReport& r);
nlohmann::json to_json(const AdmissibilityReport& r);
nlohmann::json to_json(const RemovalReport& r);

}  // namespace gibbsgeom
