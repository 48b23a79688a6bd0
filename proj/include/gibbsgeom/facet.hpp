#pragma once

#include <vector>

#include "gibbsgeom/config.hpp"
#include "gibbsgeom/execution.hpp"

namespace gibbsgeom {

struct Facet {
  Vec center{};
  Vec normal{};
  double radius = 1.0;
};

struct FacetEnergyModel {
  int d = 2;
  std::vector<double> a{1.0};  // a_2 .. a_d
  double tolerance = 1e-9;

  double coefficient(int j) const { return a.at(static_cast<std::size_t>(j - 2)); }
};

void validate(const FacetEnergyModel& m);

Facet facet_of(const MarkedPoint& p);
// d = 2 segment endpoints (center -/+ R*tangent), tangent = (n2, -n1)
std::array<Vec, 2> segment_endpoints(const Facet& f);

struct PairIntersection {
  int dim = -1;           // -1 empty
  double measure = 0.0;   // H^{d-2} of the intersection
  bool finite = true;
  bool degenerate = false;  // inside the tolerance band; contributes 0

  double contribution() const { return (dim >= 0 && finite && !degenerate) ? measure : 0.0; }
};

PairIntersection pair_intersection(const Facet& f1, const Facet& f2, int d, double tol = 1e-9);

struct TripleIntersection {
  int count = 0;
  bool finite = true;
  bool degenerate = false;

  double contribution() const { return (finite && !degenerate) ? count : 0.0; }
};

TripleIntersection triple_intersection_h0(const Facet& f1, const Facet& f2, const Facet& f3,
                                          double tol = 1e-9);

double facet_energy(const Configuration& g, const FacetEnergyModel& m,
                    Execution ex = Execution::serial);
std::vector<Facet> facets_of(const Configuration& g);
// Sum over tuples containing facet p, with p not in fs.
double facet_energy_with(const std::vector<Facet>& fs, const Facet& p, const FacetEnergyModel& m);
long crossing_pairs(const Configuration& g, double tol = 1e-9);

struct TauReport {
  long l1 = 0;
  long l2 = 0;
  long tau = 0;
};

TauReport compute_tau_report(double mark_sup, long l0, const Window& lambda);
long compute_tau(double mark_sup, long l0, const Window& lambda);
// tau = 2 l + 2 m + 1 from the flawed range lemma
double flawed_tau(double l, double m);
// Lambda + B(0, r) as a membership test
bool in_dilation(const Window& lambda, double r, const Vec& x);

double conditional_energy_facet(const Configuration& gamma_lambda, const Configuration& xi,
                                const Window& lambda, long l0, const FacetEnergyModel& m);
// energy difference after restricting gamma_lambda + xi to Lambda + B(0, r)
double truncated_conditional_energy(const Configuration& gamma_lambda, const Configuration& xi,
                                    const Window& lambda, double r, const FacetEnergyModel& m);

}  // namespace gibbsgeom
