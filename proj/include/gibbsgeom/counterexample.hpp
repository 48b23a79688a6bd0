#pragma once

#include <cstdint>
#include <vector>

#include "gibbsgeom/config.hpp"
#include "gibbsgeom/poisson.hpp"

namespace gibbsgeom {

struct CounterexampleSpec {
  int N = 10;
  Vec n1{};
  Vec n2{};
  Vec u{};
  Vec v{};
  double eps = 0.1;
  double a = 1.0;
  double b = 2.0;
  double z = 10.0;
  MarkDistribution q;  // Q; probabilities of the cap sets come from here
};

CounterexampleSpec shipped_counterexample();
void validate(const CounterexampleSpec& s);

Vec unit_at(double angle);
// angle of a unit vector in S^1_+, in (-pi/2, pi/2]
double hemisphere_angle(const Vec& n);

Configuration gen_gamma_N(const CounterexampleSpec& s);
double gamma_N_radius(const CounterexampleSpec& s);

// Distances from x and y to the intersection of the lines x + A(n), y + A(m).
std::array<double, 2> line_intersection_distances(const Vec& x, const Vec& y, const Vec& n, const Vec& m);

struct LambdaScale {
  double s = 0;
  double sup_f = 0;  // sup of f1, f2 over Lambda_0 x Lambda_0 x caps
  long validated = 0;
};

LambdaScale find_lambda_scale(const CounterexampleSpec& s, std::uint64_t seed = 7, long samples = 100000);

double z_lower_bound_log_term(long k, double gamma_u, double gamma_v, double delta);

struct CapMasses {
  double gamma_u = 0;  // z |Lambda| Q(G_u)
  double gamma_v = 0;
  double delta = 0;    // z |Lambda| - gamma_u - gamma_v
};

// Q(U(w +- eps) x (a,b))
double cap_probability(const CounterexampleSpec& s, const Vec& w);
CapMasses cap_masses(const CounterexampleSpec& s, double scale);

struct ALambdaSample {
  Configuration config{2};
  long cross_pairs = 0;
  long within_u = 0;
  long within_v = 0;
  double energy = 0;  // a_2 = -1
};

ALambdaSample sample_A_Lambda_2k(long k, const CounterexampleSpec& s, double scale, std::uint64_t seed);

struct CounterexampleRow {
  long k;
  double log_lower_bound;
  long cross_pair_count;
  double energy;
};

std::vector<CounterexampleRow> counterexample_table(const CounterexampleSpec& s, long k_lo, long k_hi,
                                                    std::uint64_t seed);

nlohmann::json to_json(const CounterexampleSpec& s);
CounterexampleSpec counterexample_from_json(const nlohmann::json& j);

}  // namespace gibbsgeom
