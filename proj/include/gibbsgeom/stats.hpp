#pragma once

#include <vector>

namespace gibbsgeom {

// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
double kolmogorov_q(double lambda);

struct KsResult {
  double statistic = 0;
  double p_value = 1;
};

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct ChiSquareResult {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
};

// Rows are samples, columns categories. Columns with expected count below min_expected
// in any row are pooled into one tail category.
ChiSquareResult chi_square_homogeneity(const std::vector<std::vector<long>>& table, double min_expected = 5);
ChiSquareResult chi_square_gof(const std::vector<long>& observed, const std::vector<double>& probs,
                               double min_expected = 5);

struct MeanSe {
  double mean = 0;
  double se = 0;
};

MeanSe mean_se(const std::vector<double>& x);
// Geyer initial positive sequence estimate
double effective_sample_size(const std::vector<double>& x);
// Geweke z-score comparing the first 10% with the last 50%
double geweke_z(const std::vector<double>& x);

}  // namespace gibbsgeom
