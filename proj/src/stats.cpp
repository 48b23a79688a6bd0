#include "gibbsgeom/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gibbsgeom {

double kolmogorov_q(double lambda) {
  if (lambda <= 0) return 1.0;
  if (lambda < 0.2) return 1.0;  // series converges slowly here and Q is 1 to double precision
  double s = 0;
  for (int k = 1; k <= 200; ++k) {
    double t = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? t : -t);
    if (t < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult r;
  r.statistic = d;
  double en = std::sqrt(na * nb / (na + nb));
  r.p_value = kolmogorov_q((en + 0.12 + 0.11 / en) * d);
  return r;
}

static double chi2_sf(double stat, int dof) {
  if (dof <= 0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

ChiSquareResult chi_square_homogeneity(const std::vector<std::vector<long>>& table, double min_expected) {
  if (table.size() < 2) throw std::invalid_argument("need at least two rows");
  const std::size_t cols = table[0].size();
  for (const auto& r : table)
    if (r.size() != cols) throw std::invalid_argument("ragged table");
  std::vector<double> rs(table.size(), 0), cs(cols, 0);
  double total = 0;
  for (std::size_t i = 0; i < table.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      rs[i] += static_cast<double>(table[i][j]);
      cs[j] += static_cast<double>(table[i][j]);
      total += static_cast<double>(table[i][j]);
    }
  if (total == 0) throw std::invalid_argument("empty table");
  double rmin = *std::min_element(rs.begin(), rs.end());
  std::vector<std::size_t> keep;
  std::vector<std::size_t> pool;
  for (std::size_t j = 0; j < cols; ++j) {
    if (cs[j] == 0) continue;
    (cs[j] * rmin / total >= min_expected ? keep : pool).push_back(j);
  }
  std::vector<std::vector<double>> t(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j : keep) t[i].push_back(static_cast<double>(table[i][j]));
    if (!pool.empty()) {
      double s = 0;
      for (std::size_t j : pool) s += static_cast<double>(table[i][j]);
      t[i].push_back(s);
    }
  }
  const std::size_t c = t[0].size();
  std::vector<double> cs2(c, 0);
  for (const auto& r : t)
    for (std::size_t j = 0; j < c; ++j) cs2[j] += r[j];
  ChiSquareResult res;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < c; ++j) {
      double e = rs[i] * cs2[j] / total;
      if (e > 0) res.statistic += (t[i][j] - e) * (t[i][j] - e) / e;
    }
  res.dof = static_cast<int>((t.size() - 1) * (c - 1));
  res.p_value = chi2_sf(res.statistic, res.dof);
  return res;
}

ChiSquareResult chi_square_gof(const std::vector<long>& observed, const std::vector<double>& probs,
                               double min_expected) {
  if (observed.size() != probs.size()) throw std::invalid_argument("size mismatch");
  double n = 0;
  for (long o : observed) n += static_cast<double>(o);
  std::vector<double> o2, e2;
  double po = 0, pe = 0;
  for (std::size_t j = 0; j < observed.size(); ++j) {
    double e = n * probs[j];
    if (e >= min_expected) {
      o2.push_back(static_cast<double>(observed[j]));
      e2.push_back(e);
    } else {
      po += static_cast<double>(observed[j]);
      pe += e;
    }
  }
  if (pe > 0 || po > 0) {
    o2.push_back(po);
    e2.push_back(pe);
  }
  ChiSquareResult r;
  for (std::size_t j = 0; j < o2.size(); ++j)
    if (e2[j] > 0) r.statistic += (o2[j] - e2[j]) * (o2[j] - e2[j]) / e2[j];
    else if (o2[j] > 0) r.statistic = INFINITY;
  r.dof = static_cast<int>(o2.size()) - 1;
  r.p_value = std::isinf(r.statistic) ? 0.0 : chi2_sf(r.statistic, r.dof);
  return r;
}

MeanSe mean_se(const std::vector<double>& x) {
  MeanSe r;
  if (x.empty()) return r;
  const double n = static_cast<double>(x.size());
  r.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  if (x.size() < 2) return r;
  double ss = 0;
  for (double v : x) ss += (v - r.mean) * (v - r.mean);
  r.se = std::sqrt(ss / (n - 1) / n);
  return r;
}

double effective_sample_size(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 4) return static_cast<double>(n);
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  auto acov = [&](std::size_t lag) {
    double s = 0;
    for (std::size_t t = 0; t + lag < n; ++t) s += (x[t] - m) * (x[t + lag] - m);
    return s / static_cast<double>(n);
  };
  const double c0 = acov(0);
  if (c0 == 0) return static_cast<double>(n);
  double tau = -1;  // -1 + 2 sum of positive pair sums
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    double pair = (acov(2 * k) + acov(2 * k + 1)) / c0;
    if (pair <= 0) break;
    tau += 2 * pair;
  }
  tau = std::max(tau, 1.0 / static_cast<double>(n));
  return std::min(static_cast<double>(n), static_cast<double>(n) / tau);
}

double geweke_z(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 20) return 0;
  std::vector<double> a(x.begin(), x.begin() + static_cast<long>(n / 10));
  std::vector<double> b(x.begin() + static_cast<long>(n / 2), x.end());
  MeanSe ma = mean_se(a), mb = mean_se(b);
  double va = ma.se * ma.se * static_cast<double>(a.size()) / std::max(1.0, effective_sample_size(a));
  double vb = mb.se * mb.se * static_cast<double>(b.size()) / std::max(1.0, effective_sample_size(b));
  double den = std::sqrt(va + vb);
  return den > 0 ? (ma.mean - mb.mean) / den : 0.0;
}

}  // namespace gibbsgeom
