#include "gibbsgeom/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gibbsgeom/laguerre_energy.hpp"
#include "gibbsgeom/stats.hpp"

namespace gibbsgeom {

EnergyModel EnergyModel::facet(FacetEnergyModel m) {
  validate(m);
  EnergyModel e;
  e.kind = std::move(m);
  return e;
}

EnergyModel EnergyModel::laguerre() {
  EnergyModel e;
  e.kind = LaguerreVertexModel{};
  return e;
}

EnergyModel EnergyModel::zero() { return EnergyModel{}; }

bool EnergyModel::is_zero() const {
  if (const auto* f = std::get_if<FacetEnergyModel>(&kind))
    return std::all_of(f->a.begin(), f->a.end(), [](double c) { return c == 0.0; });
  return false;
}

double EnergyModel::energy(const Configuration& g) const {
  if (is_zero()) return 0;
  if (const auto* f = std::get_if<FacetEnergyModel>(&kind)) return facet_energy(g, *f);
  LaguerreEnergyResult r = laguerre_energy(g);
  return r.infinite ? INFINITY : static_cast<double>(r.value);
}

double EnergyModel::energy_insert_delta(const Configuration& g, const MarkedPoint& p) const {
  if (is_zero()) return 0;
  if (const auto* f = std::get_if<FacetEnergyModel>(&kind))
    return facet_energy_with(facets_of(g), facet_of(p), *f);
  double h0 = energy(g);
  if (!std::isfinite(h0)) throw std::invalid_argument("insert delta from an infinite-energy state");
  return energy(g.with(p)) - h0;
}

double EnergyModel::energy_delete_delta(const Configuration& g, std::size_t i) const {
  if (is_zero()) return 0;
  Configuration rest = g.without(i);
  if (const auto* f = std::get_if<FacetEnergyModel>(&kind))
    return -facet_energy_with(facets_of(rest), facet_of(g[i]), *f);
  double h0 = energy(g);
  if (!std::isfinite(h0)) throw std::invalid_argument("delete delta from an infinite-energy state");
  return energy(rest) - h0;
}

double EnergyModel::conditional(const Configuration& gamma_lambda, const Configuration& xi) const {
  if (is_zero()) return 0;
  double hx = energy(xi);
  if (!std::isfinite(hx)) throw std::invalid_argument("boundary configuration has infinite energy");
  double h = energy(unite(gamma_lambda, xi));
  return std::isfinite(h) ? h - hx : INFINITY;
}

nlohmann::json to_json(const EnergyModel& m) {
  if (m.is_laguerre()) return {{"kind", "laguerre"}};
  const auto& f = std::get<FacetEnergyModel>(m.kind);
  return {{"kind", "facet"}, {"d", f.d}, {"a", f.a}, {"tolerance", f.tolerance}};
}

EnergyModel energy_model_from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (k != "kind" && k != "d" && k != "a" && k != "tolerance")
      throw std::invalid_argument("unknown energy model field: " + k);
  }
  if (kind == "laguerre") {
    if (j.size() != 1) throw std::invalid_argument("laguerre model takes no parameters");
    return EnergyModel::laguerre();
  }
  if (kind == "zero") return EnergyModel::zero();
  if (kind != "facet") throw std::invalid_argument("unknown energy model: " + kind);
  FacetEnergyModel f;
  f.d = j.value("d", 2);
  f.a = j.at("a").get<std::vector<double>>();
  f.tolerance = j.value("tolerance", 1e-9);
  return EnergyModel::facet(f);
}

const char* move_name(Move m) {
  switch (m) {
    case Move::birth: return "birth";
    case Move::death: return "death";
    case Move::translate: return "translate";
  }
  return "?";
}

double ChainOutput::acceptance_rate(Move m) const {
  int k = static_cast<int>(m);
  return proposed[k] ? static_cast<double>(accepted[k]) / static_cast<double>(proposed[k]) : 0.0;
}

void validate(const GibbsSpec& s) {
  const ChainSettings& c = s.chain;
  if (!(s.z > 0) || !std::isfinite(s.z)) throw std::invalid_argument("activity must be positive");
  if (!s.window.bounded()) throw std::invalid_argument("window must be bounded");
  if (c.steps < 0 || c.burnin < 0 || c.thinning < 1 || c.burnin > c.steps)
    throw std::invalid_argument("bad chain lengths");
  double mix = c.mix.birth + c.mix.death + c.mix.translate;
  if (c.mix.birth < 0 || c.mix.death < 0 || c.mix.translate < 0 || std::abs(mix - 1.0) > 1e-12)
    throw std::invalid_argument("move mix must be a probability vector");
  if (c.mix.birth == 0 || c.mix.death == 0) throw std::invalid_argument("birth and death must both be proposed");
  validate(s.marks, s.window.dim());
  bool facet_marks = std::holds_alternative<FacetMarkDist>(s.marks.kind);
  if (s.model.is_laguerre() && facet_marks) throw std::invalid_argument("Laguerre model needs weight marks");
  if (!s.model.is_laguerre() && !s.model.is_zero() && !facet_marks)
    throw std::invalid_argument("facet model needs facet marks");
  if (s.boundary)
    for (const auto& p : *s.boundary)
      if (s.window.contains(p.x)) throw std::invalid_argument("boundary configuration meets the window");
  for (const auto& p : s.initial)
    if (!s.window.contains(p.x)) throw std::invalid_argument("initial configuration leaves the window");
  if (s.cutoff) {
    if (s.cutoff->a <= 0) throw std::invalid_argument("cut-off mark bound must be positive");
    Window ln = Window::lambda_n(static_cast<double>(s.cutoff->n), s.window.dim());
    if (!s.window.is_box()) throw std::invalid_argument("cut-off kernel needs a box window");
    const Box& b = s.window.as_box();
    for (int k = 0; k < s.window.dim(); ++k)
      if (b.lower[k] < -static_cast<double>(s.cutoff->n) || b.upper[k] > static_cast<double>(s.cutoff->n))
        throw std::invalid_argument("window is not inside Lambda_n");
    for (const auto& p : s.initial)
      if (mark_norm(p.mark) > s.cutoff->a) throw std::invalid_argument("initial mark exceeds the cut-off");
    (void)ln;
  }
}

double log_acceptance(Move m, std::size_t n, double zv, double dh, const MoveMix& mix) {
  const double dn = static_cast<double>(n);
  switch (m) {
    case Move::birth: return std::log(mix.death / mix.birth) + std::log(zv) - std::log(dn + 1) - dh;
    case Move::death: return std::log(mix.birth / mix.death) + std::log(dn) - std::log(zv) - dh;
    case Move::translate: return -dh;
  }
  return -INFINITY;
}

Configuration effective_boundary(const GibbsSpec& s) {
  Configuration xi(s.window.dim());
  if (!s.boundary) return xi;
  xi = *s.boundary;
  if (s.cutoff) xi = restrict_to(xi, Window::lambda_n(static_cast<double>(s.cutoff->n), s.window.dim()));
  if (!s.model.is_laguerre()) {
    // only facets that can meet a facet centred in the window interact
    double reach = 0;
    if (const auto* fd = std::get_if<FacetMarkDist>(&s.marks.kind)) reach = law_sup(fd->radius);
    if (s.cutoff) reach = std::min(reach, s.cutoff->a);
    std::vector<MarkedPoint> keep;
    for (const auto& p : xi)
      if (s.window.distance(p.x) <= mark_norm(p.mark) + reach) keep.push_back(p);
    if (s.model.is_zero()) keep.clear();
    xi = Configuration(s.window.dim(), keep);
  }
  return xi;
}

namespace {

double reflect(double x, double lo, double hi) {
  const double L = hi - lo;
  double t = std::fmod(x - lo, 2 * L);
  if (t < 0) t += 2 * L;
  if (t > L) t = 2 * L - t;
  return lo + t;
}

// Energy bookkeeping for the working configuration gamma_Lambda + xi.
class Kernel {
 public:
  Kernel(const EnergyModel& m, Configuration work) : m_(m), work_(std::move(work)) {
    if (m_.is_laguerre()) {
      h_work_ = m_.energy(work_);
      if (!std::isfinite(h_work_)) throw std::invalid_argument("initial state has infinite energy");
    }
  }

  const Configuration& work() const { return work_; }

  double insert_delta(const MarkedPoint& p) const {
    if (m_.is_laguerre()) {
      cand_ = m_.energy(work_.with(p));
      return cand_ - h_work_;
    }
    return m_.energy_insert_delta(work_, p);
  }

  double delete_delta(std::size_t i) const {
    if (m_.is_laguerre()) {
      cand_ = m_.energy(work_.without(i));
      return cand_ - h_work_;
    }
    return m_.energy_delete_delta(work_, i);
  }

  double translate_delta(std::size_t i, const MarkedPoint& p) const {
    Configuration moved = work_.without(i);
    if (m_.is_laguerre()) {
      moved.insert(p);
      cand_ = m_.energy(moved);
      return cand_ - h_work_;
    }
    return m_.energy_delete_delta(work_, i) + m_.energy_insert_delta(moved, p);
  }

  // commit the last evaluated proposal
  void insert(const MarkedPoint& p) {
    work_.insert(p);
    h_work_ = cand_;
  }
  void erase(std::size_t i) {
    work_.erase(i);
    h_work_ = cand_;
  }
  void translate(std::size_t i, const MarkedPoint& p) {
    work_.erase(i);
    work_.insert(p);
    h_work_ = cand_;
  }

 private:
  const EnergyModel& m_;
  Configuration work_;
  double h_work_ = 0;
  mutable double cand_ = 0;
};

}  // namespace

ChainOutput run_chain(const GibbsSpec& spec) {
  validate(spec);
  const int dim = spec.window.dim();
  const ChainSettings& cs = spec.chain;
  Configuration xi = effective_boundary(spec);
  Configuration g = spec.initial;
  double h = spec.model.conditional(g, xi);
  if (!std::isfinite(h)) throw std::invalid_argument("initial state has infinite energy");
  Kernel K(spec.model, unite(g, xi));
  StreamRng rng(cs.seed, kChainStream, spec.rng_counter);
  const double zv = spec.z * spec.window.volume();
  const double sigma = cs.sigma > 0 ? cs.sigma : 0.1 * spec.window.diameter();
  const double sign = spec.flip_delta_sign ? -1.0 : 1.0;
  const bool lag = spec.model.is_laguerre();

  ChainOutput out;
  out.seed = cs.seed;
  out.stream = kChainStream;
  if (spec.record_trace) out.trace.reserve(static_cast<std::size_t>(cs.steps));
  long run = 0;
  std::vector<double> post_trace;

  for (long t = 0; t < cs.steps; ++t) {
    double u = rng.uniform();
    Move mv = u < cs.mix.birth ? Move::birth : (u < cs.mix.birth + cs.mix.death ? Move::death : Move::translate);
    ++out.proposed[static_cast<int>(mv)];
    bool acc = false;
    double dh = INFINITY;
    if (mv == Move::birth) {
      MarkedPoint p{sample_location(spec.window, rng), sample_mark(spec.marks, dim, rng)};
      bool ok = !(spec.cutoff && mark_norm(p.mark) > spec.cutoff->a) && !K.work().find(p.x);
      if (ok) {
        dh = K.insert_delta(p);
        double la = log_acceptance(Move::birth, g.size(), zv, sign * dh, cs.mix);
        double v = rng.open_uniform();
        if (std::isfinite(dh) && (la >= 0 || std::log(v) < la)) {
          acc = true;
          g.insert(p);
          K.insert(p);
        }
      }
    } else if (g.size() > 0) {
      std::size_t idx = static_cast<std::size_t>(rng.below(g.size()));
      MarkedPoint p = g[idx];
      std::size_t wi = *K.work().find(p.x);
      if (mv == Move::death) {
        dh = K.delete_delta(wi);
        double la = log_acceptance(Move::death, g.size(), zv, sign * dh, cs.mix);
        double v = rng.open_uniform();
        if (std::isfinite(dh) && (la >= 0 || std::log(v) < la)) {
          acc = true;
          g.erase(idx);
          K.erase(wi);
        }
      } else {
        MarkedPoint q = p;
        for (int k = 0; k < dim; ++k) q.x[k] = p.x[k] + sigma * rng.normal();
        if (spec.window.is_box()) {
          const Box& b = spec.window.as_box();
          for (int k = 0; k < dim; ++k) q.x[k] = reflect(q.x[k], b.lower[k], b.upper[k]);
        }
        double v = rng.open_uniform();
        if (spec.window.contains(q.x) && !K.work().find(q.x)) {
          dh = K.translate_delta(wi, q);
          double la = log_acceptance(Move::translate, g.size(), zv, sign * dh, cs.mix);
          if (std::isfinite(dh) && (la >= 0 || std::log(v) < la)) {
            acc = true;
            g.erase(idx);
            g.insert(q);
            K.translate(wi, q);
          }
        }
      }
    }
    if (acc) {
      ++out.accepted[static_cast<int>(mv)];
      h += dh;
      if (lag) h = std::round(h);
      if (spec.verify_deltas) {
        double full = spec.model.conditional(g, xi);
        double tol = lag ? 0.0 : 1e-9 * std::max(1.0, std::abs(full));
        if (!(std::abs(full - h) <= tol)) {
          std::ostringstream os;
          os << "energy delta mismatch at step " << t << ": tracked " << h << ", recomputed " << full;
          throw std::logic_error(os.str());
        }
      }
      if (mv == Move::birth && dh < 0) ++run;
      else run = 0;
      if (run >= spec.divergence.window && h < spec.divergence.floor) {
        std::ostringstream os;
        os << "target not integrable: energy " << h << " after " << run
           << " consecutive energy-lowering births (step " << t << ", " << g.size() << " points)";
        NonIntegrableTarget e(os.str());
        e.step = t;
        e.energy = h;
        e.n_points = static_cast<long>(g.size());
        throw e;
      }
    }
    if (spec.record_trace) out.trace.push_back({t, mv, acc, static_cast<long>(g.size()), h});
    if (t >= cs.burnin) {
      post_trace.push_back(h);
      if ((t - cs.burnin + 1) % cs.thinning == 0) {
        out.samples.push_back(g);
        out.sample_energies.push_back(h);
      }
    }
  }
  out.rng_counter = rng.counter();
  out.final_state = g;
  out.final_energy = h;
  out.geweke = geweke_z(post_trace);
  return out;
}

std::vector<ChainOutput> run_chains(const GibbsSpec& spec, int chains, Execution ex) {
  if (chains < 1) throw std::invalid_argument("need at least one chain");
  validate(spec);
  std::vector<ChainOutput> out(static_cast<std::size_t>(chains));
  std::vector<std::string> errors(static_cast<std::size_t>(chains));
  auto one = [&](int c) {
    GibbsSpec s = spec;
    s.chain.seed = derive_seed(spec.chain.seed, static_cast<std::uint64_t>(c));
    try {
      out[static_cast<std::size_t>(c)] = run_chain(s);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(c)] = e.what();
    }
  };
  if (ex == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int c = 0; c < chains; ++c) one(c);
  } else {
    for (int c = 0; c < chains; ++c) one(c);
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  return out;
}

nlohmann::json checkpoint(const ChainOutput& out) {
  return {{"configuration", to_json(out.final_state)},
          {"energy", out.final_energy},
          {"rng", {{"seed", out.seed}, {"stream", out.stream}, {"counter", out.rng_counter}}}};
}

PartitionEstimate estimate_partition(const Window& window, double z, const EnergyModel& model,
                                     const MarkDistribution& marks, long n_samples, std::uint64_t seed,
                                     const std::optional<CounterexampleSpec>& witness, long k_max) {
  if (n_samples < 1) throw std::invalid_argument("need at least one sample");
  std::vector<double> terms(static_cast<std::size_t>(n_samples));
  for (long s = 0; s < n_samples; ++s) {
    Configuration g = sample_poisson({window, z, marks, derive_seed(seed, static_cast<std::uint64_t>(s))});
    terms[static_cast<std::size_t>(s)] = std::exp(-model.energy(g));
  }
  MeanSe ms = mean_se(terms);
  PartitionEstimate r;
  r.estimate = ms.mean;
  r.std_error = ms.se;
  r.samples = n_samples;
  if (witness) {
    LambdaScale sc = find_lambda_scale(*witness);
    CapMasses cm = cap_masses(*witness, sc.s);
    double cap = std::log(r.estimate + 5 * r.std_error);
    r.max_log_lower_bound = -INFINITY;
    for (long k = 1; k <= k_max; ++k) {
      double lb = z_lower_bound_log_term(k, cm.gamma_u, cm.gamma_v, cm.delta);
      r.max_log_lower_bound = std::max(r.max_log_lower_bound, lb);
      if (r.first_exceeding_k < 0 && lb > cap) r.first_exceeding_k = k;
    }
    r.divergent = !std::isfinite(r.estimate) || r.max_log_lower_bound > cap;
  } else {
    r.divergent = !std::isfinite(r.estimate);
  }
  return r;
}

double shift_average(const std::vector<Configuration>& samples, const LocalStatistic& F, long n) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  if (n < 1) throw std::invalid_argument("n must be positive");
  const Window& loc = F.locality;
  if (!loc.is_box()) throw std::invalid_argument("locality window must be a box");
  const double dn = static_cast<double>(n);
  for (int k = 0; k < 2; ++k)
    if (loc.as_box().lower[k] < -dn || loc.as_box().upper[k] > dn)
      throw std::invalid_argument("locality window is not inside Lambda_n");
  const std::size_t S = samples.size();
  double total = 0;
  for (std::size_t s = 0; s < S; ++s) {
    for (long kx = -n; kx < n; ++kx)
      for (long ky = -n; ky < n; ++ky) {
        std::vector<MarkedPoint> pts;
        int tile = 0;
        for (int tx = -1; tx <= 1; ++tx)
          for (int ty = -1; ty <= 1; ++ty) {
            std::size_t src = (tx == 0 && ty == 0) ? s : (s + 1 + static_cast<std::size_t>(tile++)) % S;
            for (const auto& p : samples[src]) {
              MarkedPoint q = p;
              q.x[0] = p.x[0] + 2 * dn * tx - static_cast<double>(kx);
              q.x[1] = p.x[1] + 2 * dn * ty - static_cast<double>(ky);
              if (loc.contains(q.x)) pts.push_back(q);
            }
          }
        total += F.f(Configuration(2, pts));
      }
  }
  return total / (static_cast<double>(S) * 4 * dn * dn);
}

DlrReport dlr_consistency_test(const DlrSpec& spec, Execution ex) {
  const Window big = Window::lambda_n(static_cast<double>(spec.big_n), 2);
  GibbsSpec outer;
  outer.window = big;
  outer.z = spec.z;
  outer.model = spec.model;
  outer.marks = spec.marks;
  outer.chain = spec.outer;
  outer.chain.seed = spec.seed;
  outer.record_trace = false;
  std::vector<ChainOutput> runs = run_chains(outer, spec.chains, ex);

  struct Item {
    Configuration inside, outside;
  };
  std::vector<Item> items;
  DlrReport r;
  r.effective = 0;
  for (const auto& run : runs) {
    std::vector<double> counts;
    for (const auto& g : run.samples) {
      items.push_back({restrict_to(g, spec.small), restrict_outside(g, spec.small)});
      counts.push_back(static_cast<double>(items.back().inside.size()));
    }
    r.effective += effective_sample_size(counts);
  }
  const long m = static_cast<long>(items.size());
  r.samples = m;
  r.a_count.resize(static_cast<std::size_t>(m));
  r.a_energy.resize(static_cast<std::size_t>(m));
  r.b_count.resize(static_cast<std::size_t>(m));
  r.b_energy.resize(static_cast<std::size_t>(m));
  std::vector<std::string> errors(static_cast<std::size_t>(m));
  auto one = [&](long j) {
    const std::size_t u = static_cast<std::size_t>(j);
    try {
      const Item& it = items[u];
      r.a_count[u] = static_cast<double>(it.inside.size());
      r.a_energy[u] = spec.model.conditional(it.inside, it.outside);
      GibbsSpec in;
      in.window = spec.small;
      in.z = spec.z;
      in.model = spec.model;
      in.marks = spec.marks;
      in.boundary = it.outside;
      in.chain.steps = spec.inner_steps;
      in.chain.burnin = spec.inner_steps;
      in.chain.thinning = 1;
      in.chain.seed = derive_seed(spec.seed, 1000000 + static_cast<std::uint64_t>(j));
      in.flip_delta_sign = spec.mutate_kernel;
      in.record_trace = false;
      in.divergence.floor = -INFINITY;
      ChainOutput o = run_chain(in);
      r.b_count[u] = static_cast<double>(o.final_state.size());
      r.b_energy[u] = o.final_energy;
    } catch (const std::exception& e) {
      errors[u] = e.what();
    }
  };
  if (ex == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long j = 0; j < m; ++j) one(j);
  } else {
    for (long j = 0; j < m; ++j) one(j);
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  if (m == 0) {
    r.note = "no samples";
    return r;
  }
  KsResult kc = ks_two_sample(r.a_count, r.b_count);
  KsResult ke = ks_two_sample(r.a_energy, r.b_energy);
  r.p_count = kc.p_value;
  r.p_energy = ke.p_value;
  r.statistic = std::max(kc.statistic, ke.statistic);
  r.p_value = std::min(1.0, 2 * std::min(kc.p_value, ke.p_value));
  r.tested = r.effective >= spec.min_effective;
  if (!r.tested) {
    std::ostringstream os;
    os << "insufficient effective sample size: " << r.effective << " < " << spec.min_effective;
    r.note = os.str();
  }
  return r;
}

nlohmann::json to_json(const DlrReport& r) {
  return {{"statistic", r.statistic}, {"pValue", r.p_value}, {"pCount", r.p_count},
          {"pEnergy", r.p_energy},    {"samples", r.samples},  {"effectiveSamples", r.effective},
          {"tested", r.tested},       {"note", r.note}};
}

}  // namespace gibbsgeom
