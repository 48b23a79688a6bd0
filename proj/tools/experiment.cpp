#include "experiment.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gibbsgeom/config.hpp"
#include "gibbsgeom/counterexample.hpp"
#include "gibbsgeom/execution.hpp"
#include "gibbsgeom/facet.hpp"
#include "gibbsgeom/gibbs.hpp"
#include "gibbsgeom/laguerre.hpp"
#include "gibbsgeom/laguerre_energy.hpp"
#include "gibbsgeom/poisson.hpp"
#include "gibbsgeom/svg.hpp"

namespace gibbsgeom::cli {

using json = nlohmann::json;

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, p);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

class Csv {
 public:
  explicit Csv(std::initializer_list<std::string> header) { row(std::vector<std::string>(header)); }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) os_ << (i ? "," : "") << csv_field(fields[i]);
    os_ << "\r\n";
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

std::string num(double v) { return csv_number(v); }
std::string num(long v) { return std::to_string(v); }

// schema helpers: every failure is a SchemaError
template <class F>
auto schema(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

void keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  schema(what, [&] {
    require_keys(j, allowed, what);
    return 0;
  });
}

template <class T>
T get_or(const json& j, const char* key, T dflt) {
  if (!j.contains(key)) return dflt;
  return schema(key, [&] { return j.at(key).get<T>(); });
}

const json& need(const json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(std::string("missing field: ") + key);
  return j.at(key);
}

Window parse_window(const json& j, const char* what) {
  return schema(what, [&] { return window_from_json(j); });
}

MarkDistribution parse_marks(const json& j, int dim) {
  return schema("marks", [&] { return mark_distribution_from_json(j, dim); });
}

Configuration parse_configuration(const json& j, const char* what, int dim = 2) {
  return schema(what, [&] { return configuration_from_json(j, dim); });
}

EnergyModel parse_model(const json& j) {
  return schema("model", [&] { return energy_model_from_json(j); });
}

double positive(const json& j, const char* key) {
  double v = schema(key, [&] { return need(j, key).get<double>(); });
  if (!(v > 0) || !std::isfinite(v)) throw SchemaError(std::string(key) + " must be positive");
  return v;
}

ChainSettings parse_chain(const json& j, std::uint64_t seed) {
  keys(j, {"steps", "burnin", "thinning", "moveMix", "sigma"}, "chain");
  ChainSettings c;
  c.steps = get_or<long>(j, "steps", c.steps);
  c.burnin = get_or<long>(j, "burnin", c.burnin);
  c.thinning = get_or<long>(j, "thinning", c.thinning);
  c.sigma = get_or<double>(j, "sigma", 0.0);
  c.seed = seed;
  if (j.contains("moveMix")) {
    auto m = schema("moveMix", [&] { return j.at("moveMix").get<std::vector<double>>(); });
    if (m.size() != 3) throw SchemaError("moveMix needs three probabilities");
    c.mix = {m[0], m[1], m[2]};
  }
  return c;
}

struct Common {
  std::string kind;
  std::string name;
  std::uint64_t seed = 1;
};

Common parse_common(const json& j) {
  if (!j.is_object()) throw SchemaError("config must be a JSON object");
  Common c;
  c.kind = schema("kind", [&] { return need(j, "kind").get<std::string>(); });
  c.name = get_or<std::string>(j, "name", c.kind);
  if (c.name.empty() || c.name.find('/') != std::string::npos) throw SchemaError("name must be a plain file stem");
  c.seed = get_or<std::uint64_t>(j, "seed", 1);
  return c;
}

#define COMMON_KEYS "kind", "name", "seed"

// ---- poisson ----
struct PoissonExp {
  PoissonSpec spec;
};

PoissonExp parse_poisson(const json& j, const Common& c) {
  keys(j, {COMMON_KEYS, "window", "z", "marks"}, "poisson config");
  PoissonExp e;
  e.spec.window = parse_window(need(j, "window"), "window");
  if (!e.spec.window.bounded()) throw SchemaError("window must be bounded");
  e.spec.z = positive(j, "z");
  e.spec.marks = parse_marks(need(j, "marks"), e.spec.window.dim());
  e.spec.seed = c.seed;
  return e;
}

std::string points_csv(const Configuration& g) {
  Csv csv{"index", "x", "y", "mark_kind", "value", "normal_x", "normal_y"};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& p = g[i];
    if (is_facet(p)) {
      const auto& f = facet_mark(p);
      csv.row({num(static_cast<long>(i)), num(p.x[0]), num(p.x[1]), "facet", num(f.radius), num(f.normal[0]),
               num(f.normal[1])});
    } else {
      csv.row({num(static_cast<long>(i)), num(p.x[0]), num(p.x[1]), "weight", num(weight_of(p)), "", ""});
    }
  }
  return csv.str();
}

ExperimentResult run_poisson(const PoissonExp& e, const Common& c) {
  Configuration g = sample_poisson(e.spec);
  ExperimentResult r;
  r.summary = {{"count", g.size()}, {"expected", e.spec.z * e.spec.window.volume()}};
  r.artifacts.push_back({c.name + ".json", json{{"configuration", to_json(g)}}.dump(2) + "\n"});
  r.artifacts.push_back({c.name + ".csv", points_csv(g)});
  return r;
}

// ---- facet-energy ----
struct FacetExp {
  Configuration g{2};
  FacetEnergyModel model;
  std::optional<Window> view;
};

FacetExp parse_facet(const json& j) {
  keys(j, {COMMON_KEYS, "configuration", "model", "view"}, "facet-energy config");
  FacetExp e;
  e.g = parse_configuration(need(j, "configuration"), "configuration");
  for (const auto& p : e.g)
    if (!is_facet(p)) throw SchemaError("facet-energy needs facet marks");
  if (j.contains("model")) {
    EnergyModel m = parse_model(j.at("model"));
    if (m.is_laguerre()) throw SchemaError("facet-energy needs a facet model");
    e.model = std::get<FacetEnergyModel>(m.kind);
  }
  if (e.g.dim() != e.model.d) throw SchemaError("configuration dimension does not match the model");
  if (j.contains("view")) e.view = parse_window(j.at("view"), "view");
  return e;
}

ExperimentResult run_facet(const FacetExp& e, const Common& c, Execution ex) {
  ExperimentResult r;
  double h = facet_energy(e.g, e.model, ex);
  r.summary = {{"energy", h}, {"points", e.g.size()}};
  if (e.g.dim() == 2) r.summary["crossingPairs"] = crossing_pairs(e.g, e.model.tolerance);
  r.artifacts.push_back({c.name + ".json", r.summary.dump(2) + "\n"});
  if (e.g.dim() == 2) {
    Window view = e.view ? *e.view : Window::lambda_n(std::max(1.0, std::ceil(mark_sup(e.g) + [&] {
                                                        double m = 0;
                                                        for (const auto& p : e.g) m = std::max(m, norm(p.x));
                                                        return m;
                                                      }())),
                                                      2);
    r.artifacts.push_back({c.name + ".svg", render_svg(e.g, view)});
  }
  return r;
}

// ---- facet-counterexample ----
struct CounterExp {
  CounterexampleSpec spec;
  long k_from = 1, k_to = 20;
  std::vector<int> n_list{2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
};

CounterExp parse_counter(const json& j) {
  keys(j, {COMMON_KEYS, "spec", "kFrom", "kTo", "NList"}, "facet-counterexample config");
  CounterExp e;
  e.spec = j.contains("spec") ? schema("spec", [&] { return counterexample_from_json(j.at("spec")); })
                              : shipped_counterexample();
  e.k_from = get_or<long>(j, "kFrom", 1);
  e.k_to = get_or<long>(j, "kTo", 20);
  if (e.k_from < 1 || e.k_to < e.k_from) throw SchemaError("need 1 <= kFrom <= kTo");
  e.n_list = get_or<std::vector<int>>(j, "NList", e.n_list);
  for (int n : e.n_list)
    if (n < 2 || n % 2) throw SchemaError("NList entries must be even and >= 2");
  return e;
}

ExperimentResult run_counter(const CounterExp& e, const Common& c) {
  ExperimentResult r;
  auto rows = counterexample_table(e.spec, e.k_from, e.k_to, c.seed);
  Csv csv{"k", "log_lower_bound", "cross_pair_count", "energy"};
  for (const auto& row : rows) csv.row({num(row.k), num(row.log_lower_bound), num(row.cross_pair_count), num(row.energy)});
  // index from which the column increases strictly to the end
  long k0 = rows.empty() ? -1 : rows.back().k;
  for (std::size_t i = rows.size(); i-- > 1;) {
    if (rows[i].log_lower_bound > rows[i - 1].log_lower_bound) k0 = rows[i - 1].k;
    else break;
  }
  json gam = json::array();
  FacetEnergyModel attractive{2, {-1.0}, 1e-9};
  for (int n : e.n_list) {
    CounterexampleSpec s = e.spec;
    s.N = n;
    double h = facet_energy(gen_gamma_N(s), attractive);
    gam.push_back({{"N", n}, {"energy", h}, {"expected", -(n / 2) * (n / 2)}});
  }
  LambdaScale ls = find_lambda_scale(e.spec, c.seed);
  r.summary = {{"increasingFrom", k0}, {"gammaN", gam}, {"scale", ls.s}, {"spec", to_json(e.spec)}};
  r.artifacts.push_back({c.name + ".csv", csv.str()});
  r.artifacts.push_back({c.name + ".json", r.summary.dump(2) + "\n"});
  return r;
}

// ---- laguerre-build ----
struct LaguerreExp {
  std::optional<Configuration> g;
  std::optional<PoissonSpec> poisson;
  std::optional<Window> bbox;
};

LaguerreExp parse_laguerre(const json& j, const Common& c) {
  keys(j, {COMMON_KEYS, "configuration", "poisson", "bbox"}, "laguerre-build config");
  LaguerreExp e;
  if (j.contains("configuration") == j.contains("poisson"))
    throw SchemaError("laguerre-build needs exactly one of configuration, poisson");
  if (j.contains("configuration")) {
    e.g = parse_configuration(j.at("configuration"), "configuration");
    for (const auto& p : *e.g)
      if (is_facet(p)) throw SchemaError("laguerre-build needs weight marks");
  } else {
    const json& p = j.at("poisson");
    keys(p, {"window", "z", "marks"}, "poisson");
    PoissonSpec s;
    s.window = parse_window(need(p, "window"), "window");
    s.z = positive(p, "z");
    s.marks = parse_marks(need(p, "marks"), 2);
    if (!std::holds_alternative<WeightDist>(s.marks.kind)) throw SchemaError("laguerre-build needs weight marks");
    s.seed = c.seed;
    e.poisson = s;
  }
  if (j.contains("bbox")) {
    e.bbox = parse_window(j.at("bbox"), "bbox");
    if (!e.bbox->is_box() || e.bbox->dim() != 2) throw SchemaError("bbox must be a 2-d box");
  }
  return e;
}

ExperimentResult run_laguerre(const LaguerreExp& e, const Common& c, Execution ex) {
  Configuration g = e.g ? *e.g : sample_poisson(*e.poisson);
  std::vector<Generator> gens = generators_of(g);
  Box bb = e.bbox ? e.bbox->as_box() : default_bbox(gens);
  LaguerreDiagram d = build_diagram(gens, bb, ex);
  GPWitnesses gp = check_general_position(gens, ex);
  NormalityReport nr = is_normal(d);
  LaguerreEnergyResult h = laguerre_energy(d);
  ExperimentResult r;
  json hist = json::object();
  for (auto [k, v] : nr.vertex_degree_histogram) hist[std::to_string(k)] = v;
  r.summary = {{"generators", gens.size()},
               {"gp1", gp.gp1},
               {"gp2", gp.gp2},
               {"normal", nr.normal},
               {"vertexDegrees", hist},
               {"emptyCells", d.empty_cells},
               {"energy", h.infinite ? json("inf") : json(h.value)}};
  r.artifacts.push_back({c.name + ".json", to_json(d).dump(1) + "\n"});
  r.artifacts.push_back({c.name + ".svg", render_svg(d)});
  r.artifacts.push_back({c.name + "_summary.json", r.summary.dump(2) + "\n"});
  return r;
}

// ---- gibbs-chain ----
GibbsSpec parse_gibbs_spec(const json& j, const Common& c) {
  GibbsSpec s;
  s.window = parse_window(need(j, "window"), "window");
  s.z = positive(j, "z");
  s.model = parse_model(need(j, "model"));
  s.marks = parse_marks(need(j, "marks"), s.window.dim());
  if (j.contains("boundary")) s.boundary = parse_configuration(j.at("boundary"), "boundary", s.window.dim());
  if (j.contains("initial")) s.initial = parse_configuration(j.at("initial"), "initial", s.window.dim());
  if (j.contains("cutoff")) {
    const json& co = j.at("cutoff");
    keys(co, {"n", "a"}, "cutoff");
    s.cutoff = Cutoff{schema("cutoff.n", [&] { return need(co, "n").get<long>(); }), positive(co, "a")};
  }
  s.chain = parse_chain(j.contains("chain") ? j.at("chain") : json::object(), c.seed);
  if (j.contains("divergence")) {
    const json& dv = j.at("divergence");
    keys(dv, {"window", "floor"}, "divergence");
    s.divergence.window = get_or<long>(dv, "window", s.divergence.window);
    s.divergence.floor = get_or<double>(dv, "floor", s.divergence.floor);
  }
  s.flip_delta_sign = get_or<bool>(j, "mutate", false);
  schema("gibbs spec", [&] {
    validate(s);
    return 0;
  });
  return s;
}

ExperimentResult run_gibbs(const GibbsSpec& s, const Common& c) {
  ChainOutput o = run_chain(s);
  Csv csv{"step", "moveType", "accepted", "nPoints", "energy"};
  for (const auto& t : o.trace)
    csv.row({num(t.step), move_name(t.move), t.accepted ? "1" : "0", num(t.n_points), num(t.energy)});
  std::vector<double> counts;
  for (const auto& g : o.samples) counts.push_back(static_cast<double>(g.size()));
  double mean = 0;
  for (double v : counts) mean += v;
  if (!counts.empty()) mean /= static_cast<double>(counts.size());
  ExperimentResult r;
  r.summary = {{"samples", o.samples.size()},
               {"meanCount", mean},
               {"acceptance",
                {{"birth", o.acceptance_rate(Move::birth)},
                 {"death", o.acceptance_rate(Move::death)},
                 {"translate", o.acceptance_rate(Move::translate)}}},
               {"finalEnergy", o.final_energy},
               {"geweke", o.geweke}};
  r.artifacts.push_back({c.name + "_trace.csv", csv.str()});
  r.artifacts.push_back({c.name + "_checkpoint.json", checkpoint(o).dump(2) + "\n"});
  r.artifacts.push_back({c.name + ".json", r.summary.dump(2) + "\n"});
  return r;
}

// ---- dlr-test ----
DlrSpec parse_dlr(const json& j, const Common& c) {
  keys(j, {COMMON_KEYS, "bigN", "small", "z", "model", "marks", "chains", "chain", "innerSteps", "mutate",
           "minEffective"},
       "dlr-test config");
  DlrSpec s;
  s.big_n = get_or<long>(j, "bigN", 4);
  s.small = parse_window(need(j, "small"), "small");
  s.z = positive(j, "z");
  s.model = parse_model(need(j, "model"));
  s.marks = parse_marks(need(j, "marks"), 2);
  s.chains = get_or<int>(j, "chains", 4);
  s.outer = parse_chain(j.contains("chain") ? j.at("chain") : json::object(), c.seed);
  s.inner_steps = get_or<long>(j, "innerSteps", 2000);
  s.mutate_kernel = get_or<bool>(j, "mutate", false);
  s.min_effective = get_or<double>(j, "minEffective", 100.0);
  s.seed = c.seed;
  if (s.chains < 1 || s.inner_steps < 1 || s.big_n < 1) throw SchemaError("chains, innerSteps and bigN must be positive");
  GibbsSpec probe;
  probe.window = Window::lambda_n(static_cast<double>(s.big_n), 2);
  probe.z = s.z;
  probe.model = s.model;
  probe.marks = s.marks;
  probe.chain = s.outer;
  schema("dlr spec", [&] {
    validate(probe);
    return 0;
  });
  return s;
}

ExperimentResult run_dlr(const DlrSpec& s, const Common& c, Execution ex) {
  DlrReport rep = dlr_consistency_test(s, ex);
  Csv csv{"sample", "count_full", "energy_full", "count_resampled", "energy_resampled"};
  for (std::size_t i = 0; i < rep.a_count.size(); ++i)
    csv.row({num(static_cast<long>(i)), num(rep.a_count[i]), num(rep.a_energy[i]), num(rep.b_count[i]),
             num(rep.b_energy[i])});
  ExperimentResult r;
  r.summary = to_json(rep);
  r.artifacts.push_back({c.name + ".csv", csv.str()});
  r.artifacts.push_back({c.name + ".json", r.summary.dump(2) + "\n"});
  return r;
}

// ---- admissibility ----
struct AdmExp {
  Configuration g{2};
  AdmissibilityParams p;
};

AdmExp parse_adm(const json& j) {
  keys(j, {COMMON_KEYS, "configuration", "observation", "delta", "l", "kMax", "cset"}, "admissibility config");
  AdmExp e;
  e.g = parse_configuration(need(j, "configuration"), "configuration");
  for (const auto& p : e.g)
    if (is_facet(p)) throw SchemaError("admissibility needs weight marks");
  if (j.contains("observation")) e.p.observation = parse_window(j.at("observation"), "observation");
  e.p.delta = get_or<double>(j, "delta", 0.5);
  e.p.l = get_or<int>(j, "l", 1);
  e.p.k_max = get_or<int>(j, "kMax", 0);
  if (j.contains("cset")) {
    const json& cs = j.at("cset");
    keys(cs, {"lambda", "a", "l", "n", "gridStep"}, "cset");
    e.p.lambda = parse_window(need(cs, "lambda"), "cset.lambda");
    e.p.a = positive(cs, "a");
    e.p.cl = get_or<long>(cs, "l", 1);
    e.p.cn = get_or<long>(cs, "n", 1);
    e.p.grid_step = get_or<double>(cs, "gridStep", 0.0);
  }
  return e;
}

// ---- property-suite ----
struct PropExp {
  long trials = 10000;
  double delta = 0.5;
  int l = 3;
  long tau_pairs = 100;
};

PropExp parse_prop(const json& j) {
  keys(j, {COMMON_KEYS, "trials", "delta", "l", "tauPairs"}, "property-suite config");
  PropExp e;
  e.trials = get_or<long>(j, "trials", e.trials);
  e.delta = get_or<double>(j, "delta", e.delta);
  e.l = get_or<int>(j, "l", e.l);
  e.tau_pairs = get_or<long>(j, "tauPairs", e.tau_pairs);
  if (e.trials < 1 || e.l < 1 || e.tau_pairs < 1 || !(e.delta > 0)) throw SchemaError("property-suite parameters must be positive");
  return e;
}

ExperimentResult run_prop(const PropExp& e, const Common& c) {
  long p1 = 0;
  for (long t = 0; t < e.trials; ++t) {
    StreamRng rng(c.seed, 0x5055, static_cast<std::uint64_t>(t) << 8);
    double n = 1 + 7 * rng.uniform();
    PoissonSpec ps{Window::lambda_n(n, 2), 0.5 + 2 * rng.uniform(),
                   MarkDistribution::weights(UniformLaw{0.0, 1.5}), derive_seed(c.seed, static_cast<std::uint64_t>(t))};
    Configuration g = sample_poisson(ps);
    auto t_level = temperedness_level(g, e.delta);
    if (t_level && verify_property_1(g, *t_level, e.delta, 1, required_l_max(g) + 2)) ++p1;
  }
  bool pom = verify_lemma_pomocne(e.l, e.trials, c.seed);
  long mono = 0;
  for (long t = 0; t < e.tau_pairs; ++t) {
    StreamRng rng(c.seed, 0x7A0, static_cast<std::uint64_t>(t) << 8);
    double m1 = 5 * rng.uniform(), m2 = 5 * rng.uniform();
    if (m1 > m2) std::swap(m1, m2);
    long l0 = static_cast<long>(1 + rng.below(20));
    Window lam = Window::lambda_n(1 + static_cast<double>(rng.below(5)), 2);
    if (compute_tau(m1, l0, lam) <= compute_tau(m2, l0, lam)) ++mono;
  }
  ExperimentResult r;
  r.summary = {{"property1", {{"passed", p1}, {"trials", e.trials}}},
               {"lemmaPomocne", {{"passed", pom}, {"trials", e.trials}, {"l", e.l}}},
               {"tauMonotone", {{"passed", mono}, {"pairs", e.tau_pairs}}}};
  r.artifacts.push_back({c.name + ".json", r.summary.dump(2) + "\n"});
  return r;
}

struct Plan {
  Common common;
  std::function<ExperimentResult(Execution)> run;
};

Plan plan(const json& config, const RunOptions& opt) {
  json cfg = effective_config(config, opt);
  Plan p;
  p.common = parse_common(cfg);
  const Common c = p.common;
  const std::string& k = c.kind;
  if (k == "poisson") {
    auto e = parse_poisson(cfg, c);
    p.run = [e, c](Execution) { return run_poisson(e, c); };
  } else if (k == "facet-energy") {
    auto e = parse_facet(cfg);
    p.run = [e, c](Execution ex) { return run_facet(e, c, ex); };
  } else if (k == "facet-counterexample") {
    auto e = parse_counter(cfg);
    p.run = [e, c](Execution) { return run_counter(e, c); };
  } else if (k == "laguerre-build") {
    auto e = parse_laguerre(cfg, c);
    p.run = [e, c](Execution ex) { return run_laguerre(e, c, ex); };
  } else if (k == "gibbs-chain") {
    keys(cfg, {COMMON_KEYS, "window", "z", "model", "marks", "boundary", "initial", "cutoff", "chain", "divergence",
               "mutate"},
         "gibbs-chain config");
    auto s = parse_gibbs_spec(cfg, c);
    p.run = [s, c](Execution) { return run_gibbs(s, c); };
  } else if (k == "dlr-test") {
    auto s = parse_dlr(cfg, c);
    p.run = [s, c](Execution ex) { return run_dlr(s, c, ex); };
  } else if (k == "admissibility") {
    auto e = parse_adm(cfg);
    p.run = [e, c](Execution) {
      ExperimentResult r;
      r.summary = to_json(is_admissible(e.g, e.p));
      r.artifacts.push_back({c.name + ".json", r.summary.dump(2) + "\n"});
      return r;
    };
  } else if (k == "property-suite") {
    auto e = parse_prop(cfg);
    p.run = [e, c](Execution) { return run_prop(e, c); };
  } else {
    throw SchemaError("unknown experiment kind: " + k);
  }
  return p;
}

}  // namespace

void validate_experiment(const json& config) { plan(config, {}); }

json effective_config(const json& config, const RunOptions& opt) {
  json cfg = config;
  if (opt.seed_override && cfg.is_object()) cfg["seed"] = *opt.seed_override;
  return cfg;
}

ExperimentResult run_experiment(const json& config, const RunOptions& opt) {
  Plan p = plan(config, opt);
  if (opt.threads > 0) set_thread_budget(opt.threads);
  return p.run(opt.threads > 1 ? Execution::parallel : Execution::serial);
}

json write_outputs(const std::string& out_dir, const json& config, const ExperimentResult& r) {
  namespace fs = std::filesystem;
  json outputs = json::array();
  for (const auto& a : r.artifacts) {
    write_atomic((fs::path(out_dir) / a.file).string(), a.content);
    outputs.push_back({{"path", a.file}, {"fnv1a64", hex64(fnv1a64(a.content))}, {"bytes", a.content.size()}});
  }
  json m = {{"tool", "gibbs-geom"},
            {"version", kToolVersion},
            {"kind", config.value("kind", "")},
            {"configHash", hex64(fnv1a64(config.dump()))},
            {"seeds", {{"seed", config.value("seed", std::uint64_t{1})}}},
            {"outputs", outputs},
            {"summary", r.summary}};
  write_atomic((fs::path(out_dir) / "manifest.json").string(), m.dump(2) + "\n");
  return m;
}

namespace {

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SchemaError("cannot read " + path);
  try {
    return json::parse(f);
  } catch (const std::exception& e) {
    throw SchemaError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
}

}  // namespace

int main_cli(int argc, char** argv) {
  CLI::App app{"Gibbs facet and Laguerre tessellation experiments"};
  app.require_subcommand(1);
  std::string config_path, out_dir = ".", in_path, out_path;
  std::uint64_t seed_override = 0;
  bool verbose = false;
  int threads = 1;
  int remove = -1;

  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("--config", config_path, "experiment JSON")->required();
  run->add_option("--out-dir", out_dir, "output directory");
  auto* so = run->add_option("--seed-override", seed_override, "replace the config seed");
  run->add_flag("--verbose", verbose);
  run->add_option("--threads", threads, "thread budget")->check(CLI::PositiveNumber);

  auto* val = app.add_subcommand("validate", "check a config without running it");
  val->add_option("--config", config_path, "experiment JSON")->required();

  auto* ren = app.add_subcommand("render", "render a diagram or facet configuration to SVG");
  ren->add_option("--in", in_path, "diagram JSON or facet configuration")->required();
  ren->add_option("--out", out_path, "SVG file")->required();
  ren->add_option("--remove", remove, "draw the diagram after removing this generator, new edges dashed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*val) {
      validate_experiment(read_json_file(config_path));
      std::cout << "ok\n";
      return 0;
    }
    if (*ren) {
      json j = read_json_file(in_path);
      std::string svg;
      if (j.is_object() && j.contains("generators")) {
        LaguerreDiagram d = schema("diagram", [&] { return diagram_from_json(j); });
        if (remove >= 0) {
          if (remove >= static_cast<int>(d.generators.size())) throw SchemaError("--remove index out of range");
          std::vector<MarkedPoint> pts;
          for (const auto& g : d.generators) pts.push_back({{g.x[0], g.x[1], 0}, WeightMark{g.w}});
          Configuration cfg(2, pts);
          // Configuration sorts points; find the generator again by location
          int idx = static_cast<int>(*cfg.find({d.generators[static_cast<std::size_t>(remove)].x[0],
                                                 d.generators[static_cast<std::size_t>(remove)].x[1], 0}));
          RemovalReport rep = removal_diff(cfg, idx);
          std::vector<Generator> rest = d.generators;
          rest.erase(rest.begin() + remove);
          svg = render_svg(build_diagram(rest, d.bbox), {}, rep.new_edges);
        } else {
          svg = render_svg(d);
        }
      } else {
        json arr = j.is_object() && j.contains("configuration") ? j.at("configuration") : j;
        Configuration g = parse_configuration(arr, "configuration");
        double ext = 1;
        for (const auto& p : g) ext = std::max(ext, norm(p.x) + mark_norm(p.mark));
        svg = render_svg(g, Window::lambda_n(std::ceil(ext), 2));
      }
      write_atomic(out_path, svg);
      return 0;
    }
    json cfg = read_json_file(config_path);
    RunOptions opt;
    if (so->count()) opt.seed_override = seed_override;
    opt.threads = threads;
    opt.verbose = verbose;
    json eff = effective_config(cfg, opt);
    validate_experiment(eff);
    if (verbose) std::cerr << "running " << eff.value("kind", "") << "\n";
    ExperimentResult r = run_experiment(cfg, opt);
    json manifest = write_outputs(out_dir, eff, r);
    std::cout << manifest.dump(2) << "\n";
    return 0;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gibbsgeom::cli
