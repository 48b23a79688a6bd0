#include "gibbsgeom/laguerre_energy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace gibbsgeom {

LaguerreEnergyResult laguerre_energy(const std::vector<Generator>& gens, Execution ex) {
  LaguerreEnergyResult r;
  const int n = static_cast<int>(gens.size());
  r.per_cell.assign(static_cast<std::size_t>(n), 0);
  auto one = [&](int i) {
    Cell c = compute_cell(gens, i);
    int cnt = -1;
    if (!c.empty) {
      cnt = 0;
      for (const auto& v : c.vertices)
        if (!v.at_infinity) ++cnt;
    }
    r.per_cell[static_cast<std::size_t>(i)] = cnt;
  };
  if (ex == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) one(i);
  } else {
    for (int i = 0; i < n; ++i) one(i);
  }
  for (int i = 0; i < n; ++i) {
    int c = r.per_cell[static_cast<std::size_t>(i)];
    if (c < 0) r.empty_cells.push_back(i);
    else r.value += c;
  }
  r.infinite = !r.empty_cells.empty();
  return r;
}

LaguerreEnergyResult laguerre_energy(const Configuration& g, Execution ex) {
  return laguerre_energy(generators_of(g), ex);
}

LaguerreEnergyResult laguerre_energy(const LaguerreDiagram& d) {
  LaguerreEnergyResult r;
  for (std::size_t i = 0; i < d.cells.size(); ++i) {
    const Cell& c = d.cells[i];
    if (c.empty) {
      r.per_cell.push_back(-1);
      r.empty_cells.push_back(static_cast<int>(i));
      continue;
    }
    int cnt = 0;
    for (const auto& v : c.vertices)
      if (!v.at_infinity) ++cnt;
    r.per_cell.push_back(cnt);
    r.value += cnt;
  }
  r.infinite = !r.empty_cells.empty();
  return r;
}

namespace {

using Triple = std::array<int, 3>;

Triple triple_of(std::vector<int> v) {
  if (v.size() != 3) throw std::logic_error("vertex is not incident to exactly three cells");
  std::sort(v.begin(), v.end());
  return {v[0], v[1], v[2]};
}

}  // namespace

RemovalReport removal_diff(const Configuration& g, int i) {
  std::vector<Generator> gens = generators_of(g);
  if (i < 0 || i >= static_cast<int>(gens.size())) throw std::out_of_range("generator index");
  GPWitnesses gp = check_general_position(gens);
  if (!gp.gp1 || !gp.gp2) throw PreconditionViolation("configuration is not in general position");
  Box bbox = default_bbox(gens);
  LaguerreDiagram d = build_diagram(gens, bbox);
  if (!d.empty_cells.empty()) throw PreconditionViolation("configuration has empty cells");
  if (!d.cells[static_cast<std::size_t>(i)].bounded) throw PreconditionViolation("cell is unbounded");
  std::vector<Generator> gens2 = gens;
  gens2.erase(gens2.begin() + i);
  LaguerreDiagram d2 = build_diagram(gens2, bbox);
  LaguerreEnergyResult h1 = laguerre_energy(d), h2 = laguerre_energy(d2);
  if (h2.infinite) throw std::logic_error("removal created an empty cell");

  RemovalReport r;
  r.diff = h1.value - h2.value;
  auto up = [i](int j) { return j < i ? j : j + 1; };

  std::set<Triple> old_vertices;
  for (const auto& v : d.vertices) old_vertices.insert(triple_of(v.cells));
  std::set<std::pair<int, int>> old_edges;
  for (const auto& e : d.edges) old_edges.insert({std::min(e.a, e.b), std::max(e.a, e.b)});
  const std::vector<int>& nb = d.neighbors[static_cast<std::size_t>(i)];
  std::set<int> N(nb.begin(), nb.end());
  r.k = static_cast<int>(nb.size());

  // nodes of the local graph, keyed by generator triple (indices of gamma)
  std::map<Triple, Point2> nodes;
  const Cell& cx = d.cells[static_cast<std::size_t>(i)];
  for (std::size_t j = 0; j < cx.vertices.size(); ++j) {
    int id = d.vertex_ids[static_cast<std::size_t>(i)][j];
    nodes[triple_of(d.vertices[static_cast<std::size_t>(id)].cells)] = d.vertices[static_cast<std::size_t>(id)].pos;
  }
  std::map<int, Triple> new_id;  // d2 vertex id -> triple, for new vertices
  for (std::size_t v = 0; v < d2.vertices.size(); ++v) {
    std::vector<int> c;
    for (int j : d2.vertices[v].cells) c.push_back(up(j));
    Triple t = triple_of(c);
    if (old_vertices.count(t)) continue;
    for (int j : t)
      if (!N.count(j)) throw std::logic_error("new vertex outside the removed cell");
    new_id[static_cast<int>(v)] = t;
    nodes[t] = d2.vertices[v].pos;
    ++r.v2;
  }
  std::map<Triple, int> degree;
  for (const auto& [t, pos] : nodes)
    if (std::find(t.begin(), t.end(), i) != t.end()) degree[t] += 2;  // two edges of the removed cell
  for (const auto& e : d2.edges) {
    int a = up(e.a), b = up(e.b);
    if (!N.count(a) || !N.count(b)) continue;
    std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    std::vector<Triple> ends;
    if (old_edges.count(key)) {
      Triple t = triple_of({i, a, b});
      if (!old_vertices.count(t)) continue;  // their shared edge lies elsewhere
      ends.push_back(t);
      int inside = 0;
      for (int v : {e.v0, e.v1})
        if (v >= 0 && new_id.count(v)) ends.push_back(new_id[v]), ++inside;
      if (inside != 1) throw std::logic_error("extended edge does not end at a new vertex");
    } else {
      for (int v : {e.v0, e.v1}) {
        if (v < 0 || !new_id.count(v)) throw std::logic_error("new edge leaves the removed cell");
        ends.push_back(new_id[v]);
      }
    }
    ++r.e2;
    degree[ends[0]]++;
    degree[ends[1]]++;
    r.new_edges.push_back({nodes[ends[0]], nodes[ends[1]]});
  }
  for (int y : nb) {
    int vi = 0;
    for (const auto& [id, t] : new_id)
      if (std::find(t.begin(), t.end(), y) != t.end()) ++vi;
    r.sum_vi += vi;
  }
  r.degrees = true;
  for (const auto& [t, pos] : nodes)
    if (degree[t] != 3) r.degrees = false;
  r.handshake = 3 * (r.k + r.v2) == 2 * (r.k + r.e2);
  r.tree = r.k + r.v2 == r.e2 + 1;
  r.vi_sum = r.sum_vi == 3 * r.v2;
  return r;
}

long removal_diff_value(const Configuration& g, int i) { return removal_diff(g, i).diff; }

CondValue laguerre_energy_difference(const Configuration& gamma_lambda, const Configuration& xi, double n) {
  Window ln = Window::lambda_n(n, 2);
  Configuration xin = restrict_to(xi, ln);
  LaguerreEnergyResult hb = laguerre_energy(xin);
  CondValue v;
  if (hb.infinite) {
    v.kind = CondKind::undefined;
    return v;
  }
  LaguerreEnergyResult ha = laguerre_energy(unite(gamma_lambda, xin));
  if (ha.infinite) {
    v.kind = CondKind::infinite;
    return v;
  }
  v.value = ha.value - hb.value;
  return v;
}

static long covering_n(const Window& lambda) {
  double m = 0;
  if (lambda.is_box()) {
    const Box& b = lambda.as_box();
    for (int k = 0; k < lambda.dim(); ++k) m = std::max({m, -b.lower[k], b.upper[k]});
  } else {
    const Ball& b = lambda.as_ball();
    for (int k = 0; k < lambda.dim(); ++k) m = std::max(m, std::abs(b.center[k]) + b.radius);
    m = std::nextafter(m, INFINITY);
  }
  return std::max(1L, static_cast<long>(std::ceil(m)));
}

std::vector<long> default_schedule(const Configuration& xi, const Window& lambda) {
  double ext = 0;
  for (const auto& p : xi) ext = std::max({ext, std::abs(p.x[0]), std::abs(p.x[1])});
  long n = covering_n(lambda);
  std::vector<long> s{n};
  while (static_cast<double>(n) <= ext) {
    n *= 2;
    s.push_back(n);
  }
  s.push_back(2 * n);
  return s;
}

CondEnergyResult conditional_energy_laguerre(const Configuration& gamma_lambda, const Configuration& xi,
                                             const Window& lambda, std::vector<long> schedule) {
  for (const auto& p : xi)
    if (lambda.contains(p.x)) throw std::invalid_argument("boundary configuration meets the window");
  for (const auto& p : gamma_lambda)
    if (!lambda.contains(p.x)) throw std::invalid_argument("inner configuration leaves the window");
  if (schedule.empty()) schedule = default_schedule(xi, lambda);
  if (!std::is_sorted(schedule.begin(), schedule.end())) throw std::invalid_argument("schedule must increase");
  CondEnergyResult r;
  r.schedule = schedule;
  long need = covering_n(lambda);
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    if (schedule[j] < need) throw std::invalid_argument("schedule entry does not cover the window");
    r.trace.push_back(laguerre_energy_difference(gamma_lambda, xi, static_cast<double>(schedule[j])));
    if (j > 0 && r.trace[j] == r.trace[j - 1]) {
      r.stabilized = true;
      r.value = r.trace[j];
      r.stabilized_at = schedule[j - 1];
      return r;
    }
  }
  if (!r.trace.empty()) r.value = r.trace.back();
  return r;
}

double default_grid_step(const Window& lambda) { return std::min(0.05 * lambda.diameter(), 0.1); }

CSetReport check_C_set(const Configuration& xi, const Window& lambda, double a, long l, long n,
                       double grid_step, Execution ex) {
  Window ln = Window::lambda_n(static_cast<double>(n), 2);
  if (covering_n(lambda) > n) throw std::invalid_argument("window is not inside Lambda_n");
  if (grid_step <= 0) grid_step = default_grid_step(lambda);
  CSetReport r;
  r.a = a;
  r.l = l;
  r.n = n;
  r.lambda = lambda;
  r.grid_step = grid_step;
  std::vector<MarkedPoint> ring;
  for (const auto& p : xi)
    if (ln.contains(p.x) && !lambda.contains(p.x)) ring.push_back(p);
  const double half = 0.5 * static_cast<double>(l);
  for (const auto& p : ring)
    if (std::hypot(p.x[0], p.x[1]) < half) r.c1 = true;

  std::vector<Point2> grid;
  double lo[2], hi[2];
  if (lambda.is_box()) {
    for (int k = 0; k < 2; ++k) lo[k] = lambda.as_box().lower[k], hi[k] = lambda.as_box().upper[k];
  } else {
    const Ball& b = lambda.as_ball();
    for (int k = 0; k < 2; ++k) lo[k] = b.center[k] - b.radius, hi[k] = b.center[k] + b.radius;
  }
  long nx = static_cast<long>(std::ceil((hi[0] - lo[0]) / grid_step));
  long ny = static_cast<long>(std::ceil((hi[1] - lo[1]) / grid_step));
  for (long ix = 0; ix <= nx; ++ix)
    for (long iy = 0; iy <= ny; ++iy) {
      Point2 z{std::min(hi[0], lo[0] + static_cast<double>(ix) * grid_step),
               std::min(hi[1], lo[1] + static_cast<double>(iy) * grid_step)};
      if (!lambda.is_box() && lambda.distance({z[0], z[1], 0}) > 0) continue;
      grid.push_back(z);
    }
  r.grid_points = static_cast<long>(grid.size());

  std::vector<Generator> base;
  for (const auto& p : ring) base.push_back({{p.x[0], p.x[1]}, weight_of(p)});
  std::vector<double> worst(grid.size(), 0.0);
  std::vector<char> ok(grid.size(), 1), unb(grid.size(), 0);
  auto one = [&](std::size_t t) {
    std::vector<Generator> gens = base;
    for (const auto& g : gens)
      if (g.x == grid[t]) return;  // coincident nucleus: the grid point is not a valid location
    gens.push_back({grid[t], a});
    Cell c = compute_cell(gens, static_cast<int>(gens.size() - 1));
    if (c.empty) return;
    if (!c.bounded) {
      ok[t] = 0;
      unb[t] = 1;
      worst[t] = INFINITY;
      return;
    }
    for (const auto& v : c.vertices) {
      double rad = std::hypot(v.pos[0], v.pos[1]);
      worst[t] = std::max(worst[t], rad);
      if (!(rad < half)) ok[t] = 0;
    }
  };
  const long G = static_cast<long>(grid.size());
  if (ex == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long t = 0; t < G; ++t) one(static_cast<std::size_t>(t));
  } else {
    for (long t = 0; t < G; ++t) one(static_cast<std::size_t>(t));
  }
  r.c2 = true;
  for (std::size_t t = 0; t < grid.size(); ++t) {
    if (!ok[t]) r.c2 = false;
    r.worst_radius = std::max(r.worst_radius, worst[t]);
    r.unbounded_points += unb[t];
  }
  if (grid.empty()) r.c2 = false;
  return r;
}

AdmissibilityReport is_admissible(const Configuration& g, const AdmissibilityParams& p) {
  AdmissibilityReport r;
  r.observation = p.observation;
  std::vector<Generator> gens = generators_of(g);
  GPWitnesses gp = check_general_position(gens);
  r.gp1 = gp.gp1;
  r.gp2 = gp.gp2;
  r.gp = gp.gp1 && gp.gp2;
  r.no_empty = !laguerre_energy(gens).infinite;
  r.tempered_level = temperedness_level(g, p.delta);
  double ext = 0;
  for (const auto& q : g) ext = std::max(ext, norm(q.x));
  r.mbar_l = p.l;
  r.mbar_k_max = p.k_max > 0 ? p.k_max : std::max(p.l, static_cast<int>(std::ceil(ext / 2.0)));
  r.in_mbar = in_Mbar_l(g, r.mbar_l, r.mbar_k_max);
  if (p.observation.is_box()) r.r2_window = check_R2(gens, p.observation.as_box());
  if (p.lambda) {
    Configuration outside = restrict_outside(g, *p.lambda);
    r.cset = check_C_set(outside, *p.lambda, p.a, p.cl, p.cn, p.grid_step);
  }
  return r;
}

nlohmann::json to_json(const CSetReport& r) {
  return {{"lambda", to_json(r.lambda)}, {"a", r.a},           {"l", r.l},
          {"n", r.n},                    {"c1", r.c1},         {"c2", {{"verdict", r.c2}, {"gridResolution", r.grid_step}}},
          {"gridPoints", r.grid_points}, {"worstVertexRadius", std::isfinite(r.worst_radius) ? nlohmann::json(r.worst_radius) : nlohmann::json("inf")},
          {"unboundedPoints", r.unbounded_points}};
}

nlohmann::json to_json(const AdmissibilityReport& r) {
  nlohmann::json j = {{"gp", r.gp},
                      {"gp1", r.gp1},
                      {"gp2", r.gp2},
                      {"noEmpty", r.no_empty},
                      {"temperedLevel", r.tempered_level ? nlohmann::json(*r.tempered_level) : nlohmann::json(nullptr)},
                      {"inMbar_l", {{"verdict", r.in_mbar}, {"l", r.mbar_l}, {"kRange", {r.mbar_l, r.mbar_k_max}}}},
                      {"r2", {{"verdict", r.r2_window}, {"relativeTo", to_json(r.observation)}}}};
  if (r.cset) j["cset"] = to_json(*r.cset);
  return j;
}

nlohmann::json to_json(const RemovalReport& r) {
  return {{"diff", r.diff},       {"k", r.k},         {"V2", r.v2},         {"E2", r.e2},
          {"sumVi", r.sum_vi},    {"handshake", r.handshake}, {"tree", r.tree}, {"viSum", r.vi_sum},
          {"degrees", r.degrees}};
}

}  // namespace gibbsgeom
