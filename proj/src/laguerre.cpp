#include "gibbsgeom/laguerre.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>

#include "gibbsgeom/rng.hpp"

namespace gibbsgeom {

double power_distance(const Point2& z, const Generator& g) {
  double dx = g.x[0] - z[0], dy = g.x[1] - z[1];
  return dx * dx + dy * dy - g.w * g.w;
}

HalfPlane half_plane(const Generator& g1, const Generator& g2) {
  if (g1.x == g2.x) throw std::invalid_argument("half_plane needs distinct nuclei");
  HalfPlane h;
  h.c = {2 * (g2.x[0] - g1.x[0]), 2 * (g2.x[1] - g1.x[1])};
  double n2 = g2.x[0] * g2.x[0] + g2.x[1] * g2.x[1];
  double n1 = g1.x[0] * g1.x[0] + g1.x[1] * g1.x[1];
  // weight difference first: a common shift of all squared weights cancels exactly
  h.beta = (n2 - n1) + (g1.w * g1.w - g2.w * g2.w);
  return h;
}

std::vector<Generator> generators_of(const Configuration& g) {
  if (g.dim() != 2) throw std::invalid_argument("Laguerre diagrams need d = 2");
  std::vector<Generator> out;
  out.reserve(g.size());
  for (const auto& p : g) out.push_back({{p.x[0], p.x[1]}, weight_of(p)});
  return out;
}

std::vector<int> Cell::neighbors() const {
  std::vector<int> n;
  for (int l : lines)
    if (l >= 0) n.push_back(l);
  std::sort(n.begin(), n.end());
  return n;
}

namespace {

constexpr double kFilter = 1e-12;

struct LineD {
  double c1, c2, b0, b1, bmag;
};

struct LineQ {
  Rational c1, c2, b0;
  int b1;
};

// All constraint lines of one cell, relative to generator i.
class CellLines {
 public:
  CellLines(const std::vector<Generator>& gens, int i) : gens_(gens), i_(i) {}

  LineD d(int id) const {
    switch (id) {
      case kRight: return {1, 0, 0, 1, 0};
      case kTop: return {0, 1, 0, 1, 0};
      case kLeft: return {-1, 0, 0, 1, 0};
      case kBottom: return {0, -1, 0, 1, 0};
      default: break;
    }
    const Generator& gi = gens_[static_cast<std::size_t>(i_)];
    const Generator& gk = gens_[static_cast<std::size_t>(id)];
    HalfPlane h = half_plane(gi, gk);
    double mag = gi.x[0] * gi.x[0] + gi.x[1] * gi.x[1] + gk.x[0] * gk.x[0] + gk.x[1] * gk.x[1] +
                 gi.w * gi.w + gk.w * gk.w;
    return {h.c[0], h.c[1], h.beta, 0, mag};
  }

  LineQ q(int id) const {
    switch (id) {
      case kRight: return {1, 0, 0, 1};
      case kTop: return {0, 1, 0, 1};
      case kLeft: return {-1, 0, 0, 1};
      case kBottom: return {0, -1, 0, 1};
      default: break;
    }
    const Generator& gi = gens_[static_cast<std::size_t>(i_)];
    const Generator& gk = gens_[static_cast<std::size_t>(id)];
    Rational xi(gi.x[0]), yi(gi.x[1]), wi(gi.w), xk(gk.x[0]), yk(gk.x[1]), wk(gk.w);
    return {2 * (xk - xi), 2 * (yk - yi), xk * xk + yk * yk - xi * xi - yi * yi + wi * wi - wk * wk, 0};
  }

  // Sign of <c_r, z> - beta_r at z = L_p cap L_q, with M -> infinity.
  int side(int p, int q, int r) const {
    LineD P = d(p), Q = d(q), R = d(r);
    double det = P.c1 * Q.c2 - P.c2 * Q.c1;
    double det_err = kFilter * (std::abs(P.c1 * Q.c2) + std::abs(P.c2 * Q.c1));
    int sdet = det > det_err ? 1 : (det < -det_err ? -1 : 0);

    auto eval = [&](double bp, double bq, double br) {
      return R.c1 * (bp * Q.c2 - bq * P.c2) + R.c2 * (P.c1 * bq - Q.c1 * bp) - br * det;
    };
    auto bound = [&](double bp, double bq, double br) {
      return kFilter * (std::abs(R.c1) * (bp * std::abs(Q.c2) + bq * std::abs(P.c2)) +
                        std::abs(R.c2) * (std::abs(P.c1) * bq + std::abs(Q.c1) * bp) +
                        br * (std::abs(P.c1 * Q.c2) + std::abs(P.c2 * Q.c1)));
    };
    if (sdet != 0) {
      double n1 = eval(P.b1, Q.b1, R.b1);
      double e1 = bound(P.b1, Q.b1, R.b1);
      if (n1 > e1) return sdet;
      if (n1 < -e1) return -sdet;
      if (e1 == 0 && n1 == 0 && P.b1 == 0 && Q.b1 == 0 && R.b1 == 0) {
        double n0 = eval(P.b0, Q.b0, R.b0);
        double e0 = bound(P.bmag, Q.bmag, R.bmag);
        if (n0 > e0) return sdet;
        if (n0 < -e0) return -sdet;
      }
    }
    return side_exact(p, q, r);
  }

  int side_exact(int p, int q2, int r) const {
    LineQ P = q(p), Q = q(q2), R = q(r);
    Rational det = P.c1 * Q.c2 - P.c2 * Q.c1;
    int sdet = sign_of(det);
    if (sdet == 0) throw std::logic_error("adjacent cell constraints are parallel");
    Rational n1 = R.c1 * (P.b1 * Q.c2 - Q.b1 * P.c2) + R.c2 * (P.c1 * Q.b1 - Q.c1 * P.b1) - R.b1 * det;
    int s = sign_of(n1);
    if (s == 0) {
      Rational n0 = R.c1 * (P.b0 * Q.c2 - Q.b0 * P.c2) + R.c2 * (P.c1 * Q.b0 - Q.c1 * P.b0) - R.b0 * det;
      s = sign_of(n0);
    }
    return s * sdet;
  }

  Point2 vertex(int p, int q) const {
    LineD P = d(p), Q = d(q);
    double det = P.c1 * Q.c2 - P.c2 * Q.c1;
    return {(P.b0 * Q.c2 - Q.b0 * P.c2) / det, (P.c1 * Q.b0 - Q.c1 * P.b0) / det};
  }

 private:
  const std::vector<Generator>& gens_;
  int i_;
};

struct Cycle {
  std::vector<int> lines;
  std::vector<std::vector<int>> touch;
};

// Returns false when the cell loses its interior.
bool clip(Cycle& cy, const CellLines& L, int r) {
  const int m = static_cast<int>(cy.lines.size());
  std::vector<int> s(static_cast<std::size_t>(m));
  bool pos = false, neg = false;
  for (int j = 0; j < m; ++j) {
    s[j] = L.side(cy.lines[j], cy.lines[(j + 1) % m], r);
    pos |= s[j] > 0;
    neg |= s[j] < 0;
  }
  if (!pos) {
    for (int j = 0; j < m; ++j)
      if (s[j] == 0) cy.touch[j].push_back(r);
    return true;
  }
  if (!neg) return false;
  auto at = [m](int j) { return ((j % m) + m) % m; };
  int a = 0;
  while (!(s[a] > 0 && s[at(a - 1)] <= 0)) ++a;
  int b = a;
  while (s[at(b + 1)] > 0) b = at(b + 1);
  int prev = at(a - 1), next = at(b + 1);
  int st = s[next] == 0 ? at(next + 1) : next;
  int en = s[prev] == 0 ? prev : a;
  Cycle out;
  for (int j = st;; j = at(j + 1)) {
    out.lines.push_back(cy.lines[j]);
    if (j == en) break;
    out.touch.push_back(cy.touch[j]);
  }
  std::vector<int> ta, tb;
  if (s[prev] == 0) {
    ta = cy.touch[prev];
    ta.push_back(cy.lines[a]);
  }
  if (s[next] == 0) {
    tb = cy.touch[next];
    tb.push_back(cy.lines[next]);
  }
  out.touch.push_back(std::move(ta));
  out.lines.push_back(r);
  out.touch.push_back(std::move(tb));
  if (out.lines.size() < 3) throw std::logic_error("degenerate cell cycle");
  cy = std::move(out);
  return true;
}

struct Labeled {
  std::vector<Point2> pts;
  std::vector<int> labels;
};

void clip_float(Labeled& poly, double c1, double c2, double beta, int label) {
  Labeled out;
  std::size_t n = poly.pts.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Point2& P = poly.pts[j];
    const Point2& Q = poly.pts[(j + 1) % n];
    double fp = c1 * P[0] + c2 * P[1] - beta;
    double fq = c1 * Q[0] + c2 * Q[1] - beta;
    auto cut = [&] {
      double t = fp / (fp - fq);
      return Point2{P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1])};
    };
    if (fp <= 0) {
      out.pts.push_back(P);
      out.labels.push_back(poly.labels[j]);
      if (fq > 0) {
        out.pts.push_back(cut());
        out.labels.push_back(label);
      }
    } else if (fq <= 0) {
      out.pts.push_back(cut());
      out.labels.push_back(poly.labels[j]);
    }
  }
  poly = std::move(out);
}

}  // namespace

Cell compute_cell(const std::vector<Generator>& gens, int i, const std::vector<int>& candidates) {
  CellLines L(gens, i);
  std::vector<int> order = candidates;
  if (order.empty()) {
    for (int k = 0; k < static_cast<int>(gens.size()); ++k)
      if (k != i) order.push_back(k);
  }
  const Point2 xi = gens[static_cast<std::size_t>(i)].x;
  auto d2 = [&](int k) {
    double dx = gens[static_cast<std::size_t>(k)].x[0] - xi[0], dy = gens[static_cast<std::size_t>(k)].x[1] - xi[1];
    return dx * dx + dy * dy;
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    double da = d2(a), db = d2(b);
    return da != db ? da < db : a < b;
  });
  Cycle cy{{kBottom, kRight, kTop, kLeft}, {{}, {}, {}, {}}};
  Cell cell;
  for (int k : order) {
    if (!clip(cy, L, k)) {
      cell.empty = true;
      return cell;
    }
  }
  // canonical rotation: smallest id first
  auto it = std::min_element(cy.lines.begin(), cy.lines.end());
  auto rot = it - cy.lines.begin();
  std::rotate(cy.lines.begin(), it, cy.lines.end());
  std::rotate(cy.touch.begin(), cy.touch.begin() + rot, cy.touch.end());
  const std::size_t m = cy.lines.size();
  cell.lines = cy.lines;
  cell.bounded = true;
  for (std::size_t j = 0; j < m; ++j) {
    CellVertex v;
    v.a = cy.lines[j];
    v.b = cy.lines[(j + 1) % m];
    v.touching = cy.touch[j];
    std::sort(v.touching.begin(), v.touching.end());
    v.touching.erase(std::unique(v.touching.begin(), v.touching.end()), v.touching.end());
    v.at_infinity = v.a < 0 || v.b < 0;
    if (!v.at_infinity) v.pos = L.vertex(v.a, v.b);
    if (cy.lines[j] < 0) cell.bounded = false;
    cell.vertices.push_back(std::move(v));
  }
  return cell;
}

static void float_polygon(const std::vector<Generator>& gens, int i, const Box& bbox, Cell& cell) {
  Labeled poly;
  poly.pts = {{bbox.lower[0], bbox.lower[1]}, {bbox.upper[0], bbox.lower[1]},
              {bbox.upper[0], bbox.upper[1]}, {bbox.lower[0], bbox.upper[1]}};
  poly.labels = {kBottom, kRight, kTop, kLeft};
  for (int k : cell.lines) {
    if (k < 0) continue;
    HalfPlane h = half_plane(gens[static_cast<std::size_t>(i)], gens[static_cast<std::size_t>(k)]);
    clip_float(poly, h.c[0], h.c[1], h.beta, k);
    if (poly.pts.empty()) break;
  }
  cell.polygon = poly.pts;
  cell.edge_on_bbox.clear();
  for (int l : poly.labels) cell.edge_on_bbox.push_back(l < 0);
  cell.clipped = !cell.bounded || std::any_of(cell.edge_on_bbox.begin(), cell.edge_on_bbox.end(), [](bool b) { return b; });
}

Box default_bbox(const std::vector<Generator>& gens) {
  if (gens.empty()) return Box{{-1, -1, 0}, {1, 1, 0}};
  double lo[2] = {INFINITY, INFINITY}, hi[2] = {-INFINITY, -INFINITY}, wmax = 0;
  for (const auto& g : gens) {
    for (int k = 0; k < 2; ++k) lo[k] = std::min(lo[k], g.x[k]), hi[k] = std::max(hi[k], g.x[k]);
    wmax = std::max(wmax, g.w);
  }
  double spread = std::max({hi[0] - lo[0], hi[1] - lo[1], 2 * wmax, 1e-6});
  Box b;
  for (int k = 0; k < 2; ++k) {
    double c = 0.5 * (lo[k] + hi[k]);
    b.lower[k] = c - 2 * spread;
    b.upper[k] = c + 2 * spread;
  }
  return b;
}

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[static_cast<std::size_t>(x)] != x) x = p[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])];
    return x;
  }
  void unite(int a, int b) {
    a = find(a), b = find(b);
    if (a != b) p[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

LaguerreDiagram build_diagram(const std::vector<Generator>& gens, const Box& bbox, Execution ex) {
  for (const auto& g : gens)
    if (!(g.w > 0)) throw std::invalid_argument("weights must be positive");
  LaguerreDiagram d;
  d.generators = gens;
  d.bbox = bbox;
  const int n = static_cast<int>(gens.size());
  d.cells.resize(static_cast<std::size_t>(n));
  auto one = [&](int i) {
    Cell c = compute_cell(gens, i);
    if (!c.empty) float_polygon(gens, i, bbox, c);
    d.cells[static_cast<std::size_t>(i)] = std::move(c);
  };
  if (ex == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) one(i);
  } else {
    for (int i = 0; i < n; ++i) one(i);
  }

  d.neighbors.resize(static_cast<std::size_t>(n));
  d.vertex_ids.resize(static_cast<std::size_t>(n));
  struct Inst {
    int cell;
    int idx;
    std::vector<int> gens;
  };
  std::vector<Inst> inst;
  for (int i = 0; i < n; ++i) {
    const Cell& c = d.cells[static_cast<std::size_t>(i)];
    if (c.empty) {
      d.empty_cells.push_back(i);
      continue;
    }
    d.neighbors[static_cast<std::size_t>(i)] = c.neighbors();
    d.vertex_ids[static_cast<std::size_t>(i)].assign(c.vertices.size(), -1);
    for (std::size_t j = 0; j < c.vertices.size(); ++j) {
      const CellVertex& v = c.vertices[j];
      if (v.at_infinity) continue;
      std::vector<int> s{i, v.a, v.b};
      for (int t : v.touching)
        if (t >= 0) s.push_back(t);
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      inst.push_back({i, static_cast<int>(j), std::move(s)});
    }
  }
  UnionFind uf(inst.size());
  std::map<std::array<int, 3>, int> seen;
  for (std::size_t t = 0; t < inst.size(); ++t) {
    const auto& s = inst[t].gens;
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b)
        for (std::size_t c = b + 1; c < s.size(); ++c) {
          std::array<int, 3> key{s[a], s[b], s[c]};
          auto [it, fresh] = seen.emplace(key, static_cast<int>(t));
          if (!fresh) uf.unite(it->second, static_cast<int>(t));
        }
  }
  std::map<int, int> root_id;
  for (std::size_t t = 0; t < inst.size(); ++t) {
    int r = uf.find(static_cast<int>(t));
    auto [it, fresh] = root_id.emplace(r, static_cast<int>(d.vertices.size()));
    if (fresh) {
      DiagramVertex v;
      v.pos = d.cells[static_cast<std::size_t>(inst[t].cell)].vertices[static_cast<std::size_t>(inst[t].idx)].pos;
      d.vertices.push_back(v);
    }
    d.vertices[static_cast<std::size_t>(it->second)].cells.push_back(inst[t].cell);
    d.vertex_ids[static_cast<std::size_t>(inst[t].cell)][static_cast<std::size_t>(inst[t].idx)] = it->second;
  }
  for (auto& v : d.vertices) {
    std::sort(v.cells.begin(), v.cells.end());
    v.cells.erase(std::unique(v.cells.begin(), v.cells.end()), v.cells.end());
  }
  for (int i = 0; i < n; ++i) {
    const Cell& c = d.cells[static_cast<std::size_t>(i)];
    if (c.empty) continue;
    const std::size_t m = c.lines.size();
    for (std::size_t j = 0; j < m; ++j) {
      int k = c.lines[j];
      if (k < i) continue;  // infinity lines are negative; each pair once
      int v0 = d.vertex_ids[static_cast<std::size_t>(i)][(j + m - 1) % m];
      int v1 = d.vertex_ids[static_cast<std::size_t>(i)][j];
      d.edges.push_back({i, k, v0, v1});
    }
  }
  return d;
}

LaguerreDiagram build_diagram(const Configuration& g, const Window& bbox, Execution ex) {
  if (!bbox.is_box()) throw std::invalid_argument("diagram bbox must be a box");
  return build_diagram(generators_of(g), bbox.as_box(), ex);
}

GPWitnesses check_general_position(const std::vector<Generator>& gens, Execution ex, std::size_t max_witnesses) {
  const int n = static_cast<int>(gens.size());
  std::vector<std::vector<std::array<int, 3>>> col(static_cast<std::size_t>(n));
  std::vector<std::vector<std::array<int, 4>>> cos(static_cast<std::size_t>(n));
  auto row = [&](int i) {
    auto& c3 = col[static_cast<std::size_t>(i)];
    auto& c4 = cos[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        bool coll = orient2d(gens[i].x, gens[j].x, gens[k].x) == 0;
        if (coll && c3.size() < max_witnesses) c3.push_back({i, j, k});
        for (int l = k + 1; l < n; ++l) {
          WeightedPoint2 p0{gens[i].x, gens[i].w}, p1{gens[j].x, gens[j].w}, p2{gens[k].x, gens[k].w},
              p3{gens[l].x, gens[l].w};
          if (lifted_orient(p0, p1, p2, p3) != 0) continue;
          bool all_coll = coll && orient2d(gens[i].x, gens[j].x, gens[l].x) == 0;
          if (!all_coll && c4.size() < max_witnesses) c4.push_back({i, j, k, l});
        }
      }
  };
  if (ex == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) row(i);
  } else {
    for (int i = 0; i < n; ++i) row(i);
  }
  GPWitnesses w;
  for (int i = 0; i < n; ++i) {
    for (const auto& t : col[static_cast<std::size_t>(i)])
      if (w.collinear.size() < max_witnesses) w.collinear.push_back(t);
    for (const auto& t : cos[static_cast<std::size_t>(i)])
      if (w.cospherical.size() < max_witnesses) w.cospherical.push_back(t);
    if (!col[static_cast<std::size_t>(i)].empty()) w.gp1 = false;
    if (!cos[static_cast<std::size_t>(i)].empty()) w.gp2 = false;
  }
  return w;
}

GPWitnesses check_general_position(const Configuration& g, Execution ex) {
  return check_general_position(generators_of(g), ex);
}

static std::vector<Point2> convex_hull(std::vector<Point2> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  std::vector<Point2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && orient2d(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && orient2d(h[k - 2], h[k - 1], p[i - 1]) <= 0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  return h;
}

bool check_R2(const std::vector<Generator>& gens, const Box& region) {
  std::vector<Point2> pts;
  for (const auto& g : gens) pts.push_back(g.x);
  std::vector<Point2> h = convex_hull(pts);
  if (h.size() < 3) return false;
  const Point2 corners[4] = {{region.lower[0], region.lower[1]}, {region.upper[0], region.lower[1]},
                             {region.upper[0], region.upper[1]}, {region.lower[0], region.upper[1]}};
  for (const auto& c : corners) {
    if (!std::isfinite(c[0]) || !std::isfinite(c[1])) return false;
    for (std::size_t j = 0; j < h.size(); ++j)
      if (orient2d(h[j], h[(j + 1) % h.size()], c) < 0) return false;
  }
  return true;
}

NormalityReport is_normal(const LaguerreDiagram& d) {
  NormalityReport r;
  for (const auto& v : d.vertices) {
    int deg = static_cast<int>(v.cells.size());
    r.vertex_degree_histogram[deg]++;
    if (deg != 3) r.normal = false;
  }
  std::map<std::pair<int, int>, int> mult;
  for (std::size_t i = 0; i < d.cells.size(); ++i) {
    if (d.cells[i].empty) continue;
    for (int k : d.cells[i].lines)
      if (k >= 0) mult[{std::min<int>(static_cast<int>(i), k), std::max<int>(static_cast<int>(i), k)}]++;
  }
  for (const auto& [e, m] : mult) {
    r.edge_multiplicity_histogram[m]++;
    if (m != 2) r.normal = false;
  }
  return r;
}

int vertex_count(const LaguerreDiagram& d, int i) {
  const Cell& c = d.cells.at(static_cast<std::size_t>(i));
  if (c.empty) throw std::invalid_argument("vertex_count of an empty cell");
  if (!c.bounded) throw std::invalid_argument("vertex_count of an unbounded cell");
  return static_cast<int>(c.vertices.size());
}

double pomocne_margin(const Point2& z, const Point2& y, int l) {
  double ny = std::hypot(y[0], y[1]);
  Generator g{y, ny - l};
  return power_distance(z, g) - static_cast<double>(l) * l;
}

bool verify_lemma_pomocne(int l, long trials, std::uint64_t seed) {
  if (l < 1) throw std::invalid_argument("l must be at least 1");
  StreamRng rng(seed, 0x90CE);
  const double L = l;
  for (long t = 0; t < trials; ++t) {
    double rz = 0.5 * L * std::sqrt(rng.uniform());
    double az = 2 * M_PI * rng.uniform();
    Point2 z{rz * std::cos(az), rz * std::sin(az)};
    double ry = (2 * L + 1) + (8 * L - 1) * rng.open_uniform();
    double ay = 2 * M_PI * rng.uniform();
    Point2 y{ry * std::cos(ay), ry * std::sin(ay)};
    double rho = power_distance(z, Generator{y, std::hypot(y[0], y[1]) - L});
    double sup = (0.5 * L + std::hypot(z[0], z[1]));
    if (!(rho > L * L && L * L >= sup * sup)) return false;
  }
  return true;
}

int nearest_generator(const std::vector<Generator>& gens, const Point2& z) {
  int best = -1;
  double bd = INFINITY;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    double p = power_distance(z, gens[k]);
    if (p < bd) bd = p, best = static_cast<int>(k);
  }
  return best;
}

bool point_in_polygon(const std::vector<Point2>& poly, const Point2& z) {
  if (poly.size() < 3) return false;
  for (std::size_t j = 0; j < poly.size(); ++j) {
    const Point2& a = poly[j];
    const Point2& b = poly[(j + 1) % poly.size()];
    if ((b[0] - a[0]) * (z[1] - a[1]) - (b[1] - a[1]) * (z[0] - a[0]) < 0) return false;
  }
  return true;
}

double distance_to_polygon_boundary(const std::vector<Point2>& poly, const Point2& z) {
  double best = INFINITY;
  for (std::size_t j = 0; j < poly.size(); ++j) {
    const Point2& a = poly[j];
    const Point2& b = poly[(j + 1) % poly.size()];
    double ex = b[0] - a[0], ey = b[1] - a[1];
    double len2 = ex * ex + ey * ey;
    double t = len2 > 0 ? std::clamp(((z[0] - a[0]) * ex + (z[1] - a[1]) * ey) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, std::hypot(z[0] - a[0] - t * ex, z[1] - a[1] - t * ey));
  }
  return best;
}

nlohmann::json to_json(const LaguerreDiagram& d) {
  using nlohmann::json;
  json gens = json::array();
  for (const auto& g : d.generators) gens.push_back({{"x", {g.x[0], g.x[1]}}, {"w", g.w}});
  json cells = json::array();
  for (std::size_t i = 0; i < d.cells.size(); ++i) {
    const Cell& c = d.cells[i];
    if (c.empty) {
      cells.push_back({{"vertices", "EMPTY"}});
      continue;
    }
    json poly = json::array();
    for (const auto& p : c.polygon) poly.push_back({p[0], p[1]});
    cells.push_back({{"vertices", poly},
                     {"clipped", c.clipped},
                     {"bounded", c.bounded},
                     {"edge_on_bbox", c.edge_on_bbox},
                     {"lines", c.lines},
                     {"neighbors", d.neighbors[i]}});
  }
  json verts = json::array();
  for (const auto& v : d.vertices) verts.push_back({{"pos", {v.pos[0], v.pos[1]}}, {"cells", v.cells}});
  json edges = json::array();
  for (const auto& e : d.edges) edges.push_back({{"cells", {e.a, e.b}}, {"v", {e.v0, e.v1}}});
  return {{"generators", gens},
          {"bbox", {{"lower", {d.bbox.lower[0], d.bbox.lower[1]}}, {"upper", {d.bbox.upper[0], d.bbox.upper[1]}}}},
          {"cells", cells},
          {"vertices", verts},
          {"edges", edges},
          {"empty", d.empty_cells}};
}

LaguerreDiagram diagram_from_json(const nlohmann::json& j) {
  std::vector<Generator> gens;
  for (const auto& g : j.at("generators"))
    gens.push_back({{g.at("x").at(0).get<double>(), g.at("x").at(1).get<double>()}, g.at("w").get<double>()});
  Box b;
  const auto& bb = j.at("bbox");
  for (int k = 0; k < 2; ++k) {
    b.lower[k] = bb.at("lower").at(k).get<double>();
    b.upper[k] = bb.at("upper").at(k).get<double>();
  }
  return build_diagram(gens, b);
}

}  // namespace gibbsgeom
