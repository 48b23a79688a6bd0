#include "gibbsgeom/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gibbsgeom {

double mark_norm(const Mark& m) {
  if (auto f = std::get_if<FacetMark>(&m)) return std::sqrt(1.0 + f->radius * f->radius);
  return std::get<WeightMark>(m).weight;
}

bool is_facet(const MarkedPoint& p) { return std::holds_alternative<FacetMark>(p.mark); }

double weight_of(const MarkedPoint& p) {
  auto w = std::get_if<WeightMark>(&p.mark);
  if (!w) throw std::invalid_argument("point does not carry a weight mark");
  return w->weight;
}

const FacetMark& facet_mark(const MarkedPoint& p) {
  auto f = std::get_if<FacetMark>(&p.mark);
  if (!f) throw std::invalid_argument("point does not carry a facet mark");
  return *f;
}

bool in_upper_hemisphere(const Vec& n, int dim) {
  for (int i = 0; i < dim; ++i) {
    if (n[i] > 0) return true;
    if (n[i] < 0) return false;
  }
  return false;
}

Vec to_upper_hemisphere(Vec n, int dim) {
  if (!in_upper_hemisphere(n, dim))
    for (int i = 0; i < dim; ++i) n[i] = -n[i];
  return n;
}

double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec& a) { return std::sqrt(dot(a, a)); }
Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec operator*(double s, const Vec& a) { return {s * a[0], s * a[1], s * a[2]}; }

Window::Window(int dim, Box b) : dim_(dim), shape_(b) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("window dimension must be 1..3");
  for (int i = 0; i < dim; ++i)
    if (!(b.lower[i] < b.upper[i])) throw std::invalid_argument("box needs lower < upper");
}

Window::Window(int dim, Ball b) : dim_(dim), shape_(b) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("window dimension must be 1..3");
  if (b.closed ? !(b.radius >= 0) : !(b.radius > 0))
    throw std::invalid_argument("ball radius must be positive");
}

Window Window::lambda_n(double n, int dim) {
  Box b;
  for (int i = 0; i < dim; ++i) {
    b.lower[i] = -n;
    b.upper[i] = n;
  }
  return Window(dim, b);
}

Window Window::box(int dim, const Vec& lower, const Vec& upper) { return Window(dim, Box{lower, upper}); }
Window Window::open_ball(int dim, const Vec& c, double r) { return Window(dim, Ball{c, r, false}); }
Window Window::closed_ball(int dim, const Vec& c, double r) { return Window(dim, Ball{c, r, true}); }

const Box& Window::as_box() const { return std::get<Box>(shape_); }
const Ball& Window::as_ball() const { return std::get<Ball>(shape_); }

bool Window::contains(const Vec& x) const {
  if (auto b = std::get_if<Box>(&shape_)) {
    for (int i = 0; i < dim_; ++i)
      if (!(x[i] >= b->lower[i] && x[i] < b->upper[i])) return false;
    return true;
  }
  const Ball& b = std::get<Ball>(shape_);
  double s = 0;
  for (int i = 0; i < dim_; ++i) s += (x[i] - b.center[i]) * (x[i] - b.center[i]);
  double r2 = b.radius * b.radius;
  return b.closed ? s <= r2 : s < r2;
}

double Window::volume() const {
  if (auto b = std::get_if<Box>(&shape_)) {
    double v = 1;
    for (int i = 0; i < dim_; ++i) v *= b->upper[i] - b->lower[i];
    return v;
  }
  double r = std::get<Ball>(shape_).radius;
  if (dim_ == 1) return 2 * r;
  if (dim_ == 2) return M_PI * r * r;
  return 4.0 / 3.0 * M_PI * r * r * r;
}

double Window::diameter() const {
  if (auto b = std::get_if<Box>(&shape_)) {
    double s = 0;
    for (int i = 0; i < dim_; ++i) s += (b->upper[i] - b->lower[i]) * (b->upper[i] - b->lower[i]);
    return std::sqrt(s);
  }
  return 2 * std::get<Ball>(shape_).radius;
}

double Window::max_norm() const {
  if (auto b = std::get_if<Box>(&shape_)) {
    double s = 0;
    for (int i = 0; i < dim_; ++i) {
      double m = std::max(std::abs(b->lower[i]), std::abs(b->upper[i]));
      s += m * m;
    }
    return std::sqrt(s);
  }
  const Ball& b = std::get<Ball>(shape_);
  return norm(b.center) + b.radius;
}

double Window::origin_depth() const {
  if (auto b = std::get_if<Box>(&shape_)) {
    bool inside = true;
    double depth = std::numeric_limits<double>::infinity();
    double d2 = 0;
    for (int i = 0; i < dim_; ++i) {
      if (b->lower[i] > 0 || b->upper[i] < 0) inside = false;
      depth = std::min({depth, b->upper[i], -b->lower[i]});
      double g = std::max({0.0, b->lower[i], -b->upper[i]});
      d2 += g * g;
    }
    return inside ? depth : -std::sqrt(d2);
  }
  const Ball& b = std::get<Ball>(shape_);
  return b.radius - norm(b.center);
}

bool Window::bounded() const {
  if (auto b = std::get_if<Box>(&shape_)) {
    for (int i = 0; i < dim_; ++i)
      if (!std::isfinite(b->lower[i]) || !std::isfinite(b->upper[i])) return false;
    return true;
  }
  return std::isfinite(std::get<Ball>(shape_).radius);
}

bool Window::contains_ball(const Vec& c, double r) const {
  if (auto b = std::get_if<Box>(&shape_)) {
    for (int i = 0; i < dim_; ++i)
      if (c[i] - r < b->lower[i] || c[i] + r > b->upper[i]) return false;
    return true;
  }
  const Ball& b = std::get<Ball>(shape_);
  return norm(c - b.center) + r <= b.radius;
}

double Window::distance(const Vec& x) const {
  if (auto b = std::get_if<Box>(&shape_)) {
    double s = 0;
    for (int i = 0; i < dim_; ++i) {
      double g = std::max({0.0, b->lower[i] - x[i], x[i] - b->upper[i]});
      s += g * g;
    }
    return std::sqrt(s);
  }
  const Ball& b = std::get<Ball>(shape_);
  return std::max(0.0, norm(x - b.center) - b.radius);
}

bool location_less(const Vec& a, const Vec& b) { return a < b; }

void validate_point(const MarkedPoint& p, int dim) {
  for (int i = 0; i < 3; ++i) {
    if (i < dim && !std::isfinite(p.x[i])) throw std::invalid_argument("non-finite location");
    if (i >= dim && p.x[i] != 0) throw std::invalid_argument("location has extra coordinates");
  }
  if (auto f = std::get_if<FacetMark>(&p.mark)) {
    if (!(f->radius > 0)) throw std::invalid_argument("facet radius must be positive");
    double s = 0;
    for (int i = 0; i < dim; ++i) s += f->normal[i] * f->normal[i];
    if (std::abs(std::sqrt(s) - 1.0) > 1e-12) throw std::invalid_argument("facet normal is not a unit vector");
    if (!in_upper_hemisphere(f->normal, dim)) throw std::invalid_argument("facet normal not in the upper hemisphere");
  } else if (!(std::get<WeightMark>(p.mark).weight > 0)) {
    throw std::invalid_argument("weight must be positive");
  }
}

Configuration::Configuration(int dim, std::vector<MarkedPoint> points) : dim_(dim), points_(std::move(points)) {
  for (const auto& p : points_) validate_point(p, dim_);
  std::sort(points_.begin(), points_.end(),
            [](const MarkedPoint& a, const MarkedPoint& b) { return a.x < b.x; });
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (points_[i].x == points_[i - 1].x) throw std::invalid_argument("configuration is not simple");
}

std::optional<std::size_t> Configuration::find(const Vec& x) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), x,
                             [](const MarkedPoint& p, const Vec& v) { return p.x < v; });
  if (it != points_.end() && it->x == x) return static_cast<std::size_t>(it - points_.begin());
  return std::nullopt;
}

std::optional<std::size_t> Configuration::insert(const MarkedPoint& p) {
  validate_point(p, dim_);
  auto it = std::lower_bound(points_.begin(), points_.end(), p.x,
                             [](const MarkedPoint& q, const Vec& v) { return q.x < v; });
  if (it != points_.end() && it->x == p.x) return std::nullopt;
  auto pos = static_cast<std::size_t>(it - points_.begin());
  points_.insert(it, p);
  return pos;
}

void Configuration::erase(std::size_t i) { points_.erase(points_.begin() + static_cast<std::ptrdiff_t>(i)); }

Configuration Configuration::with(const MarkedPoint& p) const {
  Configuration c = *this;
  if (!c.insert(p)) throw std::invalid_argument("location already occupied");
  return c;
}

Configuration Configuration::without(std::size_t i) const {
  Configuration c = *this;
  c.erase(i);
  return c;
}

static bool mark_equal(const Mark& a, const Mark& b) {
  if (a.index() != b.index()) return false;
  if (auto f = std::get_if<FacetMark>(&a)) {
    const auto& g = std::get<FacetMark>(b);
    return f->normal == g.normal && f->radius == g.radius;
  }
  return std::get<WeightMark>(a).weight == std::get<WeightMark>(b).weight;
}

bool Configuration::operator==(const Configuration& o) const {
  if (dim_ != o.dim_ || points_.size() != o.points_.size()) return false;
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (points_[i].x != o.points_[i].x || !mark_equal(points_[i].mark, o.points_[i].mark)) return false;
  return true;
}

Configuration restrict_to(const Configuration& g, const Window& w) {
  std::vector<MarkedPoint> out;
  for (const auto& p : g)
    if (w.contains(p.x)) out.push_back(p);
  return Configuration(g.dim(), std::move(out));
}

Configuration restrict_outside(const Configuration& g, const Window& w) {
  std::vector<MarkedPoint> out;
  for (const auto& p : g)
    if (!w.contains(p.x)) out.push_back(p);
  return Configuration(g.dim(), std::move(out));
}

Configuration unite(const Configuration& a, const Configuration& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  std::vector<MarkedPoint> pts(a.begin(), a.end());
  pts.insert(pts.end(), b.begin(), b.end());
  return Configuration(a.dim(), std::move(pts));
}

double mark_sup(const Configuration& g) {
  double m = 0;
  for (const auto& p : g) m = std::max(m, mark_norm(p.mark));
  return m;
}

double weighted_count(const Configuration& g, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
  double s = 0;
  for (const auto& p : g) s += 1.0 + std::pow(mark_norm(p.mark), g.dim() + delta);
  return s;
}

int required_l_max(const Configuration& g) {
  double ext = 0;
  for (const auto& p : g) ext = std::max(ext, norm(p.x) + mark_norm(p.mark));
  return static_cast<int>(std::floor(ext)) + 1;
}

std::optional<long> temperedness_level(const Configuration& g, double delta, TemperednessOptions opt) {
  int need = required_l_max(g);
  int l_max = opt.l_max == 0 ? need : opt.l_max;
  if (l_max < need) throw std::invalid_argument("l_max smaller than the configuration extent");
  std::vector<std::pair<double, double>> terms;
  for (const auto& p : g) terms.emplace_back(norm(p.x), 1.0 + std::pow(mark_norm(p.mark), g.dim() + delta));
  std::sort(terms.begin(), terms.end());
  long t = 1;
  std::size_t k = 0;
  double wc = 0;
  for (int l = 1; l <= l_max; ++l) {
    while (k < terms.size() && terms[k].first < l) wc += terms[k++].second;
    double vol = std::pow(static_cast<double>(l), g.dim());
    if (wc <= static_cast<double>(t) * vol) continue;
    double need_t = std::ceil(wc / vol);
    if (need_t > static_cast<double>(opt.t_cap)) return std::nullopt;
    t = std::max(t, static_cast<long>(need_t));
    while (static_cast<double>(t) * vol < wc) ++t;
    if (t > opt.t_cap) return std::nullopt;
  }
  return t;
}

double l_of_t(double t, double delta, int dim) {
  if (dim != 2) throw std::invalid_argument("l(t) is only available for d = 2");
  if (!(t >= 1) || !(delta > 0)) throw std::invalid_argument("need t >= 1 and delta > 0");
  return 0.5 * std::pow(t, 1.0 / delta) * std::pow(2.0, (2.0 + delta) / delta);
}

bool in_Mbar_l(const Configuration& g, int l, int k_max) {
  for (const auto& p : g) {
    double r = norm(p.x);
    double m = mark_norm(p.mark);
    for (int k = l; k <= k_max; ++k) {
      if (r < 2.0 * k + 1) break;  // larger k only shrinks the outer region
      if (r - m < k) return false;
    }
  }
  return true;
}

bool verify_property_1(const Configuration& g, long t, double delta, int l_lo, int l_hi) {
  double lt = l_of_t(static_cast<double>(t), delta, g.dim());
  int from = std::max(l_lo, static_cast<int>(std::ceil(lt)));
  return in_Mbar_l(g, from, l_hi);
}

nlohmann::json to_json(const Configuration& g) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : g) {
    nlohmann::json x = nlohmann::json::array();
    for (int i = 0; i < g.dim(); ++i) x.push_back(p.x[i]);
    nlohmann::json m;
    if (auto f = std::get_if<FacetMark>(&p.mark)) {
      nlohmann::json n = nlohmann::json::array();
      for (int i = 0; i < g.dim(); ++i) n.push_back(f->normal[i]);
      m = {{"kind", "facet"}, {"normal", n}, {"radius", f->radius}};
    } else {
      m = {{"kind", "weight"}, {"value", std::get<WeightMark>(p.mark).weight}};
    }
    arr.push_back({{"x", x}, {"mark", m}});
  }
  return arr;
}

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok |= it.key() == a;
    if (!ok) throw std::invalid_argument(std::string("unknown ") + what + " field: " + it.key());
  }
}

static Vec vec_from_json(const nlohmann::json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) throw std::invalid_argument("vector has wrong length");
  Vec v{};
  for (int i = 0; i < dim; ++i) v[i] = j.at(i).get<double>();
  return v;
}

Configuration configuration_from_json(const nlohmann::json& j, int dim_hint) {
  if (!j.is_array()) throw std::invalid_argument("configuration must be a JSON array");
  int dim = j.empty() ? dim_hint : static_cast<int>(j.at(0).at("x").size());
  std::vector<MarkedPoint> pts;
  for (const auto& e : j) {
    MarkedPoint p;
    require_keys(e, {"x", "mark"}, "point");
    p.x = vec_from_json(e.at("x"), dim);
    const auto& m = e.at("mark");
    std::string kind = m.at("kind").get<std::string>();
    require_keys(m, {"kind", "normal", "radius", "value"}, "mark");
    if (kind == "facet")
      p.mark = FacetMark{vec_from_json(m.at("normal"), dim), m.at("radius").get<double>()};
    else if (kind == "weight")
      p.mark = WeightMark{m.at("value").get<double>()};
    else
      throw std::invalid_argument("unknown mark kind: " + kind);
    pts.push_back(p);
  }
  return Configuration(dim, std::move(pts));
}

nlohmann::json to_json(const Window& w) {
  auto vec = [&](const Vec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < w.dim(); ++i) a.push_back(v[i]);
    return a;
  };
  if (w.is_box()) return {{"kind", "box"}, {"lower", vec(w.as_box().lower)}, {"upper", vec(w.as_box().upper)}};
  const Ball& b = w.as_ball();
  return {{"kind", "ball"}, {"center", vec(b.center)}, {"radius", b.radius}, {"closed", b.closed}};
}

Window window_from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "lambda_n") require_keys(j, {"kind", "n", "dim"}, "window");
  if (kind == "box") require_keys(j, {"kind", "lower", "upper"}, "window");
  if (kind == "ball") require_keys(j, {"kind", "center", "radius", "closed"}, "window");
  if (kind == "lambda_n") {
    int dim = j.value("dim", 2);
    return Window::lambda_n(j.at("n").get<double>(), dim);
  }
  if (kind == "box") {
    int dim = static_cast<int>(j.at("lower").size());
    return Window::box(dim, vec_from_json(j.at("lower"), dim), vec_from_json(j.at("upper"), dim));
  }
  if (kind == "ball") {
    int dim = static_cast<int>(j.at("center").size());
    Ball b{vec_from_json(j.at("center"), dim), j.at("radius").get<double>(), j.value("closed", false)};
    return Window(dim, b);
  }
  throw std::invalid_argument("unknown window kind: " + kind);
}

}  // namespace gibbsgeom
