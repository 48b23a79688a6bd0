#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace gibbsgeom {

using Vec = std::array<double, 3>;

struct FacetMark {
  Vec normal{};
  double radius = 1.0;
};

struct WeightMark {
  double weight = 1.0;
};

using Mark = std::variant<FacetMark, WeightMark>;

struct MarkedPoint {
  Vec x{};
  Mark mark = WeightMark{};
};

double mark_norm(const Mark& m);
bool is_facet(const MarkedPoint& p);
double weight_of(const MarkedPoint& p);
const FacetMark& facet_mark(const MarkedPoint& p);

// First nonzero coordinate strictly positive.
bool in_upper_hemisphere(const Vec& n, int dim);
Vec to_upper_hemisphere(Vec n, int dim);

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);

struct Box {
  Vec lower{};
  Vec upper{};
};

struct Ball {
  Vec center{};
  double radius = 1.0;
  bool closed = false;  // U(c,r) open, B(c,r) closed
};

class Window {
 public:
  Window() = default;
  Window(int dim, Box b);
  Window(int dim, Ball b);

  static Window lambda_n(double n, int dim);  // [-n,n)^d
  static Window box(int dim, const Vec& lower, const Vec& upper);
  static Window open_ball(int dim, const Vec& c, double r);
  static Window closed_ball(int dim, const Vec& c, double r);

  int dim() const { return dim_; }
  bool is_box() const { return std::holds_alternative<Box>(shape_); }
  const Box& as_box() const;
  const Ball& as_ball() const;

  bool contains(const Vec& x) const;
  double volume() const;
  double diameter() const;
  // sup over y in the window of |y|
  double max_norm() const;
  // largest r with U(0,r) inside the window closure; negative = -dist(0, window)
  double origin_depth() const;
  bool bounded() const;
  // closed window contains the closed ball B(c,r)
  bool contains_ball(const Vec& c, double r) const;
  // Euclidean distance from x to the closure
  double distance(const Vec& x) const;

 private:
  int dim_ = 2;
  std::variant<Box, Ball> shape_ = Box{};
};

class Configuration {
 public:
  explicit Configuration(int dim = 2) : dim_(dim) {}
  // Sorts; throws std::invalid_argument on repeated locations or bad marks.
  Configuration(int dim, std::vector<MarkedPoint> points);

  int dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<MarkedPoint>& points() const { return points_; }
  const MarkedPoint& operator[](std::size_t i) const { return points_[i]; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  std::optional<std::size_t> find(const Vec& x) const;
  // index of the inserted point, or nullopt if the location is taken
  std::optional<std::size_t> insert(const MarkedPoint& p);
  void erase(std::size_t i);

  Configuration with(const MarkedPoint& p) const;
  Configuration without(std::size_t i) const;

  bool operator==(const Configuration& o) const;

 private:
  int dim_;
  std::vector<MarkedPoint> points_;
};

bool location_less(const Vec& a, const Vec& b);
void validate_point(const MarkedPoint& p, int dim);

Configuration restrict_to(const Configuration& g, const Window& w);
Configuration restrict_outside(const Configuration& g, const Window& w);
Configuration unite(const Configuration& a, const Configuration& b);
double mark_sup(const Configuration& g);
double weighted_count(const Configuration& g, double delta);

struct TemperednessOptions {
  int l_max = 0;      // 0: smallest admissible value
  long t_cap = 1L << 40;
};

int required_l_max(const Configuration& g);
std::optional<long> temperedness_level(const Configuration& g, double delta,
                                       TemperednessOptions opt = {});
double l_of_t(double t, double delta, int dim = 2);
bool in_Mbar_l(const Configuration& g, int l, int k_max);
bool verify_property_1(const Configuration& g, long t, double delta, int l_lo, int l_hi);

// Throws std::invalid_argument if j is not an object or has a key outside `allowed`.
void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const char* what);

nlohmann::json to_json(const Configuration& g);
Configuration configuration_from_json(const nlohmann::json& j, int dim_hint = 2);
nlohmann::json to_json(const Window& w);
Window window_from_json(const nlohmann::json& j);

}  // namespace gibbsgeom
