#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gibbsgeom/config.hpp"
#include "gibbsgeom/exact.hpp"
#include "gibbsgeom/execution.hpp"

namespace gibbsgeom {

struct Generator {
  Point2 x{};
  double w = 1.0;
};

struct HalfPlane {
  Point2 c{};
  double beta = 0;  // {z : <c,z> <= beta}

  bool contains(const Point2& z) const { return c[0] * z[0] + c[1] * z[1] <= beta; }
};

double power_distance(const Point2& z, const Generator& g);
HalfPlane half_plane(const Generator& g1, const Generator& g2);
std::vector<Generator> generators_of(const Configuration& g);

// Constraint ids in a cell cycle: k >= 0 is the bisector with generator k,
// negative ids are the four sides of the box at infinity.
enum InfinityLine : int { kRight = -1, kTop = -2, kLeft = -3, kBottom = -4 };

struct CellVertex {
  int a = 0;
  int b = 0;
  std::vector<int> touching;  // further generators power-equidistant from this vertex
  Point2 pos{};
  bool at_infinity = false;
};

struct Cell {
  bool empty = false;
  std::vector<int> lines;  // counter-clockwise; vertex j joins lines[j] and lines[j+1]
  std::vector<CellVertex> vertices;
  bool bounded = false;
  // floating polygon cut to the diagram bbox
  std::vector<Point2> polygon;
  std::vector<bool> edge_on_bbox;  // edge j = polygon[j] -> polygon[j+1]
  bool clipped = false;

  std::vector<int> neighbors() const;
};

struct DiagramVertex {
  Point2 pos{};
  std::vector<int> cells;  // sorted incident generators with nonempty cells
};

struct DiagramEdge {
  int a = 0;
  int b = 0;
  int v0 = -1;  // global vertex ids, -1 at infinity
  int v1 = -1;
};

struct LaguerreDiagram {
  std::vector<Generator> generators;
  Box bbox;
  std::vector<Cell> cells;
  std::vector<std::vector<int>> neighbors;
  std::vector<DiagramVertex> vertices;
  std::vector<DiagramEdge> edges;
  std::vector<int> empty_cells;
  // cell i vertex j -> global vertex id (-1 at infinity)
  std::vector<std::vector<int>> vertex_ids;
};

// Exact cell of generator i against the given candidates (all others if empty).
Cell compute_cell(const std::vector<Generator>& gens, int i, const std::vector<int>& candidates = {});

LaguerreDiagram build_diagram(const std::vector<Generator>& gens, const Box& bbox,
                              Execution ex = Execution::serial);
LaguerreDiagram build_diagram(const Configuration& g, const Window& bbox, Execution ex = Execution::serial);
// bbox at least 4x the nucleus spread, centred on the nuclei
Box default_bbox(const std::vector<Generator>& gens);

struct GPWitnesses {
  bool gp1 = true;
  bool gp2 = true;
  std::vector<std::array<int, 3>> collinear;
  std::vector<std::array<int, 4>> cospherical;
};

GPWitnesses check_general_position(const std::vector<Generator>& gens, Execution ex = Execution::serial,
                                   std::size_t max_witnesses = 16);
GPWitnesses check_general_position(const Configuration& g, Execution ex = Execution::serial);

// Whether the convex hull of the nuclei contains the closed box region.
bool check_R2(const std::vector<Generator>& gens, const Box& region);

struct NormalityReport {
  bool normal = true;
  std::map<int, int> vertex_degree_histogram;
  std::map<int, int> edge_multiplicity_histogram;
};

NormalityReport is_normal(const LaguerreDiagram& d);
int vertex_count(const LaguerreDiagram& d, int i);
bool verify_lemma_pomocne(int l, long trials, std::uint64_t seed);
double pomocne_margin(const Point2& z, const Point2& y, int l);

// argmin of power distance; ties resolved to the smallest index
int nearest_generator(const std::vector<Generator>& gens, const Point2& z);
bool point_in_polygon(const std::vector<Point2>& poly, const Point2& z);
double distance_to_polygon_boundary(const std::vector<Point2>& poly, const Point2& z);

nlohmann::json to_json(const LaguerreDiagram& d);
LaguerreDiagram diagram_from_json(const nlohmann::json& j);

}  // namespace gibbsgeom
