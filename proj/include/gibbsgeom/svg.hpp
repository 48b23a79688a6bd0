#pragma once

#include <string>
#include <vector>

#include "gibbsgeom/config.hpp"
#include "gibbsgeom/laguerre.hpp"
#include "gibbsgeom/laguerre_energy.hpp"

namespace gibbsgeom {

struct SvgStyle {
  double width_px = 800;
  double stroke = 0.01;  // in diagram units, scaled by the view size
  bool generators = true;
  std::string cell_fill = "#f4f1e8";
  std::string cell_stroke = "#333333";
  std::string dashed_stroke = "#c0392b";
};

// Cells as closed paths, generators as circles of radius = weight, extra segments dashed.
std::string render_svg(const LaguerreDiagram& d, const SvgStyle& style = {},
                       const std::vector<Segment2>& dashed = {});
// Facets as segments, view box from the window (or the facet extent when unbounded).
std::string render_svg(const Configuration& facets, const Window& view, const SvgStyle& style = {});

}  // namespace gibbsgeom
