#include "gibbsgeom/svg.hpp"

#include <cstdio>
#include <sstream>

#include "gibbsgeom/facet.hpp"

namespace gibbsgeom {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0 ? 0.0 : v);
  return buf;
}

struct View {
  double x0, y0, w, h;
};

std::string header(const View& v, const SvgStyle& s) {
  std::ostringstream os;
  double hp = s.width_px * v.h / v.w;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(s.width_px) << "\" height=\"" << num(hp)
     << "\" viewBox=\"" << num(v.x0) << ' ' << num(-(v.y0 + v.h)) << ' ' << num(v.w) << ' ' << num(v.h)
     << "\">\n";
  return os.str();
}

// y is flipped so the picture has the usual orientation
std::string pt(const Point2& p) { return num(p[0]) + "," + num(-p[1]); }

}  // namespace

std::string render_svg(const LaguerreDiagram& d, const SvgStyle& s, const std::vector<Segment2>& dashed) {
  View v{d.bbox.lower[0], d.bbox.lower[1], d.bbox.upper[0] - d.bbox.lower[0], d.bbox.upper[1] - d.bbox.lower[1]};
  const double sw = s.stroke * std::max(v.w, v.h) / 10;
  std::ostringstream os;
  os << header(v, s);
  os << "<g fill=\"" << s.cell_fill << "\" stroke=\"" << s.cell_stroke << "\" stroke-width=\"" << num(sw) << "\">\n";
  for (std::size_t i = 0; i < d.cells.size(); ++i) {
    const Cell& c = d.cells[i];
    if (c.empty || c.polygon.size() < 3) continue;
    os << "<path id=\"cell" << i << "\" d=\"M";
    for (std::size_t j = 0; j < c.polygon.size(); ++j) os << (j ? " L" : "") << pt(c.polygon[j]);
    os << " Z\"/>\n";
  }
  os << "</g>\n";
  if (!dashed.empty()) {
    os << "<g stroke=\"" << s.dashed_stroke << "\" stroke-width=\"" << num(sw) << "\" stroke-dasharray=\""
       << num(4 * sw) << ' ' << num(3 * sw) << "\">\n";
    for (const auto& e : dashed)
      os << "<line x1=\"" << num(e.a[0]) << "\" y1=\"" << num(-e.a[1]) << "\" x2=\"" << num(e.b[0]) << "\" y2=\""
         << num(-e.b[1]) << "\"/>\n";
    os << "</g>\n";
  }
  if (s.generators) {
    os << "<g fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"" << num(sw) << "\">\n";
    for (const auto& g : d.generators)
      os << "<circle cx=\"" << num(g.x[0]) << "\" cy=\"" << num(-g.x[1]) << "\" r=\"" << num(g.w) << "\"/>\n";
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_svg(const Configuration& facets, const Window& view, const SvgStyle& s) {
  View v{};
  if (view.is_box()) {
    const Box& b = view.as_box();
    v = {b.lower[0], b.lower[1], b.upper[0] - b.lower[0], b.upper[1] - b.lower[1]};
  } else {
    const Ball& b = view.as_ball();
    v = {b.center[0] - b.radius, b.center[1] - b.radius, 2 * b.radius, 2 * b.radius};
  }
  if (!(v.w > 0) || !(v.h > 0)) v = {v.x0 - 1, v.y0 - 1, 2, 2};
  const double sw = s.stroke * std::max(v.w, v.h) / 10;
  std::ostringstream os;
  os << header(v, s);
  os << "<rect x=\"" << num(v.x0) << "\" y=\"" << num(-(v.y0 + v.h)) << "\" width=\"" << num(v.w)
     << "\" height=\"" << num(v.h) << "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"" << num(sw) << "\"/>\n";
  os << "<g stroke=\"" << s.cell_stroke << "\" stroke-width=\"" << num(sw) << "\">\n";
  for (const auto& p : facets) {
    auto e = segment_endpoints(facet_of(p));
    os << "<line x1=\"" << num(e[0][0]) << "\" y1=\"" << num(-e[0][1]) << "\" x2=\"" << num(e[1][0]) << "\" y2=\""
       << num(-e[1][1]) << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace gibbsgeom
