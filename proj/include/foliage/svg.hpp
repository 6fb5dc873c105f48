#pragma once

// Static 512x512 SVG of the unit-square fundamental domain: traced leaf
// polylines (split where they wrap), zeros as circles, orbifold-singular
// points as squares.

#include <foliage/leaves.hpp>
#include <foliage/orbifold.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace foliage {

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline double svg_x(double theta) { return theta * 512.0; }
inline double svg_y(double phi) { return (1.0 - phi) * 512.0; }

}  // namespace detail

inline std::string render_svg(const std::vector<std::vector<PointD>>& polylines, const std::vector<PointD>& zeros,
                              const std::vector<TorusPoint>& singular) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" viewBox=\"0 0 512 512\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"512\" height=\"512\" fill=\"white\" stroke=\"black\"/>\n";
  for (const auto& line : polylines) {
    // Reduce into the square and start a new run whenever the reduced
    // point jumps across an edge.
    std::vector<std::vector<PointD>> runs(1);
    PointD prev{0, 0};
    bool first = true;
    for (const auto& p : line) {
      PointD q{p.x - std::floor(p.x), p.y - std::floor(p.y)};
      if (!first && (std::abs(q.x - prev.x) > 0.5 || std::abs(q.y - prev.y) > 0.5)) runs.emplace_back();
      runs.back().push_back(q);
      prev = q;
      first = false;
    }
    for (const auto& run : runs) {
      if (run.size() < 2) continue;
      os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
      for (std::size_t i = 0; i < run.size(); ++i)
        os << (i ? " " : "") << detail::svg_num(detail::svg_x(run[i].x)) << "," << detail::svg_num(detail::svg_y(run[i].y));
      os << "\"/>\n";
    }
  }
  for (const auto& z : zeros)
    os << "<circle cx=\"" << detail::svg_num(detail::svg_x(z.x)) << "\" cy=\"" << detail::svg_num(detail::svg_y(z.y))
       << "\" r=\"5\" fill=\"crimson\"/>\n";
  for (const auto& s : singular) {
    double x = detail::svg_x(to_double(s.theta)), y = detail::svg_y(to_double(s.phi));
    os << "<rect x=\"" << detail::svg_num(x - 4) << "\" y=\"" << detail::svg_num(y - 4)
       << "\" width=\"8\" height=\"8\" fill=\"black\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace foliage
