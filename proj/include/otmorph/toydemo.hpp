#pragma once

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "otmorph/token_set.hpp"

namespace otmorph {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

/// Closed polyline in unit-square coordinates, one vertex per token.
struct ToyShape {
  std::vector<Point2> vertices;
};

/// Half-width of the box mapped onto the unit square. The undisplaced
/// polygon (unit circle) lands in [0.25, 0.75]^2.
inline constexpr double kToyExtent = 2.0;

/// Vertex k sits at angle 2*pi*k/n on the unit circle, pushed along the
/// radial direction by token k's first coordinate and along the tangent by
/// its second, then mapped affinely into the unit square. The map is affine
/// per vertex, hence continuous, Lipschitz and injective.
inline ToyShape decode_tokens_to_shape(const TokenSet& tokens) {
  if (tokens.dim() != 2) {
    throw DimensionError("toy decoder needs 2-D tokens, got " + std::to_string(tokens.dim()));
  }
  const std::size_t n = tokens.size();
  ToyShape shape;
  shape.vertices.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    const double c = std::cos(angle), s = std::sin(angle);
    const double radial = 1.0 + tokens.points()(k, 0);
    const double tangential = tokens.points()(k, 1);
    const double px = radial * c - tangential * s;
    const double py = radial * s + tangential * c;
    shape.vertices.push_back({(px + kToyExtent) / (2.0 * kToyExtent),
                              (py + kToyExtent) / (2.0 * kToyExtent)});
  }
  return shape;
}

namespace detail {
inline std::string fmt_fixed(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}
}  // namespace detail

inline constexpr double kPanelSize = 160.0;

/// One horizontal strip, one equal-width panel per shape. Output bytes depend
/// only on the input.
inline std::string render_trajectory_svg(const std::vector<ToyShape>& shapes) {
  using detail::fmt_fixed;
  if (shapes.empty()) throw ArgumentError("render_trajectory_svg: no shapes");
  const double width = kPanelSize * static_cast<double>(shapes.size());
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt_fixed(width) +
         "\" height=\"" + fmt_fixed(kPanelSize) + "\" viewBox=\"0 0 " + fmt_fixed(width) + " " +
         fmt_fixed(kPanelSize) + "\">\n";
  for (std::size_t f = 0; f < shapes.size(); ++f) {
    const double x0 = kPanelSize * static_cast<double>(f);
    out += "  <g class=\"panel\" id=\"frame-" + std::to_string(f) + "\" transform=\"translate(" +
           fmt_fixed(x0) + ",0)\">\n";
    out += "    <rect x=\"0.0000\" y=\"0.0000\" width=\"" + fmt_fixed(kPanelSize) + "\" height=\"" +
           fmt_fixed(kPanelSize) + "\" fill=\"#ffffff\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    out += "    <polygon fill=\"#4c78a8\" fill-opacity=\"0.6\" stroke=\"#1f3b5a\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& v : shapes[f].vertices) {
      if (!first) out += ' ';
      first = false;
      // SVG y grows downward
      out += fmt_fixed(v.x * kPanelSize) + "," + fmt_fixed((1.0 - v.y) * kPanelSize);
    }
    out += "\"/>\n";
    out += "    <text x=\"6.0000\" y=\"14.0000\" font-family=\"monospace\" font-size=\"10\">" +
           std::to_string(f) + "</text>\n";
    out += "  </g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace otmorph
