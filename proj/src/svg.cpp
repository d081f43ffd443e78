#include "dfmp/svg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace dfmp {

namespace {

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const Floorplan& fp, const DataflowGraph& graph, const SvgOptions& opt) {
  const double W = fp.outline.width, H = fp.outline.height;
  const double s = opt.pixels / std::max(W, H);
  const double margin = 10.0;
  auto X = [&](double x) { return margin + x * s; };
  auto Y = [&](double y) { return margin + (H - y) * s; };

  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.2f}\" height=\"{:.2f}\" "
      "viewBox=\"0 0 {:.2f} {:.2f}\">\n",
      W * s + 2 * margin, H * s + 2 * margin, W * s + 2 * margin, H * s + 2 * margin);
  out += fmt::format(
      "<rect class=\"outline\" x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" "
      "fill=\"white\" stroke=\"black\"/>\n",
      X(0), Y(H), W * s, H * s);

  if (opt.heat) {
    const CongestionGrid& g = *opt.heat;
    const double peak = g.demand.empty() ? 0.0 : *std::max_element(g.demand.begin(), g.demand.end());
    out += "<g class=\"heat\">\n";
    for (int r = 0; r < g.rows; ++r) {
      for (int c = 0; c < g.cols; ++c) {
        const double d = g.at(c, r);
        if (d <= 0.0 || peak <= 0.0) continue;
        const Rect b = g.bin(c, r, fp.outline);
        out += fmt::format(
            "<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"{}\" "
            "fill-opacity=\"{:.3f}\"/>\n",
            X(b.x), Y(b.ymax()), b.width * s, b.height * s, d > g.capacity ? "red" : "orange", 0.6 * d / peak);
      }
    }
    out += "</g>\n";
  }

  for (const auto& m : fp.macros) {
    const Rect r = m.rect();
    out += fmt::format("<g class=\"macro\" id=\"{}\" data-orient=\"{}\">\n", escape(m.name), to_string(m.orientation));
    out += fmt::format(
        "<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"#9ecae1\" "
        "stroke=\"#08519c\"/>\n",
        X(r.x), Y(r.ymax()), r.width * s, r.height * s);
    const double t = 0.2 * std::min(r.width, r.height);
    const double cx = mirrors_x(m.orientation) ? r.xmax() : r.x;
    const double cy = mirrors_y(m.orientation) ? r.ymax() : r.y;
    const double sx = mirrors_x(m.orientation) ? -t : t;
    const double sy = mirrors_y(m.orientation) ? -t : t;
    out += fmt::format("<polygon class=\"marker\" points=\"{:.3f},{:.3f} {:.3f},{:.3f} {:.3f},{:.3f}\" fill=\"red\"/>\n",
                       X(cx), Y(cy), X(cx + sx), Y(cy), X(cx), Y(cy + sy));
    out += "</g>\n";
  }

  const double radius = std::max(2.0, 0.01 * std::max(W, H) * s);
  for (std::size_t c = 0; c < fp.points.size(); ++c) {
    if (!fp.points[c] || fp.macro_slot[c] >= 0) continue;
    const bool io = c < fp.is_io.size() && fp.is_io[c];
    const Point p = *fp.points[c];
    out += fmt::format("<g class=\"{}\" id=\"c{}\"><circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"{:.3f}\" fill=\"{}\"/></g>\n",
                       io ? "io" : "cluster", c, X(p.x), Y(p.y), radius, io ? "green" : "gray");
  }

  if (opt.edges) {
    double peak = 0.0;
    for (const auto& e : graph.edges) peak = std::max(peak, e.weight);
    out += "<g class=\"edges\">\n";
    for (const auto& e : graph.edges) {
      const auto a = fp.reference_point(e.src), b = fp.reference_point(e.dst);
      if (!a || !b || peak <= 0.0) continue;
      out += fmt::format(
          "<line class=\"{}\" x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" stroke=\"black\" "
          "stroke-opacity=\"0.4\" stroke-width=\"{:.3f}\"/>\n",
          to_string(e.kind), X(a->x), Y(a->y), X(b->x), Y(b->y), 0.5 + 3.0 * e.weight / peak);
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace dfmp
