#include "dfmp/global_place.hpp"

#include <algorithm>
#include <cmath>

#include "dfmp/error.hpp"
#include "dfmp/rng.hpp"

namespace dfmp {

namespace {

struct Link {
  int other;  // cell cluster index into `cells`, or -1 for a fixed pin
  Point fixed;
  double weight;
};

// FastPlace-style cell shifting along x (axis 0) or y (axis 1).
void shift_axis(std::vector<Point>& pos, const std::vector<double>& area, const std::vector<Rect>& blockages,
                const Outline& outline, int bins, double damping, double target, int axis) {
  const double W = outline.width, H = outline.height;
  const double bw = W / bins, bh = H / bins;
  const double bin_area = bw * bh;
  auto bin_of = [&](double v, double step) { return std::clamp(static_cast<int>(v / step), 0, bins - 1); };

  std::vector<double> util(static_cast<std::size_t>(bins * bins), 0.0);
  auto at = [&](int ix, int iy) -> double& { return util[static_cast<std::size_t>(iy * bins + ix)]; };
  for (std::size_t c = 0; c < pos.size(); ++c) at(bin_of(pos[c].x, bw), bin_of(pos[c].y, bh)) += area[c];
  for (const auto& r : blockages) {
    for (int iy = 0; iy < bins; ++iy) {
      for (int ix = 0; ix < bins; ++ix) at(ix, iy) += r.overlap_area({ix * bw, iy * bh, bw, bh});
    }
  }
  for (auto& u : util) u /= bin_area;
  if (*std::max_element(util.begin(), util.end()) <= target) return;

  constexpr double delta = 1.5;
  const double step = axis == 0 ? bw : bh;
  const double extent = axis == 0 ? W : H;
  std::vector<double> bounds(static_cast<std::size_t>(bins + 1));
  for (int line = 0; line < bins; ++line) {
    // Bins along the shifting axis for this row (axis x) or column (axis y).
    auto u = [&](int i) { return axis == 0 ? at(i, line) : at(line, i); };
    bounds[0] = 0.0;
    bounds[bins] = extent;
    for (int i = 0; i + 1 < bins; ++i) {
      const double ci = (i + 0.5) * step, cn = (i + 1.5) * step;
      bounds[i + 1] = (ci * (u(i + 1) + delta) + cn * (u(i) + delta)) / (u(i) + u(i + 1) + 2.0 * delta);
    }
    for (auto& p : pos) {
      const int across = axis == 0 ? bin_of(p.y, bh) : bin_of(p.x, bw);
      if (across != line) continue;
      double& v = axis == 0 ? p.x : p.y;
      const int i = bin_of(v, step);
      const double mapped = bounds[i] + (v - i * step) * (bounds[i + 1] - bounds[i]) / step;
      v += damping * (mapped - v);
    }
  }
}

}  // namespace

Floorplan global_place_clusters(const DataflowGraph& graph, const ClusteredNetlist& cn, const Floorplan& fp_in,
                                const GlobalPlaceOptions& opt, std::uint64_t seed) {
  Floorplan fp = fp_in;
  std::vector<int> cells;
  std::vector<int> index_of(cn.clusters.size(), -1);
  for (const auto& c : cn.clusters) {
    if (!c.is_cell()) continue;
    index_of[c.id] = static_cast<int>(cells.size());
    cells.push_back(c.id);
  }
  if (cells.empty()) throw Error(ErrorCode::EmptyGraph, "no cell clusters to place");

  const Outline& o = fp.outline;
  Rng rng(seed);
  std::vector<Point> pos(cells.size());
  std::vector<double> area(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    area[i] = cn.clusters[cells[i]].area;
    if (fp.points[cells[i]]) {
      pos[i] = *fp.points[cells[i]];
    } else if (cells.size() == 1) {
      pos[i] = o.center();
    } else {
      pos[i] = o.center() + Point{rng.uniform(-0.05, 0.05) * o.width, rng.uniform(-0.05, 0.05) * o.height};
    }
  }

  const bool macros_fixed = opt.macros_fixed;
  std::vector<std::vector<Link>> links(cells.size());
  auto endpoint = [&](int cluster, Link& l) {
    if (index_of[cluster] >= 0) {
      l.other = index_of[cluster];
      return true;
    }
    if (fp.macro_slot[cluster] >= 0) {
      if (!macros_fixed) return false;
      l.other = -1;
      l.fixed = fp.macros[fp.macro_slot[cluster]].pin_center();
      return true;
    }
    if (!fp.points[cluster]) return false;
    l.other = -1;
    l.fixed = *fp.points[cluster];
    return true;
  };
  for (const auto& e : graph.edges) {
    if (e.kind != EdgeKind::MC && e.kind != EdgeKind::CC) continue;
    const double w = static_cast<double>(e.bit_width);
    for (auto [self, other] : {std::pair{e.src, e.dst}, std::pair{e.dst, e.src}}) {
      if (index_of[self] < 0) continue;
      Link l{-1, {}, w};
      if (endpoint(other, l)) links[index_of[self]].push_back(l);
    }
  }

  std::vector<Rect> blockages;
  if (macros_fixed) {
    for (const auto& m : fp.macros) blockages.push_back(m.rect());
  }
  const int bins = std::clamp(static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cells.size())))), 2, 16);

  std::vector<Point> next(pos.size());
  for (int it = 0; it < opt.iterations; ++it) {
    for (std::size_t i = 0; i < pos.size(); ++i) {
      Point sum;
      double wsum = 0.0;
      for (const auto& l : links[i]) {
        sum += (l.other >= 0 ? pos[l.other] : l.fixed) * l.weight;
        wsum += l.weight;
      }
      next[i] = wsum > 0.0 ? sum * (1.0 / wsum) : pos[i];
    }
    pos.swap(next);
    shift_axis(pos, area, blockages, o, bins, opt.spread_damping, opt.target_density, 0);
    shift_axis(pos, area, blockages, o, bins, opt.spread_damping, opt.target_density, 1);
    for (auto& p : pos) {
      p.x = std::clamp(p.x, 0.0, o.width);
      p.y = std::clamp(p.y, 0.0, o.height);
    }
  }

  for (std::size_t i = 0; i < cells.size(); ++i) fp.points[cells[i]] = pos[i];
  return fp;
}

}  // namespace dfmp
