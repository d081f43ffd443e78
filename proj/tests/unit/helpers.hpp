#pragma once

// Small netlist builders shared by the unit tests.

#include <string>
#include <vector>

#include "dfmp/clustering.hpp"
#include "dfmp/dataflow.hpp"
#include "dfmp/floorplan.hpp"
#include "dfmp/netlist.hpp"
#include "dfmp/rng.hpp"
#include "dfmp/sequence_pair.hpp"

namespace testing {

using namespace dfmp;

struct Builder {
  Netlist nl;

  explicit Builder(double w = 100.0, double h = 100.0) {
    nl.outline = {w, h};
    nl.masters.push_back({"MAC", 10.0, 10.0, {{"A", 2.0, 2.0, false}, {"Z", 2.0, 3.0, true}}, MasterKind::Macro});
    nl.masters.push_back({"CELL", 1.0, 1.0, {{"A", 0.0, 0.5, false}, {"Y", 1.0, 0.5, true}}, MasterKind::Cell});
    nl.masters.push_back({"PAD", 0.0, 0.0, {{"P", 0.0, 0.0, true}, {"I", 0.0, 0.0, false}}, MasterKind::IoPad});
  }

  int add(const std::string& name, int master, std::vector<std::string> path, std::optional<Side> side = {}) {
    const int id = static_cast<int>(nl.instances.size());
    nl.instances.push_back({id, name, master, std::move(path), side});
    return id;
  }
  int macro(const std::string& name, std::vector<std::string> path) { return add(name, 0, std::move(path)); }
  int cell(const std::string& name, std::vector<std::string> path) { return add(name, 1, std::move(path)); }
  int pad(const std::string& name, Side side) { return add(name, 2, {"top"}, side); }

  // Output pin of the driver's master, input pin of each sink's master.
  void net(const std::string& base, int driver, std::vector<int> sinks, int bits = 1) {
    auto out_pin = [&](int i) { return nl.masters[nl.instances[i].master].kind == MasterKind::Macro ? "Z"
                                       : nl.masters[nl.instances[i].master].kind == MasterKind::Cell ? "Y" : "P"; };
    auto in_pin = [&](int i) { return nl.masters[nl.instances[i].master].kind == MasterKind::IoPad ? "I" : "A"; };
    Net n;
    n.id = static_cast<int>(nl.nets.size());
    n.base_name = base;
    n.driver = {driver, out_pin(driver)};
    for (int s : sinks) n.sinks.push_back({s, in_pin(s)});
    n.bit_width = bits;
    nl.nets.push_back(std::move(n));
  }
};

// Each macro in its own leaf module, cells spread over `cell_modules` leaves,
// random nets with random widths and a sprinkling of clock-like names.
// Thresholds keep every leaf as its own cluster.
inline Netlist random_netlist(Rng& rng, int macros, int cell_modules, int nets) {
  Builder b(200.0, 200.0);
  std::vector<int> all;
  for (int i = 0; i < macros; ++i) all.push_back(b.macro("m" + std::to_string(i), {"top", "m" + std::to_string(i)}));
  for (int j = 0; j < cell_modules; ++j) {
    const int n = 1 + rng.below(4);
    for (int k = 0; k < n; ++k) {
      all.push_back(b.cell("c" + std::to_string(j) + "_" + std::to_string(k), {"top", "u" + std::to_string(j)}));
    }
  }
  const char* names[] = {"data", "addr", "clk", "rst_n", "ctl"};
  for (int k = 0; k < nets; ++k) {
    const int drv = all[rng.below(static_cast<int>(all.size()))];
    std::vector<int> sinks;
    const int fanout = 1 + rng.below(4);
    for (int f = 0; f < fanout; ++f) {
      const int s = all[rng.below(static_cast<int>(all.size()))];
      if (s != drv) sinks.push_back(s);
    }
    if (sinks.empty()) continue;
    b.net(std::string(names[rng.below(5)]) + std::to_string(k), drv, sinks, 1 + rng.below(16));
  }
  return b.nl;
}

// Floorplan over `n` clusters where the first `macros` are macro blocks of the
// given sizes (pins at the block center unless set later) and the rest are
// placed points.
inline Floorplan floorplan(Outline o, const std::vector<Size>& macros, const std::vector<Point>& points) {
  Floorplan fp;
  fp.outline = o;
  const std::size_t n = macros.size() + points.size();
  fp.points.assign(n, std::nullopt);
  fp.macro_slot.assign(n, -1);
  fp.is_io.assign(n, false);
  for (std::size_t i = 0; i < macros.size(); ++i) {
    MacroPlacement m;
    m.cluster = static_cast<int>(i);
    m.name = "m" + std::to_string(i);
    m.width = macros[i].width;
    m.height = macros[i].height;
    m.area = m.width * m.height;
    m.pin_offset = {m.width / 2.0, m.height / 2.0};
    fp.macro_slot[i] = static_cast<int>(i);
    fp.macros.push_back(m);
  }
  for (std::size_t i = 0; i < points.size(); ++i) fp.points[macros.size() + i] = points[i];
  return fp;
}

inline DataflowEdge edge(EdgeKind k, int src, int dst, double w) {
  DataflowEdge e;
  e.kind = k;
  e.src = src;
  e.dst = dst;
  e.weight = w;
  e.bit_width = static_cast<long long>(w);
  return e;
}

// Everything inside a 200 x 200 outline; the last cluster is an IO anchor.
// Macro ids come first, then points.
inline Floorplan random_floorplan(Rng& rng, int macros, int points, DataflowGraph& g) {
  std::vector<Size> sizes;
  for (int i = 0; i < macros; ++i) sizes.push_back({rng.uniform(2, 20), rng.uniform(2, 20)});
  std::vector<Point> pts;
  for (int i = 0; i < points; ++i) pts.push_back({rng.uniform(0, 200), rng.uniform(0, 200)});
  Floorplan fp = floorplan({200, 200}, sizes, pts);
  for (auto& m : fp.macros) {
    m.x = rng.uniform(0, 180);
    m.y = rng.uniform(0, 180);
    m.pin_offset = {rng.uniform(0, m.width), rng.uniform(0, m.height)};
    if (rng.below(4) == 0) m.pin_offset.y = m.height / 2.0;
  }
  const int n = macros + points;
  fp.is_io[n - 1] = true;
  std::vector<DataflowEdge> edges;
  for (int k = 0; k < 3 * n; ++k) {
    const int a = rng.below(n), b = rng.below(n);
    if (a == b) continue;
    const double w = 1 + rng.below(16);
    const bool am = a < macros, bm = b < macros;
    if (am && bm) {
      edges.push_back(edge(rng.below(2) ? EdgeKind::MMDirect : EdgeKind::MMIndirect, std::min(a, b), std::max(a, b), w));
    } else if (am || bm) {
      edges.push_back(edge(EdgeKind::MC, a, b, w));
    } else {
      edges.push_back(edge(EdgeKind::CC, a, b, w));
    }
    if (am && !bm) {
      const int c = macros + rng.below(points);
      if (c != b) {
        DataflowEdge e = edge(EdgeKind::MCC, a, c, rng.uniform(0.5, 8));
        e.via = b;
        edges.push_back(e);
      }
    }
  }
  g = DataflowGraph{};
  g.add(edges);
  return fp;
}

inline ClusterThresholds loose_thresholds() { return {1, 1000, 1, 1000}; }

}  // namespace testing
