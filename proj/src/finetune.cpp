#include "dfmp/finetune.hpp"

#include <algorithm>
#include <deque>

#include <fmt/format.h>

#include "dfmp/error.hpp"
#include "dfmp/metrics.hpp"

namespace dfmp {

Point geometric_center(std::span<const Point> members) {
  if (members.empty()) throw Error(ErrorCode::EmptyCluster, "geometric center of an empty cluster");
  Point sum;
  for (const auto& p : members) sum += p;
  return sum * (1.0 / static_cast<double>(members.size()));
}

namespace {

Point position(const Floorplan& fp, int cluster) {
  auto p = fp.reference_point(cluster);
  if (!p) throw Error(ErrorCode::UnplacedCluster, fmt::format("cluster {} has no position", cluster));
  return *p;
}

}  // namespace

FlipVector decompose_dataflow_vectors(int slot, const DataflowGraph& graph, const Floorplan& fp,
                                      const FlipWeights& w) {
  const MacroPlacement& m = fp.macros.at(static_cast<std::size_t>(slot));
  const int id = m.cluster;
  const Point pc = m.pin_center();
  FlipVector fv;
  for (const auto& e : graph.edges) {
    switch (e.kind) {
      case EdgeKind::MMDirect:
      case EdgeKind::MMIndirect:
      case EdgeKind::MC: {
        if (e.src != id && e.dst != id) break;
        const Point d = (position(fp, e.src == id ? e.dst : e.src) - pc) * e.weight;
        (e.kind == EdgeKind::MC ? fv.v_mc : fv.v_mm) += d;
        break;
      }
      case EdgeKind::MCC: {
        if (e.src != id) break;
        const Point mid = (position(fp, e.via) + position(fp, e.dst)) * 0.5;
        fv.v_mcc += (mid - pc) * e.weight;
        break;
      }
      case EdgeKind::CC: break;
    }
  }
  fv.v_t = fv.v_mm * w.alpha + fv.v_mc * w.beta + fv.v_mcc * w.gamma;
  return fv;
}

std::vector<int> order_macros_for_flipping(const DataflowGraph& graph, const Floorplan& fp) {
  const std::size_t n = fp.macro_slot.size();
  std::vector<std::vector<int>> adj(n);
  std::vector<double> incident(n, 0.0);
  auto link = [&](int a, int b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (const auto& e : graph.edges) {
    link(e.src, e.dst);
    incident[e.src] += e.weight;
    incident[e.dst] += e.weight;
    if (e.via >= 0) {
      link(e.src, e.via);
      link(e.via, e.dst);
      incident[e.via] += e.weight;
    }
  }
  auto is_io = [&](int c) { return c < static_cast<int>(fp.is_io.size()) && fp.is_io[c]; };
  auto by_priority = [&](int a, int b) { return incident[a] != incident[b] ? incident[a] > incident[b] : a < b; };

  std::vector<int> start;
  for (const auto& m : fp.macros) {
    if (std::any_of(adj[m.cluster].begin(), adj[m.cluster].end(), is_io)) start.push_back(m.cluster);
  }
  std::sort(start.begin(), start.end(), by_priority);

  std::vector<bool> seen(n, false);
  std::deque<int> queue;
  for (int c : start) {
    seen[c] = true;
    queue.push_back(c);
  }
  std::vector<int> order;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (fp.macro_slot[u] >= 0) order.push_back(fp.macro_slot[u]);
    std::vector<int> next;
    for (int v : adj[u]) {
      if (!seen[v] && !is_io(v)) {
        seen[v] = true;
        next.push_back(v);
      }
    }
    std::sort(next.begin(), next.end(), by_priority);
    queue.insert(queue.end(), next.begin(), next.end());
  }

  std::vector<int> rest;
  for (const auto& m : fp.macros) {
    if (!seen[m.cluster]) rest.push_back(m.cluster);
  }
  std::sort(rest.begin(), rest.end());
  for (int c : rest) order.push_back(fp.macro_slot[c]);
  return order;
}

Orientation choose_flip(const MacroPlacement& m, Point v_t) {
  // Offsets relative to the block center, computed in block-local terms so a
  // centered pin gives exactly zero.
  const Point local = m.oriented(m.pin_offset);
  const double dx = local.x - m.width / 2.0;
  const double dy = local.y - m.height / 2.0;
  const bool flip_x = (v_t.x > 0.0 && dx < 0.0) || (v_t.x < 0.0 && dx > 0.0);
  const bool flip_y = (v_t.y > 0.0 && dy < 0.0) || (v_t.y < 0.0 && dy > 0.0);
  if (flip_x && flip_y) return Orientation::S;
  if (flip_x) return Orientation::FS;
  if (flip_y) return Orientation::FN;
  return Orientation::N;
}

FlipDecision decide_and_apply_flip(int slot, const FlipVector& fv, Floorplan& fp, const DataflowGraph& graph,
                                   bool guard) {
  MacroPlacement& m = fp.macros.at(static_cast<std::size_t>(slot));
  FlipDecision d;
  d.macro = m.cluster;
  d.v_t = fv.v_t;
  d.mode = choose_flip(m, fv.v_t);
  d.pre_hpwl = edge_hpwl(fp, graph).total;
  d.post_hpwl = d.pre_hpwl;
  if (d.mode == Orientation::N) return d;

  const Orientation before = m.orientation;
  m.orientation = compose(before, d.mode);
  d.post_hpwl = edge_hpwl(fp, graph).total;
  if (guard && d.post_hpwl > d.pre_hpwl) {
    m.orientation = before;
    return d;
  }
  d.applied = true;
  return d;
}

std::vector<FlipDecision> flip_pass(Floorplan& fp, const DataflowGraph& graph, const FlipWeights& weights,
                                    bool guard) {
  std::vector<FlipDecision> out;
  for (int slot : order_macros_for_flipping(graph, fp)) {
    const FlipVector fv = decompose_dataflow_vectors(slot, graph, fp, weights);
    out.push_back(decide_and_apply_flip(slot, fv, fp, graph, guard));
  }
  return out;
}

}  // namespace dfmp
