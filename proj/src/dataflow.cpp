#include "dfmp/dataflow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "dfmp/error.hpp"

namespace dfmp {

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::MMDirect: return "MM_direct";
    case EdgeKind::MMIndirect: return "MM_indirect";
    case EdgeKind::MC: return "MC";
    case EdgeKind::CC: return "CC";
    case EdgeKind::MCC: return "MCC";
  }
  return "MM_direct";
}

namespace {

auto edge_key(const DataflowEdge& e) { return std::make_tuple(e.kind, e.src, e.via, e.dst); }

void sort_edges(std::vector<DataflowEdge>& edges) {
  std::sort(edges.begin(), edges.end(),
            [](const DataflowEdge& a, const DataflowEdge& b) { return edge_key(a) < edge_key(b); });
}

std::pair<int, int> unordered(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

}  // namespace

std::size_t DataflowGraph::count(EdgeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [kind](const DataflowEdge& e) { return e.kind == kind; }));
}

std::vector<DataflowEdge> DataflowGraph::of_kind(EdgeKind kind) const {
  std::vector<DataflowEdge> out;
  std::copy_if(edges.begin(), edges.end(), std::back_inserter(out),
               [kind](const DataflowEdge& e) { return e.kind == kind; });
  return out;
}

void DataflowGraph::add(std::vector<DataflowEdge> more) {
  edges.insert(edges.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  sort_edges(edges);
}

bool glob_match(std::string_view pattern, std::string_view text) {
  std::size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

DataflowGraph classify_direct_edges(const ClusteredNetlist& cn) {
  std::map<std::pair<int, int>, long long> mm;
  DataflowGraph g;
  for (const auto& e : cn.edges) {
    const bool src_macro = cn.clusters[e.src].is_macro();
    const bool dst_macro = cn.clusters[e.dst].is_macro();
    if (src_macro && dst_macro) {
      mm[unordered(e.src, e.dst)] += e.bit_width;
    } else {
      DataflowEdge d;
      d.kind = (src_macro || dst_macro) ? EdgeKind::MC : EdgeKind::CC;
      d.src = e.src;
      d.dst = e.dst;
      d.bit_width = e.bit_width;
      d.weight = static_cast<double>(e.bit_width);
      g.edges.push_back(d);
    }
  }
  for (const auto& [pair, w] : mm) {
    DataflowEdge d;
    d.kind = EdgeKind::MMDirect;
    d.src = pair.first;
    d.dst = pair.second;
    d.bit_width = w;
    d.weight = static_cast<double>(w);
    g.edges.push_back(d);
  }
  sort_edges(g.edges);
  return g;
}

DataflowGraph extract_indirect_mm(DataflowGraph g, const ClusteredNetlist& cn, const Netlist& nl,
                                  int fanout_limit, const std::vector<std::string>& name_filters) {
  std::map<std::pair<int, int>, long long> pairs;

  // Cluster level: macros touching the same cell cluster, in either direction.
  std::map<int, std::map<int, long long>> macros_at_cell;  // cell cluster -> macro cluster -> bit width
  for (const auto& e : g.edges) {
    if (e.kind != EdgeKind::MC) continue;
    const bool src_macro = cn.clusters[e.src].is_macro();
    const int macro = src_macro ? e.src : e.dst;
    const int cell = src_macro ? e.dst : e.src;
    macros_at_cell[cell][macro] += e.bit_width;
  }
  for (const auto& [cell, macros] : macros_at_cell) {
    for (auto i = macros.begin(); i != macros.end(); ++i) {
      for (auto j = std::next(i); j != macros.end(); ++j) {
        pairs[{i->first, j->first}] += i->second + j->second;
      }
    }
  }

  // Instance level: one cell driving pins inside several macro clusters.
  std::set<int> reached;
  for (const auto& net : nl.nets) {
    if (nl.kind_of(net.driver.instance) != MasterKind::Cell) continue;
    if (static_cast<int>(net.sinks.size()) > fanout_limit) continue;
    const bool filtered = std::any_of(name_filters.begin(), name_filters.end(),
                                      [&](const std::string& f) { return glob_match(f, net.base_name); });
    if (filtered) continue;
    reached.clear();
    for (const auto& s : net.sinks) {
      const int c = cn.instance_to_cluster[s.instance];
      if (cn.clusters[c].is_macro()) reached.insert(c);
    }
    for (auto i = reached.begin(); i != reached.end(); ++i) {
      for (auto j = std::next(i); j != reached.end(); ++j) pairs[{*i, *j}] += net.bit_width;
    }
  }

  std::vector<DataflowEdge> added;
  for (const auto& [pair, w] : pairs) {
    DataflowEdge d;
    d.kind = EdgeKind::MMIndirect;
    d.src = pair.first;
    d.dst = pair.second;
    d.bit_width = w;
    d.weight = static_cast<double>(w);
    added.push_back(d);
  }
  g.add(std::move(added));
  return g;
}

double mean_cell_cluster_area(const ClusteredNetlist& cn) {
  double sum = 0.0;
  int n = 0;
  for (const auto& c : cn.clusters) {
    if (!c.is_cell()) continue;
    sum += c.area;
    ++n;
  }
  return n == 0 ? 0.0 : sum / n;
}

double compute_wj(long long bit_width, const Cluster& dst, double mean_area, double k) {
  if (!(dst.area > 0.0) || dst.instance_count <= 0) {
    throw Error(ErrorCode::DegenerateCluster,
                fmt::format("cluster '{}' has zero area or no instances", dst.name));
  }
  if (!(mean_area > 0.0)) throw Error(ErrorCode::DegenerateCluster, "mean cell-cluster area is zero");
  return k * static_cast<double>(bit_width) * (dst.area / mean_area) * dst.instance_count;
}

DataflowGraph extract_two_hop(DataflowGraph g, const ClusteredNetlist& cn, double k) {
  const double mean_area = mean_cell_cluster_area(cn);
  std::map<int, std::vector<const DataflowEdge*>> cc_from;
  std::vector<const DataflowEdge*> mc;
  for (const auto& e : g.edges) {
    if (e.kind == EdgeKind::CC) cc_from[e.src].push_back(&e);
    if (e.kind == EdgeKind::MC && cn.clusters[e.src].is_macro()) mc.push_back(&e);
  }

  struct Hop {
    double w1 = 0.0;
    double w2 = 0.0;
    long long bits = 0;
  };
  std::map<std::tuple<int, int, int>, Hop> triples;  // (macro, via, dst)
  for (const auto* first : mc) {
    auto it = cc_from.find(first->dst);
    if (it == cc_from.end()) continue;
    for (const auto* second : it->second) {
      if (second->dst == first->dst) continue;
      auto& hop = triples[{first->src, first->dst, second->dst}];
      hop.w1 += first->weight;
      hop.w2 += compute_wj(second->bit_width, cn.clusters[second->dst], mean_area, k);
      hop.bits += second->bit_width;
    }
  }

  std::vector<DataflowEdge> added;
  for (const auto& [key, hop] : triples) {
    const double coupled = std::sqrt(hop.w1 * hop.w2);
    if (!(coupled > 0.0)) continue;  // k == 0 switches two-hop guidance off
    DataflowEdge d;
    d.kind = EdgeKind::MCC;
    std::tie(d.src, d.via, d.dst) = key;
    d.w1 = hop.w1;
    d.w2 = hop.w2;
    d.weight = coupled;
    d.bit_width = hop.bits;
    added.push_back(d);
  }
  g.add(std::move(added));
  return g;
}

DataflowGraph build_dataflow_graph(const ClusteredNetlist& cn, const Netlist& nl, const ExtractionOptions& opt) {
  auto g = classify_direct_edges(cn);
  g = extract_indirect_mm(std::move(g), cn, nl, opt.fanout_limit, opt.name_filters);
  return extract_two_hop(std::move(g), cn, opt.k);
}

std::string export_graph(const DataflowGraph& g) {
  std::string out;
  for (const auto& e : g.edges) {
    if (e.kind == EdgeKind::MCC) {
      out += fmt::format("{} {} {} {} {} {}\n", to_string(e.kind), e.src, e.via, e.dst, e.bit_width, e.weight);
    } else {
      out += fmt::format("{} {} {} {} {}\n", to_string(e.kind), e.src, e.dst, e.bit_width, e.weight);
    }
  }
  return out;
}

}  // namespace dfmp
