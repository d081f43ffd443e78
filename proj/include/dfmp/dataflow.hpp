#pragma once

#include <array>
#include <string>
#include <vector>

#include "dfmp/clustering.hpp"

namespace dfmp {

enum class EdgeKind { MMDirect, MMIndirect, MC, CC, MCC };

inline constexpr std::array<EdgeKind, 5> kAllEdgeKinds = {EdgeKind::MMDirect, EdgeKind::MMIndirect,
                                                          EdgeKind::MC, EdgeKind::CC, EdgeKind::MCC};

std::string_view to_string(EdgeKind kind);

// One dataflow connection between clusters.
//
// MM edges are undirected and stored with src < dst. MC edges keep their
// direction (macro->cell or cell->macro), CC edges are cell->cell, and MCC
// edges run macro -> via (first-hop cell cluster) -> dst (second hop).
//
// For MCC edges `w1` is the macro->via weight and `w2` the via->dst weight
// from compute_wj; `weight` is their coupled strength sqrt(w1 * w2). For all
// other kinds `weight` is the summed bit width and w1/w2 are unused.
struct DataflowEdge {
  EdgeKind kind = EdgeKind::MMDirect;
  int src = 0;
  int dst = 0;
  int via = -1;
  double weight = 0.0;
  long long bit_width = 0;
  double w1 = 0.0;
  double w2 = 0.0;

  bool directed() const { return kind == EdgeKind::MC || kind == EdgeKind::CC || kind == EdgeKind::MCC; }
  friend bool operator==(const DataflowEdge&, const DataflowEdge&) = default;
};

// Edges are kept sorted by (kind, src, via, dst), which groups them by kind
// and makes the multiset comparable across runs.
struct DataflowGraph {
  std::vector<DataflowEdge> edges;

  std::size_t count(EdgeKind kind) const;
  std::vector<DataflowEdge> of_kind(EdgeKind kind) const;
  void add(std::vector<DataflowEdge> more);  // merge and re-sort
};

struct ExtractionOptions {
  double k = 1.0;
  int fanout_limit = 32;
  std::vector<std::string> name_filters = {"clk*", "rst*", "reset*"};
};

// Glob match with '*' and '?' as used by name_filters.
bool glob_match(std::string_view pattern, std::string_view text);

// Splits cluster edges into MM_direct (orientation dropped, both directions
// summed), MC and CC.
DataflowGraph classify_direct_edges(const ClusteredNetlist& clustered);

// Adds MM_indirect edges from macro clusters sharing a cell cluster (weight:
// sum of both macros' bit width to that cluster) and from single cells whose
// driven net reaches several macro clusters (weight: the net's bit width).
DataflowGraph extract_indirect_mm(DataflowGraph graph, const ClusteredNetlist& clustered,
                                  const Netlist& netlist, int fanout_limit,
                                  const std::vector<std::string>& name_filters);

// k * bit_width * normalized_area * instance_count of the destination cell
// cluster; area is normalized by `mean_cell_cluster_area`.
double compute_wj(long long bit_width, const Cluster& dst, double mean_cell_cluster_area, double k);

double mean_cell_cluster_area(const ClusteredNetlist& clustered);

// Adds MCC edges for every macro->C1 MC edge followed by a C1->C2 CC edge.
DataflowGraph extract_two_hop(DataflowGraph graph, const ClusteredNetlist& clustered, double k);

// classify, indirect, two-hop in sequence.
DataflowGraph build_dataflow_graph(const ClusteredNetlist& clustered, const Netlist& netlist,
                                   const ExtractionOptions& options);

// One edge per line: `kind srcId [viaId] dstId bitWidth weight`.
std::string export_graph(const DataflowGraph& graph);

}  // namespace dfmp
