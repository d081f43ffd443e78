#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dfmp/netlist.hpp"

namespace dfmp {

enum class ClusterKind { Macro, Cell };

std::string_view to_string(ClusterKind kind);

struct Cluster {
  int id = 0;
  ClusterKind kind = ClusterKind::Cell;
  std::vector<int> members;  // instance ids, ascending
  std::vector<std::string> hierarchy_root;
  double area = 0.0;
  int instance_count = 0;
  std::optional<Side> io_side;  // set for bundled IO clusters
  std::string name;

  bool is_io() const { return io_side.has_value(); }
  bool is_macro() const { return kind == ClusterKind::Macro; }
  bool is_cell() const { return kind == ClusterKind::Cell; }
};

// Directed, bit-width weighted connection between two distinct clusters.
struct ClusterEdge {
  int src = 0;
  int dst = 0;
  long long bit_width = 0;

  friend bool operator==(const ClusterEdge&, const ClusterEdge&) = default;
};

struct ClusteredNetlist {
  std::vector<Cluster> clusters;
  std::vector<int> instance_to_cluster;
  std::vector<ClusterEdge> edges;  // sorted by (src, dst), parallel edges merged

  const Cluster& cluster(int id) const { return clusters[id]; }
};

struct ClusterThresholds {
  int min_cells = 50;
  int max_cells = 500;
  int min_macros = 1;
  int max_macros = 16;
};

// Threshold-limited hierarchical clustering. Seeds are hierarchy leaves split
// by kind; oversized seeds are cut into ceil(n / max) balanced parts in
// canonical member order; undersized siblings of one kind are packed
// largest-first under the max threshold; IO pads form one cluster per side.
// The returned clusters have no edges yet.
ClusteredNetlist build_clusters(const Netlist& netlist, const ClusterThresholds& thresholds);

// Fills `edges`: every net adds its bit width once per distinct sink cluster
// other than the driver's.
ClusteredNetlist compute_cluster_edges(const Netlist& netlist, ClusteredNetlist clustered);

// One line per cluster: `id kind size area hierarchy_root`.
std::string dump_clusters(const ClusteredNetlist& clustered);

}  // namespace dfmp
