#pragma once

#include <span>
#include <string>
#include <vector>

#include "dfmp/dataflow.hpp"
#include "dfmp/floorplan.hpp"
#include "dfmp/loss.hpp"
#include "dfmp/netlist.hpp"

namespace dfmp {

// (max x - min x) + (max y - min y). Throws EmptyPointSet.
double hpwl(std::span<const Point> points);

// Edge-level wirelength over every graph edge, measured between reference
// points (macro pin-centers, cell-cluster centers, IO anchors). MCC edges are
// measured macro to second hop, the same span the loss charges.
struct HpwlBreakdown {
  double total = 0.0;
  double mm = 0.0;  // direct + indirect
  double mc = 0.0;
  double cc = 0.0;
  double mcc = 0.0;
};
HpwlBreakdown edge_hpwl(const Floorplan& fp, const DataflowGraph& graph);

// Bit-weighted per-net HPWL. Macro instances sit at their slot pin inside the
// placed block (orientation applied), cells at their cluster center, IO pads
// at their side anchor.
double netlist_hpwl(const Netlist& netlist, const ClusteredNetlist& clustered, const Floorplan& fp);

// Demand per bin is routed length density (weight * HPWL spread uniformly
// over the edge bounding box) divided by the bin's area. The grid starts at
// the origin; the last row and column may be partial.
struct CongestionGrid {
  int cols = 0;
  int rows = 0;
  double bin_width = 0.0;
  double bin_height = 0.0;
  double capacity = 1.0;
  std::vector<double> demand;  // row-major, row 0 at y = 0

  double& at(int col, int row) { return demand[static_cast<std::size_t>(row * cols + col)]; }
  double at(int col, int row) const { return demand[static_cast<std::size_t>(row * cols + col)]; }
  Rect bin(int col, int row, const Outline& outline) const;
  // Sum of demand times bin area.
  double total_deposit(const Outline& outline) const;
  double overflow() const;
  double overflow(double capacity_override) const;
  // Row-major CSV, top row first so it reads like the layout.
  std::string to_csv() const;
};

struct CongestionOptions {
  double bin_width = 0.0;   // <= 0: outline width / 32
  double bin_height = 0.0;  // <= 0: outline height / 32
  double capacity = 0.0;    // must be > 0 when evaluating
};

// RUDY over the physical edges (MM_direct, MC, CC). Boxes are clipped to the
// outline. Degenerate boxes deposit along their segment; single points
// deposit nothing since their HPWL is zero.
CongestionGrid congestion(const Floorplan& fp, const DataflowGraph& graph, const CongestionOptions& options);

// Demand at the given quantile (0..1) over all bins.
double demand_quantile(const CongestionGrid& grid, double q);

struct FlipLogEntry {
  std::string name;
  std::string mode;
  double x_vt = 0.0;
  double y_vt = 0.0;
  double d_hpwl = 0.0;
  bool applied = false;
  friend bool operator==(const FlipLogEntry&, const FlipLogEntry&) = default;
};

struct StageTime {
  std::string stage;
  double seconds = 0.0;
  friend bool operator==(const StageTime&, const StageTime&) = default;
};

struct StageTiming {
  std::vector<StageTime> stages;

  double total() const;
  double seconds(std::string_view stage) const;
  double share(std::string_view stage) const;
  std::string to_json() const;
};

struct RunReport {
  double hpwl_total = 0.0;
  double wl_mm = 0.0;
  double wl_mc = 0.0;
  double wl_cc = 0.0;
  double wl_mcc = 0.0;
  double netlist_hpwl = 0.0;
  double congestion_overflow = 0.0;
  double congestion_capacity = 0.0;
  LossBreakdown loss;
  std::vector<FlipLogEntry> flip_log;
  std::vector<StageTime> timings;

  std::string to_text() const;
  std::string to_json() const;
  static RunReport from_json(const std::string& text);
  friend bool operator==(const RunReport&, const RunReport&) = default;
};

RunReport emit_report(const Floorplan& fp, const DataflowGraph& graph, const CongestionOptions& congestion_options,
                      const LossBreakdown& loss, std::vector<FlipLogEntry> flip_log, const StageTiming& timings);

}  // namespace dfmp
