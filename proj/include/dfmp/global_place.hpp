#pragma once

#include <cstdint>

#include "dfmp/dataflow.hpp"
#include "dfmp/floorplan.hpp"

namespace dfmp {

struct GlobalPlaceOptions {
  int iterations = 50;
  // Fraction of the cell-shifting displacement applied per iteration.
  double spread_damping = 0.3;
  // Bin utilization above which spreading kicks in.
  double target_density = 1.0;
  // When set, macro pin-centers pull on connected clusters and macro
  // footprints count toward bin utilization.
  bool macros_fixed = false;
};

// Cluster-level global placement of cell clusters: Jacobi weighted-barycenter
// sweeps over the one-hop MC and CC edges (IO anchors and any placed macros
// act as fixed pins) followed by a grid cell-shifting step whenever a bin is
// over capacity. Cell clusters already placed in `fp` start from their
// current position; otherwise they start at the outline center with a small
// seeded jitter. Throws EmptyGraph when there are no cell clusters.
Floorplan global_place_clusters(const DataflowGraph& graph, const ClusteredNetlist& clustered,
                                const Floorplan& fp, const GlobalPlaceOptions& options, std::uint64_t seed);

}  // namespace dfmp
