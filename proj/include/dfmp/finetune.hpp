#pragma once

#include <span>
#include <vector>

#include "dfmp/dataflow.hpp"
#include "dfmp/floorplan.hpp"

namespace dfmp {

struct FlipWeights {
  double alpha = 0.55;  // MM
  double beta = 0.30;   // MC
  double gamma = 0.15;  // MCC
};

struct FlipVector {
  Point v_mm;
  Point v_mc;
  Point v_mcc;
  Point v_t;
};

struct FlipDecision {
  int macro = 0;  // cluster id
  Orientation mode = Orientation::N;
  double pre_hpwl = 0.0;
  double post_hpwl = 0.0;
  bool applied = false;
  Point v_t;
};

// Mean of the member coordinates. Throws EmptyCluster on an empty set.
Point geometric_center(std::span<const Point> members);

// Weighted dataflow pull on the macro in `slot`, measured from its current
// pin-center. MM peers pull by bit width, MC clusters (either direction) by
// edge weight, MCC paths by edge weight toward the midpoint of the two hops.
FlipVector decompose_dataflow_vectors(int slot, const DataflowGraph& graph, const Floorplan& fp,
                                      const FlipWeights& weights);

// Macro slots in flipping order: BFS from the macros that share an edge with
// an IO cluster, walking the undirected union of all edge kinds (IO clusters
// are not walked through). Siblings are visited by descending incident weight,
// then ascending cluster id; unreachable macros follow in ascending id.
std::vector<int> order_macros_for_flipping(const DataflowGraph& graph, const Floorplan& fp);

// Mirror that aligns the pin offset with `v_t`: FS when only x disagrees in
// sign, FN when only y does, S for both. Zero components never flip.
Orientation choose_flip(const MacroPlacement& macro, Point v_t);

// Applies choose_flip to the macro in `slot`. With `guard`, a flip that raises
// the total edge HPWL is undone and reported with applied = false.
FlipDecision decide_and_apply_flip(int slot, const FlipVector& fv, Floorplan& fp, const DataflowGraph& graph,
                                   bool guard);

// One ordered pass; each macro sees the flips already made before it.
std::vector<FlipDecision> flip_pass(Floorplan& fp, const DataflowGraph& graph, const FlipWeights& weights,
                                    bool guard);

}  // namespace dfmp
