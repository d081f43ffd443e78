#pragma once

#include <string>

#include "dfmp/dataflow.hpp"
#include "dfmp/floorplan.hpp"
#include "dfmp/metrics.hpp"

namespace dfmp {

struct SvgOptions {
  double pixels = 800.0;  // width of the longer outline side
  bool edges = false;     // dataflow edges, stroke scaled by weight
  const CongestionGrid* heat = nullptr;  // heat layer when non-null
};

// Outline, one <g class="macro"> per macro (rectangle plus a triangle in the
// pin-side corner: N lower-left, FS lower-right, FN upper-left, S
// upper-right), one <g class="cluster"> per placed cell cluster and one
// <g class="io"> per IO anchor. Layout y grows upward; the SVG is flipped.
std::string render_svg(const Floorplan& fp, const DataflowGraph& graph, const SvgOptions& options);

}  // namespace dfmp
