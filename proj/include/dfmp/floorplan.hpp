#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dfmp/clustering.hpp"
#include "dfmp/geometry.hpp"

namespace dfmp {

// Macro orientation restricted to axis mirrors.
//
// Naming follows the dataflow-flipping convention used throughout this
// project, NOT the DEF one:
//   FN - mirror across the macro's horizontal centerline (pins move up/down)
//   FS - mirror across the macro's vertical centerline (pins move left/right)
//   S  - both
// Conversion to DEF orientation names belongs in a writer, not here.
enum class Orientation { N = 0, FS = 1, FN = 2, S = 3 };

std::string_view to_string(Orientation o);
Orientation parse_orientation(std::string_view text);

// Applying `flip` on top of `current`.
inline Orientation compose(Orientation current, Orientation flip) {
  return static_cast<Orientation>(static_cast<int>(current) ^ static_cast<int>(flip));
}
inline bool mirrors_x(Orientation o) { return (static_cast<int>(o) & 1) != 0; }
inline bool mirrors_y(Orientation o) { return (static_cast<int>(o) & 2) != 0; }

struct MacroMember {
  int instance = 0;
  Point pin;  // member pin-center, block-local, unflipped
};

// A macro cluster placed as one rectangle. Members sit on a regular grid
// inside the block; `pin_offset` is the mean member pin-center.
struct MacroPlacement {
  int cluster = 0;
  std::string name;
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;
  Orientation orientation = Orientation::N;
  Point pin_offset;  // block-local, unflipped
  double area = 0.0;  // summed member macro area
  std::vector<MacroMember> members;

  // Maps a block-local, unflipped offset through the current orientation.
  Point oriented(Point local) const {
    return {mirrors_x(orientation) ? width - local.x : local.x,
            mirrors_y(orientation) ? height - local.y : local.y};
  }
  Point pin_center() const { return Point{x, y} + oriented(pin_offset); }
  Point center() const { return {x + width / 2.0, y + height / 2.0}; }
  Rect rect() const { return {x, y, width, height}; }
};

struct Floorplan {
  Outline outline;
  std::vector<MacroPlacement> macros;
  // Indexed by cluster id: cell-cluster centers and IO anchors.
  std::vector<std::optional<Point>> points;
  // Indexed by cluster id: position in `macros`, or -1.
  std::vector<int> macro_slot;
  // Indexed by cluster id: true for IO clusters.
  std::vector<bool> is_io;

  // Macro pin-center, cell-cluster center or IO anchor.
  std::optional<Point> reference_point(int cluster) const {
    if (cluster < 0 || cluster >= static_cast<int>(macro_slot.size())) return std::nullopt;
    if (macro_slot[cluster] >= 0) return macros[macro_slot[cluster]].pin_center();
    return points[cluster];
  }
};

// Midpoint of the outline side.
Point io_anchor(Side side, const Outline& outline);

// Macro blocks at the origin in N orientation, IO anchors set, cell clusters
// unplaced.
Floorplan make_floorplan(const Netlist& netlist, const ClusteredNetlist& clustered);

}  // namespace dfmp
