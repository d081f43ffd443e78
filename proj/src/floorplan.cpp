#include "dfmp/floorplan.hpp"

#include <cmath>

#include <fmt/format.h>

#include "dfmp/error.hpp"

namespace dfmp {

std::string_view to_string(Orientation o) {
  switch (o) {
    case Orientation::N: return "N";
    case Orientation::FS: return "FS";
    case Orientation::FN: return "FN";
    case Orientation::S: return "S";
  }
  return "N";
}

Orientation parse_orientation(std::string_view text) {
  if (text == "N") return Orientation::N;
  if (text == "FS") return Orientation::FS;
  if (text == "FN") return Orientation::FN;
  if (text == "S") return Orientation::S;
  throw Error(ErrorCode::Syntax, fmt::format("unknown orientation '{}'", text));
}

Point io_anchor(Side side, const Outline& o) {
  switch (side) {
    case Side::N: return {o.width / 2.0, o.height};
    case Side::S: return {o.width / 2.0, 0.0};
    case Side::E: return {o.width, o.height / 2.0};
    case Side::W: return {0.0, o.height / 2.0};
  }
  return o.center();
}

Floorplan make_floorplan(const Netlist& nl, const ClusteredNetlist& cn) {
  Floorplan fp;
  fp.outline = nl.outline;
  fp.points.assign(cn.clusters.size(), std::nullopt);
  fp.macro_slot.assign(cn.clusters.size(), -1);
  fp.is_io.assign(cn.clusters.size(), false);

  for (const auto& c : cn.clusters) {
    if (c.is_io()) {
      fp.points[c.id] = io_anchor(*c.io_side, nl.outline);
      fp.is_io[c.id] = true;
      continue;
    }
    if (!c.is_macro()) continue;

    // Members on a near-square grid of uniform slots.
    const int n = c.instance_count;
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    const int rows = (n + cols - 1) / cols;
    double slot_w = 0.0, slot_h = 0.0;
    for (int m : c.members) {
      slot_w = std::max(slot_w, nl.master_of(m).width);
      slot_h = std::max(slot_h, nl.master_of(m).height);
    }

    MacroPlacement mp;
    mp.cluster = c.id;
    mp.name = c.name;
    mp.width = cols * slot_w;
    mp.height = rows * slot_h;
    mp.area = c.area;
    Point sum;
    for (int k = 0; k < n; ++k) {
      const int inst = c.members[k];
      const Point slot{(k % cols) * slot_w, (k / cols) * slot_h};
      const Point pin = slot + nl.master_of(inst).pin_center();
      mp.members.push_back({inst, pin});
      sum += pin;
    }
    mp.pin_offset = sum * (1.0 / n);
    fp.macro_slot[c.id] = static_cast<int>(fp.macros.size());
    fp.macros.push_back(std::move(mp));
  }
  return fp;
}

}  // namespace dfmp
