#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfmp/geometry.hpp"

namespace dfmp {

enum class MasterKind { Macro, Cell, IoPad };

// Outline side an IO pad is pinned to.
enum class Side { N, S, E, W };

std::string_view to_string(MasterKind kind);
std::string_view to_string(Side side);
MasterKind parse_master_kind(std::string_view text);
Side parse_side(std::string_view text);

struct PinOffset {
  std::string name;
  double dx = 0.0;
  double dy = 0.0;
  // Only consulted by the structural Verilog reader to find net drivers.
  bool output = false;

  friend bool operator==(const PinOffset&, const PinOffset&) = default;
};

struct Master {
  std::string name;
  double width = 0.0;
  double height = 0.0;
  std::vector<PinOffset> pin_offsets;
  MasterKind kind = MasterKind::Cell;

  double area() const { return width * height; }
  const PinOffset* find_pin(std::string_view pin) const;
  // Mean of all pin offsets; the footprint center when the master has no pins.
  Point pin_center() const;

  friend bool operator==(const Master&, const Master&) = default;
};

struct Instance {
  int id = 0;
  std::string name;
  int master = 0;  // index into Netlist::masters
  std::vector<std::string> hierarchy_path;
  std::optional<Side> io_side;  // set for IO pads only

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct PinRef {
  int instance = 0;
  std::string pin;

  friend bool operator==(const PinRef&, const PinRef&) = default;
};

struct Net {
  int id = 0;
  // Scalar nets may carry a trailing bit index ("data[3]"); bundle_buses strips it.
  std::string base_name;
  PinRef driver;
  std::vector<PinRef> sinks;
  int bit_width = 1;

  friend bool operator==(const Net&, const Net&) = default;
};

struct Netlist {
  Outline outline;
  std::vector<Master> masters;
  std::vector<Instance> instances;
  std::vector<Net> nets;

  const Master& master_of(int instance) const { return masters[instances[instance].master]; }
  MasterKind kind_of(int instance) const { return master_of(instance).kind; }

  friend bool operator==(const Netlist&, const Netlist&) = default;
};

// Throws Error{MissingInstances | DanglingPin | DuplicateName | BadOutline |
// BadMaster | UnknownMaster} when the netlist breaks an invariant.
void validate(const Netlist& netlist);

// Reads the JSON netlist document (schema/netlist.schema.json).
Netlist parse_netlist(std::string_view text);
std::string serialize_netlist(const Netlist& netlist);

// Reads a structural Verilog source. `geometry` is the JSON sidecar holding the
// outline, leaf masters and optional per-port IO sides.
Netlist parse_verilog_subset(std::string_view text, std::string_view geometry);

// Merges scalar nets `base[i]` sharing base name, driver instance and sink
// instance multiset into one net whose bit_width is the member count.
Netlist bundle_buses(const Netlist& netlist);

// Splits "data[12]" into {"data", 12}; returns nullopt for unindexed names.
std::optional<std::pair<std::string, int>> split_bit_index(std::string_view name);

}  // namespace dfmp
