#include "dfmp/synth.hpp"

#include <cmath>

#include <fmt/format.h>

#include "dfmp/error.hpp"
#include "dfmp/rng.hpp"

namespace dfmp {

Netlist generate_synthetic(const SynthOptions& o, std::uint64_t seed) {
  if (o.macros < 0 || o.modules < 1 || o.cells_per_module < 1 || o.macro_bus < 1 || o.chain_bus < 1 ||
      o.macro_link < 0 || o.io_bus < 0 || o.local_nets_per_cell < 0 || !(o.min_macro_side > 0.0) ||
      o.max_macro_side < o.min_macro_side || !(o.utilization > 0.0 && o.utilization <= 1.0)) {
    throw Error(ErrorCode::Config, "invalid synthetic design options");
  }
  Rng rng(seed);
  Netlist nl;

  // One master per macro so each gets its own size and pin side.
  double area = 0.0;
  for (int i = 0; i < o.macros; ++i) {
    Master m;
    m.name = fmt::format("RAM{}", i);
    m.kind = MasterKind::Macro;
    m.width = std::round(rng.uniform(o.min_macro_side, o.max_macro_side));
    m.height = std::round(rng.uniform(o.min_macro_side, o.max_macro_side));
    // Pins bunched near one randomly chosen corner.
    const double fx = rng.uniform() < 0.5 ? 0.15 : 0.85;
    const double fy = rng.uniform() < 0.5 ? 0.2 : 0.8;
    m.pin_offsets = {{"D", fx * m.width, fy * m.height, false},
                     {"Q", fx * m.width, (fy < 0.5 ? fy + 0.1 : fy - 0.1) * m.height, true}};
    area += m.area();
    nl.masters.push_back(std::move(m));
  }
  const int cell_master = static_cast<int>(nl.masters.size());
  nl.masters.push_back({"CELL", 1.0, 1.0, {{"A", 0.0, 0.5, false}, {"Y", 1.0, 0.5, true}}, MasterKind::Cell});
  const int pad_master = static_cast<int>(nl.masters.size());
  nl.masters.push_back({"IOPAD", 0.0, 0.0, {{"P", 0.0, 0.0, true}, {"I", 0.0, 0.0, false}}, MasterKind::IoPad});
  area += static_cast<double>(o.modules) * o.cells_per_module;

  const double side = std::ceil(std::sqrt(area / o.utilization));
  nl.outline = {side, side};

  auto add_instance = [&](std::string name, int master, std::vector<std::string> path, std::optional<Side> io) {
    const int id = static_cast<int>(nl.instances.size());
    nl.instances.push_back({id, std::move(name), master, std::move(path), io});
    return id;
  };
  std::vector<std::vector<int>> cells(static_cast<std::size_t>(o.modules));
  for (int j = 0; j < o.modules; ++j) {
    for (int k = 0; k < o.cells_per_module; ++k) {
      cells[j].push_back(add_instance(fmt::format("blk{}/c{}", j, k), cell_master, {"top", fmt::format("blk{}", j)},
                                      std::nullopt));
    }
  }
  std::vector<int> macros;
  for (int i = 0; i < o.macros; ++i) {
    const int home = i % o.modules;
    macros.push_back(add_instance(fmt::format("blk{}/ram{}", home, i), i,
                                  {"top", fmt::format("blk{}", home), fmt::format("ram{}", i)}, std::nullopt));
  }

  auto pick = [&](const std::vector<int>& v) { return v[static_cast<std::size_t>(rng.below(static_cast<int>(v.size())))]; };
  // `bits` scalar nets with identical endpoints, so bundling merges them.
  auto bus = [&](const std::string& base, PinRef driver, std::vector<PinRef> sinks, int bits) {
    for (int b = 0; b < bits; ++b) {
      const int id = static_cast<int>(nl.nets.size());
      nl.nets.push_back({id, fmt::format("{}[{}]", base, b), driver, sinks, 1});
    }
  };

  for (int i = 0; i < o.macros; ++i) {
    const auto& home = cells[i % o.modules];
    bus(fmt::format("ram{}_rd", i), {macros[i], "Q"}, {{pick(home), "A"}}, o.macro_bus);
    bus(fmt::format("ram{}_wr", i), {pick(home), "Y"}, {{macros[i], "D"}}, o.macro_bus);
    if (o.macro_link > 0 && i + 1 < o.macros) {
      bus(fmt::format("ram{}_link", i), {macros[i], "Q"}, {{macros[i + 1], "D"}}, o.macro_link);
    }
  }
  for (int j = 0; j + 1 < o.modules; ++j) {
    bus(fmt::format("chain{}", j), {pick(cells[j]), "Y"}, {{pick(cells[j + 1]), "A"}}, o.chain_bus);
  }
  if (o.io_bus > 0) {
    const int din = add_instance("din", pad_master, {"top"}, Side::W);
    const int dout = add_instance("dout", pad_master, {"top"}, Side::E);
    bus("din", {din, "P"}, {{pick(cells.front()), "A"}}, o.io_bus);
    bus("dout", {pick(cells.back()), "Y"}, {{dout, "I"}}, o.io_bus);
  }
  int local = 0;
  for (const auto& module : cells) {
    if (module.size() < 2) continue;
    for (std::size_t k = 0; k < module.size() * static_cast<std::size_t>(o.local_nets_per_cell); ++k) {
      const int drv = pick(module);
      std::vector<PinRef> sinks;
      const int fanout = 1 + rng.below(3);
      for (int f = 0; f < fanout; ++f) {
        const int s = pick(module);
        if (s != drv) sinks.push_back({s, "A"});
      }
      if (sinks.empty()) continue;
      const int id = static_cast<int>(nl.nets.size());
      nl.nets.push_back({id, fmt::format("n{}", local++), {drv, "Y"}, std::move(sinks), 1});
    }
  }
  validate(nl);
  return nl;
}

}  // namespace dfmp
