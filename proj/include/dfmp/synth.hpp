#pragma once

#include <cstdint>

#include "dfmp/netlist.hpp"

namespace dfmp {

// Knobs for the synthetic designs used by tests, benchmarks and the sample
// designs. Every macro gets a home cell module it exchanges wide buses with;
// the cell modules form a chain from a west input pad to an east output pad.
struct SynthOptions {
  int macros = 3;
  int modules = 3;            // leaf cell modules
  int cells_per_module = 60;
  int macro_bus = 32;         // bits each way between a macro and its home module
  int chain_bus = 8;          // bits between consecutive cell modules
  int macro_link = 2;         // bits between consecutive macros (0: none)
  int io_bus = 8;             // bits on each IO pad (0: no IO)
  int local_nets_per_cell = 1;
  double min_macro_side = 8.0;
  double max_macro_side = 24.0;
  double utilization = 0.45;  // (macro + cell area) / outline area
};

// Scalar nets with `base[i]` names, ready for bundle_buses. Macro pins sit
// off-center so orientation matters.
Netlist generate_synthetic(const SynthOptions& options, std::uint64_t seed);

}  // namespace dfmp
