// gen_design: write a synthetic JSON netlist.

#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dfmp/error.hpp"
#include "dfmp/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic design generator"};
  dfmp::SynthOptions o;
  std::uint64_t seed = 1;
  std::string out;
  app.add_option("--macros", o.macros);
  app.add_option("--modules", o.modules);
  app.add_option("--cells-per-module", o.cells_per_module);
  app.add_option("--macro-bus", o.macro_bus);
  app.add_option("--chain-bus", o.chain_bus);
  app.add_option("--macro-link", o.macro_link);
  app.add_option("--io-bus", o.io_bus);
  app.add_option("--utilization", o.utilization);
  app.add_option("--seed", seed);
  app.add_option("-o,--out", out, "Output file")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    const std::string text = dfmp::serialize_netlist(dfmp::generate_synthetic(o, seed));
    std::ofstream f(out, std::ios::binary);
    f << text;
    if (!f) {
      fmt::print(stderr, "gen_design: cannot write '{}'\n", out);
      return 3;
    }
  } catch (const dfmp::Error& e) {
    fmt::print(stderr, "gen_design: {}\n", e.what());
    return 2;
  }
  return 0;
}
