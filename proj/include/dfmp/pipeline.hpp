#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dfmp/annealer.hpp"
#include "dfmp/clustering.hpp"
#include "dfmp/dataflow.hpp"
#include "dfmp/error.hpp"
#include "dfmp/finetune.hpp"
#include "dfmp/global_place.hpp"
#include "dfmp/loss.hpp"
#include "dfmp/metrics.hpp"
#include "dfmp/netlist.hpp"

namespace dfmp {

enum class Stage { Parse, Cluster, Extract, Gp, Sa, Flip, Report };

std::string_view to_string(Stage s);
Stage parse_stage(std::string_view text);

struct PipelineConfig {
  // Exactly one input: a JSON netlist, or Verilog plus a geometry sidecar.
  std::filesystem::path netlist;
  std::filesystem::path verilog;
  std::filesystem::path geometry;

  ClusterThresholds clustering;
  ExtractionOptions extraction;
  GlobalPlaceOptions global_place;
  int gp_mp_loops = 2;
  AnnealSchedule annealing;
  LossConfig loss;

  bool finetune = true;
  FlipWeights flip;
  bool flip_guard = true;

  double bin_size = 0.0;   // 0: outline / 32 per axis
  double capacity = 0.0;   // 0: auto from the reference floorplan

  bool svg_edges = false;
  bool svg_heat = true;

  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
  std::string run_name = "run";
};

// Strict: unknown keys, wrong types and out-of-range values raise Config.
// Relative paths resolve against `base_dir`.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);
void check_config(const PipelineConfig& config);

struct PipelineResult {
  Stage reached = Stage::Parse;
  Netlist netlist;
  ClusteredNetlist clustered;
  DataflowGraph graph;
  Floorplan floorplan;
  SequencePair sp;
  std::vector<FlipDecision> flips;
  RunReport report;
  StageTiming timing;
  std::vector<std::filesystem::path> written;
};

// Runs the stages up to and including `stop`, writing each stage's outputs
// under config.output_dir (nothing is written when it is empty). Stage
// failures are rethrown with the stage name prefixed.
PipelineResult run_pipeline(const PipelineConfig& config, Stage stop = Stage::Report);

// `name x y w h orientation` per macro, `name cx cy` per placed cluster.
std::string format_placement(const Floorplan& fp, const ClusteredNetlist& clustered);

// Process exit status for an error class (see README).
int exit_code(ErrorCode code);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace dfmp
