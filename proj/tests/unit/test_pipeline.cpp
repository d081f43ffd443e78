#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "dfmp/error.hpp"
#include "dfmp/pipeline.hpp"
#include "dfmp/synth.hpp"

using namespace dfmp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dfmp_pipeline_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Small synthetic design plus a config that clusters it into a handful of
// clusters and anneals briefly.
PipelineConfig small_run(const fs::path& dir, std::uint64_t design_seed = 5) {
  SynthOptions o;
  o.macros = 3;
  o.modules = 3;
  o.cells_per_module = 20;
  write_file(dir / "design.json", serialize_netlist(generate_synthetic(o, design_seed)));
  PipelineConfig c;
  c.netlist = dir / "design.json";
  c.clustering = {5, 50, 1, 16};
  c.annealing.moves_per_temp = 20;
  c.annealing.cooling = 0.9;
  c.output_dir = dir / "out";
  return c;
}

}  // namespace

TEST_CASE("config defaults and path resolution") {
  const auto c = parse_config(R"({"netlist": "d.json"})", "/base/dir");
  CHECK(c.netlist == fs::path("/base/dir/d.json"));
  CHECK(c.output_dir == fs::path("out"));
  CHECK(c.seed == 1);
  CHECK(c.loss.variant == LossVariant::Eq8);
  CHECK(c.loss.boundary_weight == 0.0);
  CHECK(c.finetune);
  CHECK(c.flip_guard);
  CHECK(c.flip.alpha == 0.55);
  CHECK(c.flip.beta == 0.30);
  CHECK(c.flip.gamma == 0.15);

  const auto d = parse_config(R"({"verilog": "/abs/top.v", "geometry": "g.json", "output_dir": "o", "seed": 9,
    "loss": {"variant": "eq6", "push_boundary": 0.5}, "finetune": {"enabled": false, "guard": false},
    "extraction": {"k": 2.0, "fanout_limit": 4, "name_filters": []}, "metrics": {"bin_size": 4, "capacity": 2}})",
                              "/b");
  CHECK(d.verilog == fs::path("/abs/top.v"));
  CHECK(d.geometry == fs::path("/b/g.json"));
  CHECK(d.output_dir == fs::path("/b/o"));
  CHECK(d.seed == 9);
  CHECK(d.loss.variant == LossVariant::Eq6);
  CHECK(d.loss.boundary_weight == 0.5);
  CHECK_FALSE(d.finetune);
  CHECK_FALSE(d.flip_guard);
  CHECK(d.extraction.name_filters.empty());
  CHECK(d.extraction.fanout_limit == 4);
  CHECK(d.bin_size == 4.0);
}

TEST_CASE("config parsing is strict") {
  auto code = [](const char* text) {
    try {
      parse_config(text, "/b");
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;  // sentinel: nothing thrown
  };
  CHECK(code(R"({"netlist": "d.json", "colour": 1})") == ErrorCode::Config);
  CHECK(code(R"({"netlist": "d.json", "annealing": {"cooling": 0.9, "speed": 2}})") == ErrorCode::Config);
  CHECK(code(R"({"netlist": "d.json", "seed": "one"})") == ErrorCode::Config);
  CHECK(code(R"({"netlist": "d.json", "seed": -1})") == ErrorCode::Config);
  CHECK(code(R"({"netlist": "d.json", "annealing": {"moves_per_temp": 1.5}})") == ErrorCode::Config);
  CHECK(code(R"({"netlist": "d.json", "annealing": {"cooling": 1.0}})") == ErrorCode::Config);
  CHECK(code(R"({"netlist": "d.json", "loss": {"variant": "eq7"}})") == ErrorCode::Config);
  CHECK(code(R"({"netlist": "d.json", "loss": {"mc_weight": -1}})") == ErrorCode::Config);
  CHECK(code(R"({"netlist": "d.json", "run_name": "a/b"})") == ErrorCode::Config);
  CHECK(code(R"({"netlist": "d.json", "verilog": "t.v", "geometry": "g.json"})") == ErrorCode::Config);
  CHECK(code(R"({"verilog": "t.v"})") == ErrorCode::Config);
  CHECK(code(R"({})") == ErrorCode::Config);
  CHECK(code(R"({"netlist": )") == ErrorCode::Config);
  CHECK(code(R"([1, 2])") == ErrorCode::Config);
  CHECK(code(R"({"netlist": "d.json", "global_place": {"gp_mp_loops": 0}})") == ErrorCode::Config);
  CHECK(code(R"({"netlist": "d.json"})") == ErrorCode::Io);
}

TEST_CASE("stage names and exit codes") {
  for (auto s : {Stage::Parse, Stage::Cluster, Stage::Extract, Stage::Gp, Stage::Sa, Stage::Flip, Stage::Report}) {
    CHECK(parse_stage(to_string(s)) == s);
  }
  CHECK_THROWS_AS(parse_stage("place"), Error);
  CHECK(exit_code(ErrorCode::Config) == 2);
  CHECK(exit_code(ErrorCode::Io) == 3);
  CHECK(exit_code(ErrorCode::Syntax) == 4);
  CHECK(exit_code(ErrorCode::DanglingPin) == 5);
  CHECK(exit_code(ErrorCode::ThresholdConflict) == 5);
  CHECK(exit_code(ErrorCode::EmptyGraph) == 6);
}

TEST_CASE("stopping at extract writes the graph and no placement") {
  const auto dir = scratch("gating");
  const auto c = small_run(dir);
  const auto r = run_pipeline(c, Stage::Extract);
  CHECK(r.reached == Stage::Extract);
  CHECK(fs::exists(dir / "out" / "run.graph.txt"));
  CHECK(fs::exists(dir / "out" / "run.clusters.txt"));
  CHECK_FALSE(fs::exists(dir / "out" / "run.placement.txt"));
  CHECK_FALSE(fs::exists(dir / "out" / "run.report.json"));
  CHECK_FALSE(fs::exists(dir / "out" / "run.svg"));
  CHECK(r.timing.stages.size() == 3);
}

TEST_CASE("a full run writes every output and is byte-for-byte reproducible") {
  const auto dir = scratch("determinism");
  auto c = small_run(dir);
  c.output_dir = dir / "a";
  const auto a = run_pipeline(c);
  c.output_dir = dir / "b";
  const auto b = run_pipeline(c);
  CHECK(a.reached == Stage::Report);
  for (const char* f : {"netlist.json", "clusters.txt", "graph.txt", "placement.txt", "report.txt", "report.json",
                        "congestion.csv", "svg", "timings.json"}) {
    const std::string name = std::string("run.") + f;
    REQUIRE(fs::exists(dir / "a" / name));
    if (std::string(f) == "timings.json") continue;
    CHECK_MESSAGE(read_text_file(dir / "a" / name) == read_text_file(dir / "b" / name), name);
  }
  CHECK(a.written.size() == 9);
  CHECK(a.flips.size() == a.floorplan.macros.size());
  CHECK(a.report.flip_log.size() == a.floorplan.macros.size());

  // Shares of the recorded stages sum to one.
  double sum = 0.0;
  for (const auto& s : a.timing.stages) sum += a.timing.share(s.stage);
  CHECK(std::abs(sum - 1.0) <= 1e-6);
  CHECK(a.timing.stages.size() == 7);
  CHECK(a.timing.stages[2].stage == "extract");

  // Placement lists every macro and every placed non-macro cluster.
  const std::string placement = read_text_file(dir / "a" / "run.placement.txt");
  std::size_t lines = 0;
  for (char ch : placement) lines += ch == '\n';
  std::size_t points = 0;
  for (std::size_t k = 0; k < a.floorplan.points.size(); ++k) points += a.floorplan.points[k] && a.floorplan.macro_slot[k] < 0;
  CHECK(lines == 2 + a.floorplan.macros.size() + points);

  // Extraction does not depend on the seed.
  c.output_dir = dir / "c";
  c.seed = 2;
  run_pipeline(c);
  CHECK(read_text_file(dir / "c" / "run.graph.txt") == read_text_file(dir / "a" / "run.graph.txt"));
}

TEST_CASE("stage errors name the stage and the input") {
  PipelineConfig c;
  c.netlist = "/nonexistent/dir/design.json";
  c.output_dir.clear();
  try {
    run_pipeline(c);
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
    CHECK(std::string(e.what()).find("/nonexistent/dir/design.json") != std::string::npos);
    CHECK(std::string(e.what()).find("parse") != std::string::npos);
  }

  const auto dir = scratch("errors");
  write_file(dir / "bad.json", "{\"outline\": ");
  c.netlist = dir / "bad.json";
  try {
    run_pipeline(c);
    FAIL("expected Syntax");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Syntax);
  }
}

TEST_CASE("place binary exit status") {
  const auto dir = scratch("cli");
  write_file(dir / "missing.json", R"({"netlist": "nope.json"})");
  write_file(dir / "strict.json", R"({"netlist": "nope.json", "extra": true})");
  auto run = [&](const std::string& args) {
    const std::string cmd = std::string(PLACE_BIN) + " " + args + " >" + (dir / "stdout").string() + " 2>" +
                            (dir / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  CHECK(run((dir / "missing.json").string()) == 3);
  CHECK(read_text_file(dir / "stderr").find((dir / "nope.json").string()) != std::string::npos);
  CHECK(run((dir / "strict.json").string()) == 2);
  CHECK(run((dir / "absent.json").string()) == 3);
  CHECK(run("") == 2);
  CHECK(run((dir / "missing.json").string() + " --stage nowhere") == 2);
  CHECK(run((dir / "missing.json").string() + " --push-boundary -1") == 2);

  small_run(dir);
  write_file(dir / "ok.json", R"({"netlist": "design.json", "clustering": {"min_cells": 5, "max_cells": 50},
    "annealing": {"moves_per_temp": 10}})");
  CHECK(run((dir / "ok.json").string() + " --out " + (dir / "cli_out").string() + " --stage sa --loss eq5") == 0);
  CHECK(fs::exists(dir / "cli_out" / "run.placement.txt"));
  CHECK_FALSE(fs::exists(dir / "cli_out" / "run.report.json"));
}
