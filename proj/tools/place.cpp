// place: run the dataflow-aware macro placement pipeline on one design.
//
// Exit status: 0 ok, 1 internal error, 2 usage or config, 3 file IO,
// 4 input syntax, 5 input validation, 6 placement stage failure.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dfmp/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dataflow-aware macro placer"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string stage = "report";
  std::optional<double> push_boundary;
  bool no_finetune = false;
  std::optional<std::string> loss;
  std::optional<std::string> out_dir;

  app.add_option("config", config_path, "Pipeline config (JSON)")->required();
  app.add_option("--seed", seed, "Run seed");
  app.add_option("--stage", stage, "Stop after this stage")
      ->check(CLI::IsMember({"parse", "cluster", "extract", "gp", "sa", "flip", "report"}));
  app.add_option("--push-boundary", push_boundary, "Push-boundary loss weight (0 disables)");
  app.add_flag("--no-finetune", no_finetune, "Skip macro flipping");
  app.add_option("--loss", loss, "Two-hop loss form")->check(CLI::IsMember({"eq5", "eq6", "eq8"}));
  app.add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    dfmp::PipelineConfig config = dfmp::load_config(config_path);
    if (seed) config.seed = *seed;
    if (push_boundary) config.loss.boundary_weight = *push_boundary;
    if (no_finetune) config.finetune = false;
    if (loss) config.loss.variant = dfmp::parse_loss_variant(*loss);
    if (out_dir) config.output_dir = *out_dir;
    dfmp::check_config(config);

    const dfmp::PipelineResult result = dfmp::run_pipeline(config, dfmp::parse_stage(stage));
    for (const auto& path : result.written) fmt::print("wrote {}\n", path.string());
    if (result.reached == dfmp::Stage::Report) {
      fmt::print("hpwl_total {} netlist_hpwl {} overflow {} extraction_share {:.4f}\n", result.report.hpwl_total,
                 result.report.netlist_hpwl, result.report.congestion_overflow, result.timing.share("extract"));
    }
    return 0;
  } catch (const dfmp::Error& e) {
    fmt::print(stderr, "place: {} error: {}\n", dfmp::to_string(e.code()), e.what());
    return dfmp::exit_code(e.code());
  } catch (const std::exception& e) {
    fmt::print(stderr, "place: internal error: {}\n", e.what());
    return 1;
  }
}
