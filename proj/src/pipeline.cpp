#include "dfmp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <fmt/format.h>

#include "dfmp/rng.hpp"
#include "dfmp/svg.hpp"

namespace dfmp {

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Parse: return "parse";
    case Stage::Cluster: return "cluster";
    case Stage::Extract: return "extract";
    case Stage::Gp: return "gp";
    case Stage::Sa: return "sa";
    case Stage::Flip: return "flip";
    case Stage::Report: return "report";
  }
  return "report";
}

Stage parse_stage(std::string_view text) {
  for (Stage s : {Stage::Parse, Stage::Cluster, Stage::Extract, Stage::Gp, Stage::Sa, Stage::Flip, Stage::Report}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorCode::Config,
              fmt::format("unknown stage '{}' (parse|cluster|extract|gp|sa|flip|report)", text));
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return 2;
    case ErrorCode::Io: return 3;
    case ErrorCode::Syntax:
    case ErrorCode::UnsupportedConstruct: return 4;
    case ErrorCode::MissingInstances:
    case ErrorCode::DanglingPin:
    case ErrorCode::DuplicateName:
    case ErrorCode::BadOutline:
    case ErrorCode::BadMaster:
    case ErrorCode::UnknownMaster:
    case ErrorCode::ThresholdConflict: return 5;
    case ErrorCode::DegenerateCluster:
    case ErrorCode::EmptyGraph:
    case ErrorCode::BadPermutation:
    case ErrorCode::UnplacedCluster:
    case ErrorCode::EmptyCluster:
    case ErrorCode::EmptyPointSet: return 6;
  }
  return 1;
}

std::string format_placement(const Floorplan& fp, const ClusteredNetlist& cn) {
  std::string out = "# macros: name x y w h orientation\n";
  for (const auto& m : fp.macros) {
    out += fmt::format("{} {} {} {} {} {}\n", m.name, m.x, m.y, m.width, m.height, to_string(m.orientation));
  }
  out += "# clusters: name cx cy\n";
  for (const auto& c : cn.clusters) {
    if (fp.macro_slot[c.id] >= 0 || !fp.points[c.id]) continue;
    out += fmt::format("{} {} {}\n", c.name, fp.points[c.id]->x, fp.points[c.id]->y);
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

bool has_cell_clusters(const ClusteredNetlist& cn) {
  return std::any_of(cn.clusters.begin(), cn.clusters.end(), [](const Cluster& c) { return c.is_cell(); });
}

class Writer {
 public:
  Writer(const PipelineConfig& c, PipelineResult& r) : config_(c), result_(r) {
    if (!c.output_dir.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(c.output_dir, ec);
      if (ec) {
        throw Error(ErrorCode::Io,
                    fmt::format("cannot create output directory '{}': {}", c.output_dir.string(), ec.message()));
      }
    }
  }

  void write(std::string_view suffix, const std::string& content) {
    if (config_.output_dir.empty()) return;
    const auto path = config_.output_dir / fmt::format("{}.{}", config_.run_name, suffix);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", path.string()));
    if (std::find(result_.written.begin(), result_.written.end(), path) == result_.written.end()) {
      result_.written.push_back(path);
    }
  }

 private:
  const PipelineConfig& config_;
  PipelineResult& result_;
};

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, Stage stop) {
  check_config(config);
  PipelineResult r;
  Writer out(config, r);

  // Runs one stage, timing it and prefixing failures with the stage name.
  auto stage = [&](Stage s, auto&& body) {
    const auto t0 = Clock::now();
    try {
      body();
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("stage '{}': {}", to_string(s), e.what()));
    }
    r.timing.stages.push_back({std::string(to_string(s)), std::chrono::duration<double>(Clock::now() - t0).count()});
    r.reached = s;
    return s == stop;
  };
  auto finish = [&]() -> PipelineResult {
    out.write("timings.json", r.timing.to_json());
    return std::move(r);
  };

  if (stage(Stage::Parse, [&] {
        Netlist raw = config.netlist.empty()
                          ? parse_verilog_subset(read_text_file(config.verilog), read_text_file(config.geometry))
                          : parse_netlist(read_text_file(config.netlist));
        r.netlist = bundle_buses(raw);
        out.write("netlist.json", serialize_netlist(r.netlist));
      })) {
    return finish();
  }

  if (stage(Stage::Cluster, [&] {
        r.clustered = compute_cluster_edges(r.netlist, build_clusters(r.netlist, config.clustering));
        out.write("clusters.txt", dump_clusters(r.clustered));
      })) {
    return finish();
  }

  if (stage(Stage::Extract, [&] {
        r.graph = build_dataflow_graph(r.clustered, r.netlist, config.extraction);
        out.write("graph.txt", export_graph(r.graph));
      })) {
    return finish();
  }

  Floorplan reference;  // identity packing after the first GP; sets the auto capacity
  if (stage(Stage::Gp, [&] {
        r.floorplan = make_floorplan(r.netlist, r.clustered);
        if (has_cell_clusters(r.clustered)) {
          r.floorplan = global_place_clusters(r.graph, r.clustered, r.floorplan, config.global_place,
                                              derive_seed(config.seed, "gp"));
        }
        r.sp = identity_sequence_pair(static_cast<int>(r.floorplan.macros.size()));
        r.floorplan = realize(r.sp, r.floorplan);
        reference = r.floorplan;
        out.write("placement.txt", format_placement(r.floorplan, r.clustered));
      })) {
    return finish();
  }

  if (stage(Stage::Sa, [&] {
        const auto a_prime = macro_area_weights(r.floorplan);
        // Each annealing pass is followed by a cell-cluster GP around the
        // fixed macros, so cells always sit where the final macros want them.
        for (int loop = 0; loop < config.gp_mp_loops; ++loop) {
          const LossModel model(r.graph, r.floorplan, a_prime, config.loss);
          AnnealResult sa = run_sa(r.sp, model, r.floorplan, config.annealing,
                                   derive_seed(config.seed, fmt::format("sa{}", loop)));
          r.sp = std::move(sa.sp);
          r.floorplan = std::move(sa.floorplan);
          if (has_cell_clusters(r.clustered)) {
            GlobalPlaceOptions gp = config.global_place;
            gp.macros_fixed = true;
            r.floorplan = global_place_clusters(r.graph, r.clustered, r.floorplan, gp,
                                                derive_seed(config.seed, fmt::format("gp{}", loop + 1)));
          }
        }
        out.write("placement.txt", format_placement(r.floorplan, r.clustered));
      })) {
    return finish();
  }

  if (stage(Stage::Flip, [&] {
        if (config.finetune) r.flips = flip_pass(r.floorplan, r.graph, config.flip, config.flip_guard);
        out.write("placement.txt", format_placement(r.floorplan, r.clustered));
      })) {
    return finish();
  }

  stage(Stage::Report, [&] {
    CongestionOptions copt;
    copt.bin_width = copt.bin_height = config.bin_size;
    copt.capacity = config.capacity;
    if (!(copt.capacity > 0.0)) {
      // About a tenth of the bins overflow on the reference packing.
      CongestionOptions probe = copt;
      probe.capacity = 1.0;
      const CongestionGrid g = congestion(reference, r.graph, probe);
      copt.capacity = demand_quantile(g, 0.9);
      if (!(copt.capacity > 0.0)) {
        double sum = 0.0;
        int n = 0;
        for (double d : g.demand) {
          if (d > 0.0) {
            sum += d;
            ++n;
          }
        }
        copt.capacity = n > 0 ? sum / n : 1.0;
      }
    }
    const LossBreakdown loss =
        LossModel(r.graph, r.floorplan, macro_area_weights(r.floorplan), config.loss).evaluate(r.floorplan);
    std::vector<FlipLogEntry> log;
    for (const auto& d : r.flips) {
      const auto& m = r.floorplan.macros[r.floorplan.macro_slot[d.macro]];
      log.push_back({m.name, std::string(to_string(d.mode)), d.v_t.x, d.v_t.y, d.post_hpwl - d.pre_hpwl, d.applied});
    }
    r.report = emit_report(r.floorplan, r.graph, copt, loss, std::move(log), r.timing);
    r.report.netlist_hpwl = netlist_hpwl(r.netlist, r.clustered, r.floorplan);

    // Timings live in their own file so the report stays reproducible.
    RunReport stable = r.report;
    stable.timings.clear();
    out.write("report.txt", stable.to_text());
    out.write("report.json", stable.to_json());
    const CongestionGrid grid = congestion(r.floorplan, r.graph, copt);
    out.write("congestion.csv", grid.to_csv());
    SvgOptions svg;
    svg.edges = config.svg_edges;
    svg.heat = config.svg_heat ? &grid : nullptr;
    out.write("svg", render_svg(r.floorplan, r.graph, svg));
  });
  r.report.timings = r.timing.stages;
  return finish();
}

}  // namespace dfmp
