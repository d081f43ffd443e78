#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dfmp/pipeline.hpp"

namespace dfmp {

namespace {

using nlohmann::json;

// Reads the keys of one JSON object and rejects whatever it did not ask for.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("must be an object");
  }

  void get(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(fmt::format("'{}' must be a number", key));
      out = v->get<double>();
    }
  }
  void get(const char* key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(fmt::format("'{}' must be an integer", key));
      out = v->get<int>();
    }
  }
  void get(const char* key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(fmt::format("'{}' must be a non-negative integer", key));
      out = v->get<std::uint64_t>();
    }
  }
  void get(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(fmt::format("'{}' must be true or false", key));
      out = v->get<bool>();
    }
  }
  void get(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(fmt::format("'{}' must be a string", key));
      out = v->get<std::string>();
    }
  }
  void get(const char* key, std::vector<std::string>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(fmt::format("'{}' must be an array of strings", key));
      out.clear();
      for (const auto& s : *v) {
        if (!s.is_string()) fail(fmt::format("'{}' must be an array of strings", key));
        out.push_back(s.get<std::string>());
      }
    }
  }
  void get(const char* key, std::filesystem::path& out, const std::filesystem::path& base) {
    std::string s;
    if (find(key)) {
      get(key, s);
      std::filesystem::path p(s);
      out = p.is_absolute() ? p : base / p;
    }
  }
  const json* sub(const char* key) { return find(key); }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.count(k)) fail(fmt::format("unknown key '{}'", k));
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::Config, fmt::format("config {}: {}", where_, msg));
  }

 private:
  const json* find(const char* key) {
    used_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

}  // namespace

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, fmt::format("config: {}", e.what()));
  }
  PipelineConfig c;
  Section top(j, "top level");
  top.get("netlist", c.netlist, base);
  top.get("verilog", c.verilog, base);
  top.get("geometry", c.geometry, base);
  top.get("seed", c.seed);
  top.get("output_dir", c.output_dir, base);
  top.get("run_name", c.run_name);

  if (const json* s = top.sub("clustering")) {
    Section sec(*s, "clustering");
    sec.get("min_cells", c.clustering.min_cells);
    sec.get("max_cells", c.clustering.max_cells);
    sec.get("min_macros", c.clustering.min_macros);
    sec.get("max_macros", c.clustering.max_macros);
    sec.finish();
  }
  if (const json* s = top.sub("extraction")) {
    Section sec(*s, "extraction");
    sec.get("k", c.extraction.k);
    sec.get("fanout_limit", c.extraction.fanout_limit);
    sec.get("name_filters", c.extraction.name_filters);
    sec.finish();
  }
  if (const json* s = top.sub("global_place")) {
    Section sec(*s, "global_place");
    sec.get("iterations", c.global_place.iterations);
    sec.get("spread_damping", c.global_place.spread_damping);
    sec.get("target_density", c.global_place.target_density);
    sec.get("gp_mp_loops", c.gp_mp_loops);
    sec.finish();
  }
  if (const json* s = top.sub("annealing")) {
    Section sec(*s, "annealing");
    sec.get("t0_factor", c.annealing.t0_factor);
    sec.get("cooling", c.annealing.cooling);
    sec.get("moves_per_temp", c.annealing.moves_per_temp);
    sec.get("t_min_ratio", c.annealing.t_min_ratio);
    sec.get("probe_moves", c.annealing.probe_moves);
    sec.finish();
  }
  if (const json* s = top.sub("loss")) {
    Section sec(*s, "loss");
    std::string variant(to_string(c.loss.variant));
    sec.get("variant", variant);
    c.loss.variant = parse_loss_variant(variant);
    sec.get("mm_weight", c.loss.mm_weight);
    sec.get("mc_weight", c.loss.mc_weight);
    sec.get("mcc_weight", c.loss.mcc_weight);
    sec.get("outline_weight", c.loss.outline_weight);
    sec.get("push_boundary", c.loss.boundary_weight);
    sec.finish();
  }
  if (const json* s = top.sub("finetune")) {
    Section sec(*s, "finetune");
    sec.get("enabled", c.finetune);
    sec.get("alpha", c.flip.alpha);
    sec.get("beta", c.flip.beta);
    sec.get("gamma", c.flip.gamma);
    sec.get("guard", c.flip_guard);
    sec.finish();
  }
  if (const json* s = top.sub("metrics")) {
    Section sec(*s, "metrics");
    sec.get("bin_size", c.bin_size);
    sec.get("capacity", c.capacity);
    sec.finish();
  }
  if (const json* s = top.sub("svg")) {
    Section sec(*s, "svg");
    sec.get("edges", c.svg_edges);
    sec.get("heat", c.svg_heat);
    sec.finish();
  }
  top.finish();
  check_config(c);
  return c;
}

void check_config(const PipelineConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::Config, "config: " + msg); };
  const bool json_input = !c.netlist.empty();
  const bool verilog_input = !c.verilog.empty() || !c.geometry.empty();
  if (json_input == verilog_input) fail("give either 'netlist' or 'verilog' plus 'geometry'");
  if (verilog_input && (c.verilog.empty() || c.geometry.empty())) fail("'verilog' needs a 'geometry' sidecar");
  if (!(c.extraction.k >= 0.0)) fail("extraction.k must be >= 0");
  if (c.extraction.fanout_limit < 1) fail("extraction.fanout_limit must be >= 1");
  if (c.global_place.iterations < 0) fail("global_place.iterations must be >= 0");
  if (!(c.global_place.spread_damping >= 0.0 && c.global_place.spread_damping <= 1.0)) {
    fail("global_place.spread_damping must be in [0, 1]");
  }
  if (!(c.global_place.target_density > 0.0)) fail("global_place.target_density must be positive");
  if (c.gp_mp_loops < 1) fail("global_place.gp_mp_loops must be >= 1");
  check_schedule(c.annealing);
  for (double w : {c.loss.mm_weight, c.loss.mc_weight, c.loss.mcc_weight, c.loss.outline_weight,
                   c.loss.boundary_weight}) {
    if (!(w >= 0.0)) fail("loss weights must be >= 0");
  }
  if (!(c.bin_size >= 0.0)) fail("metrics.bin_size must be >= 0");
  if (!(c.capacity >= 0.0)) fail("metrics.capacity must be >= 0");
  if (c.run_name.empty() || c.run_name.find('/') != std::string::npos) fail("run_name must be a plain file stem");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, fmt::format("cannot read '{}'", path.string()));
  return ss.str();
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path), path.parent_path());
}

}  // namespace dfmp
