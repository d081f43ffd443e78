#include "dfmp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dfmp/error.hpp"

namespace dfmp {

double hpwl(std::span<const Point> points) {
  if (points.empty()) throw Error(ErrorCode::EmptyPointSet, "hpwl of an empty point set");
  double xlo = points[0].x, xhi = xlo, ylo = points[0].y, yhi = ylo;
  for (const auto& p : points.subspan(1)) {
    xlo = std::min(xlo, p.x);
    xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  return (xhi - xlo) + (yhi - ylo);
}

namespace {

Point placed(const Floorplan& fp, int cluster) {
  auto p = fp.reference_point(cluster);
  if (!p) throw Error(ErrorCode::UnplacedCluster, fmt::format("cluster {} has no position", cluster));
  return *p;
}

double span2(Point a, Point b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

bool physical(EdgeKind k) { return k == EdgeKind::MMDirect || k == EdgeKind::MC || k == EdgeKind::CC; }

}  // namespace

HpwlBreakdown edge_hpwl(const Floorplan& fp, const DataflowGraph& graph) {
  HpwlBreakdown h;
  for (const auto& e : graph.edges) {
    const double w = span2(placed(fp, e.src), placed(fp, e.dst));
    switch (e.kind) {
      case EdgeKind::MMDirect:
      case EdgeKind::MMIndirect: h.mm += w; break;
      case EdgeKind::MC: h.mc += w; break;
      case EdgeKind::CC: h.cc += w; break;
      case EdgeKind::MCC: h.mcc += w; break;
    }
    h.total += w;
  }
  return h;
}

double netlist_hpwl(const Netlist& nl, const ClusteredNetlist& cn, const Floorplan& fp) {
  std::unordered_map<int, Point> macro_pin;
  for (const auto& m : fp.macros) {
    for (const auto& mem : m.members) macro_pin[mem.instance] = Point{m.x, m.y} + m.oriented(mem.pin);
  }
  std::vector<Point> pts;
  double total = 0.0;
  for (const auto& net : nl.nets) {
    pts.clear();
    auto add = [&](int inst) {
      if (auto it = macro_pin.find(inst); it != macro_pin.end()) {
        pts.push_back(it->second);
      } else {
        pts.push_back(placed(fp, cn.instance_to_cluster[inst]));
      }
    };
    add(net.driver.instance);
    for (const auto& s : net.sinks) add(s.instance);
    total += static_cast<double>(net.bit_width) * hpwl(pts);
  }
  return total;
}

Rect CongestionGrid::bin(int col, int row, const Outline& o) const {
  const double x0 = col * bin_width, y0 = row * bin_height;
  return {x0, y0, std::min(x0 + bin_width, o.width) - x0, std::min(y0 + bin_height, o.height) - y0};
}

double CongestionGrid::total_deposit(const Outline& o) const {
  double sum = 0.0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) sum += at(c, r) * bin(c, r, o).area();
  }
  return sum;
}

double CongestionGrid::overflow() const { return overflow(capacity); }

double CongestionGrid::overflow(double cap) const {
  double sum = 0.0;
  for (double d : demand) sum += std::max(0.0, d - cap);
  return sum;
}

std::string CongestionGrid::to_csv() const {
  std::string out;
  for (int r = rows - 1; r >= 0; --r) {
    for (int c = 0; c < cols; ++c) {
      if (c) out += ',';
      out += fmt::format("{}", at(c, r));
    }
    out += '\n';
  }
  return out;
}

CongestionGrid congestion(const Floorplan& fp, const DataflowGraph& graph, const CongestionOptions& opt) {
  const Outline& o = fp.outline;
  CongestionGrid g;
  g.bin_width = opt.bin_width > 0.0 ? opt.bin_width : o.width / 32.0;
  g.bin_height = opt.bin_height > 0.0 ? opt.bin_height : o.height / 32.0;
  if (!(opt.capacity > 0.0)) throw Error(ErrorCode::Config, "congestion capacity must be positive");
  g.capacity = opt.capacity;
  // The small slack keeps W / (W / 32) from rounding up to 33 columns.
  g.cols = std::max(1, static_cast<int>(std::ceil(o.width / g.bin_width - 1e-9)));
  g.rows = std::max(1, static_cast<int>(std::ceil(o.height / g.bin_height - 1e-9)));
  g.demand.assign(static_cast<std::size_t>(g.cols * g.rows), 0.0);

  auto col_of = [&](double x) { return std::clamp(static_cast<int>(std::floor(x / g.bin_width)), 0, g.cols - 1); };
  auto row_of = [&](double y) { return std::clamp(static_cast<int>(std::floor(y / g.bin_height)), 0, g.rows - 1); };

  for (const auto& e : graph.edges) {
    if (!physical(e.kind)) continue;
    const Point a = placed(fp, e.src), b = placed(fp, e.dst);
    const double w = std::abs(a.x - b.x), h = std::abs(a.y - b.y);
    const double amount = e.weight * (w + h);
    if (amount == 0.0) continue;
    const double x0 = std::max(0.0, std::min(a.x, b.x)), x1 = std::min(o.width, std::max(a.x, b.x));
    const double y0 = std::max(0.0, std::min(a.y, b.y)), y1 = std::min(o.height, std::max(a.y, b.y));
    if (x1 < x0 || y1 < y0) continue;  // entirely outside

    if (w > 0.0 && h > 0.0) {
      const double density = amount / (w * h);
      const Rect box{x0, y0, x1 - x0, y1 - y0};
      for (int r = row_of(y0); r <= row_of(y1); ++r) {
        for (int c = col_of(x0); c <= col_of(x1); ++c) g.at(c, r) += density * box.overlap_area(g.bin(c, r, o));
      }
    } else if (h > 0.0) {
      // Vertical segment: weight per unit length along its column.
      const int c = col_of(x0);
      for (int r = row_of(y0); r <= row_of(y1); ++r) {
        const Rect bn = g.bin(c, r, o);
        const double len = std::min(y1, bn.ymax()) - std::max(y0, bn.y);
        if (len > 0.0) g.at(c, r) += e.weight * len;
      }
    } else {
      const int r = row_of(y0);
      for (int c = col_of(x0); c <= col_of(x1); ++c) {
        const Rect bn = g.bin(c, r, o);
        const double len = std::min(x1, bn.xmax()) - std::max(x0, bn.x);
        if (len > 0.0) g.at(c, r) += e.weight * len;
      }
    }
  }
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) g.at(c, r) /= g.bin(c, r, o).area();
  }
  return g;
}

double demand_quantile(const CongestionGrid& grid, double q) {
  if (grid.demand.empty()) return 0.0;
  std::vector<double> d = grid.demand;
  std::sort(d.begin(), d.end());
  const auto idx = static_cast<std::size_t>(std::clamp(q, 0.0, 1.0) * static_cast<double>(d.size() - 1));
  return d[idx];
}

double StageTiming::total() const {
  double t = 0.0;
  for (const auto& s : stages) t += s.seconds;
  return t;
}

double StageTiming::seconds(std::string_view stage) const {
  for (const auto& s : stages) {
    if (s.stage == stage) return s.seconds;
  }
  return 0.0;
}

double StageTiming::share(std::string_view stage) const {
  const double t = total();
  return t > 0.0 ? seconds(stage) / t : 0.0;
}

std::string StageTiming::to_json() const {
  nlohmann::ordered_json j;
  j["total_seconds"] = total();
  auto& arr = j["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : stages) arr.push_back({{"stage", s.stage}, {"seconds", s.seconds}, {"share", share(s.stage)}});
  j["extraction_share"] = share("extract");
  return j.dump(2) + "\n";
}

namespace {

using nlohmann::json;

json loss_to_json(const LossBreakdown& l) {
  return {{"wl_mm", l.wl_mm},         {"wl_mc", l.wl_mc},
          {"wl_mcc", l.wl_mcc},       {"loss_mm", l.loss_mm},
          {"loss_mc", l.loss_mc},     {"loss_mcc", l.loss_mcc},
          {"loss_outline", l.loss_outline}, {"loss_boundary", l.loss_boundary},
          {"total", l.total}};
}

LossBreakdown loss_from_json(const json& j) {
  LossBreakdown l;
  l.wl_mm = j.at("wl_mm").get<double>();
  l.wl_mc = j.at("wl_mc").get<double>();
  l.wl_mcc = j.at("wl_mcc").get<double>();
  l.loss_mm = j.at("loss_mm").get<double>();
  l.loss_mc = j.at("loss_mc").get<double>();
  l.loss_mcc = j.at("loss_mcc").get<double>();
  l.loss_outline = j.at("loss_outline").get<double>();
  l.loss_boundary = j.at("loss_boundary").get<double>();
  l.total = j.at("total").get<double>();
  return l;
}

}  // namespace

std::string RunReport::to_text() const {
  std::string out;
  auto line = [&](std::string_view key, double v) { out += fmt::format("{:<20} {}\n", key, v); };
  line("hpwl_total", hpwl_total);
  line("wl_mm", wl_mm);
  line("wl_mc", wl_mc);
  line("wl_cc", wl_cc);
  line("wl_mcc", wl_mcc);
  line("netlist_hpwl", netlist_hpwl);
  line("congestion_overflow", congestion_overflow);
  line("congestion_capacity", congestion_capacity);
  line("loss_mm", loss.loss_mm);
  line("loss_mc", loss.loss_mc);
  line("loss_mcc", loss.loss_mcc);
  line("loss_outline", loss.loss_outline);
  line("loss_boundary", loss.loss_boundary);
  line("loss_total", loss.total);
  if (!timings.empty()) {
    out += "\n# stage seconds\n";
    for (const auto& t : timings) out += fmt::format("{} {}\n", t.stage, t.seconds);
  }
  out += fmt::format("\n# flip log ({}): name mode xVt yVt dHPWL applied\n", flip_log.size());
  for (const auto& f : flip_log) {
    out += fmt::format("{} {} {} {} {} {}\n", f.name, f.mode, f.x_vt, f.y_vt, f.d_hpwl, f.applied ? 1 : 0);
  }
  return out;
}

std::string RunReport::to_json() const {
  json j;
  j["hpwl_total"] = hpwl_total;
  j["wl_mm"] = wl_mm;
  j["wl_mc"] = wl_mc;
  j["wl_cc"] = wl_cc;
  j["wl_mcc"] = wl_mcc;
  j["netlist_hpwl"] = netlist_hpwl;
  j["congestion_overflow"] = congestion_overflow;
  j["congestion_capacity"] = congestion_capacity;
  j["loss"] = loss_to_json(loss);
  j["flip_log"] = json::array();
  for (const auto& f : flip_log) {
    j["flip_log"].push_back({{"name", f.name},
                             {"mode", f.mode},
                             {"x_vt", f.x_vt},
                             {"y_vt", f.y_vt},
                             {"d_hpwl", f.d_hpwl},
                             {"applied", f.applied}});
  }
  j["timings"] = json::array();
  for (const auto& t : timings) j["timings"].push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  return j.dump(2) + "\n";
}

RunReport RunReport::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Syntax, fmt::format("report: {}", e.what()));
  }
  try {
    RunReport r;
    r.hpwl_total = j.at("hpwl_total").get<double>();
    r.wl_mm = j.at("wl_mm").get<double>();
    r.wl_mc = j.at("wl_mc").get<double>();
    r.wl_cc = j.at("wl_cc").get<double>();
    r.wl_mcc = j.at("wl_mcc").get<double>();
    r.netlist_hpwl = j.at("netlist_hpwl").get<double>();
    r.congestion_overflow = j.at("congestion_overflow").get<double>();
    r.congestion_capacity = j.at("congestion_capacity").get<double>();
    r.loss = loss_from_json(j.at("loss"));
    for (const auto& f : j.at("flip_log")) {
      r.flip_log.push_back({f.at("name").get<std::string>(), f.at("mode").get<std::string>(),
                            f.at("x_vt").get<double>(), f.at("y_vt").get<double>(), f.at("d_hpwl").get<double>(),
                            f.at("applied").get<bool>()});
    }
    for (const auto& t : j.at("timings")) {
      r.timings.push_back({t.at("stage").get<std::string>(), t.at("seconds").get<double>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Syntax, fmt::format("report: {}", e.what()));
  }
}

RunReport emit_report(const Floorplan& fp, const DataflowGraph& graph, const CongestionOptions& copt,
                      const LossBreakdown& loss, std::vector<FlipLogEntry> flip_log, const StageTiming& timings) {
  RunReport r;
  const HpwlBreakdown h = edge_hpwl(fp, graph);
  r.hpwl_total = h.total;
  r.wl_mm = h.mm;
  r.wl_mc = h.mc;
  r.wl_cc = h.cc;
  r.wl_mcc = h.mcc;
  const CongestionGrid grid = congestion(fp, graph, copt);
  r.congestion_overflow = grid.overflow();
  r.congestion_capacity = grid.capacity;
  r.loss = loss;
  r.flip_log = std::move(flip_log);
  r.timings = timings.stages;
  return r;
}

}  // namespace dfmp
