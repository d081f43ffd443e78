#include "dfmp/loss.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dfmp/error.hpp"

namespace dfmp {

std::string_view to_string(LossVariant v) {
  switch (v) {
    case LossVariant::Eq5: return "eq5";
    case LossVariant::Eq6: return "eq6";
    case LossVariant::Eq8: return "eq8";
  }
  return "eq8";
}

LossVariant parse_loss_variant(std::string_view text) {
  if (text == "eq5") return LossVariant::Eq5;
  if (text == "eq6") return LossVariant::Eq6;
  if (text == "eq8") return LossVariant::Eq8;
  throw Error(ErrorCode::Config, fmt::format("unknown loss variant '{}' (eq5|eq6|eq8)", text));
}

std::vector<double> normalize_macro_area(std::span<const double> areas) {
  if (areas.empty()) return {};
  const auto [lo, hi] = std::minmax_element(areas.begin(), areas.end());
  const double min = *lo, max = *hi;
  std::vector<double> out;
  out.reserve(areas.size());
  for (double a : areas) out.push_back(max == min ? 1.0 : 1.0 + (a - min) / (max - min));
  return out;
}

std::vector<double> macro_area_weights(const Floorplan& fp) {
  std::vector<double> areas;
  areas.reserve(fp.macros.size());
  for (const auto& m : fp.macros) areas.push_back(m.area);
  return normalize_macro_area(areas);
}

LossModel::LossModel(const DataflowGraph& graph, const Floorplan& fp, std::span<const double> a_prime,
                     const LossConfig& config)
    : config_(config) {
  if (a_prime.size() != fp.macros.size()) {
    throw Error(ErrorCode::Config,
                fmt::format("{} area weights given for {} macros", a_prime.size(), fp.macros.size()));
  }
  auto bind = [&](int cluster, int& macro, Point& fixed) {
    if (cluster >= 0 && cluster < static_cast<int>(fp.macro_slot.size()) && fp.macro_slot[cluster] >= 0) {
      macro = fp.macro_slot[cluster];
      return;
    }
    auto p = fp.reference_point(cluster);
    if (!p) throw Error(ErrorCode::UnplacedCluster, fmt::format("cluster {} has no position", cluster));
    fixed = *p;
  };

  double mass = 0.0;
  for (const auto& e : graph.edges) {
    Term t;
    switch (e.kind) {
      case EdgeKind::MMDirect:
      case EdgeKind::MMIndirect:
        t.cls = 0;
        t.coef = config.mm_weight * e.weight;
        break;
      case EdgeKind::MC:
        t.cls = 1;
        t.coef = config.mc_weight * e.weight;
        break;
      case EdgeKind::MCC:
        t.cls = 2;
        break;
      case EdgeKind::CC:
        continue;
    }
    bind(e.src, t.macro_a, t.fixed_a);
    bind(e.dst, t.macro_b, t.fixed_b);
    if (e.kind == EdgeKind::MCC) {
      const double area = t.macro_a >= 0 ? a_prime[t.macro_a] : 1.0;
      switch (config.variant) {
        case LossVariant::Eq5: t.coef = e.w2; break;
        case LossVariant::Eq6: t.coef = e.w1 * e.w2; break;
        case LossVariant::Eq8: t.coef = std::sqrt(e.w1 * e.w2) / area; break;
      }
      t.coef *= config.mcc_weight;
    }
    mass += t.coef;
    terms_.push_back(t);
  }
  outline_scale_ = config.outline_weight * (mass > 0.0 ? mass : 1.0);
}

LossBreakdown LossModel::evaluate(const Floorplan& fp) const {
  LossBreakdown lb;
  double wl[3] = {0.0, 0.0, 0.0};
  double loss[3] = {0.0, 0.0, 0.0};
  for (const auto& t : terms_) {
    const Point a = t.macro_a >= 0 ? fp.macros[t.macro_a].pin_center() : t.fixed_a;
    const Point b = t.macro_b >= 0 ? fp.macros[t.macro_b].pin_center() : t.fixed_b;
    const double h = std::abs(a.x - b.x) + std::abs(a.y - b.y);
    wl[t.cls] += h;
    loss[t.cls] += t.coef * h;
  }
  lb.wl_mm = wl[0];
  lb.wl_mc = wl[1];
  lb.wl_mcc = wl[2];
  lb.loss_mm = loss[0];
  lb.loss_mc = loss[1];
  lb.loss_mcc = loss[2];

  const double W = fp.outline.width, H = fp.outline.height;
  double overhang = 0.0, boundary = 0.0;
  for (const auto& m : fp.macros) {
    const double ox = std::max(0.0, -m.x) + std::max(0.0, m.x + m.width - W);
    const double oy = std::max(0.0, -m.y) + std::max(0.0, m.y + m.height - H);
    overhang += ox * ox + oy * oy;
    if (config_.boundary_weight != 0.0) {
      boundary += std::max(0.0, std::min({m.x, m.y, W - m.x - m.width, H - m.y - m.height}));
    }
  }
  lb.loss_outline = outline_scale_ * overhang;
  lb.loss_boundary = config_.boundary_weight * boundary;
  lb.total = lb.loss_mm + lb.loss_mc + lb.loss_mcc + lb.loss_outline + lb.loss_boundary;
  return lb;
}

LossBreakdown compute_loss(const Floorplan& fp, const DataflowGraph& graph, std::span<const double> a_prime,
                           const LossConfig& config) {
  return LossModel(graph, fp, a_prime, config).evaluate(fp);
}

}  // namespace dfmp
