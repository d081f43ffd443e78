#pragma once

#include <span>
#include <vector>

#include "dfmp/dataflow.hpp"
#include "dfmp/floorplan.hpp"

namespace dfmp {

// Which two-hop term the loss uses.
//   Eq5: w2 * WL            (cell-cell strength only)
//   Eq6: w1 * w2 * WL       (one-hop and two-hop weights coupled)
//   Eq8: sqrt(w1 * w2) / A' * WL   (coupled, damped by normalized macro area)
enum class LossVariant { Eq5, Eq6, Eq8 };

std::string_view to_string(LossVariant v);
LossVariant parse_loss_variant(std::string_view text);

struct LossConfig {
  LossVariant variant = LossVariant::Eq8;
  // Per-class multipliers; mc = mcc = 0 gives the dataflow-agnostic MM-only loss.
  double mm_weight = 1.0;
  double mc_weight = 1.0;
  double mcc_weight = 1.0;
  // Scales the quadratic overhang penalty relative to the total dataflow weight.
  double outline_weight = 100.0;
  // Push-boundary term; 0 disables it.
  double boundary_weight = 0.0;
};

struct LossBreakdown {
  double wl_mm = 0.0;
  double wl_mc = 0.0;
  double wl_mcc = 0.0;
  double loss_mm = 0.0;
  double loss_mc = 0.0;
  double loss_mcc = 0.0;
  double loss_outline = 0.0;
  double loss_boundary = 0.0;
  double total = 0.0;

  double dataflow() const { return loss_mm + loss_mc + loss_mcc; }
  friend bool operator==(const LossBreakdown&, const LossBreakdown&) = default;
};

// A'_i = 1 + (A_i - A_min) / (A_max - A_min); all ones when every area is equal.
std::vector<double> normalize_macro_area(std::span<const double> areas);

// Normalized areas of fp.macros in slot order.
std::vector<double> macro_area_weights(const Floorplan& fp);

// Precompiled loss over a fixed graph. Only macro positions and orientations
// may change between evaluate() calls; cell and IO positions are captured at
// construction.
class LossModel {
 public:
  LossModel(const DataflowGraph& graph, const Floorplan& fp, std::span<const double> a_prime,
            const LossConfig& config);

  LossBreakdown evaluate(const Floorplan& fp) const;
  const LossConfig& config() const { return config_; }

 private:
  struct Term {
    int cls = 0;  // 0 mm, 1 mc, 2 mcc
    int macro_a = -1;
    int macro_b = -1;
    Point fixed_a;
    Point fixed_b;
    double coef = 0.0;
  };
  std::vector<Term> terms_;
  LossConfig config_;
  double outline_scale_ = 1.0;
};

// Throws UnplacedCluster when an edge endpoint has no position.
LossBreakdown compute_loss(const Floorplan& fp, const DataflowGraph& graph, std::span<const double> a_prime,
                           const LossConfig& config);

}  // namespace dfmp
