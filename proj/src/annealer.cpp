#include "dfmp/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "dfmp/error.hpp"
#include "dfmp/rng.hpp"

namespace dfmp {

void check_schedule(const AnnealSchedule& s) {
  if (!(s.t0_factor > 0.0)) throw Error(ErrorCode::Config, "annealing t0_factor must be positive");
  if (!(s.cooling > 0.0 && s.cooling < 1.0)) throw Error(ErrorCode::Config, "annealing cooling must be in (0, 1)");
  if (s.moves_per_temp < 0) throw Error(ErrorCode::Config, "annealing moves_per_temp must be >= 0");
  if (!(s.t_min_ratio > 0.0 && s.t_min_ratio < 1.0)) {
    throw Error(ErrorCode::Config, "annealing t_min_ratio must be in (0, 1)");
  }
  if (s.probe_moves < 1) throw Error(ErrorCode::Config, "annealing probe_moves must be >= 1");
}

namespace {

std::vector<Size> block_sizes(const Floorplan& fp) {
  std::vector<Size> sizes;
  sizes.reserve(fp.macros.size());
  for (const auto& m : fp.macros) sizes.push_back({m.width, m.height});
  return sizes;
}

void place_into(Floorplan& fp, const SequencePair& sp, const std::vector<Size>& sizes) {
  const auto rects = evaluate_sequence_pair(sp, sizes);
  double w = 0.0, h = 0.0;
  for (const auto& r : rects) {
    w = std::max(w, r.xmax());
    h = std::max(h, r.ymax());
  }
  const double dx = (fp.outline.width - w) / 2.0;
  const double dy = (fp.outline.height - h) / 2.0;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    fp.macros[i].x = rects[i].x + dx;
    fp.macros[i].y = rects[i].y + dy;
  }
}

void random_move(SequencePair& sp, Rng& rng) {
  const int n = static_cast<int>(sp.size());
  const int kind = rng.below(3);
  const int i = rng.below(n);
  int j = rng.below(n - 1);
  if (j >= i) ++j;
  if (kind == 0) {
    std::swap(sp.pos[i], sp.pos[j]);
  } else if (kind == 1) {
    std::swap(sp.neg[i], sp.neg[j]);
  } else {
    // Same two blocks exchange places in both sequences.
    const int a = sp.pos[i], b = sp.pos[j];
    std::swap(sp.pos[i], sp.pos[j]);
    auto ia = std::find(sp.neg.begin(), sp.neg.end(), a);
    auto ib = std::find(sp.neg.begin(), sp.neg.end(), b);
    std::iter_swap(ia, ib);
  }
}

}  // namespace

Floorplan realize(const SequencePair& sp, const Floorplan& base) {
  Floorplan fp = base;
  place_into(fp, sp, block_sizes(base));
  return fp;
}

AnnealResult run_sa(const SequencePair& initial, const LossModel& model, const Floorplan& base,
                    const AnnealSchedule& schedule, std::uint64_t seed) {
  check_schedule(schedule);
  const auto sizes = block_sizes(base);
  check_sequence_pair(initial, sizes.size());

  AnnealResult best;
  best.sp = initial;
  best.floorplan = base;
  place_into(best.floorplan, initial, sizes);
  best.loss = model.evaluate(best.floorplan);
  if (schedule.moves_per_temp == 0 || sizes.size() < 2) return best;

  Rng rng(seed);
  Floorplan work = best.floorplan;
  SequencePair current = initial;
  double current_loss = best.loss.total;

  double probe_sum = 0.0;
  for (int p = 0; p < schedule.probe_moves; ++p) {
    SequencePair trial = current;
    random_move(trial, rng);
    place_into(work, trial, sizes);
    probe_sum += std::abs(model.evaluate(work).total - current_loss);
  }
  double t0 = schedule.t0_factor * probe_sum / schedule.probe_moves;
  if (!(t0 > 0.0)) t0 = 1.0;  // flat landscape: any temperature works
  const double t_min = schedule.t_min_ratio * t0;

  for (double t = t0; t > t_min; t *= schedule.cooling) {
    for (int m = 0; m < schedule.moves_per_temp; ++m) {
      SequencePair trial = current;
      random_move(trial, rng);
      place_into(work, trial, sizes);
      const LossBreakdown lb = model.evaluate(work);
      const double delta = lb.total - current_loss;
      ++best.moves;
      if (delta <= 0.0 || rng.uniform() < std::exp(-delta / t)) {
        ++best.accepted;
        current = std::move(trial);
        current_loss = lb.total;
        if (lb.total < best.loss.total) {
          best.sp = current;
          best.loss = lb;
          best.floorplan = work;
        }
      }
    }
  }
  return best;
}

}  // namespace dfmp
