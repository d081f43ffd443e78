#pragma once

#include <cstdint>

#include "dfmp/loss.hpp"
#include "dfmp/sequence_pair.hpp"

namespace dfmp {

struct AnnealSchedule {
  double t0_factor = 1.0;      // T0 = factor * mean |delta loss| of the probe moves
  double cooling = 0.97;       // geometric, in (0, 1)
  int moves_per_temp = 200;
  double t_min_ratio = 1e-4;   // stop once T <= ratio * T0
  int probe_moves = 100;
};

void check_schedule(const AnnealSchedule& schedule);

// Decodes `sp` over the macros of `base` (slot order) and translates the
// packing so its bounding box is centered in the outline.
Floorplan realize(const SequencePair& sp, const Floorplan& base);

struct AnnealResult {
  SequencePair sp;
  Floorplan floorplan;
  LossBreakdown loss;
  long long moves = 0;
  long long accepted = 0;
};

// Metropolis annealing over sequence-pair swaps (in pos, in neg, or the same
// two blocks in both). Returns the best state seen, so the result's loss
// never exceeds the initial loss.
AnnealResult run_sa(const SequencePair& initial, const LossModel& model, const Floorplan& base,
                    const AnnealSchedule& schedule, std::uint64_t seed);

}  // namespace dfmp
