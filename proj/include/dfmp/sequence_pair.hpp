#pragma once

#include <span>
#include <vector>

#include "dfmp/geometry.hpp"
#include "dfmp/rng.hpp"

namespace dfmp {

struct Size {
  double width = 0.0;
  double height = 0.0;
};

// Two permutations of block indices 0..n-1.
//   a before b in both          => a left of b
//   a before b in pos, after in neg => a above b
struct SequencePair {
  std::vector<int> pos;
  std::vector<int> neg;

  std::size_t size() const { return pos.size(); }
  friend bool operator==(const SequencePair&, const SequencePair&) = default;
};

SequencePair identity_sequence_pair(int n);
SequencePair random_sequence_pair(int n, Rng& rng);

// Throws BadPermutation unless pos and neg are permutations of 0..n-1 with
// n == sizes.size().
void check_sequence_pair(const SequencePair& sp, std::size_t n);

// Packs blocks to the lower-left by longest paths in the horizontal and
// vertical constraint graphs. Result is indexed by block.
std::vector<Rect> evaluate_sequence_pair(const SequencePair& sp, std::span<const Size> sizes);

}  // namespace dfmp
