#include "dfmp/sequence_pair.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "dfmp/error.hpp"

namespace dfmp {

SequencePair identity_sequence_pair(int n) {
  SequencePair sp;
  sp.pos.resize(n);
  std::iota(sp.pos.begin(), sp.pos.end(), 0);
  sp.neg = sp.pos;
  return sp;
}

SequencePair random_sequence_pair(int n, Rng& rng) {
  auto sp = identity_sequence_pair(n);
  for (auto* seq : {&sp.pos, &sp.neg}) {
    for (int i = n - 1; i > 0; --i) std::swap((*seq)[i], (*seq)[rng.below(i + 1)]);
  }
  return sp;
}

void check_sequence_pair(const SequencePair& sp, std::size_t n) {
  auto is_perm = [n](const std::vector<int>& seq) {
    if (seq.size() != n) return false;
    std::vector<char> seen(n, 0);
    for (int v : seq) {
      if (v < 0 || static_cast<std::size_t>(v) >= n || seen[v]) return false;
      seen[v] = 1;
    }
    return true;
  };
  if (!is_perm(sp.pos) || !is_perm(sp.neg)) {
    throw Error(ErrorCode::BadPermutation,
                fmt::format("sequence pair is not a pair of permutations of 0..{}", static_cast<long>(n) - 1));
  }
}

std::vector<Rect> evaluate_sequence_pair(const SequencePair& sp, std::span<const Size> sizes) {
  const std::size_t n = sizes.size();
  check_sequence_pair(sp, n);
  for (const auto& s : sizes) {
    if (!(s.width > 0.0) || !(s.height > 0.0)) throw Error(ErrorCode::BadMaster, "block sizes must be positive");
  }

  std::vector<int> rank_neg(n);
  for (std::size_t i = 0; i < n; ++i) rank_neg[sp.neg[i]] = static_cast<int>(i);

  std::vector<Rect> out(n);
  for (std::size_t b = 0; b < n; ++b) {
    out[b].width = sizes[b].width;
    out[b].height = sizes[b].height;
  }

  // Left-of predecessors of a block precede it in pos, below predecessors
  // follow it; x is swept front to back and y back to front.
  for (std::size_t i = 0; i < n; ++i) {
    const int b = sp.pos[i];
    double x = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      const int a = sp.pos[j];
      if (rank_neg[a] < rank_neg[b]) x = std::max(x, out[a].xmax());
    }
    out[b].x = x;
  }
  for (std::size_t i = n; i-- > 0;) {
    const int b = sp.pos[i];
    double y = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const int a = sp.pos[j];
      if (rank_neg[a] < rank_neg[b]) y = std::max(y, out[a].ymax());
    }
    out[b].y = y;
  }
  return out;
}

}  // namespace dfmp
