#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xiboot/rng.hpp"

namespace xiboot {

// Rank bookkeeping for one variable:
//   r[i]        = #{j : y[j] <= y[i]}      (rank)
//   l[i]        = #{j : y[j] >= y[i]}      (reversed rank)
//   tie_mult[i] = #{j : y[j] == y[i]}
// r[i] + l[i] == n + tie_mult[i] for every i; with distinct values r is a
// permutation of 1..n.
struct RankVectors {
  std::vector<std::int32_t> r, l, tie_mult;
};

// O(n log n) by sorting; tests hold an O(n^2) counting reference against it.
RankVectors compute_ranks(std::span<const double> y);

// How ties among X values are resolved when ordering by X.
struct TieBreak {
  enum class Mode { by_index, seeded };
  Mode mode = Mode::by_index;
  std::uint64_t seed = 0;

  static TieBreak by_index() { return {}; }
  static TieBreak seeded(std::uint64_t s) { return {Mode::seeded, s}; }
};

// perm[p] is the 0-based index of the p-th smallest x.  by_index keeps tied
// values in original order; seeded shuffles within each tied block, keyed by
// (seed, block position) so the result is reproducible.
struct XOrdering {
  std::vector<std::int32_t> perm;
  TieBreak tie_break;
};

XOrdering order_by_x(std::span<const double> x, TieBreak tb = {});

}  // namespace xiboot
