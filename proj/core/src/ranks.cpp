#include "xiboot/ranks.hpp"

#include <algorithm>
#include <numeric>

#include "xiboot/errors.hpp"

namespace xiboot {

RankVectors compute_ranks(std::span<const double> y) {
  const auto n = static_cast<std::int64_t>(y.size());
  if (n < 1) throw parameter_error("compute_ranks: empty input");

  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end());

  RankVectors out;
  out.r.resize(n);
  out.l.resize(n);
  out.tie_mult.resize(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), y[i]) - sorted.begin();
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), y[i]) - sorted.begin();
    out.r[i] = static_cast<std::int32_t>(hi);
    out.l[i] = static_cast<std::int32_t>(n - lo);
    out.tie_mult[i] = static_cast<std::int32_t>(hi - lo);
  }
  return out;
}

XOrdering order_by_x(std::span<const double> x, TieBreak tb) {
  const auto n = static_cast<std::int64_t>(x.size());
  XOrdering out;
  out.tie_break = tb;
  out.perm.resize(n);
  std::iota(out.perm.begin(), out.perm.end(), 0);
  std::stable_sort(out.perm.begin(), out.perm.end(),
                   [&](std::int32_t a, std::int32_t b) { return x[a] < x[b]; });
  // stable sort already realizes the by-index rule inside tied blocks
  if (tb.mode == TieBreak::Mode::seeded) {
    std::int64_t a = 0;
    while (a < n) {
      std::int64_t b = a + 1;
      while (b < n && x[out.perm[b]] == x[out.perm[a]]) ++b;
      if (b - a > 1) {
        RngStream block = RngStream(tb.seed).derive(static_cast<std::uint64_t>(a));
        for (std::int64_t i = b - a - 1; i > 0; --i) {
          const auto j = static_cast<std::int64_t>(block.below(static_cast<std::uint64_t>(i + 1)));
          std::swap(out.perm[a + i], out.perm[a + j]);
        }
      }
      a = b;
    }
  }
  return out;
}

}  // namespace xiboot
