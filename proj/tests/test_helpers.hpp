#pragma once

// Shared test utilities: summary statistics, brute-force oracles written the
// slow definition-shaped way, and small data generators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "xiboot/bootstrap.hpp"
#include "xiboot/ranks.hpp"
#include "xiboot/rng.hpp"
#include "xiboot/sample.hpp"

namespace testutil {

inline double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_variance(std::span<const double> v) {
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

inline double se_of_mean(std::span<const double> v) {
  return std::sqrt(sample_variance(v) / static_cast<double>(v.size()));
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
  const double ma = mean(a), mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Kolmogorov-Smirnov distance between a sample and a N(0, variance) law.
inline double ks_distance_normal(std::vector<double> values, double variance) {
  std::sort(values.begin(), values.end());
  const double sd = std::sqrt(variance);
  const auto n = static_cast<double>(values.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = xiboot::normal_cdf(values[i] / sd);
    sup = std::max({sup, std::fabs(f - (static_cast<double>(i) + 1.0) / n),
                    std::fabs(f - static_cast<double>(i) / n)});
  }
  return sup;
}

// O(n^2) counting reference for the rank vectors.
struct BruteRanks {
  std::vector<std::int32_t> r, l, t;
};
inline BruteRanks brute_ranks(std::span<const double> y) {
  const auto n = static_cast<std::int64_t>(y.size());
  BruteRanks out;
  out.r.resize(n);
  out.l.resize(n);
  out.t.resize(n);
  for (std::int64_t i = 0; i < n; ++i) {
    std::int32_t r = 0, l = 0, t = 0;
    for (std::int64_t j = 0; j < n; ++j) {
      if (y[j] <= y[i]) ++r;
      if (y[j] >= y[i]) ++l;
      if (y[j] == y[i]) ++t;
    }
    out.r[i] = r;
    out.l[i] = l;
    out.t[i] = t;
  }
  return out;
}

// Definition-shaped window-count sum: for each positive-weight unit, walk to
// the right until the first positive weight and count the strictly-between Y
// values, weighted.  Quadratic on purpose.
inline std::int64_t naive_bar_sum(std::span<const double> y_by_x,
                                  std::span<const std::int32_t> w_by_x) {
  const auto n = static_cast<std::int64_t>(y_by_x.size());
  std::int64_t total = 0;
  for (std::int64_t i = 0; i < n - 1; ++i) {
    if (w_by_x[i] == 0) continue;
    for (std::int64_t k = 1; k <= n - 1 - i; ++k) {
      if (w_by_x[i + k] == 0) continue;
      const double lo = std::min(y_by_x[i], y_by_x[i + k]);
      const double hi = std::max(y_by_x[i], y_by_x[i + k]);
      for (std::int64_t j = 0; j < n; ++j) {
        if (lo < y_by_x[j] && y_by_x[j] < hi) total += w_by_x[j];
      }
      break;  // nearest positive neighbor only
    }
  }
  return total;
}

inline std::vector<double> y_in_x_order(const xiboot::BivariateSample& s) {
  const xiboot::XOrdering ord = xiboot::order_by_x(s.x());
  std::vector<double> y(s.size());
  for (std::int64_t p = 0; p < s.size(); ++p) y[p] = s.y()[ord.perm[p]];
  return y;
}

inline xiboot::BivariateSample random_tie_free(std::int64_t n, xiboot::RngStream& rng) {
  std::vector<double> x(n), y(n);
  for (auto& v : x) v = rng.normal();
  for (auto& v : y) v = rng.normal();
  return {std::move(x), std::move(y)};
}

inline xiboot::BootstrapWeights random_weights(std::int64_t n, xiboot::RngStream& rng) {
  return xiboot::draw_weights(n, rng);
}

inline xiboot::BootstrapWeights nondegenerate_weights(const xiboot::BivariateSample& s,
                                                      xiboot::RngStream& rng) {
  for (;;) {
    xiboot::BootstrapWeights w = xiboot::draw_weights(s.size(), rng);
    if (!resample_is_degenerate(s, w)) return w;
  }
}

// All X-orderings of the materialized resample: per tied block every
// permutation, composed across blocks.  Calls fn with each full ordering
// (indices into the materialized sample, sorted by x up to in-block order).
template <typename Fn>
void for_each_tie_break_ordering(std::span<const double> x_resampled, Fn&& fn) {
  const auto n = static_cast<std::int64_t>(x_resampled.size());
  std::vector<std::int32_t> base(n);
  std::iota(base.begin(), base.end(), 0);
  std::stable_sort(base.begin(), base.end(),
                   [&](std::int32_t a, std::int32_t b) { return x_resampled[a] < x_resampled[b]; });
  // block boundaries
  std::vector<std::pair<std::int64_t, std::int64_t>> blocks;
  std::int64_t a = 0;
  while (a < n) {
    std::int64_t b = a + 1;
    while (b < n && x_resampled[base[b]] == x_resampled[base[a]]) ++b;
    blocks.emplace_back(a, b);
    a = b;
  }
  // odometer over per-block permutations
  std::vector<std::int32_t> order = base;
  const std::function<void(std::size_t)> rec = [&](std::size_t blk) {
    if (blk == blocks.size()) {
      fn(std::span<const std::int32_t>(order));
      return;
    }
    auto [lo, hi] = blocks[blk];
    std::vector<std::int32_t> block(order.begin() + lo, order.begin() + hi);
    std::sort(block.begin(), block.end());
    do {
      std::copy(block.begin(), block.end(), order.begin() + lo);
      rec(blk + 1);
    } while (std::next_permutation(block.begin(), block.end()));
  };
  rec(0);
}

}  // namespace testutil
