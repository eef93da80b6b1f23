#include "xiboot/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "xiboot/errors.hpp"
#include "xiboot/xi.hpp"

namespace xiboot {

BootstrapWeights draw_weights(std::int64_t n, RngStream& rng) {
  if (n < 1) throw parameter_error("draw_weights: n must be positive");
  BootstrapWeights out;
  out.w.assign(n, 0);
  for (std::int64_t i = 0; i < n; ++i) {
    ++out.w[rng.below(static_cast<std::uint64_t>(n))];
  }
  return out;
}

bool resample_is_degenerate(const BivariateSample& s, const BootstrapWeights& w) {
  const std::int64_t n = s.size();
  double y_first = 0.0;
  bool seen = false;
  for (std::int64_t i = 0; i < n; ++i) {
    if (w.w[i] == 0) continue;
    if (!seen) {
      y_first = s.y()[i];
      seen = true;
    } else if (s.y()[i] != y_first) {
      return false;
    }
  }
  return true;  // zero or one distinct Y value among positive weights
}

namespace {

void check_weights(const BivariateSample& s, const BootstrapWeights& w) {
  if (static_cast<std::int64_t>(w.w.size()) != s.size()) {
    throw parameter_error("bootstrap: weight vector length differs from sample size");
  }
}

BivariateSample materialize(const BivariateSample& s, const BootstrapWeights& w) {
  std::vector<double> x, y;
  x.reserve(s.size());
  y.reserve(s.size());
  for (std::int64_t i = 0; i < s.size(); ++i) {
    for (std::int32_t c = 0; c < w.w[i]; ++c) {
      x.push_back(s.x()[i]);
      y.push_back(s.y()[i]);
    }
  }
  return BivariateSample(std::move(x), std::move(y));
}

// x-sorted tie-free representation shared by the hat/bar statistics
struct SortedView {
  std::vector<std::int32_t> y_rank_by_x;  // permutation of 1..n
  std::vector<std::int32_t> perm;         // x-order -> original index
};

SortedView make_sorted_view(const BivariateSample& s) {
  if (!s.continuous()) {
    throw parameter_error("bootstrap: this statistic requires a tie-free sample");
  }
  SortedView v;
  v.perm = order_by_x(s.x()).perm;
  const RankVectors rv = compute_ranks(s.y());
  v.y_rank_by_x.resize(s.size());
  for (std::int64_t p = 0; p < s.size(); ++p) {
    v.y_rank_by_x[p] = rv.r[v.perm[p]];
  }
  return v;
}

// cum[r] = total weight carried by Y-ranks <= r
void weight_prefix(std::span<const std::int32_t> y_rank_by_x, std::span<const std::int32_t> w_by_x,
                   std::vector<std::int64_t>& cum) {
  const auto n = static_cast<std::int64_t>(y_rank_by_x.size());
  cum.assign(n + 1, 0);
  for (std::int64_t p = 0; p < n; ++p) {
    cum[y_rank_by_x[p]] = w_by_x[p];
  }
  for (std::int64_t r = 1; r <= n; ++r) cum[r] += cum[r - 1];
}

}  // namespace

double xi_boot_direct(const BivariateSample& s, const BootstrapWeights& w, TieBreak tb) {
  check_weights(s, w);
  if (resample_is_degenerate(s, w)) {
    throw degenerate_sample_error("xi_boot_direct: resampled Y values are all equal");
  }
  return xi_general(materialize(s, w), tb).value;
}

std::int64_t materialized_rank_diff_sum(const BivariateSample& s, const BootstrapWeights& w,
                                        TieBreak tb) {
  check_weights(s, w);
  const BivariateSample resample = materialize(s, w);
  const RankVectors rv = compute_ranks(resample.y());
  const XOrdering ord = order_by_x(resample.x(), tb);
  std::int64_t sum = 0;
  for (std::int64_t p = 0; p + 1 < resample.size(); ++p) {
    sum += std::abs(static_cast<std::int64_t>(rv.r[ord.perm[p + 1]]) - rv.r[ord.perm[p]]);
  }
  return sum;
}

std::int64_t hat_rank_diff_sum(std::span<const std::int32_t> y_rank_by_x,
                               std::span<const std::int32_t> w_by_x) {
  const auto n = static_cast<std::int64_t>(y_rank_by_x.size());
  std::vector<std::int64_t> cum;
  weight_prefix(y_rank_by_x, w_by_x, cum);
  std::int64_t sum = 0;
  std::int64_t prev = -1;  // previous positive-weight position
  for (std::int64_t p = 0; p < n; ++p) {
    if (w_by_x[p] == 0) continue;
    if (prev >= 0) {
      sum += std::abs(cum[y_rank_by_x[p]] - cum[y_rank_by_x[prev]]);
    }
    prev = p;
  }
  return sum;
}

std::int64_t bar_window_sum(std::span<const std::int32_t> y_rank_by_x,
                            std::span<const std::int32_t> w_by_x) {
  const auto n = static_cast<std::int64_t>(y_rank_by_x.size());
  std::vector<std::int64_t> cum;
  weight_prefix(y_rank_by_x, w_by_x, cum);
  std::int64_t sum = 0;
  std::int64_t prev = -1;
  for (std::int64_t p = 0; p < n; ++p) {
    if (w_by_x[p] == 0) continue;
    if (prev >= 0) {
      const auto [r1, r2] = std::minmax(y_rank_by_x[prev], y_rank_by_x[p]);
      sum += cum[r2 - 1] - cum[r1];  // strictly between both endpoints
    }
    prev = p;
  }
  return sum;
}

namespace {

double from_sum(std::int64_t sum, std::int64_t n) {
  return 1.0 - 3.0 * static_cast<double>(sum) / static_cast<double>(n * n - 1);
}

std::vector<std::int32_t> weights_by_x(const SortedView& v, const BootstrapWeights& w) {
  std::vector<std::int32_t> out(v.perm.size());
  for (std::size_t p = 0; p < v.perm.size(); ++p) out[p] = w.w[v.perm[p]];
  return out;
}

}  // namespace

double xi_hat_b(const BivariateSample& s, const BootstrapWeights& w) {
  check_weights(s, w);
  const SortedView v = make_sorted_view(s);
  return from_sum(hat_rank_diff_sum(v.y_rank_by_x, weights_by_x(v, w)), s.size());
}

double xi_bar_b(const BivariateSample& s, const BootstrapWeights& w) {
  check_weights(s, w);
  const SortedView v = make_sorted_view(s);
  return from_sum(bar_window_sum(v.y_rank_by_x, weights_by_x(v, w)), s.size());
}

BootstrapDistribution bootstrap_distribution(const BivariateSample& s, std::int64_t b_count,
                                             const RngStream& root, BootStatistic stat,
                                             TieBreak tb) {
  if (b_count < 2) throw parameter_error("bootstrap_distribution: need at least 2 replicates");
  const std::int64_t n = s.size();

  BootstrapDistribution dist;
  dist.source_n = n;
  dist.source_xi = xi_general(s, tb).value;
  dist.values.resize(b_count);

  SortedView view;
  std::vector<std::int32_t> w_by_x;
  std::vector<std::int64_t> cum;
  if (stat == BootStatistic::hat) {
    view = make_sorted_view(s);
    w_by_x.resize(n);
  }

  constexpr int kMaxRedraws = 64;
  for (std::int64_t b = 0; b < b_count; ++b) {
    RngStream stream = root.derive(static_cast<std::uint64_t>(b));
    BootstrapWeights w = draw_weights(n, stream);
    int redraws = 0;
    while (resample_is_degenerate(s, w)) {
      if (++redraws > kMaxRedraws) {
        throw degenerate_sample_error(
            "bootstrap_distribution: persistent degenerate resamples (sample too small?)");
      }
      w = draw_weights(n, stream);
    }
    dist.degenerate_redraws += redraws;

    if (stat == BootStatistic::hat) {
      for (std::int64_t p = 0; p < n; ++p) w_by_x[p] = w.w[view.perm[p]];
      dist.values[b] = from_sum(hat_rank_diff_sum(view.y_rank_by_x, w_by_x), n);
    } else {
      dist.values[b] = xi_general(materialize(s, w), tb).value;
    }
  }
  return dist;
}

double var_b1(const BootstrapDistribution& d) {
  if (d.b_count() < 2) throw parameter_error("var_b1: need at least 2 replicates");
  double acc = 0.0;
  for (double v : d.values) {
    const double diff = v - d.source_xi;
    acc += diff * diff;
  }
  return static_cast<double>(d.source_n) * acc / static_cast<double>(d.b_count());
}

double var_b2(const BootstrapDistribution& d) {
  if (d.b_count() < 2) throw parameter_error("var_b2: need at least 2 replicates");
  const double mean =
      std::accumulate(d.values.begin(), d.values.end(), 0.0) / static_cast<double>(d.b_count());
  double acc = 0.0;
  for (double v : d.values) {
    const double diff = v - mean;
    acc += diff * diff;
  }
  // population variance: the target is the infinite-replication conditional variance
  return static_cast<double>(d.source_n) * acc / static_cast<double>(d.b_count());
}

double interpolated_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw parameter_error("interpolated_quantile: empty input");
  const auto n = static_cast<std::int64_t>(sorted.size());
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const auto lo = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(h)), 0, n - 2);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

namespace {

ConfidenceInterval hybrid_interval(const BootstrapDistribution& d, double alpha, double center,
                                   CiMethod method) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw parameter_error("hybrid interval: alpha must lie in (0, 1)");
  }
  if (d.b_count() < 2) throw parameter_error("hybrid interval: need at least 2 replicates");
  const double sqrt_n = std::sqrt(static_cast<double>(d.source_n));
  std::vector<double> diffs(d.values.size());
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    diffs[i] = sqrt_n * (d.values[i] - center);
  }
  std::sort(diffs.begin(), diffs.end());
  const double q_hi = interpolated_quantile(diffs, 1.0 - alpha / 2.0);
  const double q_lo = interpolated_quantile(diffs, alpha / 2.0);
  return {d.source_xi - q_hi / sqrt_n, d.source_xi - q_lo / sqrt_n, alpha, method};
}

}  // namespace

ConfidenceInterval ci_hybrid1(const BootstrapDistribution& d, double alpha) {
  return hybrid_interval(d, alpha, d.source_xi, CiMethod::hb1);
}

ConfidenceInterval ci_hybrid2(const BootstrapDistribution& d, double alpha) {
  const double mean =
      std::accumulate(d.values.begin(), d.values.end(), 0.0) / static_cast<double>(d.b_count());
  return hybrid_interval(d, alpha, mean, CiMethod::hb2);
}

ConfidenceInterval ci_oracle_var(double xi_n, std::int64_t n, double n_var, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw parameter_error("ci_oracle_var: alpha must lie in (0, 1)");
  }
  if (n < 1 || !(n_var >= 0.0)) {
    throw parameter_error("ci_oracle_var: need n >= 1 and n_var >= 0");
  }
  const double half = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(n_var / static_cast<double>(n));
  return {xi_n - half, xi_n + half, alpha, CiMethod::oracle_var};
}

}  // namespace xiboot
