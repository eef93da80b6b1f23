#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xiboot/ranks.hpp"
#include "xiboot/rng.hpp"
#include "xiboot/sample.hpp"

namespace xiboot {

// Multinomial resample counts over original indices; sum(w) == n.
struct BootstrapWeights {
  std::vector<std::int32_t> w;
};

// n uniform index draws tallied into counts (the n-out-of-n bootstrap).
BootstrapWeights draw_weights(std::int64_t n, RngStream& rng);

// True when every Y value carried by a positive weight is identical, i.e. the
// resampled statistic's denominator would vanish.
bool resample_is_degenerate(const BivariateSample& s, const BootstrapWeights& w);

// Resampled statistic, materialized route: repeat pair i w_i times, evaluate
// the tie-aware statistic on the resulting (tied) sample.  Kept as the slow
// reference path; throws degenerate_sample_error on degenerate resamples.
double xi_boot_direct(const BivariateSample& s, const BootstrapWeights& w, TieBreak tb = {});

// Integer rank-difference sum of the materialized resample (the numerator of
// xi_boot_direct).  Invariant under the X-tie-break used for the resample.
std::int64_t materialized_rank_diff_sum(const BivariateSample& s, const BootstrapWeights& w,
                                        TieBreak tb = {});

// Resampled statistic on the original-index representation, never
// materializing the resample: bootstrap ranks come from weight prefix sums in
// Y-order and each positive-weight unit is paired with its right nearest
// positive-weight neighbor in X-order.  O(n log n).  Requires a tie-free
// sample with at least one positive weight.
double xi_hat_b(const BivariateSample& s, const BootstrapWeights& w);

// Window-count reformulation of xi_hat_b: for each consecutive positive-weight
// pair, the weighted number of Y values strictly between the pair's Y values.
double xi_bar_b(const BivariateSample& s, const BootstrapWeights& w);

// Low-level integer sums behind the two statistics above, on the x-sorted
// representation: y_rank_by_x[p] is the Y-rank (1..n, a permutation) of the
// point at x-position p, w_by_x[p] its resample weight.
std::int64_t hat_rank_diff_sum(std::span<const std::int32_t> y_rank_by_x,
                               std::span<const std::int32_t> w_by_x);
std::int64_t bar_window_sum(std::span<const std::int32_t> y_rank_by_x,
                            std::span<const std::int32_t> w_by_x);

enum class BootStatistic { direct, hat };

struct BootstrapDistribution {
  std::vector<double> values;  // one resampled statistic per replicate
  double source_xi = 0.0;      // statistic of the original sample
  std::int64_t source_n = 0;
  std::int64_t degenerate_redraws = 0;

  std::int64_t b_count() const { return static_cast<std::int64_t>(values.size()); }
};

// B replicates, replicate b consuming the stream root.derive(b); degenerate
// draws are redrawn (and counted) up to a hard cap.  Deterministic given the
// root stream, independent of execution order.  The hat statistic requires a
// tie-free sample; direct works for any sample.
BootstrapDistribution bootstrap_distribution(const BivariateSample& s, std::int64_t b_count,
                                             const RngStream& root,
                                             BootStatistic stat = BootStatistic::hat,
                                             TieBreak tb = {});

// n * mean_b (value_b - source_xi)^2
double var_b1(const BootstrapDistribution& d);
// n * population variance of the replicate values (divide by B: the target is
// the infinite-replication conditional variance)
double var_b2(const BootstrapDistribution& d);

// Linear-interpolation empirical quantile (the common "type 7" convention);
// input must be sorted.
double interpolated_quantile(std::span<const double> sorted, double p);

enum class CiMethod { hb1, hb2, oracle_var };

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.0;
  CiMethod method = CiMethod::hb1;
};

// Hybrid-bootstrap intervals: with q_p the p-quantile of sqrt(n)*(value - c),
// the interval is [xi_n - q_{1-a/2}/sqrt(n), xi_n - q_{a/2}/sqrt(n)].
// hb1 centers at c = source_xi, hb2 at c = replicate mean.
ConfidenceInterval ci_hybrid1(const BootstrapDistribution& d, double alpha);
ConfidenceInterval ci_hybrid2(const BootstrapDistribution& d, double alpha);

// Normal interval using a known (externally supplied) value of n*Var(xi_n).
ConfidenceInterval ci_oracle_var(double xi_n, std::int64_t n, double n_var, double alpha);

}  // namespace xiboot
