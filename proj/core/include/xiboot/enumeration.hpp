#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "xiboot/rational.hpp"
#include "xiboot/rng.hpp"
#include "xiboot/sample.hpp"
#include "xiboot/theory.hpp"

// Brute-force counterparts of the closed forms in theory.hpp: exhaustive
// enumeration over all n^n equally likely index draws (exact, rational), and
// Monte Carlo estimators with standard errors.  These deliberately take the
// slow, definition-shaped route so they can certify the fast paths.
namespace xiboot::enumeration {

inline constexpr int kMaxEnumerationN = 8;  // 8^8 ≈ 1.7e7 draws

// Visit the weight vector of every index draw; weight vectors repeat with
// their multinomial multiplicity.  Throws parameter_error above
// kMaxEnumerationN.
void for_each_index_draw(int n, const std::function<void(std::span<const std::int32_t>)>& fn);

theory::MultinomialMomentsExact enumerate_multinomial_moments(int s_size, int s2_size, int t_size,
                                                              int n);

// Exact mean / variance of the window-count statistic over all index draws,
// for a tie-free Y sequence in increasing-X order.
Rational enumerate_cond_exp_xibar(std::span<const double> y_by_x);
Rational enumerate_cond_var_xibar(std::span<const double> y_by_x);

// Exact E[sum_i W_i Lt_i (n - Lt_i)] over all index draws; y_rank is the
// Y-rank sequence in X-order (any permutation of 1..n gives the same value,
// which the tests exercise).
Rational enumerate_weighted_l_sum(std::span<const std::int32_t> y_rank);

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
};

// E|S(i,k)| under i.i.d. continuous Y, by redrawing the sample.
McEstimate mc_window_mean(int n, int i, int k, std::int64_t draws, RngStream rng);

// All 14 cardinality expectations at once (means and standard errors share
// the CardExpectationTable layout).
struct CardTableMc {
  theory::CardExpectationTable mean;
  theory::CardExpectationTable se;
};
CardTableMc mc_card_expectations(int n, std::int64_t draws, RngStream rng);

McEstimate mc_weighted_l_mean(int n, std::int64_t draws, RngStream rng);

// Monte Carlo conditional mean / variance of the window-count statistic for a
// fixed sample, over fresh weight draws.  The variance SE uses the fourth
// central moment.
McEstimate mc_cond_exp_xibar(const BivariateSample& s, std::int64_t draws, RngStream rng);
struct McVariance {
  double variance = 0.0;
  double se = 0.0;
};
McVariance mc_cond_var_xibar(const BivariateSample& s, std::int64_t draws, RngStream rng);

}  // namespace xiboot::enumeration
