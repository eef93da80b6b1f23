#pragma once

#include <cstdint>
#include <span>

#include "xiboot/rational.hpp"
#include "xiboot/sample.hpp"

// Closed forms for the moments of the resampled rank statistic: multinomial
// weight-sum moments, finite-difference coefficient families, strict-window
// cardinalities, the exact conditional mean of the window-count statistic and
// its (remainder-carrying) conditional variance, plus the i.i.d. expectations
// of the window cardinalities.  Every closed form here is paired with a
// brute-force oracle in enumeration.hpp.
namespace xiboot::theory {

// Moments of multinomial weight sums over pairwise disjoint index sets of
// sizes s_size, s2_size, t_size (weights M(n; 1/n,...,1/n)):
//   m1      = E[ (sum_S W) 1(sum_T W = 0) ]          = |S|(1-|T|/n)^{n-1}
//   m2      = E[ (sum_S W)^2 1(sum_T W = 0) ]        = m1 + |S|^2 (1-1/n)(1-|T|/n)^{n-2}
//   m_cross = E[ (sum_S W)(sum_S' W) 1(sum_T W = 0)] = |S||S'|(1-1/n)(1-|T|/n)^{n-2}
struct MultinomialMoments {
  double m1 = 0.0, m2 = 0.0, m_cross = 0.0;
};
MultinomialMoments multinomial_moments(std::int64_t s_size, std::int64_t s2_size,
                                       std::int64_t t_size, std::int64_t n);

struct MultinomialMomentsExact {
  Rational m1, m2, m_cross;
};
MultinomialMomentsExact multinomial_moments_exact(std::int64_t s_size, std::int64_t s2_size,
                                                  std::int64_t t_size, std::int64_t n);

// Finite differences of f(j) = (1 - j/n)^m in the gap length:
//   coeff_c(n,m,k)   = f(k-1) - 2 f(k) + f(k+1)                      (second difference)
//   coeff_a(n,m,k,l) = f(t-2) - 3f(t-1) + 3f(t) - f(t+1),  t = k+l   (third difference)
//   coeff_b(n,m,k,l) = f(t-2) - 4f(t-1) + 6f(t) - 4f(t+1) + f(t+2)   (fourth difference)
// Bases may go negative for large k+l; they are raised to integer powers as
// written.  The _exact variants evaluate in rational arithmetic (used by the
// identity tests, where high-order differences would otherwise cancel).
double coeff_a(std::int64_t n, std::int64_t m, std::int64_t k, std::int64_t l);
double coeff_b(std::int64_t n, std::int64_t m, std::int64_t k, std::int64_t l);
double coeff_c(std::int64_t n, std::int64_t m, std::int64_t k);
Rational coeff_a_exact(std::int64_t n, std::int64_t m, std::int64_t k, std::int64_t l);
Rational coeff_b_exact(std::int64_t n, std::int64_t m, std::int64_t k, std::int64_t l);
Rational coeff_c_exact(std::int64_t n, std::int64_t m, std::int64_t k);

// Strict-window counts on a tie-free Y sequence listed in increasing-X order,
// with the paper-style 1-based convention i in [1, n-1], k in [1, n-i]:
//   S(i,k) = { t : Y_i ^ Y_{i+k} < Y_t < Y_i v Y_{i+k} }  minus the index gap (i, i+k).
// The pairwise quantities intersect/difference the Y-windows of (i,k) and
// (j,l) and exclude both index gaps; the three sets are mutually disjoint.
struct WindowSets {
  std::int64_t s_ik = 0;       // |S(i,k)|
  std::int64_t s_cap = 0;      // |S(i,k) ∩-window S(j,l)|
  std::int64_t s_diff_ij = 0;  // |S(i,k) window-minus S(j,l)|
  std::int64_t s_diff_ji = 0;  // |S(j,l) window-minus S(i,k)|
};
std::int64_t window_size(std::span<const double> y_by_x, std::int64_t i, std::int64_t k);
WindowSets window_cardinalities(std::span<const double> y_by_x, std::int64_t i, std::int64_t k,
                                std::int64_t j, std::int64_t l);

// Exact conditional mean of the window-count statistic given the sample:
//   1 - 3/(n^2-1) * sum_i sum_k |S(i,k)| coeff_c(n, n-1, k).
// The double version truncates the k-sum only once its rigorous tail bound
// falls below one ulp of the result; the rational version (n <= 50) keeps
// every term.
double cond_exp_xibar(const BivariateSample& s);
double cond_exp_xibar(std::span<const double> y_by_x);
Rational cond_exp_xibar_exact(std::span<const double> y_by_x);

inline constexpr std::int64_t kCondVarMaxN = 60;

// Conditional variance of the window-count statistic given the sample, as the
// closed-form quadruple sum over (i, k), (j, l) pairs with the a/b/c
// coefficient families.  The closed form carries an O(1/n^2) remainder (terms
// dropped from the endpoint-indicator cross moments), so callers compare it
// against Monte Carlo within a calibrated C/n^2 band rather than exactly.
// O(n^4) terms; refuses n > kCondVarMaxN.
double cond_var_xibar(const BivariateSample& s);
double cond_var_xibar(std::span<const double> y_by_x);

// Expectations of the window cardinalities under i.i.d. continuous draws
// (Z_1..Z_n counted against windows built from Y_1..Y_4), all 14 closed forms.
struct CardExpectationTable {
  double s12_mean = 0.0;        // n/3
  double s12_sq = 0.0;          // n^2/6 + n/6
  double s1234_mean = 0.0;      // 2n/15
  double s1234_sq = 0.0;        // 2n^2/45 + 4n/45
  double s1234_s12d34 = 0.0;    // n^2/45 - n/45
  double s1234_s34d12 = 0.0;    // n^2/45 - n/45
  double s12d34_s34d12 = 0.0;   // n^2/45 - n/45
  double s1223_mean = 0.0;      // n/6
  double s1223_sq = 0.0;        // n^2/15 + n/10
  double s1223_s12d23 = 0.0;    // n^2/60 - n/60
  double s1223_s23d12 = 0.0;    // n^2/60 - n/60
  double s12d23_s23d12 = 0.0;   // n^2/60 - n/60
  double ind_s1234 = 0.0;       // n/15  (window indicator on Y_3 times S1234)
  double ind_s34d12 = 0.0;      // n/30  (window indicator on Y_3 times S34\12)
};
CardExpectationTable card_expectation_table(std::int64_t n);

// E[ sum_i W_i Lt_i (n - Lt_i) ] with Lt the weighted reversed rank of the
// resample: exactly (n-1)^2 (n^2 + 2n - 2) / (6n).
double weighted_l_mean(std::int64_t n);
Rational weighted_l_mean_exact(std::int64_t n);

struct AsymptoticConstants {
  double one_over_e = 0.0;  // limit of the resampled statistic's mean under independence
  double var_bound = 0.0;   // 3/5 - 8/(5 e^2), upper bound for lim n E[conditional variance]
  double null_var = 0.0;    // 2/5, limiting variance of sqrt(n) xi_n under independence
};
AsymptoticConstants asymptotic_constants();

}  // namespace xiboot::theory
