#include "xiboot/theory.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "xiboot/errors.hpp"
#include "xiboot/ranks.hpp"

namespace xiboot {

Rational rational_pow(const Rational& base, std::int64_t e) {
  if (e < 0) throw parameter_error("rational_pow: negative exponent");
  Rational result(1);
  Rational b = base;
  for (std::uint64_t k = static_cast<std::uint64_t>(e); k != 0; k >>= 1) {
    if (k & 1) result *= b;
    b *= b;
  }
  return result;
}

}  // namespace xiboot

namespace xiboot::theory {

namespace {

double pow_int(double base, std::int64_t e) {
  if (e < 0) return 1.0 / pow_int(base, -e);
  double result = 1.0, b = base;
  for (std::uint64_t k = static_cast<std::uint64_t>(e); k != 0; k >>= 1) {
    if (k & 1) result *= b;
    b *= b;
  }
  return result;
}

// f(j) = (1 - j/n)^m; the shared base of all coefficient families.
double fbase(std::int64_t n, std::int64_t j, std::int64_t m) {
  return pow_int(1.0 - static_cast<double>(j) / static_cast<double>(n), m);
}

Rational fbase_exact(std::int64_t n, std::int64_t j, std::int64_t m) {
  return rational_pow(Rational(n - j, n), m);
}

std::vector<std::int32_t> distinct_ranks(std::span<const double> y) {
  const RankVectors rv = compute_ranks(y);
  for (auto t : rv.tie_mult) {
    if (t > 1) throw parameter_error("theory: y values must be pairwise distinct");
  }
  return rv.r;
}

// |S(i,k)| from the rank sequence (1-based i, paper convention).
std::int64_t window_from_ranks(std::span<const std::int32_t> r, std::int64_t i, std::int64_t k) {
  const auto [lo, hi] = std::minmax(r[i - 1], r[i + k - 1]);
  std::int64_t count = hi - lo - 1;  // ranks strictly between the endpoints
  for (std::int64_t p = i; p <= i + k - 2; ++p) {
    if (lo < r[p] && r[p] < hi) --count;  // drop in-gap indices
  }
  return count;
}

void check_pair_bounds(std::int64_t n, std::int64_t i, std::int64_t k, const char* what) {
  if (i < 1 || i > n - 1 || k < 1 || k > n - i) {
    throw parameter_error(std::string("window_cardinalities: ") + what + " out of bounds");
  }
}

}  // namespace

MultinomialMoments multinomial_moments(std::int64_t s_size, std::int64_t s2_size,
                                       std::int64_t t_size, std::int64_t n) {
  if (n < 1) throw parameter_error("multinomial_moments: n must be positive");
  if (s_size < 0 || s2_size < 0 || t_size < 0 || s_size + s2_size + t_size > n) {
    throw parameter_error("multinomial_moments: set sizes must be nonnegative and sum to at most n");
  }
  const double s = static_cast<double>(s_size);
  const double s2 = static_cast<double>(s2_size);
  const double m1 = s * fbase(n, t_size, n - 1);
  const double shrink = 1.0 - 1.0 / static_cast<double>(n);
  const double pair = n >= 2 ? shrink * fbase(n, t_size, n - 2) : 0.0;
  return {m1, m1 + s * s * pair, s * s2 * pair};
}

MultinomialMomentsExact multinomial_moments_exact(std::int64_t s_size, std::int64_t s2_size,
                                                  std::int64_t t_size, std::int64_t n) {
  if (n < 1) throw parameter_error("multinomial_moments_exact: n must be positive");
  if (s_size < 0 || s2_size < 0 || t_size < 0 || s_size + s2_size + t_size > n) {
    throw parameter_error(
        "multinomial_moments_exact: set sizes must be nonnegative and sum to at most n");
  }
  const Rational m1 = Rational(s_size) * fbase_exact(n, t_size, n - 1);
  const Rational pair =
      n >= 2 ? Rational(n - 1, n) * fbase_exact(n, t_size, n - 2) : Rational(0);
  return {m1, m1 + Rational(s_size) * Rational(s_size) * pair,
          Rational(s_size) * Rational(s2_size) * pair};
}

double coeff_a(std::int64_t n, std::int64_t m, std::int64_t k, std::int64_t l) {
  const std::int64_t t = k + l;
  return fbase(n, t - 2, m) - 3.0 * fbase(n, t - 1, m) + 3.0 * fbase(n, t, m) -
         fbase(n, t + 1, m);
}

double coeff_b(std::int64_t n, std::int64_t m, std::int64_t k, std::int64_t l) {
  const std::int64_t t = k + l;
  return fbase(n, t - 2, m) - 4.0 * fbase(n, t - 1, m) + 6.0 * fbase(n, t, m) -
         4.0 * fbase(n, t + 1, m) + fbase(n, t + 2, m);
}

double coeff_c(std::int64_t n, std::int64_t m, std::int64_t k) {
  return fbase(n, k - 1, m) - 2.0 * fbase(n, k, m) + fbase(n, k + 1, m);
}

Rational coeff_a_exact(std::int64_t n, std::int64_t m, std::int64_t k, std::int64_t l) {
  const std::int64_t t = k + l;
  return fbase_exact(n, t - 2, m) - 3 * fbase_exact(n, t - 1, m) + 3 * fbase_exact(n, t, m) -
         fbase_exact(n, t + 1, m);
}

Rational coeff_b_exact(std::int64_t n, std::int64_t m, std::int64_t k, std::int64_t l) {
  const std::int64_t t = k + l;
  return fbase_exact(n, t - 2, m) - 4 * fbase_exact(n, t - 1, m) + 6 * fbase_exact(n, t, m) -
         4 * fbase_exact(n, t + 1, m) + fbase_exact(n, t + 2, m);
}

Rational coeff_c_exact(std::int64_t n, std::int64_t m, std::int64_t k) {
  return fbase_exact(n, k - 1, m) - 2 * fbase_exact(n, k, m) + fbase_exact(n, k + 1, m);
}

std::int64_t window_size(std::span<const double> y_by_x, std::int64_t i, std::int64_t k) {
  const auto n = static_cast<std::int64_t>(y_by_x.size());
  check_pair_bounds(n, i, k, "(i, k)");
  return window_from_ranks(distinct_ranks(y_by_x), i, k);
}

WindowSets window_cardinalities(std::span<const double> y_by_x, std::int64_t i, std::int64_t k,
                                std::int64_t j, std::int64_t l) {
  const auto n = static_cast<std::int64_t>(y_by_x.size());
  check_pair_bounds(n, i, k, "(i, k)");
  check_pair_bounds(n, j, l, "(j, l)");
  const std::vector<std::int32_t> r = distinct_ranks(y_by_x);

  const auto [lo1, hi1] = std::minmax(r[i - 1], r[i + k - 1]);
  const auto [lo2, hi2] = std::minmax(r[j - 1], r[j + l - 1]);
  const auto in_gap = [&](std::int64_t p) {
    return (i - 1 < p && p < i + k - 1) || (j - 1 < p && p < j + l - 1);
  };

  WindowSets out;
  out.s_ik = window_from_ranks(r, i, k);
  for (std::int64_t p = 0; p < n; ++p) {
    if (in_gap(p)) continue;
    const std::int32_t rp = r[p];
    const bool in1 = lo1 < rp && rp < hi1;
    const bool in2 = lo2 < rp && rp < hi2;
    if (in1 && in2) ++out.s_cap;
    if (in1 && !in2 && (rp > hi2 || rp < lo2)) ++out.s_diff_ij;
    if (in2 && !in1 && (rp > hi1 || rp < lo1)) ++out.s_diff_ji;
  }
  return out;
}

double cond_exp_xibar(std::span<const double> y_by_x) {
  const auto n = static_cast<std::int64_t>(y_by_x.size());
  if (n < 2) throw parameter_error("cond_exp_xibar: need at least 2 observations");
  const std::vector<std::int32_t> r = distinct_ranks(y_by_x);

  double total = 0.0;
  for (std::int64_t k = 1; k <= n - 1; ++k) {
    // remaining contribution is at most 3 * f(k-1) after normalization: the
    // coefficient sum over k' >= k telescopes to f(k-1) - f(k) and the window
    // sums are below n^2
    const double fkm1 = fbase(n, k - 1, n - 1);
    if (3.0 * fkm1 < 1e-19) break;
    const double ck = fkm1 - 2.0 * fbase(n, k, n - 1) + fbase(n, k + 1, n - 1);
    std::int64_t row = 0;
    for (std::int64_t i = 1; i <= n - k; ++i) row += window_from_ranks(r, i, k);
    total += ck * static_cast<double>(row);
  }
  return 1.0 - 3.0 * total / static_cast<double>(n * n - 1);
}

double cond_exp_xibar(const BivariateSample& s) {
  if (!s.continuous()) throw parameter_error("cond_exp_xibar: sample must be tie-free");
  const XOrdering ord = order_by_x(s.x());
  std::vector<double> y_by_x(s.size());
  for (std::int64_t p = 0; p < s.size(); ++p) y_by_x[p] = s.y()[ord.perm[p]];
  return cond_exp_xibar(y_by_x);
}

Rational cond_exp_xibar_exact(std::span<const double> y_by_x) {
  const auto n = static_cast<std::int64_t>(y_by_x.size());
  if (n < 2 || n > 50) throw parameter_error("cond_exp_xibar_exact: supported for 2 <= n <= 50");
  const std::vector<std::int32_t> r = distinct_ranks(y_by_x);

  Rational total(0);
  for (std::int64_t k = 1; k <= n - 1; ++k) {
    const Rational ck = coeff_c_exact(n, n - 1, k);
    std::int64_t row = 0;
    for (std::int64_t i = 1; i <= n - k; ++i) row += window_from_ranks(r, i, k);
    total += ck * row;
  }
  return 1 - Rational(3, n * n - 1) * total;
}

double cond_var_xibar(std::span<const double> y_by_x) {
  const auto n = static_cast<std::int64_t>(y_by_x.size());
  if (n < 2) throw parameter_error("cond_var_xibar: need at least 2 observations");
  if (n > kCondVarMaxN) {
    throw parameter_error(
        "cond_var_xibar: n exceeds the O(n^4) guard (60); use the Monte Carlo "
        "conditional-variance oracle for larger samples");
  }
  const std::vector<std::int32_t> r = distinct_ranks(y_by_x);
  const double shrink = 1.0 - 1.0 / static_cast<double>(n);

  std::vector<double> c1(n), c2(n);
  for (std::int64_t k = 1; k <= n - 1; ++k) {
    c1[k] = coeff_c(n, n - 1, k);
    c2[k] = coeff_c(n, n - 2, k);
  }
  // third/fourth differences depend on k+l only
  std::vector<double> a1(2 * n), a2(2 * n), b1(2 * n), b2(2 * n);
  for (std::int64_t t = 2; t <= 2 * n - 2; ++t) {
    a1[t] = coeff_a(n, n - 1, t - 1, 1);
    a2[t] = coeff_a(n, n - 2, t - 1, 1);
    b1[t] = coeff_b(n, n - 1, t - 1, 1);
    b2[t] = coeff_b(n, n - 2, t - 1, 1);
  }

  std::vector<std::int64_t> sik(n * n, 0);  // (i-1)*n + k
  double single = 0.0, mean_sum = 0.0;
  for (std::int64_t i = 1; i <= n - 1; ++i) {
    for (std::int64_t k = 1; k <= n - i; ++k) {
      const std::int64_t s = window_from_ranks(r, i, k);
      sik[(i - 1) * n + k] = s;
      const double sd = static_cast<double>(s);
      single += sd * c1[k] + sd * sd * c2[k] * shrink;
      mean_sum += sd * c1[k];
    }
  }

  const auto in_single_window = [&](std::int64_t i, std::int64_t k, std::int64_t pos) {
    const auto [lo, hi] = std::minmax(r[i - 1], r[i + k - 1]);
    const std::int32_t rp = r[pos];
    return lo < rp && rp < hi && !(i - 1 < pos && pos < i + k - 1);
  };

  double cross = 0.0;
  for (std::int64_t i = 1; i <= n - 2; ++i) {
    for (std::int64_t j = i + 1; j <= n - 1; ++j) {
      const std::int64_t kmax = std::min(j - i, n - i);
      for (std::int64_t k = 1; k <= kmax; ++k) {
        const bool adjacent = (k == j - i);  // windows share the index i+k == j
        const auto [lo1, hi1] = std::minmax(r[i - 1], r[i + k - 1]);
        for (std::int64_t l = 1; l <= n - j; ++l) {
          const auto [lo2, hi2] = std::minmax(r[j - 1], r[j + l - 1]);
          std::int64_t cap = 0, dij = 0, dji = 0;
          for (std::int64_t p = 0; p < n; ++p) {
            if ((i - 1 < p && p < i + k - 1) || (j - 1 < p && p < j + l - 1)) continue;
            const std::int32_t rp = r[p];
            const bool in1 = lo1 < rp && rp < hi1;
            const bool in2 = lo2 < rp && rp < hi2;
            // a point sitting on the other window's endpoint belongs to
            // neither the intersection nor the difference sets
            if (in1 && in2) ++cap;
            else if (in1 && (rp > hi2 || rp < lo2)) ++dij;
            else if (in2 && (rp > hi1 || rp < lo1)) ++dji;
          }
          const std::int64_t t = k + l;
          const double g1 = adjacent ? a1[t] : b1[t];
          const double g2 = adjacent ? a2[t] : b2[t];
          double term = static_cast<double>(cap) * g1 +
                        static_cast<double>(cap + dij) * static_cast<double>(cap + dji) * g2 *
                            shrink;
          if (!adjacent) {
            const int ind_ik = static_cast<int>(in_single_window(i, k, j - 1)) +
                               static_cast<int>(in_single_window(i, k, j + l - 1));
            const int ind_jl = static_cast<int>(in_single_window(j, l, i - 1)) +
                               static_cast<int>(in_single_window(j, l, i + k - 1));
            term += (static_cast<double>(ind_ik) * static_cast<double>(cap + dji) +
                     static_cast<double>(ind_jl) * static_cast<double>(cap + dij)) *
                    a2[t] * shrink;
          }
          cross += term;
        }
      }
    }
  }

  const double scale = static_cast<double>(n * n - 1);
  return 9.0 / (scale * scale) * (single + 2.0 * cross - mean_sum * mean_sum);
}

double cond_var_xibar(const BivariateSample& s) {
  if (!s.continuous()) throw parameter_error("cond_var_xibar: sample must be tie-free");
  const XOrdering ord = order_by_x(s.x());
  std::vector<double> y_by_x(s.size());
  for (std::int64_t p = 0; p < s.size(); ++p) y_by_x[p] = s.y()[ord.perm[p]];
  return cond_var_xibar(y_by_x);
}

CardExpectationTable card_expectation_table(std::int64_t n) {
  if (n < 1) throw parameter_error("card_expectation_table: n must be positive");
  const double nd = static_cast<double>(n);
  const double n2 = nd * nd;
  CardExpectationTable t;
  t.s12_mean = nd / 3.0;
  t.s12_sq = n2 / 6.0 + nd / 6.0;
  t.s1234_mean = 2.0 * nd / 15.0;
  t.s1234_sq = 2.0 * n2 / 45.0 + 4.0 * nd / 45.0;
  t.s1234_s12d34 = t.s1234_s34d12 = t.s12d34_s34d12 = n2 / 45.0 - nd / 45.0;
  t.s1223_mean = nd / 6.0;
  t.s1223_sq = n2 / 15.0 + nd / 10.0;
  t.s1223_s12d23 = t.s1223_s23d12 = t.s12d23_s23d12 = n2 / 60.0 - nd / 60.0;
  t.ind_s1234 = nd / 15.0;
  t.ind_s34d12 = nd / 30.0;
  return t;
}

double weighted_l_mean(std::int64_t n) {
  if (n < 1) throw parameter_error("weighted_l_mean: n must be positive");
  const double nd = static_cast<double>(n);
  return (nd - 1.0) * (nd - 1.0) * (nd * nd + 2.0 * nd - 2.0) / (6.0 * nd);
}

Rational weighted_l_mean_exact(std::int64_t n) {
  if (n < 1) throw parameter_error("weighted_l_mean_exact: n must be positive");
  const BigInt nn(n);
  return Rational((nn - 1) * (nn - 1) * (nn * nn + 2 * nn - 2), 6 * nn);
}

AsymptoticConstants asymptotic_constants() {
  return {std::exp(-1.0), 3.0 / 5.0 - 8.0 / 5.0 * std::exp(-2.0), 2.0 / 5.0};
}

}  // namespace xiboot::theory
