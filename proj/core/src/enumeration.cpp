#include "xiboot/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "xiboot/bootstrap.hpp"
#include "xiboot/errors.hpp"
#include "xiboot/ranks.hpp"

namespace xiboot::enumeration {

namespace {

std::int64_t pow_i64(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_enum_n(int n) {
  if (n < 1 || n > kMaxEnumerationN) {
    throw parameter_error("enumeration: n must lie in [1, 8] (n^n draws)");
  }
}

// Odometer over all n^n index draws, maintaining the tally incrementally.
template <typename Fn>
void visit_draws(int n, Fn&& fn) {
  std::vector<int> draw(n, 0);
  std::vector<std::int32_t> w(n, 0);
  w[0] = static_cast<std::int32_t>(n);
  for (;;) {
    fn(std::span<const std::int32_t>(w));
    int pos = n - 1;
    while (pos >= 0 && draw[pos] == n - 1) {
      --w[draw[pos]];
      draw[pos] = 0;
      ++w[0];
      --pos;
    }
    if (pos < 0) break;
    --w[draw[pos]];
    ++draw[pos];
    ++w[draw[pos]];
  }
}

std::vector<std::int32_t> distinct_ranks(std::span<const double> y) {
  const RankVectors rv = compute_ranks(y);
  for (auto t : rv.tie_mult) {
    if (t > 1) throw parameter_error("enumeration: y values must be pairwise distinct");
  }
  return rv.r;
}

double mc_se(double sum, double sum_sq, double draws) {
  const double mean = sum / draws;
  const double var = std::max(0.0, sum_sq / draws - mean * mean);
  return std::sqrt(var / draws);
}

}  // namespace

void for_each_index_draw(int n, const std::function<void(std::span<const std::int32_t>)>& fn) {
  check_enum_n(n);
  visit_draws(n, fn);
}

theory::MultinomialMomentsExact enumerate_multinomial_moments(int s_size, int s2_size, int t_size,
                                                              int n) {
  check_enum_n(n);
  if (s_size < 0 || s2_size < 0 || t_size < 0 || s_size + s2_size + t_size > n) {
    throw parameter_error("enumerate_multinomial_moments: invalid set sizes");
  }
  // S = [0, s), S' = [s, s+s2), T = [s+s2, s+s2+t); exchangeability makes the
  // placement irrelevant
  std::int64_t m1 = 0, m2 = 0, cross = 0;
  visit_draws(n, [&](std::span<const std::int32_t> w) {
    std::int64_t t_sum = 0;
    for (int i = s_size + s2_size; i < s_size + s2_size + t_size; ++i) t_sum += w[i];
    if (t_sum != 0) return;
    std::int64_t s_sum = 0, s2_sum = 0;
    for (int i = 0; i < s_size; ++i) s_sum += w[i];
    for (int i = s_size; i < s_size + s2_size; ++i) s2_sum += w[i];
    m1 += s_sum;
    m2 += s_sum * s_sum;
    cross += s_sum * s2_sum;
  });
  const std::int64_t total = pow_i64(n, n);
  return {Rational(m1, total), Rational(m2, total), Rational(cross, total)};
}

Rational enumerate_cond_exp_xibar(std::span<const double> y_by_x) {
  const int n = static_cast<int>(y_by_x.size());
  check_enum_n(n);
  if (n < 2) throw parameter_error("enumerate_cond_exp_xibar: need n >= 2");
  const std::vector<std::int32_t> r = distinct_ranks(y_by_x);
  std::int64_t sum = 0;
  visit_draws(n, [&](std::span<const std::int32_t> w) { sum += bar_window_sum(r, w); });
  const std::int64_t total = pow_i64(n, n);
  return 1 - Rational(3, static_cast<std::int64_t>(n) * n - 1) * Rational(sum, total);
}

Rational enumerate_cond_var_xibar(std::span<const double> y_by_x) {
  const int n = static_cast<int>(y_by_x.size());
  check_enum_n(n);
  if (n < 2) throw parameter_error("enumerate_cond_var_xibar: need n >= 2");
  const std::vector<std::int32_t> r = distinct_ranks(y_by_x);
  std::int64_t sum = 0, sum_sq = 0;
  visit_draws(n, [&](std::span<const std::int32_t> w) {
    const std::int64_t s = bar_window_sum(r, w);
    sum += s;
    sum_sq += s * s;
  });
  const std::int64_t total = pow_i64(n, n);
  const Rational mean(sum, total);
  const Rational second(sum_sq, total);
  const Rational scale(9, (static_cast<std::int64_t>(n) * n - 1) * (static_cast<std::int64_t>(n) * n - 1));
  return scale * (second - mean * mean);
}

Rational enumerate_weighted_l_sum(std::span<const std::int32_t> y_rank) {
  const int n = static_cast<int>(y_rank.size());
  check_enum_n(n);
  std::int64_t sum = 0;
  visit_draws(n, [&](std::span<const std::int32_t> w) {
    for (int i = 0; i < n; ++i) {
      if (w[i] == 0) continue;
      std::int64_t lt = 0;
      for (int j = 0; j < n; ++j) {
        if (y_rank[j] >= y_rank[i]) lt += w[j];
      }
      sum += static_cast<std::int64_t>(w[i]) * lt * (n - lt);
    }
  });
  return Rational(sum, pow_i64(n, n));
}

McEstimate mc_window_mean(int n, int i, int k, std::int64_t draws, RngStream rng) {
  if (n < 2 || i < 1 || i > n - 1 || k < 1 || k > n - i) {
    throw parameter_error("mc_window_mean: index bounds");
  }
  double sum = 0.0, sum_sq = 0.0;
  std::vector<double> y(n);
  for (std::int64_t d = 0; d < draws; ++d) {
    for (auto& v : y) v = rng.uniform01();
    const auto [lo, hi] = std::minmax(y[i - 1], y[i + k - 1]);
    std::int64_t count = 0;
    for (int p = 0; p < n; ++p) {
      if (i - 1 < p && p < i + k - 1) continue;
      if (lo < y[p] && y[p] < hi) ++count;
    }
    sum += static_cast<double>(count);
    sum_sq += static_cast<double>(count * count);
  }
  const double dd = static_cast<double>(draws);
  return {sum / dd, mc_se(sum, sum_sq, dd)};
}

CardTableMc mc_card_expectations(int n, std::int64_t draws, RngStream rng) {
  if (n < 1) throw parameter_error("mc_card_expectations: n must be positive");
  constexpr int kQuantities = 14;
  double sum[kQuantities] = {};
  double sum_sq[kQuantities] = {};
  std::vector<double> z(n);
  double yv[4];

  for (std::int64_t d = 0; d < draws; ++d) {
    for (auto& v : z) v = rng.uniform01();
    for (auto& v : yv) v = rng.uniform01();
    const double lo12 = std::min(yv[0], yv[1]), hi12 = std::max(yv[0], yv[1]);
    const double lo34 = std::min(yv[2], yv[3]), hi34 = std::max(yv[2], yv[3]);
    const double lo23 = std::min(yv[1], yv[2]), hi23 = std::max(yv[1], yv[2]);

    std::int64_t s12 = 0, s1234 = 0, s12d34 = 0, s34d12 = 0;
    std::int64_t s1223 = 0, s12d23 = 0, s23d12 = 0;
    for (int p = 0; p < n; ++p) {
      const double v = z[p];
      const bool in12 = lo12 < v && v < hi12;
      const bool in34 = lo34 < v && v < hi34;
      const bool in23 = lo23 < v && v < hi23;
      if (in12) ++s12;
      if (in12 && in34) ++s1234;
      if (in12 && (v > hi34 || v < lo34)) ++s12d34;
      if (in34 && (v > hi12 || v < lo12)) ++s34d12;
      if (in12 && in23) ++s1223;
      if (in12 && (v > hi23 || v < lo23)) ++s12d23;
      if (in23 && (v > hi12 || v < lo12)) ++s23d12;
    }
    const double ind3 = (lo12 < yv[2] && yv[2] < hi12) ? 1.0 : 0.0;

    const double q[kQuantities] = {
        static_cast<double>(s12),
        static_cast<double>(s12 * s12),
        static_cast<double>(s1234),
        static_cast<double>(s1234 * s1234),
        static_cast<double>(s1234 * s12d34),
        static_cast<double>(s1234 * s34d12),
        static_cast<double>(s12d34 * s34d12),
        static_cast<double>(s1223),
        static_cast<double>(s1223 * s1223),
        static_cast<double>(s1223 * s12d23),
        static_cast<double>(s1223 * s23d12),
        static_cast<double>(s12d23 * s23d12),
        ind3 * static_cast<double>(s1234),
        ind3 * static_cast<double>(s34d12),
    };
    for (int q_i = 0; q_i < kQuantities; ++q_i) {
      sum[q_i] += q[q_i];
      sum_sq[q_i] += q[q_i] * q[q_i];
    }
  }

  const double dd = static_cast<double>(draws);
  CardTableMc out;
  double* means[kQuantities] = {
      &out.mean.s12_mean,      &out.mean.s12_sq,        &out.mean.s1234_mean,
      &out.mean.s1234_sq,      &out.mean.s1234_s12d34,  &out.mean.s1234_s34d12,
      &out.mean.s12d34_s34d12, &out.mean.s1223_mean,    &out.mean.s1223_sq,
      &out.mean.s1223_s12d23,  &out.mean.s1223_s23d12,  &out.mean.s12d23_s23d12,
      &out.mean.ind_s1234,     &out.mean.ind_s34d12,
  };
  double* ses[kQuantities] = {
      &out.se.s12_mean,      &out.se.s12_sq,        &out.se.s1234_mean,
      &out.se.s1234_sq,      &out.se.s1234_s12d34,  &out.se.s1234_s34d12,
      &out.se.s12d34_s34d12, &out.se.s1223_mean,    &out.se.s1223_sq,
      &out.se.s1223_s12d23,  &out.se.s1223_s23d12,  &out.se.s12d23_s23d12,
      &out.se.ind_s1234,     &out.se.ind_s34d12,
  };
  for (int q_i = 0; q_i < kQuantities; ++q_i) {
    *means[q_i] = sum[q_i] / dd;
    *ses[q_i] = mc_se(sum[q_i], sum_sq[q_i], dd);
  }
  return out;
}

McEstimate mc_weighted_l_mean(int n, std::int64_t draws, RngStream rng) {
  if (n < 1) throw parameter_error("mc_weighted_l_mean: n must be positive");
  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t d = 0; d < draws; ++d) {
    const BootstrapWeights w = draw_weights(n, rng);
    // Y taken increasing without loss of generality: Lt_i is the suffix sum
    std::int64_t suffix = 0, value = 0;
    for (int i = n - 1; i >= 0; --i) {
      suffix += w.w[i];
      value += static_cast<std::int64_t>(w.w[i]) * suffix * (n - suffix);
    }
    sum += static_cast<double>(value);
    sum_sq += static_cast<double>(value) * static_cast<double>(value);
  }
  const double dd = static_cast<double>(draws);
  return {sum / dd, mc_se(sum, sum_sq, dd)};
}

namespace {

std::vector<double> bar_values(const BivariateSample& s, std::int64_t draws, RngStream& rng) {
  if (!s.continuous()) throw parameter_error("mc conditional moments: sample must be tie-free");
  const auto n = s.size();
  const XOrdering ord = order_by_x(s.x());
  std::vector<double> y_by_x(n);
  for (std::int64_t p = 0; p < n; ++p) y_by_x[p] = s.y()[ord.perm[p]];
  const RankVectors rv = compute_ranks(y_by_x);

  std::vector<std::int32_t> w_by_x(n);
  std::vector<double> values(draws);
  const double scale = static_cast<double>(n) * static_cast<double>(n) - 1.0;
  for (std::int64_t d = 0; d < draws; ++d) {
    const BootstrapWeights w = draw_weights(n, rng);
    for (std::int64_t p = 0; p < n; ++p) w_by_x[p] = w.w[ord.perm[p]];
    values[d] = 1.0 - 3.0 * static_cast<double>(bar_window_sum(rv.r, w_by_x)) / scale;
  }
  return values;
}

}  // namespace

McEstimate mc_cond_exp_xibar(const BivariateSample& s, std::int64_t draws, RngStream rng) {
  const std::vector<double> values = bar_values(s, draws, rng);
  const double dd = static_cast<double>(draws);
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / dd;
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return {mean, std::sqrt(acc / dd / dd)};
}

McVariance mc_cond_var_xibar(const BivariateSample& s, std::int64_t draws, RngStream rng) {
  const std::vector<double> values = bar_values(s, draws, rng);
  const double dd = static_cast<double>(draws);
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / dd;
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double c = v - mean;
    m2 += c * c;
    m4 += c * c * c * c;
  }
  m2 /= dd;
  m4 /= dd;
  // standard error of the sample variance from the fourth central moment
  const double se = std::sqrt(std::max(0.0, m4 - m2 * m2) / dd);
  return {m2, se};
}

}  // namespace xiboot::enumeration
