#include "xiboot/xi.hpp"

#include <cmath>
#include <cstdlib>

#include "xiboot/errors.hpp"

namespace xiboot {

namespace {

std::int64_t rank_diff_sum(const RankVectors& rv, const XOrdering& ord) {
  std::int64_t sum = 0;
  for (std::size_t p = 0; p + 1 < ord.perm.size(); ++p) {
    sum += std::abs(static_cast<std::int64_t>(rv.r[ord.perm[p + 1]]) - rv.r[ord.perm[p]]);
  }
  return sum;
}

}  // namespace

XiEstimate xi_general(const BivariateSample& s, TieBreak tb) {
  const std::int64_t n = s.size();
  const RankVectors rv = compute_ranks(s.y());

  std::int64_t denom = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    denom += static_cast<std::int64_t>(rv.l[i]) * (n - rv.l[i]);
  }
  denom *= 2;
  if (denom == 0) {
    throw degenerate_sample_error("xi_general: all Y values are equal, statistic undefined");
  }

  const XOrdering ord = order_by_x(s.x(), tb);
  const std::int64_t num = rank_diff_sum(rv, ord);
  // n * num <= n^3 stays exact in a 64-bit mantissa for any n this library sees
  const double value =
      1.0 - static_cast<double>(static_cast<long double>(num) * static_cast<long double>(n) /
                                static_cast<long double>(denom));
  return {value, XiForm::general, n, tb};
}

XiEstimate xi_simple(const BivariateSample& s, TieBreak tb) {
  const std::int64_t n = s.size();
  const RankVectors rv = compute_ranks(s.y());
  for (std::int64_t i = 0; i < n; ++i) {
    if (rv.tie_mult[i] > 1) {
      throw parameter_error("xi_simple: Y contains ties; use xi_general");
    }
  }

  const XOrdering ord = order_by_x(s.x(), tb);
  const std::int64_t num = rank_diff_sum(rv, ord);
  const double value = 1.0 - 3.0 * static_cast<double>(num) / static_cast<double>(n * n - 1);
  return {value, XiForm::simple, n, tb};
}

}  // namespace xiboot
