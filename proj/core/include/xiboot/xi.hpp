#pragma once

#include <cstdint>

#include "xiboot/ranks.hpp"
#include "xiboot/sample.hpp"

namespace xiboot {

enum class XiForm { general, simple };

struct XiEstimate {
  double value = 0.0;
  XiForm form = XiForm::general;
  std::int64_t n = 0;
  TieBreak tie_break;
};

// Rank correlation from rank differences of Y along the X-ordering, in the
// tie-aware form
//   1 - n * sum_{i<n} |R_[i+1] - R_[i]|  /  (2 * sum_i L_i (n - L_i)).
// Integer accumulation throughout; floating point only at the final division.
// Throws degenerate_sample_error when all Y are equal (zero denominator) and
// parameter_error for n < 2.
XiEstimate xi_general(const BivariateSample& s, TieBreak tb = {});

// Tie-free specialization 1 - 3 * sum|dR| / (n^2 - 1).  Throws parameter_error
// if Y contains ties (use xi_general there).
XiEstimate xi_simple(const BivariateSample& s, TieBreak tb = {});

}  // namespace xiboot
