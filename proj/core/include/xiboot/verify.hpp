#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xiboot {

enum class VerifyLevel { fast, full };

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;  // 0 means the comparison was exact
  std::string note;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
};

// Runs the closed-form-versus-oracle agreement suite: exhaustive enumeration
// checks, rational telescoping identities, Monte Carlo expectation checks and
// the asymptotic-constant diagnostics.  fast stays under a couple of minutes;
// full adds the larger-sample drift and variance-trend checks.
VerifyReport verify_theory(VerifyLevel level, std::uint64_t seed);

}  // namespace xiboot
