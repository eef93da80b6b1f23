#pragma once

#include <stdexcept>

namespace xiboot {

// Invalid arguments or configuration values (CLI exit code 2).
class parameter_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The rank statistic's denominator vanished: every Y value in the (re)sample
// is identical, so the statistic is undefined there.
class degenerate_sample_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical oracle could not reach its requested accuracy.
class oracle_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File-format or filesystem problems (CLI exit code 4).
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xiboot
