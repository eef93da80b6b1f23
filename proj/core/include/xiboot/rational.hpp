#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace xiboot {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// base^e for e >= 0 (negative bases allowed: these are polynomial identities,
// not probabilities).
Rational rational_pow(const Rational& base, std::int64_t e);

}  // namespace xiboot
