#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xiboot/rng.hpp"

namespace xiboot {

// Bivariate Gaussian with standard normal marginals and correlation rho,
// sampled n times from the stream rooted at seed.
struct ModelSpec {
  double rho = 0.0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

// Paired observations (x_i, y_i); the unit of all estimation.
class BivariateSample {
 public:
  // Throws parameter_error if the lengths differ or are below 2.
  BivariateSample(std::vector<double> x, std::vector<double> y);

  std::int64_t size() const { return static_cast<std::int64_t>(x_.size()); }
  std::span<const double> x() const { return x_; }
  std::span<const double> y() const { return y_; }

  // True iff all x are pairwise distinct and all y are pairwise distinct.
  bool continuous() const { return continuous_; }

 private:
  std::vector<double> x_, y_;
  bool continuous_ = false;
};

struct GaussianDraw {
  BivariateSample sample;
  // Times the whole sample was redrawn because finite-precision arithmetic
  // produced a duplicate coordinate (measure zero in exact arithmetic).
  int collision_regens = 0;
};

// y = rho * x + sqrt(1 - rho^2) * z with x, z independent standard normals.
// Deterministic given the seed/stream; the returned sample always has the
// continuous flag set.
GaussianDraw gaussian_rotation_sample(const ModelSpec& spec);
GaussianDraw gaussian_rotation_sample(double rho, std::int64_t n, RngStream stream);

}  // namespace xiboot
