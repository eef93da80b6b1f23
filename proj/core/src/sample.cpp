#include "xiboot/sample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "xiboot/errors.hpp"

namespace xiboot {

namespace {

bool all_distinct(std::span<const double> v) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

}  // namespace

BivariateSample::BivariateSample(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) {
    throw parameter_error("BivariateSample: x and y lengths differ");
  }
  if (x_.size() < 2) {
    throw parameter_error("BivariateSample: need at least 2 observations");
  }
  continuous_ = all_distinct(x_) && all_distinct(y_);
}

GaussianDraw gaussian_rotation_sample(double rho, std::int64_t n, RngStream stream) {
  if (!(std::fabs(rho) < 1.0)) {
    throw parameter_error("gaussian_rotation_sample: rho must lie in (-1, 1)");
  }
  if (n < 2) throw parameter_error("gaussian_rotation_sample: n must be at least 2");

  const double beta = std::sqrt(1.0 - rho * rho);
  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    RngStream draw = stream.derive(static_cast<std::uint64_t>(attempt));
    std::vector<double> x(n), y(n);
    for (std::int64_t i = 0; i < n; ++i) {
      x[i] = draw.normal();
      y[i] = rho * x[i] + beta * draw.normal();
    }
    BivariateSample s(std::move(x), std::move(y));
    if (s.continuous()) return {std::move(s), attempt};
  }
  throw std::runtime_error("gaussian_rotation_sample: persistent duplicate coordinates");
}

GaussianDraw gaussian_rotation_sample(const ModelSpec& spec) {
  return gaussian_rotation_sample(spec.rho, spec.n, RngStream(spec.seed));
}

}  // namespace xiboot
