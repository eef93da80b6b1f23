#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_helpers.hpp"
#include "xiboot/errors.hpp"
#include "xiboot/sample.hpp"

using namespace xiboot;

TEST_CASE("sample constructor validates") {
  CHECK_THROWS_AS(BivariateSample({1.0}, {2.0}), parameter_error);
  CHECK_THROWS_AS(BivariateSample({1.0, 2.0}, {2.0}), parameter_error);
  const BivariateSample tied({1.0, 1.0, 2.0}, {3.0, 4.0, 5.0});
  CHECK_FALSE(tied.continuous());
  const BivariateSample clean({1.0, 3.0, 2.0}, {3.0, 4.0, 5.0});
  CHECK(clean.continuous());
}

TEST_CASE("model spec boundary") {
  CHECK_THROWS_AS(gaussian_rotation_sample({1.0, 10, 1}), parameter_error);
  CHECK_THROWS_AS(gaussian_rotation_sample({-1.0, 10, 1}), parameter_error);
  CHECK_THROWS_AS(gaussian_rotation_sample({0.5, 1, 1}), parameter_error);
  CHECK_NOTHROW(gaussian_rotation_sample({0.999999, 10, 1}));
  CHECK_NOTHROW(gaussian_rotation_sample({0.9, 10, 1}));
}

TEST_CASE("identical spec gives bit-identical samples") {
  const auto a = gaussian_rotation_sample({0.3, 500, 12345});
  const auto b = gaussian_rotation_sample({0.3, 500, 12345});
  REQUIRE(a.sample.size() == b.sample.size());
  for (std::int64_t i = 0; i < a.sample.size(); ++i) {
    CHECK(a.sample.x()[i] == b.sample.x()[i]);
    CHECK(a.sample.y()[i] == b.sample.y()[i]);
  }
  CHECK(a.sample.continuous());
}

TEST_CASE("rho 0 gives independent coordinates") {
  // pool 250k samples of size 4 -> one million pairs
  std::vector<double> xs, ys;
  xs.reserve(1000000);
  ys.reserve(1000000);
  RngStream root(777);
  for (int rep = 0; rep < 250000; ++rep) {
    const auto draw = gaussian_rotation_sample(0.0, 4, root.derive(rep));
    xs.insert(xs.end(), draw.sample.x().begin(), draw.sample.x().end());
    ys.insert(ys.end(), draw.sample.y().begin(), draw.sample.y().end());
  }
  const double r = testutil::pearson(xs, ys);
  CHECK(std::fabs(r) < 3.0 / std::sqrt(1000000.0));
}

TEST_CASE("rho 0.5 concentrates at large n") {
  const auto draw = gaussian_rotation_sample({0.5, 1000000, 2024});
  const double r = testutil::pearson(draw.sample.x(), draw.sample.y());
  CHECK(std::fabs(r - 0.5) < 0.005);
}

TEST_CASE("marginals are standard normal") {
  const auto draw = gaussian_rotation_sample({0.7, 200000, 5});
  const double mx = testutil::mean(draw.sample.x());
  const double vy = testutil::sample_variance(draw.sample.y());
  CHECK(std::fabs(mx) < 0.01);
  CHECK(vy == doctest::Approx(1.0).epsilon(0.02));
}
