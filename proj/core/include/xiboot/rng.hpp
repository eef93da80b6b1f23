#pragma once

#include <array>
#include <cstdint>

namespace xiboot {

double normal_cdf(double x);
// Inverse of the standard normal CDF; p must lie strictly inside (0, 1).
double normal_quantile(double p);

// Splittable pseudo-random stream.
//
// A 64-bit key drives a xoshiro256++ engine.  derive(id) yields a child stream
// whose key depends only on (key, id) and never on how far the parent has been
// consumed, so (seed, path-of-ids) identifies a reproducible stream no matter
// which thread runs it or in which order.  The Monte Carlo harness keys every
// replication and bootstrap replicate this way.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) { reset_from_key(mix(0x9b97a2d1c314f6e5ULL, seed)); }

  RngStream derive(std::uint64_t id) const { return RngStream(mix(key_, id), FromKey{}); }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double strictly inside (0, 1).
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on {0, ..., bound-1}, unbiased via rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0ULL - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal by CDF inversion (platform-stable, unlike
  // std::normal_distribution).
  double normal();

 private:
  struct FromKey {};
  RngStream(std::uint64_t key, FromKey) { reset_from_key(key); }

  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  // splitmix64 output function on (key advanced by id+1 steps): distinct ids
  // give statistically independent child keys.
  static std::uint64_t mix(std::uint64_t key, std::uint64_t id) {
    std::uint64_t z = key + 0x9e3779b97f4a7c15ULL * (id + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  void reset_from_key(std::uint64_t key) {
    key_ = key;
    std::uint64_t sm = key;
    for (auto& w : s_) {
      sm += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = sm;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      w = z ^ (z >> 31);
    }
    s_[0] |= 1;  // xoshiro state must not be all zero
  }

  std::uint64_t key_ = 0;
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace xiboot
