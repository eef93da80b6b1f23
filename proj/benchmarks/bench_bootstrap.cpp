#include <benchmark/benchmark.h>

#include "xiboot/bootstrap.hpp"
#include "xiboot/sample.hpp"

namespace {

xiboot::BivariateSample make_sample(std::int64_t n) {
  return xiboot::gaussian_rotation_sample(0.0, n, xiboot::RngStream(7)).sample;
}

void BM_DrawWeights(benchmark::State& state) {
  xiboot::RngStream rng(1);
  const std::int64_t n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(xiboot::draw_weights(n, rng));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_DrawWeights)->RangeMultiplier(10)->Range(1000, 100000);

// replicate statistic via the original-index route (the production path)
void BM_ReplicateHat(benchmark::State& state) {
  const auto s = make_sample(state.range(0));
  xiboot::RngStream rng(2);
  for (auto _ : state) {
    const auto w = xiboot::draw_weights(s.size(), rng);
    benchmark::DoNotOptimize(xiboot::xi_hat_b(s, w));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReplicateHat)->RangeMultiplier(10)->Range(1000, 100000);

// replicate statistic by materializing the resample (the reference path)
void BM_ReplicateDirect(benchmark::State& state) {
  const auto s = make_sample(state.range(0));
  xiboot::RngStream rng(3);
  for (auto _ : state) {
    const auto w = xiboot::draw_weights(s.size(), rng);
    if (!resample_is_degenerate(s, w)) {
      benchmark::DoNotOptimize(xiboot::xi_boot_direct(s, w));
    }
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReplicateDirect)->RangeMultiplier(10)->Range(1000, 100000);

void BM_BootstrapDistribution(benchmark::State& state) {
  const auto s = make_sample(1000);
  const xiboot::RngStream root(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        xiboot::bootstrap_distribution(s, state.range(0), root, xiboot::BootStatistic::hat));
  }
}
BENCHMARK(BM_BootstrapDistribution)->Arg(100)->Arg(500)->Arg(2000);

}  // namespace
