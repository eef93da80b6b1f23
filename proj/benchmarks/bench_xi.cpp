#include <benchmark/benchmark.h>

#include <vector>

#include "xiboot/ranks.hpp"
#include "xiboot/sample.hpp"
#include "xiboot/xi.hpp"

namespace {

xiboot::BivariateSample make_sample(std::int64_t n) {
  return xiboot::gaussian_rotation_sample(0.3, n, xiboot::RngStream(42)).sample;
}

void BM_ComputeRanks(benchmark::State& state) {
  const auto s = make_sample(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(xiboot::compute_ranks(s.y()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ComputeRanks)->RangeMultiplier(10)->Range(1000, 1000000);

void BM_XiSimple(benchmark::State& state) {
  const auto s = make_sample(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(xiboot::xi_simple(s).value);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_XiSimple)->RangeMultiplier(10)->Range(1000, 1000000);

void BM_XiGeneral(benchmark::State& state) {
  const auto s = make_sample(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(xiboot::xi_general(s).value);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_XiGeneral)->RangeMultiplier(10)->Range(1000, 100000);

}  // namespace
