#include <benchmark/benchmark.h>

#include "polymax/bridge.hpp"
#include "polymax/rng.hpp"

using namespace polymax;

static void BM_SampleBridge(benchmark::State& state) {
  const auto M = static_cast<std::size_t>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    RngStream rng(3, i++);
    benchmark::DoNotOptimize(
        sample_bridge(M, BridgeScaling::UnitVarianceNormalized, rng));
  }
}
BENCHMARK(BM_SampleBridge)->Arg(512)->Arg(2048);

static void BM_AllShifts(benchmark::State& state) {
  const auto M = static_cast<std::size_t>(state.range(0));
  RngStream rng(4, 0);
  const auto p = sample_bridge(M, BridgeScaling::UnitVarianceNormalized, rng);
  const auto table = ShiftIntegralTable::build(M, IntegralConfig{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(integral_all_shifts(p, table));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(M) *
                          static_cast<std::int64_t>(M));
}
BENCHMARK(BM_AllShifts)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
