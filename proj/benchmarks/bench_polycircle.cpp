#include <benchmark/benchmark.h>

#include "polymax/polycircle.hpp"
#include "polymax/rng.hpp"

using namespace polymax;

static void BM_LogMagnitude(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  RngStream rng(1, 0);
  const auto s = sample_poly(MultiplicitySpec::constant(1), N, rng);
  double psi = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_magnitude(s, psi));
    psi += 1e-4;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(N));
}
BENCHMARK(BM_LogMagnitude)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_Maximize(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  RngStream rng(2, 0);
  const auto s = sample_poly(MultiplicitySpec::constant(1), N, rng);
  const auto cfg = GridConfig::for_degree(N);
  for (auto _ : state) {
    benchmark::DoNotOptimize(maximize(s, cfg).t_star);
  }
}
BENCHMARK(BM_Maximize)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);
