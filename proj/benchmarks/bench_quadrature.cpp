#include <benchmark/benchmark.h>

#include "polymax/coupling.hpp"
#include "polymax/limitcov.hpp"

using namespace polymax;

static void BM_SigmaSq(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(sigma_sq());
  }
}
BENCHMARK(BM_SigmaSq)->Unit(benchmark::kMicrosecond);

static void BM_CovKernel(benchmark::State& state) {
  double theta = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cov_kernel(theta));
    theta = theta < 6.0 ? theta + 0.1 : 0.3;
  }
}
BENCHMARK(BM_CovKernel)->Unit(benchmark::kMicrosecond);

static void BM_MuEps(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(mu_eps(0.01));
  }
}
BENCHMARK(BM_MuEps)->Unit(benchmark::kMicrosecond);
