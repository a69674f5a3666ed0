#include <benchmark/benchmark.h>

#include "nevai/models.hpp"
#include "nevai/spectral.hpp"

using namespace nevai;

static void BM_Eigenvalues(benchmark::State& state) {
  const auto M = truncate(make_fibonacci(0.0), static_cast<Index>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(M));
}
BENCHMARK(BM_Eigenvalues)->Arg(100)->Arg(500);

static void BM_SpectralMeasure(benchmark::State& state) {
  const auto M = truncate(make_fibonacci(0.0), static_cast<Index>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_measure_at(M, 1).weights);
}
BENCHMARK(BM_SpectralMeasure)->Arg(100)->Arg(500);
