#include <benchmark/benchmark.h>

#include <complex>

#include "nevai/green.hpp"
#include "nevai/models.hpp"

using namespace nevai;

static void BM_GreenColumn(benchmark::State& state) {
  const auto seq = make_free();
  const auto N = static_cast<Index>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(green_column(seq, N, Complex(0.5, 1e-3), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GreenColumn)->Arg(1000)->Arg(100000);

static void BM_MiddleGreen(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(middle_green(600, 1, 600, 1.5));
}
BENCHMARK(BM_MiddleGreen);
