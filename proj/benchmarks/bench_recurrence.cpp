#include <benchmark/benchmark.h>

#include "nevai/models.hpp"
#include "nevai/recurrence.hpp"

using namespace nevai;

static void BM_OrthoStream(benchmark::State& state) {
  const auto seq = make_block41();
  const auto N = static_cast<Index>(state.range(0));
  for (auto _ : state) {
    OrthoStream s(seq, 1.5);
    benchmark::DoNotOptimize(s.advance_to(N).nevai_ratio());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OrthoStream)->Arg(1000)->Arg(20000)->Arg(100000);

static void BM_CdKernelFormula(benchmark::State& state) {
  const auto seq = make_szwarc(0.4);
  for (auto _ : state) benchmark::DoNotOptimize(cd_kernel_formula(seq, 0.3, 0.7, 200));
}
BENCHMARK(BM_CdKernelFormula);

static void BM_CdKernelDirect(benchmark::State& state) {
  const auto seq = make_szwarc(0.4);
  for (auto _ : state) benchmark::DoNotOptimize(cd_kernel_direct(seq, 0.3, 0.7, 200));
}
BENCHMARK(BM_CdKernelDirect);

static void BM_EtaMoment(benchmark::State& state) {
  const auto seq = make_anderson(3);
  const auto k = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eta_moment_k(seq, 0.2, 1000, k, 0.2));
}
BENCHMARK(BM_EtaMoment)->Arg(2)->Arg(8)->Arg(30);
