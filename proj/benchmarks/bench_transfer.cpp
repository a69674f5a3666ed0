#include <benchmark/benchmark.h>

#include "nevai/models.hpp"
#include "nevai/transfer.hpp"

using namespace nevai;

static void BM_TransferProduct(benchmark::State& state) {
  const auto seq = make_anderson(7);
  const auto N = static_cast<Index>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(transfer_product(seq, 0.4, N).log_norm());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TransferProduct)->Arg(1000)->Arg(100000);

static void BM_Lyapunov(benchmark::State& state) {
  const auto seq = make_constant(1.0, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_estimate(seq, 2.5, 100000).gamma_hat);
}
BENCHMARK(BM_Lyapunov);

static void BM_BlockSlope(benchmark::State& state) {
  const auto seq = make_block41();
  const Block c3 = seq.block_layout()->block(BlockKind::C, 3);
  for (auto _ : state) benchmark::DoNotOptimize(block_log_slope(seq, 1.5, c3));
}
BENCHMARK(BM_BlockSlope);
