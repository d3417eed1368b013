#include <benchmark/benchmark.h>

#include "jetflow/analysis.hpp"
#include "jetflow/generators.hpp"
#include "jetflow/matching.hpp"
#include "jetflow/properties.hpp"

using namespace jetflow;

namespace {

void BM_BackwardProduct(benchmark::State& state) {
  const ChainSpec spec = gen_doubly_stochastic(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(backward_product(spec, 0, 500));
  }
}
BENCHMARK(BM_BackwardProduct)->Arg(8)->Arg(16);

void BM_Islands(benchmark::State& state) {
  const ChainSpec spec = gen_self_confident_cut_balanced(
      static_cast<int>(state.range(0)), 5, 0.3, 1.5, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(islands(spec, 500, 50.0));
  }
}
BENCHMARK(BM_Islands)->Arg(8)->Arg(16);

void BM_SelfConfidentPermutation(benchmark::State& state) {
  const StochasticMatrix a =
      matrix_at(gen_balanced_asymmetric(static_cast<int>(state.range(0)), 7), 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(self_confident_permutation(a, 1.0));
  }
}
BENCHMARK(BM_SelfConfidentPermutation)->Arg(8)->Arg(32);

void BM_CutBalanceExhaustive(benchmark::State& state) {
  const StochasticMatrix a = matrix_at(
      gen_self_confident_cut_balanced(static_cast<int>(state.range(0)), 2, 0.3, 2.0), 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_cut_balance(a, 2.0));
  }
}
BENCHMARK(BM_CutBalanceExhaustive)->Arg(8)->Arg(12);

void BM_Classify(benchmark::State& state) {
  const ChainSpec spec = gen_self_confident_cut_balanced(8, 11, 0.3, 1.5, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify(spec, 500, 1e-6, 50.0));
  }
}
BENCHMARK(BM_Classify);

}  // namespace

BENCHMARK_MAIN();
