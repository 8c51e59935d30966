#include <benchmark/benchmark.h>

#include "epkit/classify.hpp"
#include "epkit/harness.hpp"
#include "epkit/pinv.hpp"

using namespace epkit;

namespace {

ComplexMatrix sample(Index dim) {
  MatrixGenerator g(static_cast<std::uint64_t>(dim));
  return g.ep(dim, dim - dim / 4, 100.0);
}

void BM_Svd(benchmark::State& state) {
  const ComplexMatrix m = sample(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(svd(m));
}

void BM_Pseudoinverse(benchmark::State& state) {
  const ComplexMatrix m = sample(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pseudoinverse(m));
}

void BM_Classify(benchmark::State& state) {
  const ComplexMatrix m = sample(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(classify(m));
}

void BM_TheoremCheck(benchmark::State& state) {
  const GeneratorSpec spec = default_spec("thm2.1", 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_theorem_check("thm2.1", spec, 20));
}

}  // namespace

BENCHMARK(BM_Svd)->RangeMultiplier(2)->Range(4, 64);
BENCHMARK(BM_Pseudoinverse)->RangeMultiplier(2)->Range(4, 64);
BENCHMARK(BM_Classify)->RangeMultiplier(2)->Range(4, 64);
BENCHMARK(BM_TheoremCheck)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
