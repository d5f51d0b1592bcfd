#include <benchmark/benchmark.h>

#include "ige/numkit.hpp"

using namespace ige;

static void BM_SolveLpSmall(benchmark::State& state) {
  LpProblem p = LpProblem::maximize_free({1, 0}, DenseMatrix(1, 2, {1, 1}), {LpSense::LE}, {1});
  p.lower.assign(2, 0.0);
  p.upper.assign(2, kInf);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(p));
}
BENCHMARK(BM_SolveLpSmall);

BENCHMARK_MAIN();
