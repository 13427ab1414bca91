// Objective/gradient kernel versus the dense serial reference, and one full
// PRGD solve, at desk and full scale.

#include "coirs/channel.hpp"
#include "coirs/objective.hpp"
#include "coirs/optimizer.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace coirs;

struct Instance {
  SecrecyProblem prob;
  IteratePoint x;
};

Instance make_instance(int m, int n, int k) {
  SystemConfig cfg;
  cfg.m_tx = m;
  cfg.n_irs1 = cfg.n_irs2 = n;
  cfg.n_sub = k;
  return {SecrecyProblem::make(generate(cfg, SceneGeometry{}, 1), cfg),
          random_point(m, cfg.n_streams, k, n, n, 2)};
}

void BM_Kernel(benchmark::State &state) {
  const auto inst = make_instance(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)),
                                  static_cast<int>(state.range(2)));
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate(inst.prob, inst.x, true).value);
}

void BM_Reference(benchmark::State &state) {
  const auto inst = make_instance(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)),
                                  static_cast<int>(state.range(2)));
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::evaluate(inst.prob, inst.x, true).value);
}

void BM_Solve(benchmark::State &state) {
  const auto inst = make_instance(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)),
                                  static_cast<int>(state.range(2)));
  const Problem p = Problem::secrecy(inst.prob);
  OptimizerConfig cfg;
  cfg.max_iters = 100;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve(p, inst.x, cfg).objective_trace.back());
}

} // namespace

BENCHMARK(BM_Kernel)->Args({8, 16, 4})->Args({16, 48, 10})->Args({16, 64, 10});
BENCHMARK(BM_Reference)->Args({8, 16, 4})->Args({16, 48, 10})->Args({16, 64, 10});
BENCHMARK(BM_Solve)->Args({8, 16, 4})->Args({16, 48, 10})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
