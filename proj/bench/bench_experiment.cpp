// Serial reference vs the OpenMP trial kernel, plus the two-loop recursion
// against the explicit dense inverse it replaces.

#include <benchmark/benchmark.h>

#include "sqn/analysis/oracles.hpp"
#include "sqn/harness/experiment.hpp"
#include "sqn/numerics/linalg.hpp"
#include "sqn/optimizers/curvature.hpp"

namespace {

using namespace sqn;

ExperimentConfig bench_config() {
  ExperimentConfig e;
  e.trial.problem.n = 50;
  e.trial.problem.diag = DiagMode::discrete(2);
  e.trial.rho = 1e-2;
  e.trial.max_funcs = 10000;
  OptimizerSpec ol;
  ol.kind = OptimizerKind::olbfgs;
  ol.L = 5;
  OptimizerSpec sgd;
  sgd.kind = OptimizerKind::sgd;
  e.optimizers = {ol, sgd};
  e.trials = 16;
  e.base_seed = 1;
  return e;
}

void BM_ExperimentSerial(benchmark::State& state) {
  const auto cfg = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment_serial(cfg));
}
BENCHMARK(BM_ExperimentSerial)->Unit(benchmark::kMillisecond);

void BM_ExperimentParallel(benchmark::State& state) {
  auto cfg = bench_config();
  cfg.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg));
}
BENCHMARK(BM_ExperimentParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

std::vector<CurvaturePair> bench_pairs(std::size_t n, std::size_t k) {
  Rng64 rng(7);
  std::vector<CurvaturePair> pairs;
  while (pairs.size() < k) {
    Vector v(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = rng.normal();
      r[i] = (1.0 + rng.uniform()) * v[i];
    }
    if (auto p = make_pair(v, r)) pairs.push_back(std::move(*p));
  }
  return pairs;
}

void BM_TwoLoop(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pairs = bench_pairs(n, 10);
  const Vector p(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(two_loop(pairs, 1.0, p));
}
BENCHMARK(BM_TwoLoop)->Arg(50)->Arg(200)->Arg(1000);

void BM_DenseInverseProduct(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pairs = bench_pairs(n, 10);
  const Vector p(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(mat_vec(dense_lbfgs_oracle(pairs, 1.0, n), p));
}
BENCHMARK(BM_DenseInverseProduct)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
