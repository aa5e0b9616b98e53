#include <benchmark/benchmark.h>

#include "algstab/frechet.hpp"
#include "algstab/signal_models.hpp"
#include "algstab/spectral.hpp"
#include "algstab/stability.hpp"

using namespace algstab;

static void BM_EvalOperator(benchmark::State& state) {
  const auto s = cyclic_shift(static_cast<int>(state.range(0)));
  const auto p = random_filter(1, 6, 1);
  for (auto _ : state) benchmark::DoNotOptimize(eval_operator(p, s));
}
BENCHMARK(BM_EvalOperator)->Arg(16)->Arg(32)->Arg(64);

static void BM_FrechetApply(benchmark::State& state) {
  const auto s = grid2d_shifts(4, static_cast<int>(state.range(0)) / 4, true);
  const auto p = random_filter(2, 4, 2);
  const Matrix xi = random_matrix(s.dimension(), s.dimension(), 3, false);
  for (auto _ : state) benchmark::DoNotOptimize(frechet_apply(p, s, 0, xi));
}
BENCHMARK(BM_FrechetApply)->Arg(16)->Arg(32)->Arg(64);

static void BM_Decompose(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto single = graph_shift(random_graph(n, 0.3, 4));
  for (auto _ : state) benchmark::DoNotOptimize(decompose(single));
}
BENCHMARK(BM_Decompose)->Arg(16)->Arg(32)->Arg(64);

static void BM_DecomposeGrid(benchmark::State& state) {
  const auto s = grid2d_shifts(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(s));
}
BENCHMARK(BM_DecomposeGrid)->Arg(4)->Arg(8);

static void BM_EstimateLipschitz(benchmark::State& state) {
  const auto m = static_cast<int>(state.range(0));
  const auto p = random_filter(m, 5, 5);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_lipschitz(p, 1.05, 32));
}
BENCHMARK(BM_EstimateLipschitz)->Arg(1)->Arg(2);

static void BM_TrialThroughput(benchmark::State& state) {
  const auto s = cyclic_shift(16);
  const auto p = random_filter(1, 4, 6);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto model = random_perturbation(s, 0.05, 0.05, PerturbationMode::generic, seed++);
    const auto cert = certify_filter(p, s, perturb(s, model));
    benchmark::DoNotOptimize(check_theorem1(p, s, model));
    benchmark::DoNotOptimize(check_theorem2(p, s, model, cert));
    benchmark::DoNotOptimize(check_corollary(p, s, model, cert));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TrialThroughput);
BENCHMARK_MAIN();
