#include <benchmark/benchmark.h>

#include "critpoly/chebyshev.hpp"
#include "critpoly/nodal_grid.hpp"
#include "critpoly/perturb.hpp"
#include "critpoly/pipeline.hpp"
#include "critpoly/solver.hpp"

using namespace critpoly;

static void BM_Clenshaw(benchmark::State& state) {
  const ChebSeries t = ChebSeries::basis(static_cast<int>(state.range(0)));
  double x = -0.93;
  for (auto _ : state) {
    benchmark::DoNotOptimize(t(x));
    x = x > 0.9 ? -0.93 : x + 1e-3;
  }
}
BENCHMARK(BM_Clenshaw)->Arg(201)->Arg(801)->Arg(3201);

static void BM_EvalPerturbed(benchmark::State& state) {
  const PerturbedRoots r = chebyshev_roots(build_grid(static_cast<int>(state.range(0))));
  double x = -0.93;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_perturbed(r, x));
    x = x > 0.9 ? -0.93 : x + 1e-3;
  }
}
BENCHMARK(BM_EvalPerturbed)->Arg(201)->Arg(801)->Arg(3201);

static void BM_ToSeries(benchmark::State& state) {
  const PerturbedRoots r = chebyshev_roots(build_grid(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(to_series(r));
  }
}
BENCHMARK(BM_ToSeries)->Arg(201)->Arg(801);

static void BM_GroupMapsBuild(benchmark::State& state) {
  const NodalGrid g = build_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    GroupMaps maps(g);
    benchmark::DoNotOptimize(maps.group_count());
  }
}
BENCHMARK(BM_GroupMapsBuild)->Arg(201)->Arg(801)->Unit(benchmark::kMillisecond);

static void BM_GMap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GroupMaps maps(build_grid(n));
  const std::vector<double> y(static_cast<std::size_t>(maps.group_count()), 0.02);
  for (auto _ : state) {
    benchmark::DoNotOptimize(maps.g_map(y));
  }
}
BENCHMARK(BM_GMap)->Arg(201)->Arg(801)->Unit(benchmark::kMicrosecond);

static void BM_ApproximateAbs(benchmark::State& state) {
  const FunctionSpec f = FunctionSpec::parse("abs");
  for (auto _ : state) {
    benchmark::DoNotOptimize(approximate(f, static_cast<int>(state.range(0)), PipelineConfig{}).sup_error);
  }
}
BENCHMARK(BM_ApproximateAbs)->Arg(201)->Arg(401)->Arg(801)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
