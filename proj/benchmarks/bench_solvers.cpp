#include <benchmark/benchmark.h>

#include <cmath>

#include "mfglab/fokker_planck.hpp"
#include "mfglab/hjb.hpp"
#include "mfglab/mfg.hpp"
#include "mfglab/riesz.hpp"

using namespace mfglab;

namespace {

ScalarField gaussian(const GridSpec& g) {
  ScalarField m(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Point x = g.position(j);
    m[j] = std::exp(-(x[0] * x[0] + x[1] * x[1]));
  }
  return m;
}

ProblemSpec spec_1d(int points) {
  ProblemSpec s;
  s.grid = GridSpec(1, 8.0, points);
  return s;
}

}  // namespace

static void BM_Convolve1D(benchmark::State& state) {
  const GridSpec g(1, 24.0, static_cast<int>(state.range(0)));
  const auto K = cached_kernel(g, 0.5);
  const ScalarField m = gaussian(g);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(*K, m));
}
BENCHMARK(BM_Convolve1D)->Arg(513)->Arg(1537)->Arg(6145);

static void BM_Convolve2D(benchmark::State& state) {
  const GridSpec g(2, 6.0, static_cast<int>(state.range(0)));
  const auto K = cached_kernel(g, 1.0);
  const ScalarField m = gaussian(g);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(*K, m));
}
BENCHMARK(BM_Convolve2D)->Arg(65)->Arg(129);

static void BM_KernelTable2D(benchmark::State& state) {
  const GridSpec g(2, 6.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tabulate_kernel(g, 1.0));
}
BENCHMARK(BM_KernelTable2D)->Arg(65)->Unit(benchmark::kMillisecond);

static void BM_ErgodicHjb(benchmark::State& state) {
  const ProblemSpec s = spec_1d(static_cast<int>(state.range(0)));
  ScalarField f(s.grid);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::pow(s.grid.position(j)[0], 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_ergodic(s, f));
}
BENCHMARK(BM_ErgodicHjb)->Arg(513)->Arg(1537)->Unit(benchmark::kMillisecond);

static void BM_Stationary(benchmark::State& state) {
  const ProblemSpec s = spec_1d(static_cast<int>(state.range(0)));
  VectorField d(s.grid);
  for (std::size_t j = 0; j < s.grid.size(); ++j) d(0, j) = -s.grid.position(j)[0];
  const TransportPolicy pol = policy_from_drift(d, s.epsilon, s.gamma);
  for (auto _ : state) benchmark::DoNotOptimize(solve_stationary(s, pol));
}
BENCHMARK(BM_Stationary)->Arg(513)->Arg(1537)->Unit(benchmark::kMicrosecond);

static void BM_MfgSolve(benchmark::State& state) {
  const ProblemSpec s = spec_1d(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_mfg(s, std::nullopt));
}
BENCHMARK(BM_MfgSolve)->Arg(257)->Arg(513)->Unit(benchmark::kMillisecond);

static void BM_MfgSolve2D(benchmark::State& state) {
  ProblemSpec s;
  s.dim = 2;
  s.alpha = 1.0;
  s.grid = GridSpec(2, 6.0, 65);
  for (auto _ : state) benchmark::DoNotOptimize(solve_mfg(s, std::nullopt));
}
BENCHMARK(BM_MfgSolve2D)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
