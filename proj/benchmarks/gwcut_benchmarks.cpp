#include <benchmark/benchmark.h>

#include "gwcut/dynamics.hpp"
#include "gwcut/local_search.hpp"
#include "gwcut/oracle.hpp"
#include "gwcut/rng.hpp"
#include "gwcut/state.hpp"

namespace {

using namespace gwcut;

SxState random_sx(std::size_t n, Rng& rng) {
  SxState s(SpinState::random(n, rng), std::vector<double>(n));
  for (double& v : s.x) v = 1.0 - rng.uniform(0.0, 2.0);
  return s;
}

// One Euler step of the GW2 flow on ER(n, 0.1); cost should track m.
void BM_Gw2EulerStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = gen_erdos_renyi(n, 0.1, 1);
  Rng rng(2);
  SxState s = random_sx(n, rng);
  const double dt = Schedule{}.fitted_to(g).dt0;
  for (auto _ : state) {
    s = gw2_step(g, s, dt);
    benchmark::DoNotOptimize(s.x.data());
  }
  state.counters["edges"] = static_cast<double>(g.num_edges());
  state.SetComplexityN(static_cast<benchmark::IterationCount>(g.num_edges()));
}
BENCHMARK(BM_Gw2EulerStep)->RangeMultiplier(2)->Range(50, 800)->Complexity(benchmark::oN);

void BM_Gw2ExactSlice(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = gen_erdos_renyi(n, 0.1, 1);
  Rng rng(3);
  for (auto _ : state) {
    state.PauseTiming();
    SxState s = random_sx(n, rng);
    state.ResumeTiming();
    benchmark::DoNotOptimize(gw2_advance(g, s, 0.05));
  }
}
BENCHMARK(BM_Gw2ExactSlice)->RangeMultiplier(2)->Range(50, 400);

void BM_OneOpt(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = gen_erdos_renyi(n, 0.1, 1);
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(one_opt(g, SpinState::random(n, rng)).cut);
}
BENCHMARK(BM_OneOpt)->RangeMultiplier(2)->Range(50, 800);

void BM_TwoOpt(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = gen_erdos_renyi(n, 0.1, 1);
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(two_opt(g, SpinState::random(n, rng)).cut);
}
BENCHMARK(BM_TwoOpt)->RangeMultiplier(2)->Range(50, 400);

void BM_BestRounding(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = gen_erdos_renyi(n, 0.1, 1);
  Rng rng(6);
  const ContinuousState xi = random_continuous_state(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(best_rounding(g, xi).cut);
}
BENCHMARK(BM_BestRounding)->RangeMultiplier(2)->Range(50, 400);

void BM_BruteForce(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = gen_erdos_renyi(n, 0.3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_maxcut(g).cut);
}
BENCHMARK(BM_BruteForce)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
