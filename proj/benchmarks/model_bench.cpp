#include <benchmark/benchmark.h>

#include "fcsd/harness.hpp"

namespace {

fcsd::Scenario scenario_of(int p) {
  fcsd::ScenarioDistribution dist;
  dist.p = p;
  return fcsd::trial_scenario(dist, 0);
}

void BM_Evaluate(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const fcsd::Scenario scn = scenario_of(p);
  const fcsd::TaskSpec task;
  fcsd::Allocation alloc{0.3, std::vector<double>(p, 1.0 / p)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fcsd::evaluate(scn, task, alloc.rho, alloc.lambda));
  }
  state.SetComplexityN(p);
}
BENCHMARK(BM_Evaluate)->RangeMultiplier(2)->Range(2, 64)->Complexity(benchmark::oN);

void BM_SampleScenario(benchmark::State& state) {
  fcsd::ScenarioDistribution dist;
  dist.p = static_cast<int>(state.range(0));
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fcsd::trial_scenario(dist, trial++));
  }
}
BENCHMARK(BM_SampleScenario)->Arg(10)->Arg(50);

}  // namespace
