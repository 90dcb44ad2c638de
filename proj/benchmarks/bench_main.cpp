#include <benchmark/benchmark.h>

#include "aifstream/agent.hpp"
#include "aifstream/envsim.hpp"

using namespace aifstream;

namespace {

AgentState warmed_agent(int cycles) {
  const auto scenario = make_builtin_scenario("CV", "NX+", 7);
  AgentHyperparams hyper;
  hyper.seed = 7;
  auto state = make_agent(scenario.service.space, scenario.service.slos, hyper);
  for (int cycle = 0; cycle < cycles; ++cycle) {
    run_cycle(state, generate_batch(scenario, state.current, cycle));
  }
  return state;
}

void BM_generate_batch(benchmark::State& bench) {
  const auto scenario = make_builtin_scenario("CV", "NX+", 7);
  const auto config = midpoint_config(scenario.service.space);
  int cycle = 0;
  for (auto _ : bench) {
    benchmark::DoNotOptimize(generate_batch(scenario, config, cycle++));
  }
}
BENCHMARK(BM_generate_batch);

void BM_exact_inference_pv(benchmark::State& bench) {
  const auto state = warmed_agent(20);
  const auto config = midpoint_config(state.space);
  for (auto _ : bench) {
    benchmark::DoNotOptimize(compute_pv(state.model, config, state.slos, state.space));
  }
}
BENCHMARK(BM_exact_inference_pv);

void BM_structure_learning(benchmark::State& bench) {
  const auto state = warmed_agent(30);
  for (auto _ : bench) {
    benchmark::DoNotOptimize(learn_structure(state.accumulated));
  }
}
BENCHMARK(BM_structure_learning);

void BM_score_matrix(benchmark::State& bench) {
  const auto state = warmed_agent(30);
  for (auto _ : bench) {
    benchmark::DoNotOptimize(interpolate_scores(build_score_matrix(state), state.space));
  }
}
BENCHMARK(BM_score_matrix);

void BM_full_cycle(benchmark::State& bench) {
  const auto scenario = make_builtin_scenario("CV", "NX+", 7);
  auto state = warmed_agent(10);
  int cycle = 10;
  for (auto _ : bench) {
    run_cycle(state, generate_batch(scenario, state.current, cycle++));
  }
}
BENCHMARK(BM_full_cycle);

} // namespace

BENCHMARK_MAIN();
