#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "drfp/baselines.hpp"
#include "drfp/engine.hpp"
#include "drfp/harness/instances.hpp"
#include "drfp/harness/oracle.hpp"

using namespace drfp;

namespace {

Digraph ring_with_chords(std::size_t n, std::mt19937_64& rng) {
  Digraph g(n);
  for (std::size_t i = 0; i < n; ++i) g.add_edge((i + 1) % n, i);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t k = 0; k < n; ++k) g.add_edge(pick(rng), pick(rng));
  return g;
}

void BM_PerronVector(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto a = uniform_row_weights(ring_with_chords(static_cast<std::size_t>(state.range(0)), rng));
  for (auto _ : state) benchmark::DoNotOptimize(perron_vector(a));
}
BENCHMARK(BM_PerronVector)->Arg(5)->Arg(20)->Arg(100);

void BM_DisagreementContraction(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto a = uniform_row_weights(ring_with_chords(static_cast<std::size_t>(state.range(0)), rng));
  const auto pi = perron_vector(a);
  for (auto _ : state) benchmark::DoNotOptimize(disagreement_contraction(a, pi));
}
BENCHMARK(BM_DisagreementContraction)->Arg(5)->Arg(20);

// Whole D-RFP runs on generated instances; reported per round.
void BM_DrfpRounds(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  const auto problem = harness::facility_location_problem(harness::generate_facility_location(n, rng));
  const auto epi = epigraph_transform(problem);
  const auto schedule = GraphSchedule::fixed(uniform_row_weights(ring_with_chords(n, rng)));
  EngineOptions opts;
  opts.max_iter = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(run(epi, schedule, opts, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(opts.max_iter));
}
BENCHMARK(BM_DrfpRounds)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_ConstrainedDgdRounds(benchmark::State& state) {
  const auto problem = harness::facility_location_problem(harness::default_facility_instance());
  const auto schedule = GraphSchedule::fixed(uniform_row_weights(harness::unbalanced_five_node_digraph()));
  EngineOptions opts;
  opts.max_iter = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(run_constrained_dgd(problem, schedule, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(opts.max_iter));
}
BENCHMARK(BM_ConstrainedDgdRounds)->Unit(benchmark::kMillisecond);

void BM_GridOracle(benchmark::State& state) {
  const auto problem = harness::facility_location_problem(harness::default_facility_instance());
  harness::GridOptions opts;
  opts.resolution = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(harness::grid_oracle(problem, opts));
}
BENCHMARK(BM_GridOracle)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
