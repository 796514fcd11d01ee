#include <benchmark/benchmark.h>

#include "edgealloc/datasets.hpp"
#include "edgealloc/harness.hpp"
#include "edgealloc/solver.hpp"

namespace {

using namespace edgealloc;

void BM_FlowEnumeration(benchmark::State& state) {
  for (auto _ : state) {
    AlgorithmGraph g = paper_graph();  // fresh copy, cold cache
    benchmark::DoNotOptimize(g.execution_flows().size());
  }
}
BENCHMARK(BM_FlowEnumeration);

void BM_ResponseTime(benchmark::State& state) {
  const AlgorithmGraph& g = paper_graph();
  const Architecture a = paper_architecture_n1();
  Allocation alloc;
  for (AlgorithmId id : g.nonvirtual_vertices()) alloc.assignment[id] = 0;
  for (auto _ : state) {
    auto r = response_time(g, a, alloc, 2, EvalMode::Expected);
    benchmark::DoNotOptimize(r.final_s);
  }
}
BENCHMARK(BM_ResponseTime);

void BM_PartialTime(benchmark::State& state) {
  const AlgorithmGraph& g = paper_graph();
  const Architecture a = paper_architecture_n1();
  Allocation prefix;
  prefix.assignment[2] = 0;
  prefix.assignment[3] = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(partial_time(g, a, prefix));
  }
}
BENCHMARK(BM_PartialTime);

void BM_SolveBundled(benchmark::State& state) {
  const int n_edge = static_cast<int>(state.range(0));
  const AlgorithmGraph& g = paper_graph();
  SeededRng rng(1234);
  const Architecture a = generate_architecture(n_edge, rng, paper_tab2p());
  for (auto _ : state) {
    auto r = solve(g, a, paper_profile(), ObjectiveConfig{});
    benchmark::DoNotOptimize(r.distance);
  }
}
BENCHMARK(BM_SolveBundled)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_BaselineBundled(benchmark::State& state) {
  const AlgorithmGraph& g = paper_graph();
  const Architecture a = paper_architecture_n1();
  for (auto _ : state) {
    auto r = solve_baseline_li2018(g, a, paper_profile(), ObjectiveConfig{});
    benchmark::DoNotOptimize(r.distance);
  }
}
BENCHMARK(BM_BaselineBundled)->Unit(benchmark::kMillisecond);

void BM_BalanceExact13(benchmark::State& state) {
  const std::vector<double> values = {4,  5,  6,  7,  8,  10, 12,
                                      13, 14, 18, 24, 30, 32};
  for (auto _ : state) {
    auto r = balance(values, 5, {}, BalanceMethod::Exact);
    benchmark::DoNotOptimize(r.max_load);
  }
}
BENCHMARK(BM_BalanceExact13);

void BM_MemoryAlgebra(benchmark::State& state) {
  SeededRng rng(77);
  Instance inst = random_instance(10, 2, rng);
  MemoryProfile p = inst.profile;
  std::set<AlgorithmId> keep;
  for (AlgorithmId id : inst.graph.nonvirtual_vertices()) keep.insert(id);
  AlgorithmGraph induced = inst.graph.induced_subgraph(keep);
  for (auto _ : state) {
    benchmark::DoNotOptimize(memory_algebra(induced, p));
  }
}
BENCHMARK(BM_MemoryAlgebra);

void BM_NonisomorphicBatch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    SeededRng rng(9);
    benchmark::DoNotOptimize(
        nonisomorphic_batch(n, rng, paper_tab2p()).size());
  }
}
BENCHMARK(BM_NonisomorphicBatch)->Arg(3)->Arg(6);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
