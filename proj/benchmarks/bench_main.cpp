// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
//
//   build/benchmarks/ewt_benchmarks --benchmark_filter=ApplyT
#include <benchmark/benchmark.h>

#include <cstdint>

#include "ewt/extinction.hpp"
#include "ewt/kgraph.hpp"
#include "ewt/tree.hpp"

using namespace ewt;

namespace {

// One application of T on a grid with state.range(0) points (Geo(0.08)).
void BM_ApplyT(benchmark::State& state) {
  const auto P = DegreePmf::geometric(0.08);
  const GridSpec spec(default_grid(P).x_max, static_cast<std::size_t>(state.range(0)));
  const OperatorT T(P, spec);
  GridFn f(spec, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(T.apply(f));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplyT)->Arg(1601)->Arg(16001)->Unit(benchmark::kMicrosecond);

// Hashed edge costs: the inner loop of the O(n^2) graph scan.
void BM_EdgeCost(benchmark::State& state) {
  const EdgeCostOracle o{10000, 7};
  std::uint32_t j = 1;
  double acc = 0;
  for (auto _ : state) {
    acc += o.cost(0, j);
    j = j % 9999 + 1;
  }
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EdgeCost);

// Full finite-graph construction (edge scan + components), single thread.
void BM_BuildGraph(benchmark::State& state) {
  const auto P = DegreePmf::geometric(0.08);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(static_cast<std::size_t>(state.range(0)), P, seed++));
}
BENCHMARK(BM_BuildGraph)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

// One depth-3 tree of the running example.
void BM_SampleTree(benchmark::State& state) {
  const auto P = DegreePmf::geometric(0.08);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample_tree(P, static_cast<int>(state.range(0)), seed++));
}
BENCHMARK(BM_SampleTree)->Arg(3)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
