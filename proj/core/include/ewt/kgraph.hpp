// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
//
// Finite bilateral graph: every pair {i,j} of [n] carries an Exp(mean n)
// cost, vertex i is willing to connect to its d_i cheapest partners, and an
// edge survives iff both endpoints are willing.
//
// Edge costs are a keyed hash of the unordered pair, so they need no storage:
//   key  = (min(i,j) << 32) | max(i,j)
//   h    = mix64(seed ^ mix64(key))          (mix64 = splitmix64 finalizer)
//   u    = ((h >> 11) + 1) * 2^-53           in (0, 1]
//   cost = -n * ln(u)
// Costs are ordered by u (larger u = cheaper), ties by the smaller vertex index.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ewt/numerics.hpp"
#include "ewt/rng.hpp"

namespace ewt {

struct EdgeCostOracle {
  std::size_t n = 0;
  std::uint64_t seed = 0;

  /// 53-bit uniform numerator: u = (key53 + 1) * 2^-53.
  std::uint64_t key53(std::uint32_t i, std::uint32_t j) const {
    const std::uint64_t lo = i < j ? i : j, hi = i < j ? j : i;
    return mix64(seed ^ mix64((lo << 32) | hi)) >> 11;
  }
  double cost_from_key(std::uint64_t k) const {
    return -static_cast<double>(n) * std::log((static_cast<double>(k) + 1.0) * 0x1.0p-53);
  }
  double cost(std::uint32_t i, std::uint32_t j) const { return cost_from_key(key53(i, j)); }
};

/// Checked cost lookup: i != j, both in [0, n).
double edge_cost(const EdgeCostOracle& o, std::size_t i, std::size_t j);

struct GraphSample {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<int> degree_seq;       // d_i after clamping
  std::size_t clamped = 0;           // d_i reduced to n - 2
  std::vector<double> thresholds;    // T_i: (d_i + 1)-st smallest cost at i
  std::vector<std::uint64_t> pot_offsets;    // CSR of the potential sets
  std::vector<std::uint32_t> pot_targets;    // sorted per vertex
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // surviving, i < j, sorted
  std::vector<double> edge_costs;
  std::vector<std::uint64_t> adj_offsets;    // CSR adjacency of surviving edges
  std::vector<std::uint32_t> adj_targets;
  std::vector<std::uint32_t> component;      // label = smallest vertex of the component
  std::vector<std::size_t> component_sizes;  // indexed by label (0 elsewhere)

  EdgeCostOracle oracle() const { return {n, seed}; }
  int realized_degree(std::size_t i) const {
    return static_cast<int>(adj_offsets[i + 1] - adj_offsets[i]);
  }
  bool in_potential(std::uint32_t i, std::uint32_t j) const;
};

GraphSample build_graph(std::size_t n, std::vector<int> degrees, std::uint64_t seed,
                        unsigned threads = 1);
/// d_i drawn i.i.d. from P with Rng(derive_seed(seed, 0x5EED)), then clamped to n - 2.
GraphSample build_graph(std::size_t n, const DegreePmf& P, std::uint64_t seed, unsigned threads = 1);
std::vector<int> sample_degree_sequence(std::size_t n, const DegreePmf& P, std::uint64_t seed);

/// Largest component size / n.
double giant_ratio(const GraphSample& g);

struct RootBall {
  std::vector<std::uint32_t> vertices;  // BFS order, vertices[0] = root
  std::vector<int> dist;
  std::vector<int> mark_d;              // d_i
  std::vector<double> mark_T;           // T_i
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges;  // induced, with costs
  bool acyclic = true;
};

RootBall root_ball(const GraphSample& g, std::uint32_t root, int radius);

/// Degree counts seen from every vertex taken as root: hist[l][d] counts the
/// vertices at graph distance l (l <= 2) with realized degree d, pooled over
/// all roots; cond[d_root][d] counts neighbours of degree d of roots of
/// degree d_root.
struct GraphDegreeStats {
  std::vector<std::vector<std::uint64_t>> hist;
  std::vector<std::vector<std::uint64_t>> cond;
};
GraphDegreeStats graph_degree_stats(const GraphSample& g, int generations);

/// Edge list CSV `i,j,cost` and component summary CSV `component_id,size`.
std::string edges_csv(const GraphSample& g);
std::string components_csv(const GraphSample& g);

/// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  std::uint32_t find(std::uint32_t a);
  void unite(std::uint32_t a, std::uint32_t b);
  std::size_t size_of(std::uint32_t a) { return size_[find(a)]; }
  std::size_t largest();

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

/// Comparison models: largest component fraction of a configuration-model
/// multigraph with the given degrees, and of G(n, lambda/n).
double configuration_model_giant(const std::vector<int>& degrees, std::uint64_t seed);
double erdos_renyi_giant(std::size_t n, double lambda, std::uint64_t seed);

}  // namespace ewt
