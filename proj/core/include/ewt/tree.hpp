// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
//
// Exact sampler of the Erlang weighted tree and Monte-Carlo observables over
// sampled forests.
//
// Sampling order (fixed; part of the determinism contract).  For the root:
// k ~ P (alias table), m = k, x = gamma(m + 1).  Generations are processed in
// breadth-first order; for a vertex of type (m, x) each of its m potential
// children draws, in this order, zeta = x * uniform0(), k' ~ P, x' = gamma(k')
// and is kept iff zeta < x'.  A kept child has type (k' - 1, x').  Dropped
// children are discarded at once.  All variates come from ewt::Rng seeded
// with the tree seed; replicate r of a forest uses derive_seed(master, r).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ewt/numerics.hpp"
#include "ewt/rng.hpp"
#include "ewt/types.hpp"

namespace ewt {

inline constexpr std::size_t kDefaultNodeCap = 10'000'000;

struct EwtNode {
  VertexType type;
  std::int64_t parent = -1;  // -1 for the root
  int depth = 0;
  double zeta = 0.0;  // edge cost to the parent (NaN for the root)
  int degree = -1;    // kept children + (parent edge); -1 when children were not realized
};

struct EwtTree {
  std::vector<EwtNode> nodes;          // breadth-first order, nodes[0] is the root
  std::vector<std::uint64_t> z_counts; // Z_0..Z_L
  int depth_cap = 0;
  bool truncated = false;

  /// One node per line: `index parent depth m x zeta` (%.17g, root zeta = nan).
  std::string serialize() const;
};

struct SamplerOptions {
  std::size_t node_cap = kDefaultNodeCap;
  std::optional<VertexType> pinned_root;  // replace the random root type
};

/// Samples one tree down to depth `depth_cap`; fully deterministic in `seed`.
EwtTree sample_tree(const DegreePmf& P, int depth_cap, std::uint64_t seed,
                    const SamplerOptions& opt = {});

/// Builds an EwtTree from explicit nodes (parents must precede children);
/// depths, z_counts and degrees are filled in, with degrees of nodes at
/// depth_cap left unknown.  Useful for hand-made trees in tests.
EwtTree make_tree(std::vector<EwtNode> nodes, int depth_cap);

// ---------------------------------------------------------------------------
// Forests.

struct ForestOptions {
  int depth_cap = 1;
  std::size_t replicates = 1;
  std::uint64_t master_seed = 1;
  std::size_t node_cap = kDefaultNodeCap;
  std::optional<VertexType> pinned_root;
  std::vector<TypeRect> rects;  // Z_l(A) is recorded for each rectangle
  bool keep_gen1_degrees = true; // per-tree degrees of the root's children
  unsigned threads = 1;
};

/// Integer accumulators of one generation's degree counts.  For replicate r
/// let c_{r,d} be the number of generation-g vertices with degree d and n_r
/// their total; sums run over replicates.
struct DegreeAccumulator {
  std::vector<std::uint64_t> count;     // sum_r c_{r,d}
  std::vector<double> count_sq;         // sum_r c_{r,d}^2
  std::vector<double> count_n;          // sum_r c_{r,d} n_r
  std::uint64_t n_sum = 0;              // sum_r n_r
  double n_sq = 0.0;                    // sum_r n_r^2
  double deg_sum = 0.0, deg_sq = 0.0, deg_n = 0.0;  // same for y_r = sum of degrees

  void add_tree(const std::vector<std::uint64_t>& hist);
  void merge(const DegreeAccumulator& o);
};

struct Forest {
  ForestOptions options;
  std::size_t replicates = 0;
  int depth_cap = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::uint64_t> z;        // replicates x (depth_cap + 1)
  std::vector<std::uint64_t> rect_z;   // replicates x (depth_cap + 1) x rects
  std::vector<DegreeAccumulator> degrees;  // generations 0..depth_cap-1
  std::vector<std::uint32_t> root_degree;
  std::vector<std::uint64_t> gen1_offsets;  // replicates + 1
  std::vector<std::uint32_t> gen1_degrees;
  std::vector<std::uint8_t> truncated;
  std::size_t truncated_count = 0;

  std::uint64_t z_at(std::size_t r, int l) const { return z[r * (depth_cap + 1) + l]; }
  std::uint64_t rect_at(std::size_t r, int l, std::size_t a) const {
    return rect_z[(r * (depth_cap + 1) + l) * options.rects.size() + a];
  }
};

Forest sample_forest(const DegreePmf& P, const ForestOptions& opt);
/// Forest assembled from explicit trees (degree statistics only; no seeds).
Forest forest_from_trees(const std::vector<EwtTree>& trees);

/// Z matrix, one row per replicate.
std::vector<std::vector<std::uint64_t>> generation_counts(const Forest& f);

struct EmpiricalPmf {
  std::vector<double> pmf;
  std::vector<double> se;  // cluster-robust (trees are the independent units)
  double mean = 0.0;
  double mean_se = 0.0;
  std::uint64_t vertices = 0;
  bool empty = true;
};

/// Pooled pmf of an accumulator over `clusters` independent units (trees or
/// graphs), with cluster-robust standard errors of the ratio estimators.
EmpiricalPmf empirical_pmf(const DegreeAccumulator& acc, std::size_t clusters);

/// Pooled degree law of generation-`gen` vertices (root degree for gen = 0).
EmpiricalPmf degree_pmf_by_generation(const Forest& f, int gen);
/// Degree law of the root's children given the root degree.
EmpiricalPmf conditional_degree_gen1(const Forest& f, int d_root);

struct UnimodStat {
  double lhs = 0.0, rhs = 0.0, se = 0.0;
};
UnimodStat unimod_involution_stat(const Forest& f, int k);

struct WGeneration {
  int l = 0;
  double mean = 0.0, var = 0.0;        // of W_l(A) = Z_l(A)/beta^l
  double second = 0.0, second_se = 0.0; // E[W_l(A)^2] and its SE
  double diff_var = 0.0;                // Var(W_l(A) - W_{l+1}(A)) (0 at l = L)
  std::size_t survivors = 0;            // replicates with Z_l(A) > 0
  double ratio_mean = 0.0, ratio_se = 0.0;  // mean of Z_l(B)/Z_l(A) over survivors
  double pooled_ratio = 0.0;                // sum Z_l(B) / sum Z_l(A)
};

struct WStatistics {
  double beta0 = 0.0;
  std::vector<WGeneration> by_generation;  // l = 0..L
  bool survivors_empty = true;             // at l = L
};

/// Rectangles a and b index into f.options.rects; a = -1 means "everything".
WStatistics w_statistics(const Forest& f, double beta0, int a, int b);

/// Generation sizes W_0..W_L of the un-pruned potential tree:
/// W_0 = 1, W_1 = n_root, W_{l+1} = sum over generation-l vertices of (n - 1).
/// Rows are replicates; sizes above `cap` are clamped and flagged by `clamped`.
struct BackboneCounts {
  std::vector<std::vector<double>> w;
  std::size_t clamped = 0;
};
BackboneCounts sample_backbone_counts(const DegreePmf& P, int L, std::size_t replicates,
                                      std::uint64_t master_seed, double cap = 1e9);

}  // namespace ewt
