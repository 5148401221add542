// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#include "ewt/kgraph.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <queue>
#include <thread>

namespace ewt {

double edge_cost(const EdgeCostOracle& o, std::size_t i, std::size_t j) {
  if (i == j) throw domain_error("edge_cost: i == j");
  if (i >= o.n || j >= o.n) throw domain_error("edge_cost: vertex out of range");
  return o.cost(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
}

bool GraphSample::in_potential(std::uint32_t i, std::uint32_t j) const {
  const auto b = pot_targets.begin() + static_cast<std::ptrdiff_t>(pot_offsets[i]);
  const auto e = pot_targets.begin() + static_cast<std::ptrdiff_t>(pot_offsets[i + 1]);
  return std::binary_search(b, e, j);
}

// ---------------------------------------------------------------------------

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
  for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
}

std::uint32_t DisjointSets::find(std::uint32_t a) {
  while (parent_[a] != a) {
    parent_[a] = parent_[parent_[a]];
    a = parent_[a];
  }
  return a;
}

void DisjointSets::unite(std::uint32_t a, std::uint32_t b) {
  a = find(a), b = find(b);
  if (a == b) return;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
}

std::size_t DisjointSets::largest() {
  std::size_t m = 0;
  for (std::size_t i = 0; i < parent_.size(); ++i)
    if (parent_[i] == i) m = std::max<std::size_t>(m, size_[i]);
  return m;
}

// ---------------------------------------------------------------------------

namespace {

struct Cand {
  std::uint64_t key;
  std::uint32_t j;
};

/// a is cheaper than b: larger uniform, ties to the smaller index.
inline bool cheaper(const Cand& a, const Cand& b) {
  return a.key > b.key || (a.key == b.key && a.j < b.j);
}

/// Fixed-capacity heaps of the cheapest candidates, laid out in one array.
class HeapSet {
 public:
  explicit HeapSet(const std::vector<int>& d) : off_(d.size() + 1, 0), fill_(d.size(), 0) {
    for (std::size_t i = 0; i < d.size(); ++i) off_[i + 1] = off_[i] + d[i] + 1;
    data_.resize(off_.back());
    worst_.assign(d.size(), 0);
  }

  void offer(std::uint32_t i, const Cand& c) {
    const std::uint64_t cap = off_[i + 1] - off_[i];
    Cand* h = data_.data() + off_[i];
    if (fill_[i] < cap) {
      h[fill_[i]++] = c;
      std::push_heap(h, h + fill_[i], cheaper);
      if (fill_[i] == cap) worst_[i] = h[0].key;
      return;
    }
    if (c.key < worst_[i]) return;  // fast reject: strictly more expensive than the worst kept
    if (!cheaper(c, h[0])) return;
    std::pop_heap(h, h + cap, cheaper);
    h[cap - 1] = c;
    std::push_heap(h, h + cap, cheaper);
    worst_[i] = h[0].key;
  }

  /// Candidates of vertex i, cheapest first.
  std::vector<Cand> sorted(std::uint32_t i) const {
    std::vector<Cand> v(data_.begin() + static_cast<std::ptrdiff_t>(off_[i]),
                        data_.begin() + static_cast<std::ptrdiff_t>(off_[i] + fill_[i]));
    std::sort(v.begin(), v.end(), cheaper);
    return v;
  }

 private:
  std::vector<std::uint64_t> off_;
  std::vector<std::uint64_t> fill_;
  std::vector<Cand> data_;
  std::vector<std::uint64_t> worst_;
};

}  // namespace

std::vector<int> sample_degree_sequence(std::size_t n, const DegreePmf& P, std::uint64_t seed) {
  const AliasTable alias(P.probs);
  Rng rng(derive_seed(seed, 0x5EED));
  std::vector<int> d(n);
  for (auto& v : d) v = alias.sample(rng);
  return d;
}

GraphSample build_graph(std::size_t n, const DegreePmf& P, std::uint64_t seed, unsigned threads) {
  return build_graph(n, sample_degree_sequence(n, P, seed), seed, threads);
}

GraphSample build_graph(std::size_t n, std::vector<int> degrees, std::uint64_t seed, unsigned threads) {
  if (n < 3) throw domain_error("build_graph: n must be >= 3");
  if (n > std::numeric_limits<std::uint32_t>::max()) throw domain_error("build_graph: n too large");
  if (degrees.size() != n) throw domain_error("build_graph: degree sequence length differs from n");
  GraphSample g;
  g.n = n;
  g.seed = seed;
  for (int& d : degrees) {
    if (d < 0) throw domain_error("build_graph: degrees must be >= 0");
    if (static_cast<std::size_t>(d) > n - 2) {
      d = static_cast<int>(n - 2);
      ++g.clamped;
    }
  }
  g.degree_seq = std::move(degrees);
  const EdgeCostOracle o = g.oracle();
  const auto N = static_cast<std::uint32_t>(n);
  HeapSet heaps(g.degree_seq);

  threads = std::max(1u, threads);
  if (threads == 1) {
    // each unordered pair hashed once and offered to both endpoints
    for (std::uint32_t i = 0; i < N; ++i)
      for (std::uint32_t j = i + 1; j < N; ++j) {
        const std::uint64_t k = o.key53(i, j);
        heaps.offer(i, {k, j});
        heaps.offer(j, {k, i});
      }
  } else {
    // independent per-vertex scans; the kept sets are identical to the serial path
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::uint32_t i = t; i < N; i += threads)
          for (std::uint32_t j = 0; j < N; ++j)
            if (j != i) heaps.offer(i, {o.key53(i, j), j});
      });
    for (auto& th : pool) th.join();
  }

  g.thresholds.resize(n);
  g.pot_offsets.assign(n + 1, 0);
  g.pot_targets.reserve(n * 4);
  for (std::uint32_t i = 0; i < N; ++i) {
    const std::vector<Cand> c = heaps.sorted(i);
    const int d = g.degree_seq[i];
    g.thresholds[i] = o.cost_from_key(c[d].key);
    std::vector<std::uint32_t> s;
    s.reserve(d);
    for (int r = 0; r < d; ++r) s.push_back(c[r].j);
    std::sort(s.begin(), s.end());
    g.pot_targets.insert(g.pot_targets.end(), s.begin(), s.end());
    g.pot_offsets[i + 1] = g.pot_targets.size();
  }

  std::vector<std::uint64_t> deg(n, 0);
  for (std::uint32_t i = 0; i < N; ++i)
    for (std::uint64_t a = g.pot_offsets[i]; a < g.pot_offsets[i + 1]; ++a) {
      const std::uint32_t j = g.pot_targets[a];
      if (j > i && g.in_potential(j, i)) {
        g.edges.emplace_back(i, j);
        g.edge_costs.push_back(o.cost(i, j));
        ++deg[i], ++deg[j];
      }
    }

  g.adj_offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.adj_offsets[i + 1] = g.adj_offsets[i] + deg[i];
  g.adj_targets.resize(g.adj_offsets.back());
  std::vector<std::uint64_t> pos(g.adj_offsets.begin(), g.adj_offsets.end() - 1);
  DisjointSets ds(n);
  for (const auto& [i, j] : g.edges) {
    g.adj_targets[pos[i]++] = j;
    g.adj_targets[pos[j]++] = i;
    ds.unite(i, j);
  }
  for (std::size_t i = 0; i < n; ++i)
    std::sort(g.adj_targets.begin() + static_cast<std::ptrdiff_t>(g.adj_offsets[i]),
              g.adj_targets.begin() + static_cast<std::ptrdiff_t>(g.adj_offsets[i + 1]));

  // label each component by its smallest vertex
  g.component.resize(n);
  std::vector<std::uint32_t> label(n, std::numeric_limits<std::uint32_t>::max());
  g.component_sizes.assign(n, 0);
  for (std::uint32_t i = 0; i < N; ++i) {
    const std::uint32_t r = ds.find(i);
    if (label[r] == std::numeric_limits<std::uint32_t>::max()) label[r] = i;
    g.component[i] = label[r];
    ++g.component_sizes[label[r]];
  }
  return g;
}

double giant_ratio(const GraphSample& g) {
  if (g.n == 0) return 0.0;
  const std::size_t m = *std::max_element(g.component_sizes.begin(), g.component_sizes.end());
  return static_cast<double>(m) / static_cast<double>(g.n);
}

RootBall root_ball(const GraphSample& g, std::uint32_t root, int radius) {
  if (radius < 0) throw domain_error("root_ball: radius must be >= 0");
  if (root >= g.n) throw domain_error("root_ball: root out of range");
  RootBall b;
  std::vector<std::uint32_t> frontier{root};
  b.vertices.push_back(root);
  b.dist.push_back(0);
  std::vector<std::uint32_t> members{root};
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t u : frontier)
      for (std::uint64_t a = g.adj_offsets[u]; a < g.adj_offsets[u + 1]; ++a) {
        const std::uint32_t v = g.adj_targets[a];
        if (std::find(members.begin(), members.end(), v) != members.end()) continue;
        members.push_back(v);
        next.push_back(v);
        b.vertices.push_back(v);
        b.dist.push_back(r);
      }
    frontier = std::move(next);
  }
  std::vector<std::uint32_t> sorted = b.vertices;
  std::sort(sorted.begin(), sorted.end());
  for (std::uint32_t u : b.vertices) {
    b.mark_d.push_back(g.degree_seq[u]);
    b.mark_T.push_back(g.thresholds[u]);
    for (std::uint64_t a = g.adj_offsets[u]; a < g.adj_offsets[u + 1]; ++a) {
      const std::uint32_t v = g.adj_targets[a];
      if (u < v && std::binary_search(sorted.begin(), sorted.end(), v))
        b.edges.emplace_back(u, v, g.oracle().cost(u, v));
    }
  }
  // the ball is connected, so it is a tree iff it has |V| - 1 edges
  b.acyclic = b.edges.size() + 1 == b.vertices.size();
  return b;
}

GraphDegreeStats graph_degree_stats(const GraphSample& g, int generations) {
  if (generations < 0 || generations > 2) throw domain_error("graph_degree_stats: generations must be 0..2");
  GraphDegreeStats st;
  st.hist.assign(generations + 1, {});
  auto bump = [](std::vector<std::uint64_t>& h, int d) {
    if (h.size() <= static_cast<std::size_t>(d)) h.resize(d + 1, 0);
    ++h[d];
  };
  std::vector<std::uint32_t> stamp(g.n, 0);
  std::uint32_t epoch = 0;
  for (std::uint32_t r = 0; r < g.n; ++r) {
    const int dr = g.realized_degree(r);
    bump(st.hist[0], dr);
    if (generations == 0) continue;
    if (st.cond.size() <= static_cast<std::size_t>(dr)) st.cond.resize(dr + 1);
    ++epoch;
    stamp[r] = epoch;
    for (std::uint64_t a = g.adj_offsets[r]; a < g.adj_offsets[r + 1]; ++a) stamp[g.adj_targets[a]] = epoch;
    for (std::uint64_t a = g.adj_offsets[r]; a < g.adj_offsets[r + 1]; ++a) {
      const std::uint32_t u = g.adj_targets[a];
      const int du = g.realized_degree(u);
      bump(st.hist[1], du);
      bump(st.cond[dr], du);
      if (generations < 2) continue;
      for (std::uint64_t b = g.adj_offsets[u]; b < g.adj_offsets[u + 1]; ++b) {
        const std::uint32_t w = g.adj_targets[b];
        if (stamp[w] == epoch) continue;
        stamp[w] = epoch;
        bump(st.hist[2], g.realized_degree(w));
      }
    }
  }
  return st;
}

std::string edges_csv(const GraphSample& g) {
  std::string out = "i,j,cost\n";
  char buf[96];
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const int len = std::snprintf(buf, sizeof buf, "%u,%u,%.17g\n", g.edges[e].first,
                                  g.edges[e].second, g.edge_costs[e]);
    out.append(buf, static_cast<std::size_t>(len));
  }
  return out;
}

std::string components_csv(const GraphSample& g) {
  std::string out = "component_id,size\n";
  char buf[64];
  for (std::size_t c = 0; c < g.component_sizes.size(); ++c) {
    if (g.component_sizes[c] == 0) continue;
    const int len = std::snprintf(buf, sizeof buf, "%zu,%zu\n", c, g.component_sizes[c]);
    out.append(buf, static_cast<std::size_t>(len));
  }
  return out;
}

double configuration_model_giant(const std::vector<int>& degrees, std::uint64_t seed) {
  const std::size_t n = degrees.size();
  if (n == 0) return 0.0;
  std::vector<std::uint32_t> stubs;
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < degrees[i]; ++k) stubs.push_back(static_cast<std::uint32_t>(i));
  Rng rng(derive_seed(seed, 0xC0F1));
  for (std::size_t i = stubs.size(); i > 1; --i) std::swap(stubs[i - 1], stubs[rng.below(i)]);
  DisjointSets ds(n);
  for (std::size_t a = 0; a + 1 < stubs.size(); a += 2) ds.unite(stubs[a], stubs[a + 1]);
  return static_cast<double>(ds.largest()) / static_cast<double>(n);
}

double erdos_renyi_giant(std::size_t n, double lambda, std::uint64_t seed) {
  if (n < 2) return n ? 1.0 : 0.0;
  const double p = std::clamp(lambda / static_cast<double>(n), 0.0, 1.0);
  DisjointSets ds(n);
  if (p > 0.0) {
    // geometric skipping over the pairs (v, w), w < v
    Rng rng(derive_seed(seed, 0xE7D0));
    const double lq = std::log1p(-p);
    std::int64_t v = 1, w = -1;
    const auto N = static_cast<std::int64_t>(n);
    while (v < N) {
      w += 1 + (p < 1.0 ? static_cast<std::int64_t>(std::floor(std::log(rng.uniform()) / lq)) : 0);
      while (w >= v && v < N) {
        w -= v;
        ++v;
      }
      if (v < N) ds.unite(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(w));
    }
  }
  return static_cast<double>(ds.largest()) / static_cast<double>(n);
}

}  // namespace ewt
