// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#include "ewt/tree.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

namespace ewt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Breadth-first growth engine shared by the single-tree and forest samplers.
/// The visitor receives
///   std::uint64_t node(int depth, const VertexType&, std::uint64_t parent_id, double zeta)
///   void degree(int depth, std::uint64_t id, int degree)
/// and `grow` returns false when the node cap was hit.
class Engine {
 public:
  explicit Engine(const DegreePmf& P) : alias_(P.probs) {}

  VertexType draw_root(Rng& rng) const {
    const int k = alias_.sample(rng);
    return {k, rng.gamma(k + 1.0)};
  }

  template <class V>
  bool grow(Rng& rng, const VertexType& root, int depth_cap, std::size_t node_cap, V& vis) const {
    struct Item {
      VertexType t;
      std::uint64_t id;
    };
    std::vector<Item> cur, next;
    cur.push_back({root, vis.node(0, root, ~std::uint64_t{0}, kNaN)});
    std::size_t total = 1;
    for (int l = 0; l < depth_cap && !cur.empty(); ++l) {
      next.clear();
      for (const Item& it : cur) {
        int kept = 0;
        for (int j = 0; j < it.t.m; ++j) {
          const double zeta = it.t.x * rng.uniform0();
          const int k = alias_.sample(rng);
          const double xc = rng.gamma(static_cast<double>(k));
          if (zeta < xc) {
            ++kept;
            const VertexType ct{k - 1, xc};
            next.push_back({ct, vis.node(l + 1, ct, it.id, zeta)});
            if (++total > node_cap) return false;
          }
        }
        vis.degree(l, it.id, kept + (l > 0 ? 1 : 0));
      }
      std::swap(cur, next);
    }
    return true;
  }

 private:
  AliasTable alias_;
};

struct TreeBuilder {
  EwtTree* tree;
  std::uint64_t node(int depth, const VertexType& t, std::uint64_t parent, double zeta) {
    EwtNode n;
    n.type = t;
    n.parent = parent == ~std::uint64_t{0} ? -1 : static_cast<std::int64_t>(parent);
    n.depth = depth;
    n.zeta = zeta;
    tree->nodes.push_back(n);
    if (static_cast<int>(tree->z_counts.size()) <= depth) tree->z_counts.resize(depth + 1, 0);
    ++tree->z_counts[depth];
    return tree->nodes.size() - 1;
  }
  void degree(int, std::uint64_t id, int d) { tree->nodes[id].degree = d; }
};

}  // namespace

std::string EwtTree::serialize() const {
  std::string out;
  char buf[160];
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const EwtNode& n = nodes[i];
    int len;
    if (std::isnan(n.zeta))
      len = std::snprintf(buf, sizeof buf, "%zu %" PRId64 " %d %d %.17g nan\n", i, n.parent, n.depth,
                          n.type.m, n.type.x);
    else
      len = std::snprintf(buf, sizeof buf, "%zu %" PRId64 " %d %d %.17g %.17g\n", i, n.parent,
                          n.depth, n.type.m, n.type.x, n.zeta);
    out.append(buf, static_cast<std::size_t>(len));
  }
  return out;
}

EwtTree sample_tree(const DegreePmf& P, int depth_cap, std::uint64_t seed, const SamplerOptions& opt) {
  if (depth_cap < 0) throw domain_error("sample_tree: depth_cap must be >= 0");
  const Engine eng(P);
  Rng rng(seed);
  const VertexType root = opt.pinned_root ? *opt.pinned_root : eng.draw_root(rng);
  EwtTree tree;
  tree.depth_cap = depth_cap;
  tree.z_counts.assign(depth_cap + 1, 0);
  TreeBuilder b{&tree};
  tree.truncated = !eng.grow(rng, root, depth_cap, opt.node_cap, b);
  return tree;
}

EwtTree make_tree(std::vector<EwtNode> nodes, int depth_cap) {
  if (nodes.empty()) throw domain_error("make_tree: no nodes");
  EwtTree t;
  t.depth_cap = depth_cap;
  t.z_counts.assign(depth_cap + 1, 0);
  std::vector<int> kids(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    EwtNode& n = nodes[i];
    if (i == 0) {
      n.parent = -1, n.depth = 0, n.zeta = kNaN;
    } else {
      if (n.parent < 0 || static_cast<std::size_t>(n.parent) >= i)
        throw domain_error("make_tree: parents must precede children");
      n.depth = nodes[n.parent].depth + 1;
      ++kids[n.parent];
    }
    if (n.depth > depth_cap) throw domain_error("make_tree: node deeper than depth_cap");
    ++t.z_counts[n.depth];
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    nodes[i].degree = nodes[i].depth < depth_cap ? kids[i] + (i > 0 ? 1 : 0) : -1;
  t.nodes = std::move(nodes);
  return t;
}

// ---------------------------------------------------------------------------

void DegreeAccumulator::add_tree(const std::vector<std::uint64_t>& hist) {
  double n = 0.0, y = 0.0;
  for (std::size_t d = 0; d < hist.size(); ++d) {
    n += static_cast<double>(hist[d]);
    y += static_cast<double>(d) * static_cast<double>(hist[d]);
  }
  if (count.size() < hist.size()) {
    count.resize(hist.size(), 0);
    count_sq.resize(hist.size(), 0.0);
    count_n.resize(hist.size(), 0.0);
  }
  for (std::size_t d = 0; d < hist.size(); ++d) {
    if (hist[d] == 0) continue;
    const double c = static_cast<double>(hist[d]);
    count[d] += hist[d];
    count_sq[d] += c * c;
    count_n[d] += c * n;
  }
  n_sum += static_cast<std::uint64_t>(n);
  n_sq += n * n;
  deg_sum += y;
  deg_sq += y * y;
  deg_n += y * n;
}

void DegreeAccumulator::merge(const DegreeAccumulator& o) {
  if (count.size() < o.count.size()) {
    count.resize(o.count.size(), 0);
    count_sq.resize(o.count.size(), 0.0);
    count_n.resize(o.count.size(), 0.0);
  }
  for (std::size_t d = 0; d < o.count.size(); ++d) {
    count[d] += o.count[d];
    count_sq[d] += o.count_sq[d];
    count_n[d] += o.count_n[d];
  }
  n_sum += o.n_sum;
  n_sq += o.n_sq;
  deg_sum += o.deg_sum;
  deg_sq += o.deg_sq;
  deg_n += o.deg_n;
}

namespace {

struct ForestVisitor {
  int L;
  std::size_t n_rects;
  const std::vector<TypeRect>* rects;
  bool keep_gen1;
  std::uint64_t* z;        // row of length L+1
  std::uint64_t* rz;       // row of length (L+1)*n_rects
  std::vector<std::vector<std::uint64_t>>* hist;
  std::vector<std::uint32_t>* gen1;
  std::uint32_t root_deg = 0;

  std::uint64_t node(int depth, const VertexType& t, std::uint64_t, double) {
    ++z[depth];
    for (std::size_t a = 0; a < n_rects; ++a)
      if ((*rects)[a].contains(t)) ++rz[depth * n_rects + a];
    return 0;
  }
  void degree(int depth, std::uint64_t, int d) {
    auto& h = (*hist)[depth];
    if (h.size() <= static_cast<std::size_t>(d)) h.resize(d + 1, 0);
    ++h[d];
    if (depth == 0) root_deg = static_cast<std::uint32_t>(d);
    if (depth == 1 && keep_gen1) gen1->push_back(static_cast<std::uint32_t>(d));
  }
};

struct Block {
  std::vector<DegreeAccumulator> acc;
  std::vector<std::uint32_t> gen1;
  std::vector<std::uint64_t> gen1_counts;
};

}  // namespace

Forest sample_forest(const DegreePmf& P, const ForestOptions& opt) {
  if (opt.depth_cap < 0) throw domain_error("sample_forest: depth_cap must be >= 0");
  for (const TypeRect& r : opt.rects) r.validate();
  const Engine eng(P);
  const int L = opt.depth_cap;
  const std::size_t R = opt.replicates, nr = opt.rects.size();
  Forest f;
  f.options = opt;
  f.replicates = R;
  f.depth_cap = L;
  f.seeds.resize(R);
  f.z.assign(R * (L + 1), 0);
  f.rect_z.assign(R * (L + 1) * nr, 0);
  f.root_degree.assign(R, 0);
  f.truncated.assign(R, 0);
  for (std::size_t r = 0; r < R; ++r) f.seeds[r] = derive_seed(opt.master_seed, r);

  const unsigned T = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(std::max<std::size_t>(R, 1))));
  std::vector<Block> blocks(T);
  auto work = [&](unsigned t) {
    const std::size_t lo = R * t / T, hi = R * (t + 1) / T;
    Block& blk = blocks[t];
    blk.acc.assign(L, DegreeAccumulator{});
    std::vector<std::vector<std::uint64_t>> hist(L);
    for (std::size_t r = lo; r < hi; ++r) {
      for (auto& h : hist) std::fill(h.begin(), h.end(), 0);
      Rng rng(f.seeds[r]);
      const VertexType root = opt.pinned_root ? *opt.pinned_root : eng.draw_root(rng);
      const std::size_t before = blk.gen1.size();
      ForestVisitor vis{L, nr, &opt.rects, opt.keep_gen1_degrees && L >= 2,
                        &f.z[r * (L + 1)], nr ? &f.rect_z[r * (L + 1) * nr] : nullptr,
                        &hist, &blk.gen1};
      if (!eng.grow(rng, root, L, opt.node_cap, vis)) f.truncated[r] = 1;
      f.root_degree[r] = vis.root_deg;
      blk.gen1_counts.push_back(blk.gen1.size() - before);
      for (int g = 0; g < L; ++g) blk.acc[g].add_tree(hist[g]);
    }
  };
  if (T == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < T; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  f.degrees.assign(L, DegreeAccumulator{});
  f.gen1_offsets.assign(1, 0);
  for (const Block& blk : blocks) {
    for (int g = 0; g < L; ++g) f.degrees[g].merge(blk.acc[g]);
    f.gen1_degrees.insert(f.gen1_degrees.end(), blk.gen1.begin(), blk.gen1.end());
    for (std::uint64_t c : blk.gen1_counts) f.gen1_offsets.push_back(f.gen1_offsets.back() + c);
  }
  if (!(opt.keep_gen1_degrees && L >= 2)) f.gen1_offsets.clear();
  for (std::uint8_t t : f.truncated) f.truncated_count += t;
  return f;
}

Forest forest_from_trees(const std::vector<EwtTree>& trees) {
  Forest f;
  f.replicates = trees.size();
  if (trees.empty()) return f;
  const int L = trees.front().depth_cap;
  for (const EwtTree& t : trees)
    if (t.depth_cap != L) throw domain_error("forest_from_trees: depth caps differ");
  f.depth_cap = L;
  f.options.depth_cap = L;
  f.options.replicates = trees.size();
  f.degrees.assign(L, DegreeAccumulator{});
  f.gen1_offsets.assign(1, 0);
  for (const EwtTree& t : trees) {
    for (int l = 0; l <= L; ++l) f.z.push_back(l < static_cast<int>(t.z_counts.size()) ? t.z_counts[l] : 0);
    std::vector<std::vector<std::uint64_t>> hist(L);
    for (const EwtNode& n : t.nodes) {
      if (n.depth >= L || n.degree < 0) continue;
      auto& h = hist[n.depth];
      if (h.size() <= static_cast<std::size_t>(n.degree)) h.resize(n.degree + 1, 0);
      ++h[n.degree];
      if (n.depth == 1) f.gen1_degrees.push_back(static_cast<std::uint32_t>(n.degree));
    }
    for (int g = 0; g < L; ++g) f.degrees[g].add_tree(hist[g]);
    f.root_degree.push_back(L >= 1 ? static_cast<std::uint32_t>(t.nodes[0].degree) : 0);
    f.gen1_offsets.push_back(f.gen1_degrees.size());
    f.truncated.push_back(t.truncated);
    f.truncated_count += t.truncated;
  }
  if (L < 2) f.gen1_offsets.clear();
  return f;
}

std::vector<std::vector<std::uint64_t>> generation_counts(const Forest& f) {
  std::vector<std::vector<std::uint64_t>> out(f.replicates);
  for (std::size_t r = 0; r < f.replicates; ++r)
    out[r].assign(f.z.begin() + r * (f.depth_cap + 1), f.z.begin() + (r + 1) * (f.depth_cap + 1));
  return out;
}

namespace {

/// Cluster-robust variance factor of a ratio estimator sum(y)/sum(n).
double ratio_se(double R, double ysum, double ysq, double yn, double nsum, double nsq) {
  if (R < 2 || nsum <= 0) return 0.0;
  const double p = ysum / nsum;
  const double ss = std::max(0.0, ysq - 2 * p * yn + p * p * nsq);
  return std::sqrt(R / (R - 1) * ss) / nsum;
}

}  // namespace

EmpiricalPmf empirical_pmf(const DegreeAccumulator& a, std::size_t clusters) {
  EmpiricalPmf e;
  e.vertices = a.n_sum;
  e.empty = a.n_sum == 0;
  if (e.empty) return e;
  const double N = static_cast<double>(a.n_sum), R = static_cast<double>(clusters);
  e.pmf.resize(a.count.size());
  e.se.resize(a.count.size());
  for (std::size_t d = 0; d < a.count.size(); ++d) {
    e.pmf[d] = a.count[d] / N;
    e.se[d] = ratio_se(R, static_cast<double>(a.count[d]), a.count_sq[d], a.count_n[d], N, a.n_sq);
  }
  e.mean = a.deg_sum / N;
  e.mean_se = ratio_se(R, a.deg_sum, a.deg_sq, a.deg_n, N, a.n_sq);
  return e;
}

EmpiricalPmf degree_pmf_by_generation(const Forest& f, int gen) {
  if (gen < 0 || gen + 1 > f.depth_cap)
    throw domain_error("degree_pmf_by_generation: forest depth_cap must be >= gen + 1");
  return empirical_pmf(f.degrees[gen], f.replicates);
}

EmpiricalPmf conditional_degree_gen1(const Forest& f, int d_root) {
  if (f.depth_cap < 2 || f.gen1_offsets.empty())
    throw domain_error("conditional_degree_gen1: needs depth_cap >= 2 with generation-1 degrees");
  DegreeAccumulator acc;
  std::size_t trees = 0;
  std::vector<std::uint64_t> hist;
  for (std::size_t r = 0; r < f.replicates; ++r) {
    if (static_cast<int>(f.root_degree[r]) != d_root) continue;
    ++trees;
    hist.assign(hist.size(), 0);
    for (std::uint64_t i = f.gen1_offsets[r]; i < f.gen1_offsets[r + 1]; ++i) {
      const std::uint32_t d = f.gen1_degrees[i];
      if (hist.size() <= d) hist.resize(d + 1, 0);
      ++hist[d];
    }
    acc.add_tree(hist);
  }
  return empirical_pmf(acc, trees);
}

UnimodStat unimod_involution_stat(const Forest& f, int k) {
  if (f.depth_cap < 2 || f.gen1_offsets.empty())
    throw domain_error("unimod_involution_stat: needs depth_cap >= 2 with generation-1 degrees");
  UnimodStat s;
  const double R = static_cast<double>(f.replicates);
  if (f.replicates == 0) return s;
  double sl = 0, sr = 0, sd = 0, sd2 = 0;
  for (std::size_t r = 0; r < f.replicates; ++r) {
    const double lhs = static_cast<int>(f.root_degree[r]) == k ? f.root_degree[r] : 0.0;
    double rhs = 0.0;
    for (std::uint64_t i = f.gen1_offsets[r]; i < f.gen1_offsets[r + 1]; ++i)
      rhs += static_cast<int>(f.gen1_degrees[i]) == k;
    sl += lhs;
    sr += rhs;
    sd += lhs - rhs;
    sd2 += (lhs - rhs) * (lhs - rhs);
  }
  s.lhs = sl / R;
  s.rhs = sr / R;
  if (R > 1) s.se = std::sqrt(std::max(0.0, (sd2 - sd * sd / R) / (R - 1)) / R);
  return s;
}

WStatistics w_statistics(const Forest& f, double beta0, int a, int b) {
  if (!(beta0 > 0.0)) throw domain_error("w_statistics: beta0 must be positive");
  const int nr = static_cast<int>(f.options.rects.size());
  if (a < -1 || a >= nr || b < -1 || b >= nr) throw domain_error("w_statistics: rectangle index out of range");
  const int L = f.depth_cap;
  auto count = [&](std::size_t r, int l, int idx) -> double {
    return static_cast<double>(idx < 0 ? f.z_at(r, l) : f.rect_at(r, l, idx));
  };
  WStatistics out;
  out.beta0 = beta0;
  const double R = static_cast<double>(f.replicates);
  for (int l = 0; l <= L; ++l) {
    WGeneration g;
    g.l = l;
    const double scale = std::pow(beta0, -l), scale1 = std::pow(beta0, -(l + 1));
    double s = 0, s2 = 0, q2 = 0, dsum = 0, dsq = 0, ra = 0, rb = 0, rs = 0, rs2 = 0;
    for (std::size_t r = 0; r < f.replicates; ++r) {
      const double ca = count(r, l, a), w = ca * scale;
      s += w;
      s2 += w * w;
      q2 += w * w * w * w;
      if (l < L) {
        const double d = w - count(r, l + 1, a) * scale1;
        dsum += d;
        dsq += d * d;
      }
      if (ca > 0) {
        const double cb = count(r, l, b);
        ++g.survivors;
        ra += ca;
        rb += cb;
        rs += cb / ca;
        rs2 += (cb / ca) * (cb / ca);
      }
    }
    if (R > 0) {
      g.mean = s / R;
      g.second = s2 / R;
    }
    if (R > 1) {
      g.var = std::max(0.0, (s2 - s * s / R) / (R - 1));
      g.second_se = std::sqrt(std::max(0.0, (q2 - s2 * s2 / R) / (R - 1)) / R);
      if (l < L) g.diff_var = std::max(0.0, (dsq - dsum * dsum / R) / (R - 1));
    }
    if (g.survivors > 0) {
      const double n = static_cast<double>(g.survivors);
      g.ratio_mean = rs / n;
      g.pooled_ratio = rb / ra;
      if (n > 1) g.ratio_se = std::sqrt(std::max(0.0, (rs2 - rs * rs / n) / (n - 1)) / n);
    }
    out.by_generation.push_back(g);
  }
  out.survivors_empty = out.by_generation.back().survivors == 0;
  return out;
}

BackboneCounts sample_backbone_counts(const DegreePmf& P, int L, std::size_t replicates,
                                      std::uint64_t master_seed, double cap) {
  if (L < 0) throw domain_error("sample_backbone_counts: L must be >= 0");
  const AliasTable alias(P.probs);
  BackboneCounts out;
  out.w.assign(replicates, std::vector<double>(L + 1, 0.0));
  for (std::size_t r = 0; r < replicates; ++r) {
    Rng rng(derive_seed(master_seed ^ 0xB4C3B0E5ULL, r));
    auto& w = out.w[r];
    w[0] = 1;
    if (L == 0) continue;
    w[1] = alias.sample(rng);
    bool clamped = false;
    for (int l = 1; l < L; ++l) {
      double next = 0.0;
      const auto n = static_cast<std::uint64_t>(w[l]);
      for (std::uint64_t i = 0; i < n && !clamped; ++i) {
        next += alias.sample(rng) - 1;
        if (next > cap) clamped = true;
      }
      if (clamped) {
        for (int j = l + 1; j <= L; ++j) w[j] = cap;
        break;
      }
      w[l + 1] = next;
    }
    out.clamped += clamped;
  }
  return out;
}

}  // namespace ewt
