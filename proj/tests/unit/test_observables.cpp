// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>

#include "ewt/observables.hpp"
#include "ewt/spectral.hpp"
#include "ewt/tree.hpp"

using namespace ewt;

TEST_CASE("keep probability") {
  const double p = 0.2;
  const auto P = DegreePmf::geometric(p);
  const auto s = default_grid(P, 4001);
  const auto eta = keep_probability(P, s);
  CHECK(eta[0] == 1.0);
  for (std::size_t i = 1; i < s.n_points; i += 50) {
    const double x = s.x(i);
    REQUIRE(std::abs(eta[i] - (-std::expm1(-p * x)) / (p * x)) < 1e-9);
  }
}

TEST_CASE("root degree law: quadrature against the closed form") {
  for (double p : {0.08, 0.2, 0.5}) {
    const auto P = DegreePmf::geometric(p);
    const auto spec = default_grid(P);
    const auto q = root_degree_pmf_exact(P, spec);
    const auto c = root_degree_pmf_geo(p);
    CHECK(q.provenance == Provenance::quadrature);
    CHECK(c.provenance == Provenance::closed_form);
    CHECK(tv_distance(q.pmf, c.pmf) <= 1e-6);
    CHECK(q.mass() >= 1.0 - 2e-9);
    const auto full = root_degree_pmf_exact(P, spec, P.k_max);
    CHECK(std::abs(full.mean - mean_degree_exact(P, spec)) < 1e-8);
  }
  CHECK(root_degree_pmf_geo(0.5).at(0) == doctest::Approx(2 * (1 - std::exp(-1.0)) - 1).epsilon(1e-12));
  CHECK(root_degree_pmf_geo(0.5).at(-1) == 0.0);
  CHECK(root_degree_pmf_geo(0.5, 4).pmf.size() == 5);
}

TEST_CASE("mean degree for a point mass at two") {
  // S(y) = e^{-y}(1 + y), so E[D] = int e^{-2y} (1 + y)^2 dy = 5/4
  const auto P = DegreePmf::delta(2);
  const auto spec = default_grid(P);
  CHECK(mean_degree_exact(P, spec) == doctest::Approx(1.25).epsilon(1e-10));
  const auto law = root_degree_pmf_exact(P, spec);
  CHECK(law.pmf.size() <= 3);
  CHECK(law.mean == doctest::Approx(1.25).epsilon(1e-9));
}

TEST_CASE("conditional root degree is binomial") {
  const auto P = DegreePmf::geometric(0.08);
  const auto spec = default_grid(P);
  const auto eta = keep_probability(P, spec);
  // 0.1% critical values of chi-square with 3 and 5 degrees of freedom
  const struct {
    int m;
    double x, crit;
  } cases[] = {{3, 2.0, 16.266}, {5, 7.5, 20.515}};
  for (const auto& c : cases) {
    const auto pmf = conditional_root_degree_pmf(c.m, c.x, eta);
    REQUIRE(pmf.size() == static_cast<std::size_t>(c.m + 1));
    double tot = 0;
    for (double v : pmf) tot += v;
    CHECK(tot == doctest::Approx(1.0).epsilon(1e-12));
    ForestOptions o;
    o.depth_cap = 1;
    o.replicates = 100000;
    o.master_seed = 41;
    o.pinned_root = VertexType{c.m, c.x};
    o.keep_gen1_degrees = false;
    const auto f = sample_forest(P, o);
    std::vector<double> obs(c.m + 1, 0.0);
    for (auto d : f.root_degree) obs[d] += 1;
    double chi2 = 0;
    for (int d = 0; d <= c.m; ++d) {
      const double e = pmf[d] * o.replicates;
      chi2 += (obs[d] - e) * (obs[d] - e) / e;
    }
    CHECK(chi2 < c.crit);
  }
}

TEST_CASE("three provenances of the root law agree") {
  for (double p : {0.08, 0.2, 0.5}) {
    const auto P = DegreePmf::geometric(p);
    ForestOptions o;
    o.depth_cap = 1;
    o.replicates = 200000;
    o.master_seed = 17;
    o.keep_gen1_degrees = false;
    const auto mc = degree_pmf_by_generation(sample_forest(P, o), 0);
    CHECK(tv_distance(mc.pmf, root_degree_pmf_geo(p).pmf) <= 0.01);
  }
}

TEST_CASE("size-biased laws") {
  const auto Q = poisson_law(2.5);
  CHECK(Q.mean == doctest::Approx(2.5).epsilon(1e-12));
  const auto Qs = size_biased(Q);
  for (int d = 0; d < 20; ++d) CHECK(Qs.at(d) == doctest::Approx(Q.at(d)).epsilon(1e-12));
  const auto G = geometric0_law_with_mean(3.0);
  CHECK(G.mean == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(G.at(0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(G.mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unimodular Galton-Watson baselines") {
  SUBCASE("point mass at one") {
    const auto b = gwt_star_baselines(DegreeLaw::from_pmf({0.0, 1.0}, Provenance::closed_form));
    CHECK(b.growth_rate == 0.0);
    CHECK(b.p_ext == 1.0);
  }
  SUBCASE("Poisson(2)") {
    double s = 0.0;
    for (int i = 0; i < 10000; ++i) s = std::exp(2.0 * (s - 1.0));
    const auto b = gwt_star_baselines(poisson_law(2.0));
    CHECK(b.growth_rate == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(b.s_star - s) < 1e-10);
    CHECK(std::abs(b.p_ext - s) < 1e-10);  // root stage: sum_k Q(k) s^k = e^{2(s-1)} = s
  }
  SUBCASE("the tree's own root law is not a Galton-Watson tree") {
    const auto P = DegreePmf::geometric(0.08);
    const auto spec = default_grid(P);
    const auto b = gwt_star_baselines(root_degree_pmf_exact(P, spec));
    const double beta0 = find_beta0(P, spec).beta0;
    CHECK(std::abs(b.growth_rate / beta0 - 1.0) < 0.15);
    CHECK(std::abs(b.growth_rate / beta0 - 1.0) > 1e-3);
  }
}

TEST_CASE("total variation") {
  CHECK(tv_distance({0.5, 0.5}, {0.5, 0.5}) == 0.0);
  CHECK(tv_distance({1.0}, {0.0, 1.0}) == doctest::Approx(1.0));
  CHECK(tv_distance({0.2, 0.8}, {0.2, 0.7, 0.1}) == doctest::Approx(0.1));
}
