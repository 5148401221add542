// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>

#include "ewt/moments2.hpp"
#include "ewt/observables.hpp"
#include "ewt/tree.hpp"

using namespace ewt;

namespace {

struct Fixture {
  DegreePmf P = DegreePmf::geometric(0.08);
  GridSpec spec = default_grid(P);
  TypeRect all = TypeRect::everything();
  TypeRect low{1, 4, 0.0, 6.0};        // few children, small threshold
  TypeRect high{3, 1000000, 4.0, 1e9};  // overlaps `low` in k = 3..4, z = 4..6
  TypeRect far{20, 1000000, 0.0, 1e9};  // disjoint from `low`
};

struct Moments {
  double m1, m1_se, m2, m2_se, cross;
};

// Conditioned Monte Carlo: children of a pinned root of type (m, x).
Moments simulate(const DegreePmf& P, int m, double x, const TypeRect& A, const TypeRect& B, std::size_t R) {
  ForestOptions o;
  o.depth_cap = 1;
  o.replicates = R;
  o.master_seed = 1234;
  o.pinned_root = VertexType{m, x};
  o.rects = {A, B};
  o.keep_gen1_degrees = false;
  const auto f = sample_forest(P, o);
  double s = 0, s2 = 0, q = 0, q2 = 0, c = 0;
  for (std::size_t r = 0; r < R; ++r) {
    const double a = static_cast<double>(f.rect_at(r, 1, 0)), b = static_cast<double>(f.rect_at(r, 1, 1));
    s += a;
    s2 += a * a;
    q += a * a;
    q2 += a * a * a * a;
    c += a * b;
  }
  const double n = static_cast<double>(R);
  Moments out;
  out.m1 = s / n;
  out.m1_se = std::sqrt((s2 / n - out.m1 * out.m1) / n);
  out.m2 = q / n;
  out.m2_se = std::sqrt((q2 / n - out.m2 * out.m2) / n);
  out.cross = c / n;
  return out;
}

}  // namespace

TEST_CASE("first moment M1") {
  Fixture F;
  CHECK(m1_rect(0, 3.0, F.all, F.P, F.spec) == 0.0);
  CHECK(m1_rect(6, 3.0, F.low, F.P, F.spec) == 2.0 * m1_rect(3, 3.0, F.low, F.P, F.spec));
  // full space: each potential child is kept with probability eta(x)
  const auto eta = keep_probability(F.P, F.spec);
  for (double x : {0.5, 2.0, 9.0})
    CHECK(m1_rect(4, x, F.all, F.P, F.spec) == doctest::Approx(4.0 * eta.at(x)).epsilon(1e-8));
  // x = 0: every child is kept, so M1(A) is m times the probability of A
  double pa = 0;
  for (int k = 1; k <= 4; ++k) pa += F.P.prob(k) * (1.0 - erlang_sf(k, 6.0));
  CHECK(m1_rect(2, 0.0, F.low, F.P, F.spec) == doctest::Approx(2.0 * pa).epsilon(1e-8));
  const auto mc = simulate(F.P, 4, 3.0, F.low, F.all, 100000);
  CHECK(std::abs(mc.m1 - m1_rect(4, 3.0, F.low, F.P, F.spec)) <= 3 * mc.m1_se);
}

TEST_CASE("second factorial moment M1^(2)") {
  Fixture F;
  CHECK(m1_second(1, 3.0, F.low, F.far, F.P, F.spec) == 0.0);
  CHECK(m1_second(0, 3.0, F.all, F.all, F.P, F.spec) == 0.0);
  for (double x : {0.0, 1.5, 7.0}) {
    CHECK(m1_second(5, x, F.low, F.high, F.P, F.spec) == m1_second(5, x, F.high, F.low, F.P, F.spec));
    const double v = v_signed(5, x, F.low, F.high, F.P, F.spec);
    CHECK(v == doctest::Approx(m1_second(5, x, F.low, F.high, F.P, F.spec) -
                               m1_rect(5, x, F.low, F.P, F.spec) * m1_rect(5, x, F.high, F.P, F.spec)));
  }
  // full space: Z_1 ~ Binomial(m, eta(x))
  const auto eta = keep_probability(F.P, F.spec);
  const double e = eta.at(3.0);
  CHECK(m1_second(4, 3.0, F.all, F.all, F.P, F.spec) == doctest::Approx(4 * e * (1 - e) + 16 * e * e).epsilon(1e-8));
  const auto mc = simulate(F.P, 4, 3.0, F.all, F.all, 100000);
  CHECK(std::abs(mc.m2 - m1_second(4, 3.0, F.all, F.all, F.P, F.spec)) <= 3 * mc.m2_se);
  // overlapping rectangles: E[Z(A) Z(B)]
  const auto mc2 = simulate(F.P, 6, 5.0, F.low, F.high, 200000);
  const double cross = m1_second(6, 5.0, F.low, F.high, F.P, F.spec);
  CHECK(std::abs(mc2.cross / cross - 1.0) < 0.05);
}

TEST_CASE("series U") {
  const auto P = DegreePmf::geometric(0.3);
  const auto sol = solve_spectral(P, default_grid(P));
  const auto E = eigenfunctions(sol);
  const auto u = u_truncated(3, 2.0, sol);
  CHECK(u.converged);
  CHECK(u.mu_sq == doctest::Approx(E.mu(3, 2.0) * E.mu(3, 2.0)).epsilon(1e-10));
  CHECK(u.value > u.mu_sq);
  CHECK(u_truncated(0, 2.0, sol).value == 0.0);
  const auto coarse = u_truncated(3, 2.0, sol, 1e-6), fine = u_truncated(3, 2.0, sol, 1e-7);
  CHECK(fine.terms >= coarse.terms);
  CHECK(std::abs(coarse.value - fine.value) < 10 * 1e-6 * fine.value);
  // subcritical: the second moment diverges
  const auto Pc = DegreePmf::geometric(0.5);
  CHECK_THROWS_AS(u_truncated(3, 2.0, solve_spectral(Pc, default_grid(Pc))), domain_error);
}
