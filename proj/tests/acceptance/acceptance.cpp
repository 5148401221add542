// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
//
// Acceptance runner: one PASS/FAIL line per criterion, followed by indented
// detail lines with the measured values.  Exit status is 0 when every
// criterion passes, except for criteria listed in kKnownInfeasible, whose
// failure is reported but does not fail the run (see README, "Acceptance
// status").  An unexpected failure, or a crash, exits with status 1.
//
//   ewt_acceptance            all criteria
//   ewt_acceptance 3 8 12     a subset
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "ewt/extinction.hpp"
#include "ewt/kgraph.hpp"
#include "ewt/moments2.hpp"
#include "ewt/observables.hpp"
#include "ewt/spectral.hpp"
#include "ewt/tree.hpp"

using namespace ewt;

namespace {

// Criterion 10 asks for >= 98% acyclic radius-2 balls at n = 10^4.  With the
// running example Geo(0.08) (mean degree ~6.25) the expected number of short
// cycles through a root is of order c^5 / n ~ 1, so the target needs n ~ 10^6.
const std::set<int> kKnownInfeasible = {10};

struct Report {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4))) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    lines.push_back(std::string(ok ? "ok   " : "MISS ") + buf);
    pass = pass && ok;
  }
  void note(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    lines.push_back(std::string("info ") + buf);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct MeanSe {
  double mean = 0, se = 0;
};
MeanSe mean_se(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double s = 0, s2 = 0;
  for (double x : v) s += x;
  const double m = s / n;
  for (double x : v) s2 += (x - m) * (x - m);
  return {m, std::sqrt(s2 / (n - 1) / n)};
}

const double kP[] = {0.05, 0.08, 0.2, 0.3};

// Spectral solutions are shared between criteria.
const SpectralSolution& spectral(double p) {
  static std::vector<std::pair<double, SpectralSolution>> cache;
  for (const auto& [q, s] : cache)
    if (q == p) return s;
  const auto P = DegreePmf::geometric(p);
  cache.emplace_back(p, solve_spectral(P, default_grid(P)));
  return cache.back().second;
}

// ---------------------------------------------------------------------------

void c1(Report& r) {
  // r0 by bisection on the J0 power series
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 200; ++i) ((bessel_j0(0.5 * (lo + hi)) > 0) ? lo : hi) = 0.5 * (lo + hi);
  const double r0 = 0.5 * (lo + hi);
  r.check(std::abs(r0 - 2.404825557695773) < 1e-14, "r0 by bisection = %.15f", r0);
  for (double p : kP) {
    const double closed = 4 * (1 - p) / (r0 * r0 * p);
    const auto& s = spectral(p);
    const double rel = std::abs(s.beta0 - closed) / s.beta0;
    r.check(rel <= 1e-5, "p=%.2f beta0=%.10f closed=%.10f rel.err=%.2e", p, s.beta0, closed, rel);
  }
}

void c2(Report& r) {
  for (double p : kP) {
    const auto& s = spectral(p);
    const auto P = DegreePmf::geometric(p);
    // independent bracket: max_x x(1-p)e^{-px} at x = 1/p, and E[n] - 1
    const double lo = (1 - p) / (p * std::exp(1.0)), hi = P.mean - 1;
    r.check(lo < s.beta0 && s.beta0 < hi && std::abs(s.bracket_lo - lo) < 1e-6 * lo &&
                std::abs(s.bracket_hi - hi) < 1e-8 * hi,
            "p=%.2f bracket (%.4f, %.4f) [solver (%.4f, %.4f)] contains beta0=%.4f", p, lo, hi,
            s.bracket_lo, s.bracket_hi, s.beta0);
  }
  const auto& s = spectral(0.08);
  r.check(std::abs(s.bracket_lo - 4.2306) < 5e-5 && std::abs(s.bracket_hi - 11.5) < 1e-8,
          "p=0.08 bracket (%.4f, %.4f) vs (4.2306, 11.5)", s.bracket_lo, s.bracket_hi);
}

void c3(Report& r) {
  const auto& s = spectral(0.08);
  r.check(s.fixed_point_residual <= 1e-6, "fixed-point residual %.2e (<= 1e-6)", s.fixed_point_residual);
  const auto kg = markov_kernel(s);
  const auto k = check_kernel(kg);
  r.check(k.row_sum_error <= 1e-8, "kernel row sums: max |sum - 1| = %.2e (<= 1e-8), %zu-point grid",
          k.row_sum_error, kg.n());
  r.note("rows before renormalization: max |sum - 1| = %.2e (discrete eigenpair consistency)", kg.max_row_correction);
  r.check(k.detailed_balance <= 1e-10, "detailed balance: max rel. violation %.2e (<= 1e-10)", k.detailed_balance);
  r.check(k.stationarity <= 1e-8, "one-step stationarity of pi: sup %.2e (<= 1e-8)", k.stationarity);
}

void c4(Report& r) {
  const double p = 0.08;
  const auto& s = spectral(p);
  const auto& spec = s.tables.spec;
  LSeries L(s.tables.g2);
  for (double beta : {s.beta0, 0.5 * s.beta0, 2.0 * s.beta0}) {
    const auto v = L.eval(beta);
    double worst = 0;
    for (std::size_t j = 0; j < spec.n_points; ++j) {
      const double arg = std::sqrt(4 * (1 - p) * std::exp(-p * spec.x(j)) / (p * beta));
      worst = std::max(worst, std::abs(v.L[j] - bessel_j0(arg)));
    }
    r.check(worst <= 1e-7, "beta=%.4f sup |L - J0(sqrt(4(1-p)e^{-px}/(p beta)))| = %.2e (<= 1e-7)", beta, worst);
  }
  // ODE residual beta L'' + g2 L with central differences on two grids
  auto residual = [&](std::size_t n) {
    const auto P = DegreePmf::geometric(p);
    const GridSpec g(spec.x_max, n);
    LSeries Ls(tabulate_series(P, g).g2);
    const auto v = Ls.eval(s.beta0);
    const double h = g.step();
    double worst = 0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const double d2 = (v.L[j + 1] - 2 * v.L[j] + v.L[j - 1]) / (h * h);
      worst = std::max(worst, std::abs(s.beta0 * d2 + Ls.g2()[j] * v.L[j]));
    }
    return std::pair{worst, h};
  };
  const auto [e1, h1] = residual(2001);
  const auto [e2, h2] = residual(4001);
  const double order = std::log(e1 / e2) / std::log(h1 / h2);
  r.check(order > 1.8 && order < 2.2, "ODE residual %.2e (h=%.3f), %.2e (h=%.3f): observed order %.2f (step^2)",
          e1, h1, e2, h2, order);
}

void c5(Report& r) {
  const double pstar = 4 / (4 + kBesselR0 * kBesselR0);
  r.check(std::abs(pstar - 0.408865) < 5e-7, "p* = 4/(4 + r0^2) = %.6f", pstar);
  for (double p : {0.08, 0.2, 0.41, 0.5}) {
    const auto P = DegreePmf::geometric(p);
    const auto q = solve_q(P, default_grid(P), 1e-10, 200000);
    const double b0 = find_beta0(P, default_grid(P)).beta0;
    const bool supercrit = b0 > 1, survives = 1 - q.p_ext > 1e-3;
    const bool bound = p > pstar ? q.p_ext >= 0.999 : q.p_ext <= 0.95;
    r.check(q.converged && bound && supercrit == survives,
            "p=%.2f beta0=%.4f p_ext=%.6f (%s, %d iterations) %s", p, b0, q.p_ext,
            p > pstar ? ">= 0.999" : "<= 0.95", q.iterations, supercrit == survives ? "signs agree" : "SIGNS DISAGREE");
  }
}

void c6(Report& r) {
  const auto& s = spectral(0.08);
  const auto& P = s.P;
  const auto& spec = s.tables.spec;
  const double ez1 = expected_Zl_exact(P, spec, 1), md = mean_degree_exact(P, spec);
  r.check(std::abs(ez1 - md) <= 1e-8, "E[Z_1] = %.12f vs mean degree %.12f (diff %.1e)", ez1, md, std::abs(ez1 - md));
  for (double p : {0.08, 0.5}) {
    const auto Q = DegreePmf::geometric(p);
    const auto ez = expected_Zl_series(Q, default_grid(Q), 3);
    ForestOptions o;
    o.depth_cap = 3;
    o.replicates = 100000;
    o.master_seed = 606;
    o.keep_gen1_degrees = false;
    const auto f = sample_forest(Q, o);
    for (int l = 1; l <= 3; ++l) {
      std::vector<double> z(f.replicates);
      for (std::size_t i = 0; i < f.replicates; ++i) z[i] = static_cast<double>(f.z_at(i, l));
      const auto m = mean_se(z);
      r.check(std::abs(m.mean - ez[l - 1]) <= 3 * m.se, "Geo(%.2f) l=%d E[Z_l]=%.5f MC %.5f +- %.5f (z=%.2f)", p, l,
              ez[l - 1], m.mean, m.se, (m.mean - ez[l - 1]) / m.se);
    }
  }
  const auto ez10 = expected_Zl_series(P, spec, 10);
  const double ratio = ez10[9] / std::pow(s.beta0, 10), asym = ez_asymptote(s);
  r.check(std::abs(ratio / asym - 1) <= 0.02, "E[Z_10]/beta0^10 = %.6f vs asymptote %.6f (%.3f%%)", ratio, asym,
          100 * std::abs(ratio / asym - 1));
}

void c7(Report& r) {
  for (double p : {0.08, 0.5}) {
    const auto P = DegreePmf::geometric(p);
    const auto b = sample_backbone_counts(P, 4, 100000, 707);
    r.check(b.clamped == 0, "Geo(%.2f): %zu replicates clamped", p, b.clamped);
    for (int l = 1; l <= 4; ++l) {
      std::vector<double> w(b.w.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = b.w[i][l];
      const auto m = mean_se(w);
      const double exact = expected_Wl(P, l);
      r.check(std::abs(m.mean - exact) <= 3 * m.se, "Geo(%.2f) l=%d E[W_l]=%.4f MC %.4f +- %.4f (z=%.2f)", p, l, exact,
              m.mean, m.se, (m.mean - exact) / m.se);
    }
  }
}

void c8(Report& r) {
  for (double p : {0.08, 0.2, 0.5}) {
    const auto P = DegreePmf::geometric(p);
    const auto spec = default_grid(P);
    const auto quad = root_degree_pmf_exact(P, spec);
    const auto closed = root_degree_pmf_geo(p);
    const double tv = tv_distance(quad.pmf, closed.pmf);
    r.check(tv <= 1e-6, "Geo(%.2f) TV(closed form, quadrature) = %.2e (<= 1e-6)", p, tv);
    ForestOptions o;
    o.depth_cap = 1;
    o.replicates = 1000000;
    o.master_seed = 808;
    o.keep_gen1_degrees = false;
    const auto mc = degree_pmf_by_generation(sample_forest(P, o), 0);
    const double tvm = tv_distance(mc.pmf, closed.pmf);
    r.check(tvm <= 0.005, "Geo(%.2f) TV(closed form, 10^6-tree Monte Carlo) = %.4f (<= 0.005)", p, tvm);
  }
  const auto P = DegreePmf::geometric(0.08);
  const auto law = root_degree_pmf_exact(P, default_grid(P));
  DegreeAccumulator acc;
  const int graphs = 200;
  for (int s = 0; s < graphs; ++s) acc.add_tree(graph_degree_stats(build_graph(10000, P, derive_seed(888, s)), 0).hist[0]);
  const auto e = empirical_pmf(acc, graphs);
  const double tv = tv_distance(e.pmf, law.pmf);
  r.check(tv <= 0.02, "Geo(0.08) n=10^4 x %d graphs: TV(root degree, tree law) = %.4f (<= 0.02); mean %.4f vs %.4f",
          graphs, tv, e.mean, law.mean);
}

void c9(Report& r) {
  ForestOptions o;
  o.depth_cap = 2;
  o.replicates = 1000000;
  o.master_seed = 909;
  const auto f = sample_forest(DegreePmf::geometric(0.5), o);
  for (int k = 1; k <= 8; ++k) {
    const auto s = unimod_involution_stat(f, k);
    const bool ok = s.se > 0 ? std::abs(s.lhs - s.rhs) <= 3 * s.se : s.lhs == s.rhs;
    r.check(ok, "k=%d lhs=%.6f rhs=%.6f se=%.1e (z=%.2f)", k, s.lhs, s.rhs, s.se,
            s.se > 0 ? (s.lhs - s.rhs) / s.se : 0.0);
  }
}

double acyclic_fraction(const DegreePmf& P, std::size_t n, int graphs, int roots_total, std::uint64_t seed) {
  int ok = 0, total = 0;
  for (int g = 0; g < graphs; ++g) {
    const auto G = build_graph(n, P, derive_seed(seed, g));
    Rng rng(derive_seed(seed + 1, g));
    for (int i = 0; i < roots_total / graphs; ++i, ++total)
      ok += root_ball(G, static_cast<std::uint32_t>(rng.below(n)), 2).acyclic;
  }
  return static_cast<double>(ok) / total;
}

void c10(Report& r) {
  const auto G08 = DegreePmf::geometric(0.08);
  const double f = acyclic_fraction(G08, 10000, 20, 1000, 1010);
  r.check(f >= 0.98, "Geo(0.08) n=10^4, 10^3 roots over 20 graphs: acyclic radius-2 balls %.1f%% (>= 98%%)", 100 * f);
  r.note("Geo(0.08) n=2*10^3: %.1f%% acyclic; n=4*10^4: %.1f%% (cycle rate ~ 1/n)",
         100 * acyclic_fraction(G08, 2000, 20, 1000, 1011), 100 * acyclic_fraction(G08, 40000, 2, 1000, 1012));
  r.note("Geo(0.5) n=10^4: %.1f%% acyclic", 100 * acyclic_fraction(DegreePmf::geometric(0.5), 10000, 20, 1000, 1013));
}

void c11(Report& r) {
  const auto P = DegreePmf::geometric(0.08);
  const double surv = 1 - solve_q(P, default_grid(P), 1e-10).p_ext;
  std::vector<double> g;
  for (int s = 0; s < 20; ++s) g.push_back(giant_ratio(build_graph(20000, P, derive_seed(1111, s))));
  const auto m = mean_se(g);
  r.check(std::abs(m.mean - surv) <= 0.02, "Geo(0.08) n=2*10^4 x 20: giant ratio %.4f +- %.4f vs 1 - p_ext = %.4f",
          m.mean, m.se, surv);
}

void c12(Report& r) {
  // (a) one-step moments on a 3 x 3 grid of root types, Geo(0.08)
  {
    const auto P = DegreePmf::geometric(0.08);
    const auto spec = default_grid(P);
    const TypeRect A1{1, 4, 0.0, 6.0}, A2{3, 1000000, 4.0, 1e9};
    int idx = 0;
    for (int m : {1, 3, 6})
      for (double x : {0.5, 2.0, 6.0}) {
        ForestOptions o;
        o.depth_cap = 1;
        o.replicates = 100000;
        o.master_seed = derive_seed(1212, idx++);
        o.pinned_root = VertexType{m, x};
        o.rects = {A1, A2};
        o.keep_gen1_degrees = false;
        const auto f = sample_forest(P, o);
        std::vector<double> a(f.replicates), b(f.replicates), ab(f.replicates);
        for (std::size_t i = 0; i < f.replicates; ++i) {
          a[i] = static_cast<double>(f.rect_at(i, 1, 0));
          b[i] = static_cast<double>(f.rect_at(i, 1, 1));
          ab[i] = a[i] * b[i];
        }
        const auto ma = mean_se(a), mb = mean_se(b), mab = mean_se(ab);
        // covariance estimate and its influence-function SE
        std::vector<double> infl(f.replicates);
        for (std::size_t i = 0; i < f.replicates; ++i) infl[i] = (a[i] - ma.mean) * (b[i] - mb.mean);
        const auto mc = mean_se(infl);
        const double M1 = m1_rect(m, x, A1, P, spec), M2 = m1_second(m, x, A1, A2, P, spec),
                     v = v_signed(m, x, A1, A2, P, spec);
        r.check(std::abs(ma.mean - M1) <= 3 * ma.se && std::abs(mab.mean - M2) <= 3 * mab.se &&
                    std::abs(mc.mean - v) <= 3 * mc.se,
                "(m,x)=(%d,%.1f) M1 %.4f/%.4f(z=%.1f) M2 %.4f/%.4f(z=%.1f) v %.4f/%.4f(z=%.1f)", m, x, M1, ma.mean,
                (ma.mean - M1) / ma.se, M2, mab.mean, mab.se > 0 ? (mab.mean - M2) / mab.se : 0.0, v, mc.mean,
                mc.se > 0 ? (mc.mean - v) / mc.se : 0.0);
      }
  }
  // (b) second moment of W and (c) survivor composition.  Geo(0.3) stands in
  // for Geo(0.08): at l = 12 the latter has ~5*10^10 vertices per tree.
  {
    const auto P = DegreePmf::geometric(0.3);
    const auto& s = spectral(0.3);
    const auto E = eigenfunctions(s);
    const TypeRect B{1, 3, 0.0, 2.0};
    ForestOptions o;
    o.depth_cap = 12;
    o.replicates = 100000;
    o.master_seed = 1213;
    o.pinned_root = VertexType{3, 2.0};
    o.rects = {TypeRect::everything(), B};
    o.keep_gen1_degrees = false;
    const auto f = sample_forest(P, o);
    const auto w = w_statistics(f, s.beta0, -1, 1);
    const auto& g12 = w.by_generation[12];
    const auto u = u_truncated(3, 2.0, s);
    const double nu = E.nu_total(), target = u.value * nu * nu;
    r.check(std::abs(g12.second / target - 1) <= 0.10,
            "Geo(0.3) root (3,2): E[(Z_12/beta0^12)^2] = %.4f +- %.4f vs U nu^2 = %.4f (U=%.4f, %d terms): %.1f%%",
            g12.second, g12.second_se, target, u.value, u.terms, 100 * std::abs(g12.second / target - 1));
    const double nuB = E.nu_integral(B.k_lo, B.k_hi, B.z_lo, B.z_hi);
    const double ratio = nuB / nu;
    r.check(std::abs(g12.ratio_mean / ratio - 1) <= 0.05,
            "survivors (%zu): mean Z_12(B)/Z_12 = %.4f +- %.4f vs nu(B)/nu = %.4f (%.2f%%); pooled %.4f", g12.survivors,
            g12.ratio_mean, g12.ratio_se, ratio, 100 * std::abs(g12.ratio_mean / ratio - 1), g12.pooled_ratio);
    r.note("E[W_12] = %.4f vs mu(3,2) nu = %.4f", g12.mean, E.mu(3, 2.0) * nu);
  }
}

void c13(Report& r) {
  const auto& s = spectral(0.08);
  const auto pw = kernel_power_iteration(s.tables.g2);
  const double rel = std::abs(pw.beta - s.beta0) / s.beta0;
  r.check(rel <= 1e-6, "power iteration %.10f vs beta0 %.10f (rel %.1e, %d iterations)", pw.beta, s.beta0, rel,
          pw.iterations);
  const auto& g2 = s.tables.g2;
  const double ip = integrate(g2 * s.f0 * pw.f2) /
                    std::sqrt(integrate(g2 * s.f0 * s.f0) * integrate(g2 * pw.f2 * pw.f2));
  r.check(std::abs(ip) <= 1e-6, "second eigenfunction: <f0, f2>_g2 = %.1e (<= 1e-6); beta2 = %.6f", ip, pw.beta2);
}

struct Criterion {
  int id;
  const char* title;
  void (*run)(Report&);
};

const Criterion kCriteria[] = {
    {1, "growth rate matches the Bessel closed form", c1},
    {2, "growth rate lies in the a-priori bracket", c2},
    {3, "eigenpair residual and reversible kernel", c3},
    {4, "L-series closed form and ODE", c4},
    {5, "phase transition", c5},
    {6, "expected generation sizes", c6},
    {7, "expected potential-tree generation sizes", c7},
    {8, "root degree laws", c8},
    {9, "unimodularity involution statistic", c9},
    {10, "local tree-likeness of finite graphs", c10},
    {11, "giant component vs survival probability", c11},
    {12, "second moments and the limit W", c12},
    {13, "power iteration cross-check", c13},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int unexpected = 0, passed = 0, run = 0;
  const auto t_all = std::chrono::steady_clock::now();
  for (const auto& c : kCriteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    ++run;
    Report rep;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(rep);
    } catch (const std::exception& e) {
      rep.check(false, "exception: %s", e.what());
    }
    const double dt = seconds_since(t0);
    const bool known = kKnownInfeasible.count(c.id) > 0;
    std::printf("%s criterion %d: %s (%.1f s)%s\n", rep.pass ? "PASS" : "FAIL", c.id, c.title, dt,
                !rep.pass && known ? " [known infeasible, see README]" : "");
    for (const auto& l : rep.lines) std::printf("    %s\n", l.c_str());
    std::fflush(stdout);
    if (rep.pass) ++passed;
    else if (!known) ++unexpected;
  }
  std::printf("%d/%d criteria passed in %.1f s; %d unexpected failure(s)\n", passed, run, seconds_since(t_all),
              unexpected);
  return unexpected == 0 ? 0 : 1;
}
