// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#include "ewt/moments2.hpp"

#include <algorithm>
#include <cmath>

namespace ewt {

namespace {

/// w_A(z) = sum_{k in [k_lo, k_hi]} P(k) e^{-z} z^{k-1}/(k-1)!
GridFn rect_weight(const TypeRect& A, const DegreePmf& P, const GridSpec& spec) {
  GridFn w(spec);
  const int hi = std::min(A.k_hi, P.k_max);
  for (std::size_t i = 0; i < spec.n_points; ++i)
    w.values[i] = poisson_mix(
        [&](int j) { return j + 1 >= A.k_lo ? P.prob(j + 1) : 0.0; }, hi, spec.x(i));
  return w;
}

struct RectIntegrals {
  double min_part = 0.0;  // int_A min(x,z) w_A(z) dz
  double plain = 0.0;     // int_A w_A(z) dz
};

RectIntegrals rect_integrals(double x, const TypeRect& A, const DegreePmf& P, const GridSpec& spec) {
  RectIntegrals r;
  if (A.empty() || A.k_lo > P.k_max) return r;
  const double lo = std::min(A.z_lo, spec.x_max), hi = std::min(A.z_hi, spec.x_max);
  if (hi <= lo) return r;
  const GridFn w = rect_weight(A, P, spec);
  GridFn zw(spec);
  for (std::size_t i = 0; i < spec.n_points; ++i) zw.values[i] = spec.x(i) * w.values[i];
  r.plain = integrate(w, lo, hi);
  const double split = std::clamp(x, lo, hi);
  r.min_part = integrate(zw, lo, split) + x * integrate(w, split, hi);
  return r;
}

void check_args(int m, double x) {
  if (m < 0) throw domain_error("moments: m must be >= 0");
  if (!(x >= 0.0)) throw domain_error("moments: x must be >= 0");
}

}  // namespace

double m1_rect(int m, double x, const TypeRect& A, const DegreePmf& P, const GridSpec& spec) {
  check_args(m, x);
  A.validate();
  if (m == 0) return 0.0;
  const RectIntegrals r = rect_integrals(x, A, P, spec);
  return x == 0.0 ? m * r.plain : m * r.min_part / x;
}

double m1_second(int m, double x, const TypeRect& A1, const TypeRect& A2, const DegreePmf& P,
                 const GridSpec& spec) {
  check_args(m, x);
  A1.validate();
  A2.validate();
  if (m == 0) return 0.0;
  const RectIntegrals r1 = rect_integrals(x, A1, P, spec), r2 = rect_integrals(x, A2, P, spec);
  const TypeRect both = A1.intersect(A2);
  const RectIntegrals r12 = both.empty() ? RectIntegrals{} : rect_integrals(x, both, P, spec);
  const double mm = static_cast<double>(m) * (m - 1);
  if (x == 0.0) return mm * r1.plain * r2.plain + m * r12.plain;
  return mm / (x * x) * r1.min_part * r2.min_part + m / x * r12.min_part;
}

double v_signed(int m, double x, const TypeRect& A1, const TypeRect& A2, const DegreePmf& P,
                const GridSpec& spec) {
  return m1_second(m, x, A1, A2, P, spec) - m1_rect(m, x, A1, P, spec) * m1_rect(m, x, A2, P, spec);
}

GridFn v_tilde(const SpectralSolution& sol) {
  const GridSpec& spec = sol.f0.spec;
  const GridFn& f0 = sol.f0;
  const GridFn& g2 = sol.tables.g2;
  const GridFn& g3 = sol.tables.g3;
  // F = f0^2 (g2 + z g3); V(1,x) = (1/x) int_0^x F + int_x^inf F/z - beta^2 f0^2/x^2
  GridFn F(spec), Fz(spec);
  for (std::size_t i = 0; i < spec.n_points; ++i) {
    const double z = spec.x(i), f = f0.values[i];
    F.values[i] = f * f * (g2.values[i] + z * g3.values[i]);
    Fz.values[i] = i == 0 ? 0.0 : F.values[i] / z;
  }
  const GridFn lower = forward_cumulative(F), upper = backward_tail(Fz);
  const double b2 = sol.beta0 * sol.beta0;
  const double fp0 = Eigenfunctions(sol).f0prime0();
  GridFn v(spec);
  v.values[0] = upper.values[0] - b2 * fp0 * fp0;
  for (std::size_t i = 1; i < spec.n_points; ++i) {
    const double x = spec.x(i), r = f0.values[i] / x;
    v.values[i] = lower.values[i] / x + upper.values[i] - b2 * r * r;
  }
  return v;
}

UValue u_truncated(int m, double x, const SpectralSolution& sol, double tol) {
  check_args(m, x);
  if (!(sol.beta0 > 1.0)) throw domain_error("u_truncated: beta0 must exceed 1");
  if (!(tol > 0.0)) throw domain_error("u_truncated: tol must be positive");
  const GridSpec& spec = sol.f0.spec;
  const double beta = sol.beta0, b2 = beta * beta;
  auto eval = [&](const GridFn& g) { return x == 0.0 ? g.values[0] : g.at(std::min(x, spec.x_max)); };

  UValue u;
  const double mu = x == 0.0 ? m * Eigenfunctions(sol).f0prime0() : m * eval(sol.f0) / x;
  u.mu_sq = mu * mu;
  if (m == 0) {
    u.converged = true;
    return u;
  }
  const GridFn V = v_tilde(sol);
  double sum = m * eval(V) / b2;
  u.terms = 1;
  // (M^{l-1} V)(m,x) = m * D(H1^{l-2} psi)(x), psi(z) = z V(1,z), D = H1 over x
  GridFn phi(spec);
  for (std::size_t i = 0; i < spec.n_points; ++i) phi.values[i] = spec.x(i) * V.values[i];
  double scale = 1.0 / b2;
  const int cap = 2000;
  for (int l = 2; l <= cap; ++l) {
    scale /= b2;
    const double term = m * scale * eval(apply_H1_over_x(phi, sol.tables.g2));
    sum += term;
    ++u.terms;
    if (std::abs(term) < tol * std::abs(u.mu_sq + sum)) {
      u.converged = true;
      break;
    }
    phi = apply_H1(phi, sol.tables.g2);
  }
  u.value = u.mu_sq + sum;
  return u;
}

}  // namespace ewt
