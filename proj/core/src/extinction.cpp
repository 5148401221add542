// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#include "ewt/extinction.hpp"

#include <algorithm>
#include <cmath>

namespace ewt {

namespace {

void check_unit_range(const GridFn& f) {
  for (double v : f.values)
    if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) throw domain_error("apply_T: f must take values in [0,1]");
}

GridFn average_from_zero(const GridFn& h) {
  // x -> (1/x) int_0^x h, with the x = 0 value h(0)
  GridFn H = forward_cumulative(h);
  GridFn out(h.spec);
  out.values[0] = h.values[0];
  for (std::size_t i = 1; i < h.size(); ++i) out.values[i] = H.values[i] / h.spec.x(i);
  return out;
}

void clamp_unit(GridFn& f) {
  for (double& v : f.values) v = std::clamp(v, 0.0, 1.0);
}

}  // namespace

OperatorT::OperatorT(const DegreePmf& P, const GridSpec& spec) : P_(P), spec_(spec), S_(spec) {
  for (std::size_t i = 0; i < spec.n_points; ++i) S_.values[i] = survival_mix(spec.x(i), P);
}

GridFn OperatorT::apply(const GridFn& f) const {
  if (!(f.spec == spec_)) throw domain_error("apply_T: grid mismatch");
  check_unit_range(f);
  GridFn b(spec_);
  for (std::size_t i = 0; i < spec_.n_points; ++i) {
    const double z = spec_.x(i), fz = std::clamp(f.values[i], 0.0, 1.0);
    // sum_k P(k) e^{-z} (z f)^{k-1}/(k-1)! = e^{-z(1-f)} sum_j P(j+1) Pois(j; z f)
    const double mix = poisson_mix([&](int j) { return P_.prob(j + 1); }, P_.k_max, z * fz);
    b.values[i] = std::exp(-z * (1.0 - fz)) * mix;
  }
  GridFn B = backward_tail(b);
  GridFn h(spec_);
  for (std::size_t i = 0; i < spec_.n_points; ++i) h.values[i] = 1.0 - S_.values[i] + B.values[i];
  GridFn out = average_from_zero(h);
  out.values[0] = B.values[0];
  clamp_unit(out);
  return out;
}

GridFn apply_T(const GridFn& f, const DegreePmf& P) { return OperatorT(P, f.spec).apply(f); }

GridFn apply_T_geo(const GridFn& f, double p) {
  if (!(p > 0.0 && p < 1.0)) throw domain_error("apply_T_geo: p must lie in (0,1)");
  check_unit_range(f);
  const GridSpec& s = f.spec;
  GridFn c(s), zc(s);
  for (std::size_t i = 0; i < s.n_points; ++i) {
    const double z = s.x(i);
    c.values[i] = p * std::exp(-z * (1.0 - (1.0 - p) * std::clamp(f.values[i], 0.0, 1.0)));
    zc.values[i] = z * c.values[i];
  }
  const GridFn lower = forward_cumulative(zc), upper = backward_tail(c);
  GridFn out(s);
  out.values[0] = upper.values[0];
  for (std::size_t i = 1; i < s.n_points; ++i) {
    const double x = s.x(i), px = p * x;
    // (px - 1 + e^{-px})/(px), written to avoid cancellation at small px
    const double first = px < 1e-4 ? px / 2 - px * px / 6 : (px + std::expm1(-px)) / px;
    out.values[i] = first + (lower.values[i] + x * upper.values[i]) / x;
  }
  clamp_unit(out);
  return out;
}

double extinction_probability(const GridFn& q, const DegreePmf& P) {
  GridFn e(q.spec);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double x = q.spec.x(i), qx = std::clamp(q.values[i], 0.0, 1.0);
    const double mix = poisson_mix([&](int m) { return P.prob(m); }, P.k_max + 1, x * qx);
    e.values[i] = std::exp(-x * (1.0 - qx)) * mix;
  }
  return std::clamp(integrate(e), 0.0, 1.0);
}

ExtinctionSolution solve_q(const DegreePmf& P, const GridSpec& spec, double tol, int max_iter,
                           std::optional<GridFn> start) {
  if (!(tol > 0.0)) throw domain_error("solve_q: tol must be positive");
  const OperatorT T(P, spec);
  ExtinctionSolution sol;
  const bool from_zero = !start.has_value();
  GridFn f = start ? *start : GridFn(spec, 0.0);
  for (int it = 1; it <= max_iter; ++it) {
    GridFn g = T.apply(f);
    double diff = 0.0;
    for (std::size_t i = 0; i < spec.n_points; ++i) {
      const double d = g.values[i] - f.values[i];
      diff = std::max(diff, std::abs(d));
      if (from_zero && d < 0.0) sol.max_decrease = std::max(sol.max_decrease, -d);
    }
    f = std::move(g);
    sol.iterations = it;
    if (diff < tol) {
      sol.converged = true;
      break;
    }
  }
  sol.monotone = sol.max_decrease <= 1e-12;
  const GridFn Tf = T.apply(f);
  for (std::size_t i = 0; i < spec.n_points; ++i)
    sol.residual = std::max(sol.residual, std::abs(Tf.values[i] - f.values[i]));
  sol.q = std::move(f);
  sol.p_ext = extinction_probability(sol.q, P);
  return sol;
}

SufficientCondition sufficient_condition(const DegreePmf& P, double x0, const GridSpec& spec) {
  if (!(x0 > 0.0)) throw domain_error("sufficient_condition: x0 must be positive");
  x0 = std::min(x0, spec.x_max);
  GridFn zg(spec), z2g(spec);
  for (std::size_t i = 0; i < spec.n_points; ++i) {
    const double z = spec.x(i), g = g_series(2, z, P);
    zg.values[i] = z * g;
    z2g.values[i] = z * z * g;
  }
  const GridFn low = forward_cumulative(z2g), up = forward_cumulative(zg);
  const double up_x0 = integrate(zg, 0.0, x0), low_x0 = integrate(z2g, 0.0, x0);
  // value(x) = (1/x) int_0^x z^2 g_2 + int_x^{x0} z g_2 ; value(0) = int_0^{x0} z g_2
  double m = up_x0;
  for (std::size_t i = 1; i < spec.n_points && spec.x(i) < x0; ++i) {
    const double x = spec.x(i);
    m = std::min(m, low.values[i] / x + (up_x0 - up.values[i]));
  }
  m = std::min(m, low_x0 / x0);
  return {m > 1.0, m};
}

}  // namespace ewt
