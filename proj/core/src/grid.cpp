// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#include "ewt/grid.hpp"

#include <algorithm>
#include <cmath>

#include "ewt/numerics.hpp"

namespace ewt {

GridSpec::GridSpec(double x_max_, std::size_t n_points_) : x_max(x_max_), n_points(n_points_) {
  if (!(x_max > 0.0) || !std::isfinite(x_max)) throw domain_error("grid: x_max must be > 0");
  if (n_points < 2) throw domain_error("grid: need at least 2 points");
}

GridFn::GridFn(GridSpec s, std::vector<double> v) : spec(s), values(std::move(v)) {
  if (values.size() != spec.n_points) throw domain_error("grid function: length mismatch");
}

GridFn::GridFn(GridSpec s, double fill) : spec(s), values(s.n_points, fill) {}

GridFn GridFn::tabulate(const GridSpec& s, const std::function<double(double)>& f) {
  GridFn g(s);
  for (std::size_t i = 0; i < s.n_points; ++i) g.values[i] = f(s.x(i));
  return g;
}

namespace {

// first node of the 4-point stencil used for cell i
std::size_t stencil(std::size_t i, std::size_t n) {
  if (i == 0) return 0;
  if (i + 2 >= n) return n - 4;
  return i - 1;
}

// Lagrange basis at local coordinate t (nodes at 0,1,2,3)
void lagrange4(double t, double w[4]) {
  w[0] = -(t - 1) * (t - 2) * (t - 3) / 6.0;
  w[1] = t * (t - 2) * (t - 3) / 2.0;
  w[2] = -t * (t - 1) * (t - 3) / 2.0;
  w[3] = t * (t - 1) * (t - 2) / 6.0;
}

// int over [a,b] inside cell i of the interpolant, a,b in absolute x
double partial_cell(const std::vector<double>& f, double h, std::size_t i, double a, double b,
                    Rule rule) {
  const std::size_t n = f.size();
  if (b <= a) return 0.0;
  if (rule == Rule::trapezoid || n < 4) {
    const double x0 = i * h;
    auto lin = [&](double x) { return f[i] + (f[i + 1] - f[i]) * (x - x0) / h; };
    return 0.5 * (b - a) * (lin(a) + lin(b));
  }
  const std::size_t s = stencil(i, n);
  // 3-point Gauss-Legendre is exact for the cubic
  static const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const double gw[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double acc = 0.0;
  for (int q = 0; q < 3; ++q) {
    const double t = (c + r * gx[q]) / h - static_cast<double>(s);
    double w[4];
    lagrange4(t, w);
    acc += gw[q] * (w[0] * f[s] + w[1] * f[s + 1] + w[2] * f[s + 2] + w[3] * f[s + 3]);
  }
  return acc * r;
}

}  // namespace

double GridFn::at(double x) const {
  const std::size_t n = values.size();
  const double h = spec.step();
  if (x <= 0.0) return values.front();
  if (x >= spec.x_max) return values.back();
  std::size_t i = std::min(static_cast<std::size_t>(x / h), n - 2);
  if (n < 4) {
    const double t = x / h - i;
    return values[i] + t * (values[i + 1] - values[i]);
  }
  const std::size_t s = stencil(i, n);
  double w[4];
  lagrange4(x / h - static_cast<double>(s), w);
  return w[0] * values[s] + w[1] * values[s + 1] + w[2] * values[s + 2] + w[3] * values[s + 3];
}

std::vector<double> cell_integrals(const std::vector<double>& f, double h, Rule rule) {
  const std::size_t n = f.size();
  std::vector<double> c(n > 0 ? n - 1 : 0);
  if (rule == Rule::trapezoid || n < 4) {
    for (std::size_t i = 0; i + 1 < n; ++i) c[i] = 0.5 * h * (f[i] + f[i + 1]);
    return c;
  }
  const double k = h / 24.0;
  c[0] = k * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]);
  for (std::size_t i = 1; i + 2 < n; ++i)
    c[i] = k * (-f[i - 1] + 13 * f[i] + 13 * f[i + 1] - f[i + 2]);
  c[n - 2] = k * (f[n - 4] - 5 * f[n - 3] + 19 * f[n - 2] + 9 * f[n - 1]);
  return c;
}

GridFn forward_cumulative(const GridFn& f, Rule rule) {
  const auto c = cell_integrals(f.values, f.spec.step(), rule);
  GridFn out(f.spec, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) out.values[i + 1] = out.values[i] + c[i];
  return out;
}

GridFn backward_tail(const GridFn& f, Rule rule) {
  const auto c = cell_integrals(f.values, f.spec.step(), rule);
  GridFn out(f.spec, 0.0);
  for (std::size_t i = c.size(); i-- > 0;) out.values[i] = out.values[i + 1] + c[i];
  return out;
}

double integrate(const GridFn& f, double lo, double hi, Rule rule) {
  const double X = f.spec.x_max;
  const double eps = 1e-12 * X;
  if (lo < -eps || hi > X + eps || lo > hi + eps)
    throw domain_error("integrate: bounds outside the grid");
  lo = std::clamp(lo, 0.0, X);
  hi = std::clamp(hi, 0.0, X);
  if (hi <= lo) return 0.0;
  const double h = f.spec.step();
  const std::size_t n = f.size();
  const std::size_t ilo = std::min(static_cast<std::size_t>(lo / h), n - 2);
  const std::size_t ihi = std::min(static_cast<std::size_t>(hi / h), n - 2);
  if (ilo == ihi) return partial_cell(f.values, h, ilo, lo, hi, rule);
  const auto c = cell_integrals(f.values, h, rule);
  double s = partial_cell(f.values, h, ilo, lo, (ilo + 1) * h, rule);
  for (std::size_t i = ilo + 1; i < ihi; ++i) s += c[i];
  s += partial_cell(f.values, h, ihi, ihi * h, hi, rule);
  return s;
}

double integrate(const GridFn& f, Rule rule) {
  const auto c = cell_integrals(f.values, f.spec.step(), rule);
  double s = 0.0;
  for (double v : c) s += v;
  return s;
}

GridFn operator*(const GridFn& a, const GridFn& b) {
  if (!(a.spec == b.spec)) throw domain_error("grid function product: grid mismatch");
  GridFn out(a.spec);
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a.values[i] * b.values[i];
  return out;
}

GridFn operator*(double s, const GridFn& a) {
  GridFn out(a.spec);
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = s * a.values[i];
  return out;
}

}  // namespace ewt
