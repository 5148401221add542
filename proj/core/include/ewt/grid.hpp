// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ewt {

struct GridSpec {
  double x_max = 1.0;
  std::size_t n_points = 2;

  GridSpec() = default;
  GridSpec(double x_max_, std::size_t n_points_);

  double step() const { return x_max / static_cast<double>(n_points - 1); }
  double x(std::size_t i) const { return static_cast<double>(i) * step(); }
  bool operator==(const GridSpec& o) const {
    return x_max == o.x_max && n_points == o.n_points;
  }
};

/// Quadrature rule for integrals of grid functions.
///  - trapezoid: composite trapezoid, second order.
///  - cubic: each cell integrated against the cubic through the four nearest
///    nodes (one-sided at the ends), fourth order.  Default throughout.
enum class Rule { trapezoid, cubic };

struct GridFn {
  GridSpec spec;
  std::vector<double> values;

  GridFn() = default;
  GridFn(GridSpec s, std::vector<double> v);
  explicit GridFn(GridSpec s, double fill = 0.0);

  static GridFn tabulate(const GridSpec& s, const std::function<double(double)>& f);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  /// Cubic Lagrange interpolation (exact at nodes).
  double at(double x) const;
};

/// Integral over each cell [x_i, x_{i+1}]; size n_points - 1.
std::vector<double> cell_integrals(const std::vector<double>& f, double h,
                                   Rule rule = Rule::cubic);

/// x -> int_0^x f
GridFn forward_cumulative(const GridFn& f, Rule rule = Rule::cubic);
/// x -> int_x^{x_max} f, accumulated from the right so tiny tails keep relative accuracy.
GridFn backward_tail(const GridFn& f, Rule rule = Rule::cubic);

/// int_lo^hi f with lo, hi anywhere in [0, x_max].
double integrate(const GridFn& f, double lo, double hi, Rule rule = Rule::cubic);
double integrate(const GridFn& f, Rule rule = Rule::cubic);

GridFn operator*(const GridFn& a, const GridFn& b);
GridFn operator*(double s, const GridFn& a);

}  // namespace ewt
