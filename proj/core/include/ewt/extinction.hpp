// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#pragma once

#include <optional>

#include "ewt/grid.hpp"
#include "ewt/numerics.hpp"
#include "ewt/tables.hpp"

namespace ewt {

/// The extinction operator
///   T(f)(x) = (1/x) int_0^x [1 - S(y) + int_y^inf sum_k P(k) phi_k(z) f(z)^{k-1} dz] dy,
///   T(f)(0) = int_0^inf sum_k P(k) phi_k(z) f(z)^{k-1} dz,
/// with phi_k the Erlang(k) density.  T^l(0) increases to q, and q(x)^m is the
/// extinction probability of a tree whose root has type (m, x).
class OperatorT {
 public:
  OperatorT(const DegreePmf& P, const GridSpec& spec);
  GridFn apply(const GridFn& f) const;
  const GridSpec& spec() const { return spec_; }
  const DegreePmf& pmf() const { return P_; }

 private:
  DegreePmf P_;
  GridSpec spec_;
  GridFn S_;
};

GridFn apply_T(const GridFn& f, const DegreePmf& P);
/// Closed form for geometric P (tail of the z-integral cut at x_max like apply_T).
GridFn apply_T_geo(const GridFn& f, double p);

struct ExtinctionSolution {
  GridFn q;
  double p_ext = 1.0;
  int iterations = 0;
  double residual = 0.0;       // sup |q - T(q)|
  bool converged = false;
  bool monotone = true;        // iterates were pointwise non-decreasing
  double max_decrease = 0.0;   // largest pointwise decrease seen (roundoff level)
};

/// Iterate T from f = 0 (or from `start`) until sup|f_{l+1} - f_l| < tol.
ExtinctionSolution solve_q(const DegreePmf& P, const GridSpec& spec, double tol = 1e-8,
                           int max_iter = 50000, std::optional<GridFn> start = std::nullopt);

/// sum_m P(m) int e^{-x} x^m/m! q(x)^m dx
double extinction_probability(const GridFn& q, const DegreePmf& P);

struct SufficientCondition {
  bool holds = false;
  double min_value = 0.0;
};

/// min over x in [0, x0] of int_0^{x0} z min(x,z)/x g_2(z) dz, compared with 1.
SufficientCondition sufficient_condition(const DegreePmf& P, double x0, const GridSpec& spec);

}  // namespace ewt
