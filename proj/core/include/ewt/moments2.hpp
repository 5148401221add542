// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
//
// One-step first and second factorial moments of the type counts of a
// vertex's kept children, the signed covariance measure v, and the
// second-moment series U(m, x) of the normalized limit W.
#pragma once

#include "ewt/grid.hpp"
#include "ewt/numerics.hpp"
#include "ewt/spectral.hpp"
#include "ewt/types.hpp"

namespace ewt {

/// M_1(m, x; A) = (m/x) int_A min(x,z) P(k) phi_k(z) dz, summed over k in A;
/// at x = 0 the factor min(x,z)/x is read as 1.
double m1_rect(int m, double x, const TypeRect& A, const DegreePmf& P, const GridSpec& spec);

/// E[Z_1(A1) Z_1(A2)] for a root of type (m, x):
/// m(m-1)/x^2 I(A1) I(A2) + (m/x) I(A1 n A2), I(A) = int_A min(x,z) w_A(z) dz.
double m1_second(int m, double x, const TypeRect& A1, const TypeRect& A2, const DegreePmf& P,
                 const GridSpec& spec);

/// v(m, x; A1, A2) = M_1^(2)(A1, A2) - M_1(A1) M_1(A2).
double v_signed(int m, double x, const TypeRect& A1, const TypeRect& A2, const DegreePmf& P,
                const GridSpec& spec);

struct UValue {
  double value = 0.0;
  double mu_sq = 0.0;  // first term, mu(m,x)^2
  int terms = 0;       // series terms used after the first
  bool converged = false;
};

/// U(m, x) = mu(m,x)^2 + sum_{l>=1} beta0^{-2l} (M^{l-1} V)(m, x), with
/// V(m, x) = int int v(m,x; dy1, dy2) mu(y1) mu(y2).  The series stops when a
/// summand drops below tol times the running sum.
UValue u_truncated(int m, double x, const SpectralSolution& sol, double tol = 1e-12);

/// x -> V(1, x): the per-child variance density of the sum of mu over children.
GridFn v_tilde(const SpectralSolution& sol);

}  // namespace ewt
