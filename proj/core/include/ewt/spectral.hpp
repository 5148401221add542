// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "ewt/grid.hpp"
#include "ewt/numerics.hpp"
#include "ewt/tables.hpp"

namespace ewt {

/// First two positive zeros of the Bessel function J_0.
inline constexpr double kBesselR0 = 2.404825557695773;
inline constexpr double kBesselR1 = 5.520078110286311;

/// J_0 from its power series (adequate for |x| <= ~20).
double bessel_j0(double x);

/// 4(1-p)/(r0^2 p): growth rate of the tree for geometric P.
double beta0_geo_closed(double p);

// ---------------------------------------------------------------------------
// L(beta, x) = sum_i G_i(x) (-1/beta)^i,  G_0 = 1,
// G_i(x) = int_x^inf int_y^inf g_2(z) G_{i-1}(z) dz dy.

std::vector<GridFn> compute_G_sequence(const DegreePmf& P, const GridSpec& spec, int i_max);

struct LValue {
  GridFn L;
  int terms = 0;           // number of G_i used
  bool truncated = false;  // |G_i(0)/beta^i| < 1e-14 reached
};

/// L(beta, .) from a fixed list of G_i (no extension).
LValue eval_L(double beta, const std::vector<GridFn>& G);

/// L-series with the G list extended on demand (hard cap on the number of terms).
class LSeries {
 public:
  static constexpr double kTruncation = 1e-14;
  static constexpr int kCap = 60;

  explicit LSeries(GridFn g2);
  /// Extend G until |G_i(0)| / |beta|^i < kTruncation; false if the cap was hit.
  bool ensure(double beta);
  double at0(double beta);
  LValue eval(double beta);
  const std::vector<GridFn>& G() const { return G_; }
  const GridFn& g2() const { return g2_; }

 private:
  GridFn g2_;
  std::vector<GridFn> G_;
  int terms_for(double beta) const;
};

// ---------------------------------------------------------------------------

struct spectral_error : std::runtime_error {
  std::vector<std::pair<double, double>> scanned;  // (beta, L(beta,0))
  spectral_error(const std::string& what, std::vector<std::pair<double, double>> s)
      : std::runtime_error(what), scanned(std::move(s)) {}
};

struct SpectralSolution {
  DegreePmf P;
  SeriesTables tables;
  double beta0 = 0.0;
  GridFn L_raw;          // L(beta0, .)
  GridFn f0;             // normalized: int g_2 f0^2 = 1 (equal to L_raw until normalize_f0)
  double c_n = 1.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  double fixed_point_residual = 0.0;
  bool normalized = false;
  bool L_nonnegative = true;   // L(beta0, x) >= -1e-8 everywhere
  bool L_increasing = true;    // non-decreasing, strictly at the left end
  int g_terms = 0;
  std::vector<std::pair<double, double>> L0_values;  // the scan over the bracket
};

/// Largest zero of beta -> L(beta, 0) inside (max_x x int_x^inf g_2, E[n] - 1).
SpectralSolution find_beta0(const DegreePmf& P, const GridSpec& spec);
/// Scale f0 so that int g_2 f0^2 = 1 and record the fixed-point residual.
SpectralSolution normalize_f0(SpectralSolution sol);
/// find_beta0 followed by normalize_f0.
SpectralSolution solve_spectral(const DegreePmf& P, const GridSpec& spec);

/// x -> int_0^inf min(x,z) g_2(z) phi(z) dz
GridFn apply_H1(const GridFn& phi, const GridFn& g2);
/// x -> (1/x) int_0^inf min(x,z) g_2(z) phi(z) dz, with value int g_2 phi at x = 0
GridFn apply_H1_over_x(const GridFn& phi, const GridFn& g2);

/// sup_x |beta0 f0(x) - int min(x,z) g_2(z) f0(z) dz|
double eigen_residual(const SpectralSolution& sol);

/// mu(m,x) = (m/x) f0(x) and nu(k-1,z) = P(k) phi_k(z) f0(z).
class Eigenfunctions {
 public:
  explicit Eigenfunctions(const SpectralSolution& sol);
  double f0prime0() const { return f0p0_; }
  double mu(int m, double x) const;
  /// density of nu at type (k-1, z)
  double nu(int k, double z) const;
  /// sum_{k=k_lo}^{k_hi} int_{z_lo}^{z_hi} nu(k-1,z) dz
  double nu_integral(int k_lo, int k_hi, double z_lo, double z_hi) const;
  double nu_total() const { return nu_total_; }

 private:
  DegreePmf P_;
  GridFn f0_;
  double f0p0_ = 0.0;
  double nu_total_ = 0.0;
};

Eigenfunctions eigenfunctions(const SpectralSolution& sol);

// ---------------------------------------------------------------------------
// Independent route to the eigenpair: power iteration on phi -> H1 phi.

struct PowerIteration {
  double beta = 0.0;
  GridFn f;            // normalized, positive
  int iterations = 0;
  double beta2 = 0.0;  // second eigenvalue from deflated iteration
  GridFn f2;           // normalized second eigenfunction
  int iterations2 = 0;
};

PowerIteration kernel_power_iteration(const GridFn& g2, int max_iter = 5000, double tol = 1e-15);

// ---------------------------------------------------------------------------
// The reversible chain p(x,y) = min(x,y) g_2(y) f0(y) / (beta0 f0(x)).

struct KernelGrid {
  GridSpec spec;
  std::vector<double> weights;   // trapezoid weights folded into p_matrix
  std::vector<double> p_matrix;  // row-major N x N, row i = p(x_i, y_j) w_j
  GridFn pi;                     // stationary density (discrete normalization)
  double beta_hat = 0.0;         // eigenvalue of the discretized kernel
  GridFn f_hat;                  // its eigenvector, scaled like f0
  double max_row_correction = 0.0;
  std::size_t n() const { return spec.n_points; }
};

KernelGrid markov_kernel(const SpectralSolution& sol, std::size_t n_points = 401);

struct KernelChecks {
  double row_sum_error = 0.0;
  double detailed_balance = 0.0;  // max relative violation
  double stationarity = 0.0;      // sup |pi P - pi| (density)
};

KernelChecks check_kernel(const KernelGrid& kg);

struct KernelIterates {
  int l = 0;
  std::vector<double> p_l;            // l-step matrix
  std::vector<double> tv;             // per start x at step l
  std::vector<double> tv_max;         // max_x TV after steps 1..l
  std::vector<double> h_factor_dev;   // sup |h_s/(beta^s f0 f0) - 1| after steps 1..l
  double rate_estimate = 0.0;         // exp(slope) of log tv_max over [fit_from, l]
  double rate_r2 = 0.0;
};

KernelIterates iterate_kernel(const KernelGrid& kg, int l, int fit_from = 3);
/// h_l(x_i, y_j) from the l-step matrix.
std::vector<double> reconstruct_h(const KernelGrid& kg, const std::vector<double>& p_l, int l);

// ---------------------------------------------------------------------------
// First moments.

/// E[W_l] = E[n] (E[n]-1)^{l-1}: expected generation size of the un-pruned tree.
double expected_Wl(const DegreePmf& P, int l);

/// E[Z_1..Z_L] by the max-coupled integral recursion.
std::vector<double> expected_Zl_series(const DegreePmf& P, const GridSpec& spec, int L);
double expected_Zl_exact(const DegreePmf& P, const GridSpec& spec, int l);

struct GrowthConstants {
  double root_factor = 0.0;  // sum_m P(m) int e^{-x} x^m/m! (m/x) f0(x) dx
  double nu_total = 0.0;     // sum_k P(k) int phi_k(z) f0(z) dz
  double product = 0.0;      // limit of E[Z_l]/beta0^l
  double squared_form = 0.0; // nu_total^2
};

GrowthConstants growth_constants(const SpectralSolution& sol);
double growth_constant(const SpectralSolution& sol);
double ez_asymptote(const SpectralSolution& sol);

}  // namespace ewt
