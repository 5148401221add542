// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ewt {

/// Potential-degree law P on k >= 1, truncated at k_max and renormalized.
///
/// probs[k] holds P(k); probs[0] is always zero.  The shifted law used for
/// non-root vertices is P^(m) = P(m+1).
struct DegreePmf {
  std::vector<double> probs;
  int k_max = 0;
  double mean = 0.0;
  std::optional<double> mgf_theta;

  std::string family;   // "geo", "poisson", "delta", "pmf"
  double param = 0.0;   // p, lambda or k depending on family

  double prob(int k) const { return (k >= 1 && k <= k_max) ? probs[k] : 0.0; }
  /// sum_{j >= k} P(j)
  double tail(int k) const;
  /// E[exp(theta n)]; analytic when the family allows it, truncated sum otherwise.
  double mgf(double theta) const;
  /// Supremum of admissible theta (infinity for light tails).
  double theta_sup() const;

  static DegreePmf geometric(double p);
  /// n = 1 + Poisson(lambda)
  static DegreePmf shifted_poisson(double lambda);
  static DegreePmf delta(int k);
  /// weights[k] for k = 0..K (weights[0] must be zero); normalized here.
  static DegreePmf from_weights(std::vector<double> weights);

 private:
  std::vector<double> tail_;
  void finalize();
};

/// Thrown on invalid arguments (out-of-domain k, bad grid bounds, ...).
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

inline constexpr double kTailEps = 1e-12;

double erlang_pdf(int k, double z);
double erlang_sf(int k, double x);
double poisson_pmf(int j, double lambda);

/// sum_{j=0}^{J-1} w(j) e^{-lambda} lambda^j / j!, evaluated outward from the mode.
template <class W>
double poisson_mix(W&& w, int J, double lambda) {
  if (J <= 0) return 0.0;
  if (lambda <= 0.0) return w(0);
  int mode = static_cast<int>(std::floor(lambda));
  if (mode > J - 1) mode = J - 1;
  const double lp = -lambda + mode * std::log(lambda) - std::lgamma(mode + 1.0);
  const double p0 = std::exp(lp);
  double s = w(mode) * p0;
  double p = p0;
  for (int j = mode + 1; j < J; ++j) {
    p *= lambda / j;
    s += w(j) * p;
    if (p < 1e-22 && j > lambda) break;
  }
  p = p0;
  for (int j = mode; j > 0; --j) {
    p *= j / lambda;
    s += w(j - 1) * p;
    if (p < 1e-22 && j < lambda) break;
  }
  return s;
}

/// g_i(z) = sum_{k>=i} P(k) e^{-z} z^{k-i} / (k-i)!
double g_series(int i, double z, const DegreePmf& P);

/// S(y) = sum_k P(k) Fbar_k(y): probability a fresh vertex's threshold exceeds y.
double survival_mix(double y, const DegreePmf& P);
/// R(y) = sum_{k>=2} P(k) Fbar_{k-1}(y) = int_y^inf g_2.
double survival_mix2(double y, const DegreePmf& P);

struct TailBound {
  double value = INFINITY;
  bool available = false;
};

/// Chernoff-type upper bound on g_i(z); uses P.mgf_theta unless theta is given.
TailBound mgf_tail_bound(int i, double z, const DegreePmf& P,
                         std::optional<double> theta = std::nullopt);

/// Smallest integer x with S(x) < eps and (if available) the mgf bound on g_2 < eps.
double default_x_max(const DegreePmf& P, double eps = 1e-10);

}  // namespace ewt
