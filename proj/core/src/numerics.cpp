// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#include "ewt/numerics.hpp"

#include <algorithm>
#include <limits>

namespace ewt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double DegreePmf::tail(int k) const {
  if (k <= 1) return 1.0;
  if (k > k_max) return 0.0;
  return tail_[k];
}

double DegreePmf::theta_sup() const {
  if (family == "geo") return -std::log1p(-param);
  return kInf;
}

double DegreePmf::mgf(double theta) const {
  if (family == "geo") {
    const double p = param;
    if (theta >= theta_sup()) return kInf;
    const double e = std::exp(theta);
    return p * e / (1.0 - (1.0 - p) * e);
  }
  if (family == "poisson") return std::exp(theta + param * std::expm1(theta));
  if (family == "delta") return std::exp(theta * param);
  double s = 0.0;
  for (int k = 1; k <= k_max; ++k) s += probs[k] * std::exp(theta * k);
  return s;
}

void DegreePmf::finalize() {
  while (k_max > 1 && probs[k_max] == 0.0) --k_max;
  probs.resize(k_max + 1);
  probs[0] = 0.0;
  double total = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    if (!(probs[k] >= 0.0) || !std::isfinite(probs[k]))
      throw domain_error("degree pmf: negative or non-finite weight");
    total += probs[k];
  }
  if (!(total > 0.0)) throw domain_error("degree pmf: zero total mass");
  for (int k = 1; k <= k_max; ++k) probs[k] /= total;
  if (probs.size() > 1 && probs[1] >= 1.0)
    throw domain_error("degree pmf: P(1) must be < 1");

  tail_.assign(k_max + 2, 0.0);
  for (int k = k_max; k >= 1; --k) tail_[k] = tail_[k + 1] + probs[k];
  mean = 0.0;
  for (int k = 1; k <= k_max; ++k) mean += k * probs[k];

  // theta minimizing the x at which the g_2 bound drops below 1e-10
  const double sup = std::min(theta_sup() * 0.999, 10.0);
  double best_x = kInf, best_t = sup / 2;
  for (int i = 1; i <= 400; ++i) {
    const double t = sup * i / 401.0;
    const double m = mgf(t);
    if (!std::isfinite(m)) continue;
    const double x = (std::log(m) - 2 * t + std::log(1e10)) / (-std::expm1(-t));
    if (x < best_x) best_x = x, best_t = t;
  }
  mgf_theta = best_t;
}

DegreePmf DegreePmf::geometric(double p) {
  if (!(p > 0.0 && p < 1.0)) throw domain_error("geometric: p must lie in (0,1)");
  DegreePmf P;
  P.family = "geo";
  P.param = p;
  const int K = std::max(2, static_cast<int>(std::ceil(std::log(kTailEps) / std::log1p(-p))));
  P.probs.assign(K + 1, 0.0);
  for (int k = 1; k <= K; ++k) P.probs[k] = p * std::pow(1.0 - p, k - 1);
  P.k_max = K;
  P.finalize();
  return P;
}

DegreePmf DegreePmf::shifted_poisson(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw domain_error("shifted poisson: lambda must be positive");
  DegreePmf P;
  P.family = "poisson";
  P.param = lambda;
  std::vector<double> w(2, 0.0);
  double cum = 0.0;
  for (int j = 0;; ++j) {
    const double pj = poisson_pmf(j, lambda);
    w.resize(j + 2);
    w[j + 1] = pj;
    cum += pj;
    if (j > lambda && 1.0 - cum < kTailEps) break;
    if (j > 100000) break;
  }
  P.probs = std::move(w);
  P.k_max = static_cast<int>(P.probs.size()) - 1;
  P.finalize();
  return P;
}

DegreePmf DegreePmf::delta(int k) {
  if (k < 2) throw domain_error("delta: k must be >= 2 (P(1) < 1)");
  DegreePmf P;
  P.family = "delta";
  P.param = k;
  P.probs.assign(k + 1, 0.0);
  P.probs[k] = 1.0;
  P.k_max = k;
  P.finalize();
  return P;
}

DegreePmf DegreePmf::from_weights(std::vector<double> weights) {
  if (weights.size() < 2) throw domain_error("pmf: need weights for k >= 1");
  if (weights[0] != 0.0) throw domain_error("pmf: weight at k = 0 must be zero");
  DegreePmf P;
  P.family = "pmf";
  P.probs = std::move(weights);
  P.k_max = static_cast<int>(P.probs.size()) - 1;
  P.finalize();
  return P;
}

double poisson_pmf(int j, double lambda) {
  if (j < 0) return 0.0;
  if (lambda <= 0.0) return j == 0 ? 1.0 : 0.0;
  return std::exp(-lambda + j * std::log(lambda) - std::lgamma(j + 1.0));
}

double erlang_pdf(int k, double z) {
  if (k < 1) throw domain_error("erlang_pdf: k must be >= 1");
  if (z < 0.0) throw domain_error("erlang_pdf: z must be >= 0");
  if (z == 0.0) return k == 1 ? 1.0 : 0.0;
  return std::exp(-z + (k - 1) * std::log(z) - std::lgamma(static_cast<double>(k)));
}

double erlang_sf(int k, double x) {
  if (k < 1) throw domain_error("erlang_sf: k must be >= 1");
  if (x < 0.0) throw domain_error("erlang_sf: x must be >= 0");
  return std::min(1.0, poisson_mix([](int) { return 1.0; }, k, x));
}

double g_series(int i, double z, const DegreePmf& P) {
  if (i < 1) throw domain_error("g_series: i must be >= 1");
  return poisson_mix([&](int j) { return P.prob(i + j); }, P.k_max - i + 1, z);
}

double survival_mix(double y, const DegreePmf& P) {
  return poisson_mix([&](int j) { return P.tail(j + 1); }, P.k_max, y);
}

double survival_mix2(double y, const DegreePmf& P) {
  return poisson_mix([&](int j) { return P.tail(j + 2); }, P.k_max - 1, y);
}

TailBound mgf_tail_bound(int i, double z, const DegreePmf& P, std::optional<double> theta) {
  const auto t = theta ? theta : P.mgf_theta;
  if (!t) return {};
  const double m = P.mgf(*t);
  if (!std::isfinite(m)) return {};
  return {m * std::exp(-*t * i - z * (-std::expm1(-*t))), true};
}

double default_x_max(const DegreePmf& P, double eps) {
  for (int x = 1; x < 5000; ++x) {
    if (survival_mix(x, P) >= eps) continue;
    const auto b = mgf_tail_bound(2, x, P);
    if (b.available && b.value >= eps) continue;
    return x;
  }
  throw domain_error("default_x_max: tail does not decay below tolerance");
}

}  // namespace ewt
