// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#include "ewt/observables.hpp"

#include <algorithm>
#include <cmath>

namespace ewt {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::quadrature: return "quadrature";
    case Provenance::closed_form: return "closed-form";
    case Provenance::monte_carlo: return "monte-carlo";
  }
  return "?";
}

double DegreeLaw::mass() const {
  double s = 0.0;
  for (double v : pmf) s += v;
  return s;
}

DegreeLaw DegreeLaw::from_pmf(std::vector<double> pmf, Provenance prov) {
  DegreeLaw q;
  q.pmf = std::move(pmf);
  q.provenance = prov;
  for (std::size_t d = 0; d < q.pmf.size(); ++d) q.mean += d * q.pmf[d];
  return q;
}

GridFn keep_probability(const DegreePmf& P, const GridSpec& spec) {
  GridFn S(spec);
  for (std::size_t i = 0; i < spec.n_points; ++i) S.values[i] = survival_mix(spec.x(i), P);
  const GridFn cum = forward_cumulative(S);
  GridFn eta(spec);
  eta.values[0] = 1.0;
  for (std::size_t i = 1; i < spec.n_points; ++i)
    eta.values[i] = std::clamp(cum.values[i] / spec.x(i), 0.0, 1.0);
  return eta;
}

DegreeLaw root_degree_pmf_exact(const DegreePmf& P, const GridSpec& spec, std::optional<int> d_max) {
  if (d_max && *d_max < 0) throw domain_error("root_degree_pmf_exact: d_max must be >= 0");
  const GridFn eta = keep_probability(P, spec);
  const int cap = d_max ? *d_max : P.k_max;
  // pmf(d) = int Pois(d; x eta) sum_j P(d+j) Pois(j; x(1-eta)) dx
  std::vector<double> pmf;
  GridFn integrand(spec);
  // mass of the root threshold law on the grid; the cut-off rule is relative to it
  GridFn w(spec);
  for (std::size_t i = 0; i < spec.n_points; ++i)
    w.values[i] = poisson_mix([&](int m) { return P.prob(m); }, P.k_max + 1, spec.x(i));
  const double total = integrate(w);
  double cum = 0.0;
  for (int d = 0; d <= cap; ++d) {
    for (std::size_t i = 0; i < spec.n_points; ++i) {
      const double x = spec.x(i), e = eta.values[i];
      const double inner =
          poisson_mix([&](int j) { return P.prob(d + j); }, P.k_max - d + 1, x * (1.0 - e));
      integrand.values[i] = poisson_pmf(d, x * e) * inner;
    }
    const double v = std::max(0.0, integrate(integrand));
    pmf.push_back(v);
    cum += v;
    if (!d_max && total - cum < 1e-9) break;
  }
  return DegreeLaw::from_pmf(std::move(pmf), Provenance::quadrature);
}

DegreeLaw root_degree_pmf_geo(double p, std::optional<int> d_max) {
  if (!(p > 0.0 && p < 1.0)) throw domain_error("root_degree_pmf_geo: p must lie in (0,1)");
  if (d_max && *d_max < 0) throw domain_error("root_degree_pmf_geo: d_max must be >= 0");
  const double c = (1.0 - p) / p;
  const double a = p / ((1.0 - p) * (1.0 - p));
  // upper Poisson tails summed directly (no 1 - cdf cancellation)
  const int far = static_cast<int>(c + 40.0 * std::sqrt(c + 1.0) + 60.0);
  std::vector<double> tail(far + 2, 0.0);
  for (int m = far; m >= 0; --m) tail[m] = tail[m + 1] + poisson_pmf(m, c);
  std::vector<double> pmf;
  double cum = 0.0;
  const int cap = d_max ? *d_max : far;
  for (int d = 0; d <= cap; ++d) {
    double v = d + 1 <= far ? a * tail[d + 1] : 0.0;
    if (d == 0) v -= p / (1.0 - p);
    v = std::max(v, 0.0);
    pmf.push_back(v);
    cum += v;
    if (!d_max && 1.0 - cum < 1e-9 && a * tail[std::min(d + 1, far)] < 1e-9) break;
  }
  return DegreeLaw::from_pmf(std::move(pmf), Provenance::closed_form);
}

double mean_degree_exact(const DegreePmf& P, const GridSpec& spec) {
  GridFn S2(spec);
  for (std::size_t i = 0; i < spec.n_points; ++i) {
    const double s = survival_mix(spec.x(i), P);
    S2.values[i] = s * s;
  }
  return integrate(S2);
}

std::vector<double> conditional_root_degree_pmf(int m, double x, const GridFn& eta) {
  if (m < 0) throw domain_error("conditional_root_degree_pmf: m must be >= 0");
  const double e = std::clamp(eta.at(x), 0.0, 1.0);
  std::vector<double> pmf(m + 1, 0.0);
  for (int d = 0; d <= m; ++d) {
    if (e == 0.0) {
      pmf[d] = d == 0;
    } else if (e == 1.0) {
      pmf[d] = d == m;
    } else {
      pmf[d] = std::exp(std::lgamma(m + 1.0) - std::lgamma(d + 1.0) - std::lgamma(m - d + 1.0) +
                        d * std::log(e) + (m - d) * std::log1p(-e));
    }
  }
  return pmf;
}

DegreeLaw size_biased(const DegreeLaw& Q) {
  double mean = 0.0;
  for (std::size_t r = 0; r < Q.pmf.size(); ++r) mean += r * Q.pmf[r];
  if (!(mean > 0.0)) throw domain_error("size_biased: law has zero mean");
  std::vector<double> out(Q.pmf.size() > 1 ? Q.pmf.size() - 1 : 1, 0.0);
  for (std::size_t k = 1; k < Q.pmf.size(); ++k) out[k - 1] = k * Q.pmf[k] / mean;
  return DegreeLaw::from_pmf(std::move(out), Q.provenance);
}

namespace {

double pgf(const std::vector<double>& q, double s) {
  double v = 0.0;
  for (std::size_t k = q.size(); k-- > 0;) v = v * s + q[k];
  return v;
}

}  // namespace

GwtBaseline gwt_star_baselines(const DegreeLaw& Q) {
  GwtBaseline b;
  const DegreeLaw Qs = size_biased(Q);
  b.growth_rate = Qs.mean;
  double s = 0.0;
  for (int it = 1; it <= 10000000; ++it) {
    const double n = pgf(Qs.pmf, s);
    b.iterations = it;
    const bool done = std::abs(n - s) < 1e-12;
    s = n;
    if (done) break;
  }
  b.s_star = std::min(s, 1.0);
  b.p_ext = std::min(pgf(Q.pmf, b.s_star), 1.0);
  return b;
}

DegreeLaw poisson_law(double lambda) {
  if (!(lambda >= 0.0)) throw domain_error("poisson_law: lambda must be >= 0");
  std::vector<double> pmf;
  double cum = 0.0;
  for (int d = 0;; ++d) {
    const double v = poisson_pmf(d, lambda);
    pmf.push_back(v);
    cum += v;
    if (d > lambda && 1.0 - cum < 1e-15) break;
    if (d > 100000) break;
  }
  return DegreeLaw::from_pmf(std::move(pmf), Provenance::closed_form);
}

DegreeLaw geometric0_law_with_mean(double mean) {
  if (!(mean >= 0.0)) throw domain_error("geometric law: mean must be >= 0");
  const double p = 1.0 / (1.0 + mean);
  std::vector<double> pmf;
  double v = p, cum = 0.0;
  for (int d = 0; d < 1000000; ++d) {
    pmf.push_back(v);
    cum += v;
    if (1.0 - cum < 1e-15) break;
    v *= 1.0 - p;
  }
  return DegreeLaw::from_pmf(std::move(pmf), Provenance::closed_form);
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = std::max(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < a.size() ? a[i] : 0.0, y = i < b.size() ? b[i] : 0.0;
    s += std::abs(x - y);
  }
  return 0.5 * s;
}

}  // namespace ewt
