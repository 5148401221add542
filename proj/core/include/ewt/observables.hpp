// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ewt/grid.hpp"
#include "ewt/numerics.hpp"

namespace ewt {

enum class Provenance { quadrature, closed_form, monte_carlo };
const char* to_string(Provenance p);

struct DegreeLaw {
  std::vector<double> pmf;  // pmf[d], d >= 0
  double mean = 0.0;
  Provenance provenance = Provenance::quadrature;

  double mass() const;
  double at(int d) const { return d >= 0 && d < static_cast<int>(pmf.size()) ? pmf[d] : 0.0; }
  static DegreeLaw from_pmf(std::vector<double> pmf, Provenance prov);
};

/// eta(x) = (1/x) int_0^x S(y) dy: chance a single potential child of a
/// threshold-x vertex is kept.  eta(0) = 1.
GridFn keep_probability(const DegreePmf& P, const GridSpec& spec);

/// Root degree law: int sum_m P(m) Erlang(m+1)(x) Bi(d; m, eta(x)) dx.
/// Without d_max the support is cut where the remaining mass drops below 1e-9.
DegreeLaw root_degree_pmf_exact(const DegreePmf& P, const GridSpec& spec,
                                std::optional<int> d_max = std::nullopt);
/// Closed form for geometric P.
DegreeLaw root_degree_pmf_geo(double p, std::optional<int> d_max = std::nullopt);
/// E[D_root] = int S(y)^2 dy.
double mean_degree_exact(const DegreePmf& P, const GridSpec& spec);

/// Bi(d; m, eta(x)) for d = 0..m.
std::vector<double> conditional_root_degree_pmf(int m, double x, const GridFn& eta);

/// Q_*(k-1) = k Q(k) / sum_r r Q(r).
DegreeLaw size_biased(const DegreeLaw& Q);

struct GwtBaseline {
  double growth_rate = 0.0;  // mean of Q_*
  double p_ext = 1.0;        // root drawn from Q, offspring from Q_*
  double s_star = 1.0;       // extinction probability of a Q_* subtree
  int iterations = 0;
};

GwtBaseline gwt_star_baselines(const DegreeLaw& Q);

/// Poisson(lambda) and geometric-on-{0,1,...} laws with a given mean.
DegreeLaw poisson_law(double lambda);
DegreeLaw geometric0_law_with_mean(double mean);

double tv_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ewt
