// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#include "ewt/tables.hpp"

namespace ewt {

GridSpec default_grid(const DegreePmf& P, std::size_t n_points, std::optional<double> x_max) {
  return GridSpec(x_max ? *x_max : default_x_max(P), n_points);
}

SeriesTables tabulate_series(const DegreePmf& P, const GridSpec& spec) {
  SeriesTables t{spec, GridFn(spec), GridFn(spec), GridFn(spec), GridFn(spec), GridFn(spec)};
  for (std::size_t i = 0; i < spec.n_points; ++i) {
    const double x = spec.x(i);
    t.S.values[i] = survival_mix(x, P);
    t.R.values[i] = survival_mix2(x, P);
    t.g1.values[i] = g_series(1, x, P);
    t.g2.values[i] = P.k_max >= 2 ? g_series(2, x, P) : 0.0;
    t.g3.values[i] = P.k_max >= 3 ? g_series(3, x, P) : 0.0;
  }
  return t;
}

}  // namespace ewt
