// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <optional>

#include "ewt/grid.hpp"
#include "ewt/numerics.hpp"

namespace ewt {

inline constexpr std::size_t kDefaultGridPoints = 16001;

/// Default grid for P: x_max from default_x_max unless overridden.
GridSpec default_grid(const DegreePmf& P, std::size_t n_points = kDefaultGridPoints,
                      std::optional<double> x_max = std::nullopt);

/// The P-derived functions every operator needs, tabulated once per grid.
struct SeriesTables {
  GridSpec spec;
  GridFn S;   // sum_k P(k) Fbar_k
  GridFn R;   // sum_{k>=2} P(k) Fbar_{k-1}  (= int_x^inf g_2)
  GridFn g1, g2, g3;
};

SeriesTables tabulate_series(const DegreePmf& P, const GridSpec& spec);

}  // namespace ewt
