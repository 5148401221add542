// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <limits>

#include "ewt/numerics.hpp"

namespace ewt {

/// State of a vertex: potential descendant count m and threshold x.
struct VertexType {
  int m = 0;
  double x = 0.0;
};

/// Rectangle {(k-1, z) : k in [k_lo, k_hi], z in [z_lo, z_hi]} of type space.
struct TypeRect {
  int k_lo = 1;
  int k_hi = std::numeric_limits<int>::max();
  double z_lo = 0.0;
  double z_hi = std::numeric_limits<double>::infinity();

  static TypeRect everything() { return {}; }

  void validate() const {
    if (k_lo < 1 || k_hi < k_lo) throw domain_error("TypeRect: empty or invalid k range");
    if (!(z_lo >= 0.0) || !(z_hi >= z_lo)) throw domain_error("TypeRect: empty or invalid z interval");
  }
  /// Does a vertex of type (m, x) lie in the rectangle (its k is m + 1)?
  bool contains(int m, double x) const {
    const int k = m + 1;
    return k >= k_lo && k <= k_hi && x >= z_lo && x <= z_hi;
  }
  bool contains(const VertexType& t) const { return contains(t.m, t.x); }

  /// Intersection; `empty()` reports an empty result.
  TypeRect intersect(const TypeRect& o) const {
    return {std::max(k_lo, o.k_lo), std::min(k_hi, o.k_hi), std::max(z_lo, o.z_lo), std::min(z_hi, o.z_hi)};
  }
  bool empty() const { return k_hi < k_lo || z_hi < z_lo; }
};

}  // namespace ewt
