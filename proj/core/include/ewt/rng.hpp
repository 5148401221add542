// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
//
// Portable random variates.  The standard <random> distributions are
// implementation-defined, so every variate used by the samplers is derived
// here from the raw 64-bit output of std::mt19937_64 (whose sequence is fixed
// by the standard).  Same seed -> same bits on every conforming platform.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ewt {

/// splitmix64 finalizer (Steele, Lea & Flood).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of replicate `index` under master seed `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }
  /// uniform on (0,1]
  double uniform() { return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53; }
  /// uniform on [0,1)
  double uniform0() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double exponential() { return -std::log(uniform()); }
  /// Marsaglia polar method; the spare deviate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform0() - 1.0;
      v = 2.0 * uniform0() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }
  /// Gamma(shape, 1) for shape >= 1 (Marsaglia & Tsang).  Erlang(k) = gamma(k).
  double gamma(double shape) {
    if (shape == 1.0) return exponential();
    const double d = shape - 1.0 / 3.0, c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }
  /// uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    // Lemire's nearly-divisionless method
    __uint128_t m = static_cast<__uint128_t>(eng_()) * n;
    std::uint64_t l = static_cast<std::uint64_t>(m);
    if (l < n) {
      const std::uint64_t t = (0 - n) % n;
      while (l < t) {
        m = static_cast<__uint128_t>(eng_()) * n;
        l = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Walker/Vose alias table over indices 0..n-1.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(const std::vector<double>& weights);
  int sample(Rng& rng) const {
    const std::uint64_t i = rng.below(prob_.size());
    return rng.uniform0() < prob_[i] ? static_cast<int>(i) : alias_[i];
  }
  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<int> alias_;
};

}  // namespace ewt
