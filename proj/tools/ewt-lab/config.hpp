// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ewt/grid.hpp"
#include "ewt/numerics.hpp"

namespace ewtlab {

using json = nlohmann::json;

/// Every knob of every subcommand.  Defaults < --config file < flags.
struct Config {
  std::string command;     // sample | extinction | spectral | graph | degree | moments | experiment
  std::string experiment;  // fig2 .. fig8 for `experiment`

  // potential-degree law
  std::string family = "geo";  // geo | poisson | delta | pmf
  double p = 0.08;
  double lambda = 5.0;
  int k = 3;
  std::vector<double> pmf;     // weights for k = 1, 2, ... (family "pmf")

  // numerics
  std::size_t grid_points = 16001;
  double x_max = 0.0;          // 0 = automatic
  double tol = 1e-8;
  int max_iter = 50000;        // fixed-point iteration cap

  // Monte Carlo / graphs
  std::uint64_t seed = 1;
  std::size_t replicates = 10000;
  int depth_cap = 3;
  std::size_t n = 10000;
  std::size_t graphs = 20;
  int radius = 2;
  std::size_t roots = 1000;
  int m = 3;                   // pinned root type for `moments` / `sample`
  double x = 2.0;
  bool pin_root = false;
  int d_max = -1;              // -1 = automatic support
  std::vector<double> p_grid;  // sweeps (fig5/6/7); empty = experiment default

  // plumbing (excluded from the config hash)
  unsigned threads = 1;
  std::string out;             // output directory; empty = no files
};

json to_json(const Config& c);
/// Strict: unknown keys and wrong types throw config_error.
void merge_json(Config& c, const json& j);

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void validate(const Config& c);

/// FNV-1a 64 of the canonical (sorted-key) JSON of the result-relevant fields.
std::string config_hash(const Config& c);

ewt::DegreePmf make_pmf(const Config& c);
ewt::GridSpec make_grid(const ewt::DegreePmf& P, const Config& c);

}  // namespace ewtlab
