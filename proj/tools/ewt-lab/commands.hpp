// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>

#include "config.hpp"

namespace ewtlab {

/// Numerics that ran but did not meet their stopping rule.
struct numerics_error : std::runtime_error {
  json diagnostics;
  numerics_error(const std::string& what, json diag)
      : std::runtime_error(what), diagnostics(std::move(diag)) {}
};

/// Runs the configured subcommand; returns the JSON summary printed on stdout.
json run(const Config& c);

json run_sample(const Config& c);
json run_extinction(const Config& c);
json run_spectral(const Config& c);
json run_graph(const Config& c);
json run_degree(const Config& c);
json run_moments(const Config& c);
json run_experiment(const Config& c);

}  // namespace ewtlab
