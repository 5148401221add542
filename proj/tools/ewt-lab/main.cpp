// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
//
// ewt-lab: command-line front end for the ewt library.
//
//   ewt-lab spectral   --family geo --p 0.08
//   ewt-lab extinction --family geo --p 0.5
//   ewt-lab experiment fig8 --p 0.08 --n 20000 --graphs 20 --out runs/fig8
//
// Precedence: built-in defaults < --config FILE < command-line flags.  The
// JSON summary goes to stdout; errors go to stderr as JSON with exit status
// 2 (usage/config), 3 (domain), 4 (unconverged numerics) or 1 (other).
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "ewt/numerics.hpp"

using namespace ewtlab;

namespace {

struct Binding {
  CLI::Option* opt;
  std::function<void(Config&, const Config&)> apply;
};

template <class T>
void bind_option(CLI::App* sub, std::vector<Binding>& b, Config& flags, const std::string& name,
                 T Config::*field, const std::string& help) {
  CLI::Option* o = sub->add_option(name, flags.*field, help);
  b.push_back({o, [field](Config& dst, const Config& src) { dst.*field = src.*field; }});
}

void add_common(CLI::App* sub, std::vector<Binding>& b, Config& flags) {
  bind_option(sub, b, flags, "--family", &Config::family, "potential-degree family: geo | poisson | delta | pmf");
  bind_option(sub, b, flags, "--p", &Config::p, "geometric parameter");
  bind_option(sub, b, flags, "--lambda", &Config::lambda, "n = 1 + Poisson(lambda)");
  bind_option(sub, b, flags, "--k", &Config::k, "point mass location (delta family)");
  bind_option(sub, b, flags, "--pmf", &Config::pmf, "weights for k = 1, 2, ... (pmf family)");
  bind_option(sub, b, flags, "--seed", &Config::seed, "master seed");
  bind_option(sub, b, flags, "--grid-points", &Config::grid_points, "quadrature grid points");
  bind_option(sub, b, flags, "--x-max", &Config::x_max, "grid upper end (0 = automatic)");
  bind_option(sub, b, flags, "--tol", &Config::tol, "iteration tolerance");
  bind_option(sub, b, flags, "--max-iter", &Config::max_iter, "fixed-point iteration cap");
  bind_option(sub, b, flags, "--out", &Config::out, "output directory for CSV/JSON artifacts");
  bind_option(sub, b, flags, "--threads", &Config::threads, "worker threads (fallback: EWT_LAB_THREADS)");
  bind_option(sub, b, flags, "--replicates", &Config::replicates, "Monte-Carlo replicates (trees)");
  bind_option(sub, b, flags, "--depth-cap", &Config::depth_cap, "tree depth");
  bind_option(sub, b, flags, "--n", &Config::n, "graph size");
  bind_option(sub, b, flags, "--graphs", &Config::graphs, "number of graphs");
  bind_option(sub, b, flags, "--radius", &Config::radius, "root-ball radius");
  bind_option(sub, b, flags, "--roots", &Config::roots, "sampled roots for ball statistics");
  bind_option(sub, b, flags, "--m", &Config::m, "root potential count (moments / pinned root)");
  bind_option(sub, b, flags, "--x", &Config::x, "root threshold (moments / pinned root)");
  bind_option(sub, b, flags, "--d-max", &Config::d_max, "degree support cut (-1 = automatic)");
  bind_option(sub, b, flags, "--p-grid", &Config::p_grid, "p values for sweeps");
  CLI::Option* pin = sub->add_flag("--pin-root", flags.pin_root, "pin the root type to (--m, --x)");
  b.push_back({pin, [](Config& d, const Config& s) { d.pin_root = s.pin_root; }});
}

int fail(const std::string& type, const std::string& msg, int code, const json& diag = nullptr) {
  json e{{"error", {{"type", type}, {"message", msg}}}};
  if (!diag.is_null()) e["error"]["diagnostics"] = diag;
  std::cerr << e.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ewt-lab: Erlang weighted tree and bilateral random graph laboratory"};
  app.require_subcommand(1);
  Config flags;
  std::string config_file;
  bool show_config = false;
  std::vector<Binding> bindings;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"sample", "sample a forest of trees"},
      {"extinction", "solve for the extinction probability"},
      {"spectral", "growth rate beta0 and eigenfunction f0"},
      {"graph", "generate finite graphs and their components"},
      {"degree", "root degree law (quadrature, closed form, Monte Carlo)"},
      {"moments", "one-step moments and the second-moment series U"},
      {"experiment", "figure reproductions fig2 .. fig8"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, bindings, flags);
    sub->add_option("--config", config_file, "JSON config file (unknown keys rejected)");
    sub->add_flag("--show-config", show_config, "print the effective config and exit");
    if (name == "experiment") {
      CLI::Option* e = sub->add_option("name", flags.experiment, "fig2 .. fig8")->required();
      bindings.push_back({e, [](Config& d, const Config& s) { d.experiment = s.experiment; }});
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  Config cfg;
  try {
    for (const auto& [name, help] : commands)
      if (app.got_subcommand(name)) cfg.command = name;
    bool threads_set = false;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw config_error("cannot read config file " + config_file);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
      }
      const std::string cmd = cfg.command;
      merge_json(cfg, j);
      threads_set = j.contains("threads");
      if (j.contains("command") && cfg.command != cmd)
        throw config_error("config command '" + cfg.command + "' differs from subcommand '" + cmd + "'");
    }
    for (const Binding& b : bindings)
      if (b.opt->count() > 0) {
        b.apply(cfg, flags);
        if (b.opt->get_name() == "--threads") threads_set = true;
      }
    if (!threads_set)
      if (const char* env = std::getenv("EWT_LAB_THREADS")) {
        try {
          cfg.threads = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
          throw config_error("EWT_LAB_THREADS must be a positive integer");
        }
      }
    validate(cfg);
    if (show_config) {
      std::cout << to_json(cfg).dump(2) << "\n";
      return 0;
    }
    json out = run(cfg);
    out["config_hash"] = config_hash(cfg);
    out["seed"] = cfg.seed;
    std::cout << out.dump(2) << "\n";
    return 0;
  } catch (const config_error& e) {
    return fail("config", e.what(), 2);
  } catch (const numerics_error& e) {
    return fail("numerics", e.what(), 4, e.diagnostics);
  } catch (const ewt::domain_error& e) {
    return fail("domain", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 1);
  }
}
