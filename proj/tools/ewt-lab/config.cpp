// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#include "config.hpp"

#include <cstdio>

#include "ewt/tables.hpp"

namespace ewtlab {

json to_json(const Config& c) {
  return json{{"command", c.command},     {"experiment", c.experiment},
              {"family", c.family},       {"p", c.p},
              {"lambda", c.lambda},       {"k", c.k},
              {"pmf", c.pmf},             {"grid_points", c.grid_points},
              {"x_max", c.x_max},         {"tol", c.tol},
              {"max_iter", c.max_iter},
              {"seed", c.seed},           {"replicates", c.replicates},
              {"depth_cap", c.depth_cap}, {"n", c.n},
              {"graphs", c.graphs},       {"radius", c.radius},
              {"roots", c.roots},         {"m", c.m},
              {"x", c.x},                 {"pin_root", c.pin_root},
              {"d_max", c.d_max},         {"p_grid", c.p_grid},
              {"threads", c.threads},     {"out", c.out}};
}

namespace {

template <class T>
void take(const json& j, const char* key, T& dst) {
  try {
    dst = j.get<T>();
  } catch (const json::exception& e) {
    throw config_error(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

void merge_json(Config& c, const json& j) {
  if (!j.is_object()) throw config_error("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    const char* k = key.c_str();
    if (key == "command") take(v, k, c.command);
    else if (key == "experiment") take(v, k, c.experiment);
    else if (key == "family") take(v, k, c.family);
    else if (key == "p") take(v, k, c.p);
    else if (key == "lambda") take(v, k, c.lambda);
    else if (key == "k") take(v, k, c.k);
    else if (key == "pmf") take(v, k, c.pmf);
    else if (key == "grid_points") take(v, k, c.grid_points);
    else if (key == "x_max") take(v, k, c.x_max);
    else if (key == "tol") take(v, k, c.tol);
    else if (key == "max_iter") take(v, k, c.max_iter);
    else if (key == "seed") take(v, k, c.seed);
    else if (key == "replicates") take(v, k, c.replicates);
    else if (key == "depth_cap") take(v, k, c.depth_cap);
    else if (key == "n") take(v, k, c.n);
    else if (key == "graphs") take(v, k, c.graphs);
    else if (key == "radius") take(v, k, c.radius);
    else if (key == "roots") take(v, k, c.roots);
    else if (key == "m") take(v, k, c.m);
    else if (key == "x") take(v, k, c.x);
    else if (key == "pin_root") take(v, k, c.pin_root);
    else if (key == "d_max") take(v, k, c.d_max);
    else if (key == "p_grid") take(v, k, c.p_grid);
    else if (key == "threads") take(v, k, c.threads);
    else if (key == "out") take(v, k, c.out);
    else throw config_error("unknown config key '" + key + "'");
  }
}

void validate(const Config& c) {
  if (c.family != "geo" && c.family != "poisson" && c.family != "delta" && c.family != "pmf")
    throw config_error("family must be one of geo, poisson, delta, pmf");
  if (c.family == "pmf" && c.pmf.empty()) throw config_error("family pmf needs a non-empty 'pmf'");
  if (c.grid_points < 3) throw config_error("grid_points must be >= 3");
  if (c.x_max < 0) throw config_error("x_max must be >= 0");
  if (!(c.tol > 0)) throw config_error("tol must be positive");
  if (c.max_iter < 1) throw config_error("max_iter must be >= 1");
  if (c.depth_cap < 0) throw config_error("depth_cap must be >= 0");
  if (c.radius < 0) throw config_error("radius must be >= 0");
  if (c.m < 0 || c.x < 0) throw config_error("m and x must be >= 0");
  if (c.threads == 0) throw config_error("threads must be >= 1");
}

std::string config_hash(const Config& c) {
  json j = to_json(c);
  j.erase("threads");
  j.erase("out");
  const std::string s = j.dump();  // object keys are kept sorted
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ewt::DegreePmf make_pmf(const Config& c) {
  if (c.family == "geo") return ewt::DegreePmf::geometric(c.p);
  if (c.family == "poisson") return ewt::DegreePmf::shifted_poisson(c.lambda);
  if (c.family == "delta") return ewt::DegreePmf::delta(c.k);
  std::vector<double> w(c.pmf.size() + 1, 0.0);
  for (std::size_t i = 0; i < c.pmf.size(); ++i) w[i + 1] = c.pmf[i];
  return ewt::DegreePmf::from_weights(std::move(w));
}

ewt::GridSpec make_grid(const ewt::DegreePmf& P, const Config& c) {
  return ewt::default_grid(P, c.grid_points,
                           c.x_max > 0 ? std::optional<double>(c.x_max) : std::nullopt);
}

}  // namespace ewtlab
