// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#include "commands.hpp"

#include <algorithm>
#include <cmath>

#include "ewt/extinction.hpp"
#include "ewt/kgraph.hpp"
#include "ewt/moments2.hpp"
#include "ewt/observables.hpp"
#include "ewt/spectral.hpp"
#include "ewt/tree.hpp"
#include "output.hpp"

namespace ewtlab {

namespace {

json pmf_json(const ewt::DegreePmf& P) {
  return {{"family", P.family}, {"param", P.param}, {"k_max", P.k_max}, {"mean", P.mean}};
}

ewt::SpectralSolution spectral_or_throw(const ewt::DegreePmf& P, const ewt::GridSpec& spec) {
  try {
    return ewt::solve_spectral(P, spec);
  } catch (const ewt::spectral_error& e) {
    json scanned = json::array();
    for (const auto& [b, l] : e.scanned) scanned.push_back({b, l});
    throw numerics_error(e.what(), {{"scanned", scanned}});
  }
}

/// Splits "header\nbody" produced by the kgraph CSV helpers.
std::string write_raw_csv(const Config& c, const std::string& name, const std::string& csv) {
  const auto nl = csv.find('\n');
  Table t(csv.substr(0, nl));
  std::string body = csv.substr(nl + 1);
  // rows are already formatted; feed them through unchanged
  std::size_t start = 0;
  while (start < body.size()) {
    const auto e = body.find('\n', start);
    t.row(body.substr(start, e - start));
    start = e + 1;
  }
  return write_table(c, name, t);
}

}  // namespace

json run_sample(const Config& c) {
  const ewt::DegreePmf P = make_pmf(c);
  ewt::ForestOptions o;
  o.depth_cap = c.depth_cap;
  o.replicates = c.replicates;
  o.master_seed = c.seed;
  o.threads = c.threads;
  if (c.pin_root) o.pinned_root = ewt::VertexType{c.m, c.x};
  const ewt::Forest f = ewt::sample_forest(P, o);

  const int L = f.depth_cap;
  std::vector<double> mean(L + 1, 0.0), se(L + 1, 0.0), extinct(L + 1, 0.0);
  const double R = static_cast<double>(f.replicates);
  for (int l = 0; l <= L; ++l) {
    double s = 0, s2 = 0, e = 0;
    for (std::size_t r = 0; r < f.replicates; ++r) {
      const double z = static_cast<double>(f.z_at(r, l));
      s += z, s2 += z * z, e += z == 0;
    }
    if (R > 0) mean[l] = s / R, extinct[l] = e / R;
    if (R > 1) se[l] = std::sqrt(std::max(0.0, (s2 - s * s / R) / (R - 1)) / R);
  }
  Table zt("replicate,l,z");
  for (std::size_t r = 0; r < f.replicates; ++r)
    for (int l = 0; l <= L; ++l) zt.row(r, l, f.z_at(r, l));
  Table dt("generation,d,pmf,se");
  json deg_means = json::array();
  for (int g = 0; g < L; ++g) {
    const ewt::EmpiricalPmf e = ewt::degree_pmf_by_generation(f, g);
    for (std::size_t d = 0; d < e.pmf.size(); ++d) dt.row(g, d, e.pmf[d], e.se[d]);
    deg_means.push_back({{"generation", g}, {"mean", e.mean}, {"se", e.mean_se}, {"vertices", e.vertices}});
  }
  json files = json::array();
  files.push_back(write_table(c, "z_counts", zt));
  files.push_back(write_table(c, "degrees", dt));
  if (f.replicates > 0) {
    ewt::SamplerOptions so;
    so.pinned_root = o.pinned_root;
    files.push_back(write_text(c, "tree0.txt", ewt::sample_tree(P, L, f.seeds[0], so).serialize()));
  }
  return {{"command", "sample"}, {"pmf", pmf_json(P)},       {"replicates", f.replicates},
          {"depth_cap", L},      {"truncated", f.truncated_count},
          {"z_mean", mean},      {"z_se", se},                {"extinct_fraction", extinct},
          {"degree", deg_means}, {"files", files}};
}

json run_extinction(const Config& c) {
  const ewt::DegreePmf P = make_pmf(c);
  const ewt::GridSpec spec = make_grid(P, c);
  const ewt::ExtinctionSolution s = ewt::solve_q(P, spec, c.tol, c.max_iter);
  json out{{"command", "extinction"},
           {"pmf", pmf_json(P)},
           {"x_max", spec.x_max},
           {"grid_points", spec.n_points},
           {"p_ext", s.p_ext},
           {"survival", 1.0 - s.p_ext},
           {"iterations", s.iterations},
           {"residual", s.residual},
           {"converged", s.converged},
           {"monotone", s.monotone}};
  if (!s.converged) throw numerics_error("extinction iteration did not converge", out);
  Table t("x,q");
  const std::size_t stride = std::max<std::size_t>(1, spec.n_points / 2000);
  for (std::size_t i = 0; i < spec.n_points; i += stride) t.row(spec.x(i), s.q.values[i]);
  out["files"] = json::array({write_table(c, "extinction", t)});
  return out;
}

json run_spectral(const Config& c) {
  const ewt::DegreePmf P = make_pmf(c);
  const ewt::GridSpec spec = make_grid(P, c);
  const ewt::SpectralSolution sol = spectral_or_throw(P, spec);
  const ewt::PowerIteration pw = ewt::kernel_power_iteration(sol.tables.g2);
  const ewt::GrowthConstants gc = ewt::growth_constants(sol);
  json out{{"command", "spectral"},
           {"pmf", pmf_json(P)},
           {"x_max", spec.x_max},
           {"grid_points", spec.n_points},
           {"beta0", sol.beta0},
           {"bracket", {sol.bracket_lo, sol.bracket_hi}},
           {"c_n", sol.c_n},
           {"fixed_point_residual", sol.fixed_point_residual},
           {"eigen_residual", ewt::eigen_residual(sol)},
           {"g_terms", sol.g_terms},
           {"L_nonnegative", sol.L_nonnegative},
           {"L_increasing", sol.L_increasing},
           {"power_iteration_beta", pw.beta},
           {"second_eigenvalue", pw.beta2},
           {"nu_total", gc.nu_total},
           {"ez_asymptote", gc.product},
           {"supercritical", sol.beta0 > 1.0}};
  if (P.family == "geo") {
    const double cf = ewt::beta0_geo_closed(P.param);
    out["beta0_closed_form"] = cf;
    out["relative_error"] = std::abs(sol.beta0 - cf) / cf;
  }
  Table t("x,L,f0,g2");
  const std::size_t stride = std::max<std::size_t>(1, spec.n_points / 2000);
  for (std::size_t i = 0; i < spec.n_points; i += stride)
    t.row(spec.x(i), sol.L_raw.values[i], sol.f0.values[i], sol.tables.g2.values[i]);
  out["files"] = json::array({write_table(c, "spectral", t)});
  return out;
}

json run_graph(const Config& c) {
  const ewt::DegreePmf P = make_pmf(c);
  Table t("graph,seed,n,edges,clamped,mean_degree,giant_ratio");
  json files = json::array();
  double giant_sum = 0.0;
  std::size_t acyclic = 0, balls = 0;
  for (std::size_t gi = 0; gi < c.graphs; ++gi) {
    const std::uint64_t seed = ewt::derive_seed(c.seed, gi);
    const ewt::GraphSample g = ewt::build_graph(c.n, P, seed, c.threads);
    const double giant = ewt::giant_ratio(g);
    giant_sum += giant;
    t.row(gi, seed, g.n, g.edges.size(), g.clamped, 2.0 * g.edges.size() / g.n, giant);
    if (gi == 0) {
      files.push_back(write_raw_csv(c, "edges", ewt::edges_csv(g)));
      files.push_back(write_raw_csv(c, "components", ewt::components_csv(g)));
      ewt::Rng rng(ewt::derive_seed(seed, 0xBA11));
      for (std::size_t r = 0; r < c.roots; ++r) {
        const auto root = static_cast<std::uint32_t>(rng.below(g.n));
        acyclic += ewt::root_ball(g, root, c.radius).acyclic;
        ++balls;
      }
    }
  }
  files.push_back(write_table(c, "graphs", t));
  return {{"command", "graph"},
          {"pmf", pmf_json(P)},
          {"n", c.n},
          {"graphs", c.graphs},
          {"mean_giant_ratio", c.graphs ? giant_sum / c.graphs : 0.0},
          {"acyclic_ball_fraction", balls ? static_cast<double>(acyclic) / balls : 1.0},
          {"radius", c.radius},
          {"files", files}};
}

json run_degree(const Config& c) {
  const ewt::DegreePmf P = make_pmf(c);
  const ewt::GridSpec spec = make_grid(P, c);
  const std::optional<int> dm = c.d_max >= 0 ? std::optional<int>(c.d_max) : std::nullopt;
  const ewt::DegreeLaw exact = ewt::root_degree_pmf_exact(P, spec, dm);
  Table t("d,pmf,provenance");
  for (std::size_t d = 0; d < exact.pmf.size(); ++d) t.row(d, exact.pmf[d], "quadrature");
  json out{{"command", "degree"},
           {"pmf", pmf_json(P)},
           {"mean_quadrature", exact.mean},
           {"mean_degree_exact", ewt::mean_degree_exact(P, spec)},
           {"mass_quadrature", exact.mass()}};
  if (P.family == "geo") {
    const ewt::DegreeLaw geo = ewt::root_degree_pmf_geo(P.param, dm);
    for (std::size_t d = 0; d < geo.pmf.size(); ++d) t.row(d, geo.pmf[d], "closed-form");
    out["mean_closed_form"] = geo.mean;
    out["tv_closed_form_quadrature"] = ewt::tv_distance(geo.pmf, exact.pmf);
  }
  if (c.replicates > 0) {
    ewt::ForestOptions o;
    o.depth_cap = 1;
    o.replicates = c.replicates;
    o.master_seed = c.seed;
    o.threads = c.threads;
    const ewt::EmpiricalPmf e = ewt::degree_pmf_by_generation(ewt::sample_forest(P, o), 0);
    for (std::size_t d = 0; d < e.pmf.size(); ++d) t.row(d, e.pmf[d], "monte-carlo");
    out["mean_monte_carlo"] = e.mean;
    out["mean_monte_carlo_se"] = e.mean_se;
    out["tv_monte_carlo_quadrature"] = ewt::tv_distance(e.pmf, exact.pmf);
  }
  out["files"] = json::array({write_table(c, "degree", t)});
  return out;
}

json run_moments(const Config& c) {
  const ewt::DegreePmf P = make_pmf(c);
  const ewt::GridSpec spec = make_grid(P, c);
  const ewt::TypeRect all = ewt::TypeRect::everything();
  json out{{"command", "moments"},
           {"pmf", pmf_json(P)},
           {"m", c.m},
           {"x", c.x},
           {"M1", ewt::m1_rect(c.m, c.x, all, P, spec)},
           {"M1_second", ewt::m1_second(c.m, c.x, all, all, P, spec)},
           {"v", ewt::v_signed(c.m, c.x, all, all, P, spec)}};
  const ewt::SpectralSolution sol = spectral_or_throw(P, spec);
  const ewt::Eigenfunctions ef(sol);
  out["beta0"] = sol.beta0;
  out["mu"] = ef.mu(c.m, c.x);
  double prediction = NAN;
  if (sol.beta0 > 1.0) {
    const ewt::UValue u = ewt::u_truncated(c.m, c.x, sol, std::min(c.tol, 1e-10));
    prediction = u.value * ef.nu_total() * ef.nu_total();
    out["U"] = u.value;
    out["U_terms"] = u.terms;
    out["second_moment_limit"] = prediction;
  }
  json files = json::array();
  if (c.replicates > 0) {
    ewt::ForestOptions o;
    o.depth_cap = std::max(1, c.depth_cap);
    o.replicates = c.replicates;
    o.master_seed = c.seed;
    o.threads = c.threads;
    o.pinned_root = ewt::VertexType{c.m, c.x};
    const ewt::Forest f = ewt::sample_forest(P, o);
    const ewt::WStatistics w = ewt::w_statistics(f, sol.beta0, -1, -1);
    Table t("l,empirical_second_moment,se,analytic_prediction");
    for (const auto& g : w.by_generation) t.row(g.l, g.second, g.second_se, prediction);
    const auto& g1 = w.by_generation[1];
    out["monte_carlo"] = {{"replicates", f.replicates},
                          {"Z1_mean", g1.mean * sol.beta0},
                          {"Z1_var", g1.var * sol.beta0 * sol.beta0},
                          {"truncated", f.truncated_count}};
    files.push_back(write_table(c, "moments", t));
  }
  out["files"] = files;
  return out;
}

namespace {

json dispatch(const Config& c) {
  if (c.command == "sample") return run_sample(c);
  if (c.command == "extinction") return run_extinction(c);
  if (c.command == "spectral") return run_spectral(c);
  if (c.command == "graph") return run_graph(c);
  if (c.command == "degree") return run_degree(c);
  if (c.command == "moments") return run_moments(c);
  if (c.command == "experiment") return run_experiment(c);
  throw config_error("unknown command '" + c.command + "'");
}

}  // namespace

json run(const Config& c) {
  json out = dispatch(c);
  // write_table returns "" when no output directory is configured
  if (out.contains("files")) {
    json kept = json::array();
    for (const auto& f : out["files"])
      if (!(f.is_string() && f.get<std::string>().empty())) kept.push_back(f);
    out["files"] = kept;
  }
  return out;
}

}  // namespace ewtlab
