// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#include "ewt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ewt {

double bessel_j0(double x) {
  // sum_k (-x^2/4)^k / (k!)^2
  const double q = -0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

double beta0_geo_closed(double p) {
  if (!(p > 0.0 && p < 1.0)) throw domain_error("beta0_geo_closed: p must lie in (0,1)");
  return 4.0 * (1.0 - p) / (kBesselR0 * kBesselR0 * p);
}

// ---------------------------------------------------------------------------

namespace {

GridFn next_G(const GridFn& prev, const GridFn& g2) {
  return backward_tail(backward_tail(g2 * prev));
}

}  // namespace

std::vector<GridFn> compute_G_sequence(const DegreePmf& P, const GridSpec& spec, int i_max) {
  if (i_max < 1) throw domain_error("compute_G_sequence: i_max must be >= 1");
  GridFn g2(spec);
  for (std::size_t i = 0; i < spec.n_points; ++i) g2.values[i] = g_series(2, spec.x(i), P);
  std::vector<GridFn> G{GridFn(spec, 1.0)};
  for (int i = 1; i <= i_max; ++i) G.push_back(next_G(G.back(), g2));
  return G;
}

LValue eval_L(double beta, const std::vector<GridFn>& G) {
  if (beta == 0.0) throw domain_error("eval_L: beta must be non-zero");
  if (G.empty()) throw domain_error("eval_L: empty G sequence");
  LValue out{GridFn(G[0].spec, 0.0), 0, false};
  double c = 1.0;
  for (std::size_t i = 0; i < G.size(); ++i) {
    for (std::size_t j = 0; j < out.L.size(); ++j) out.L.values[j] += c * G[i].values[j];
    out.terms = static_cast<int>(i) + 1;
    if (std::abs(G[i].values[0] * c) < LSeries::kTruncation && i > 0) {
      out.truncated = true;
      break;
    }
    c *= -1.0 / beta;
  }
  return out;
}

LSeries::LSeries(GridFn g2) : g2_(std::move(g2)) { G_.emplace_back(g2_.spec, 1.0); }

int LSeries::terms_for(double beta) const {
  double c = 1.0;
  for (std::size_t i = 0; i < G_.size(); ++i) {
    if (i > 0 && std::abs(G_[i].values[0] * c) < kTruncation) return static_cast<int>(i) + 1;
    c /= std::abs(beta);
  }
  return -1;
}

bool LSeries::ensure(double beta) {
  if (beta == 0.0) throw domain_error("L-series: beta must be non-zero");
  while (terms_for(beta) < 0) {
    if (static_cast<int>(G_.size()) > kCap) return false;
    G_.push_back(next_G(G_.back(), g2_));
  }
  return true;
}

double LSeries::at0(double beta) {
  ensure(beta);
  int n = terms_for(beta);
  if (n < 0) n = static_cast<int>(G_.size());
  double s = 0.0, c = 1.0;
  for (int i = 0; i < n; ++i) {
    s += c * G_[i].values[0];
    c *= -1.0 / beta;
  }
  return s;
}

LValue LSeries::eval(double beta) {
  const bool ok = ensure(beta);
  int n = terms_for(beta);
  if (n < 0) n = static_cast<int>(G_.size());
  std::vector<GridFn> used(G_.begin(), G_.begin() + n);
  LValue v = eval_L(beta, used);
  v.truncated = ok && v.truncated;
  return v;
}

// ---------------------------------------------------------------------------

SpectralSolution find_beta0(const DegreePmf& P, const GridSpec& spec) {
  SpectralSolution sol;
  sol.P = P;
  sol.tables = tabulate_series(P, spec);
  const GridFn& g2 = sol.tables.g2;

  const GridFn tail = backward_tail(g2);
  double lo = 0.0;
  for (std::size_t i = 0; i < spec.n_points; ++i) lo = std::max(lo, spec.x(i) * tail.values[i]);
  const double hi = P.mean - 1.0;
  sol.bracket_lo = lo;
  sol.bracket_hi = hi;

  LSeries Ls(g2);
  const int mesh = 400;
  const double a = std::min(lo, hi), b = std::max(lo, hi);
  if (!(a > 0.0)) throw spectral_error("find_beta0: degenerate bracket", {});
  std::vector<double> betas(mesh + 1);
  for (int i = 0; i <= mesh; ++i) betas[i] = a * std::pow(b / a, static_cast<double>(i) / mesh);
  std::vector<double> vals(mesh + 1);
  for (int i = mesh; i >= 0; --i) {
    vals[i] = Ls.at0(betas[i]);
    sol.L0_values.emplace_back(betas[i], vals[i]);
  }
  std::reverse(sol.L0_values.begin(), sol.L0_values.end());

  int found = -1;
  for (int i = mesh; i > 0; --i) {
    if (vals[i] == 0.0 || (vals[i] > 0.0) != (vals[i - 1] > 0.0)) {
      found = i - 1;
      break;
    }
  }
  if (found < 0) {
    std::ostringstream os;
    os << "find_beta0: no sign change of L(beta,0) in (" << a << ", " << b << ")";
    throw spectral_error(os.str(), sol.L0_values);
  }
  double x0 = betas[found], x1 = betas[found + 1];
  double f0v = vals[found];
  if (vals[found + 1] == 0.0) {
    x0 = x1;
  } else {
    for (int it = 0; it < 200 && (x1 - x0) > 1e-14 * x1; ++it) {
      const double mid = 0.5 * (x0 + x1);
      const double fm = Ls.at0(mid);
      if (fm == 0.0) {
        x0 = x1 = mid;
        break;
      }
      if ((fm > 0.0) == (f0v > 0.0)) {
        x0 = mid;
        f0v = fm;
      } else {
        x1 = mid;
      }
    }
  }
  sol.beta0 = 0.5 * (x0 + x1);

  LValue Lv = Ls.eval(sol.beta0);
  sol.g_terms = Lv.terms;
  sol.L_raw = Lv.L;
  for (std::size_t i = 0; i < spec.n_points; ++i) {
    if (sol.L_raw.values[i] < -1e-8) sol.L_nonnegative = false;
    if (i > 0 && sol.L_raw.values[i] < sol.L_raw.values[i - 1] - 1e-12) sol.L_increasing = false;
  }
  if (spec.n_points > 1 && !(sol.L_raw.values[1] > sol.L_raw.values[0])) sol.L_increasing = false;
  sol.f0 = sol.L_raw;
  return sol;
}

SpectralSolution normalize_f0(SpectralSolution sol) {
  const GridFn& g2 = sol.tables.g2;
  const double norm = integrate(g2 * sol.L_raw * sol.L_raw);
  if (!(norm > 0.0)) throw std::runtime_error("normalize_f0: int g_2 L^2 <= 0 (grid misconfigured?)");
  sol.c_n = 1.0 / norm;
  sol.f0 = std::sqrt(sol.c_n) * sol.L_raw;
  sol.f0.values[0] = 0.0;  // L(beta0, 0) = 0 by definition of beta0
  sol.normalized = true;

  // beta0 f0(x) = int_0^x int_y^inf g_2 f0
  const GridFn H = forward_cumulative(backward_tail(g2 * sol.f0));
  double scale = 0.0;
  for (double v : sol.f0.values) scale = std::max(scale, sol.beta0 * v);
  const double eps = 1e-12 * scale;
  sol.fixed_point_residual = 0.0;
  for (std::size_t i = 0; i < sol.f0.size(); ++i) {
    const double lhs = sol.beta0 * sol.f0.values[i];
    sol.fixed_point_residual =
        std::max(sol.fixed_point_residual, std::abs(lhs - H.values[i]) / std::max(lhs, eps));
  }
  return sol;
}

SpectralSolution solve_spectral(const DegreePmf& P, const GridSpec& spec) {
  return normalize_f0(find_beta0(P, spec));
}

GridFn apply_H1(const GridFn& phi, const GridFn& g2) {
  const GridSpec& s = phi.spec;
  GridFn a(s), zb(s);
  for (std::size_t i = 0; i < s.n_points; ++i) {
    a.values[i] = g2.values[i] * phi.values[i];
    zb.values[i] = s.x(i) * a.values[i];
  }
  const GridFn low = forward_cumulative(zb), up = backward_tail(a);
  GridFn out(s);
  for (std::size_t i = 0; i < s.n_points; ++i) out.values[i] = low.values[i] + s.x(i) * up.values[i];
  return out;
}

GridFn apply_H1_over_x(const GridFn& phi, const GridFn& g2) {
  const GridSpec& s = phi.spec;
  GridFn a(s), zb(s);
  for (std::size_t i = 0; i < s.n_points; ++i) {
    a.values[i] = g2.values[i] * phi.values[i];
    zb.values[i] = s.x(i) * a.values[i];
  }
  const GridFn low = forward_cumulative(zb), up = backward_tail(a);
  GridFn out(s);
  out.values[0] = up.values[0];
  for (std::size_t i = 1; i < s.n_points; ++i) out.values[i] = low.values[i] / s.x(i) + up.values[i];
  return out;
}

double eigen_residual(const SpectralSolution& sol) {
  const GridFn Hf = apply_H1(sol.f0, sol.tables.g2);
  double r = 0.0;
  for (std::size_t i = 0; i < Hf.size(); ++i)
    r = std::max(r, std::abs(sol.beta0 * sol.f0.values[i] - Hf.values[i]));
  return r;
}

// ---------------------------------------------------------------------------

Eigenfunctions::Eigenfunctions(const SpectralSolution& sol) : P_(sol.P), f0_(sol.f0) {
  if (!sol.normalized) throw domain_error("eigenfunctions: solution not normalized");
  f0p0_ = integrate(sol.tables.g2 * sol.f0) / sol.beta0;
  nu_total_ = nu_integral(1, P_.k_max, 0.0, f0_.spec.x_max);
}

double Eigenfunctions::mu(int m, double x) const {
  if (m < 0 || x < 0.0) throw domain_error("mu: type out of range");
  if (m == 0) return 0.0;
  if (x == 0.0) return m * f0p0_;
  return m * f0_.at(x) / x;
}

double Eigenfunctions::nu(int k, double z) const {
  if (k < 1 || z < 0.0) throw domain_error("nu: type out of range");
  return P_.prob(k) * erlang_pdf(k, z) * f0_.at(z);
}

double Eigenfunctions::nu_integral(int k_lo, int k_hi, double z_lo, double z_hi) const {
  k_lo = std::max(k_lo, 1);
  k_hi = std::min(k_hi, P_.k_max);
  if (k_hi < k_lo || z_hi <= z_lo) return 0.0;
  const GridSpec& s = f0_.spec;
  GridFn w(s);
  for (std::size_t i = 0; i < s.n_points; ++i) {
    const double z = s.x(i);
    const double acc = poisson_mix(
        [&](int j) { return j + 1 >= k_lo ? P_.prob(j + 1) : 0.0; }, k_hi, z);
    w.values[i] = acc * f0_.values[i];
  }
  return integrate(w, std::max(0.0, z_lo), std::min(z_hi, s.x_max));
}

Eigenfunctions eigenfunctions(const SpectralSolution& sol) { return Eigenfunctions(sol); }

// ---------------------------------------------------------------------------

namespace {

double inner_g2(const GridFn& a, const GridFn& b, const GridFn& g2) {
  return integrate(g2 * a * b);
}

}  // namespace

PowerIteration kernel_power_iteration(const GridFn& g2, int max_iter, double tol) {
  const GridSpec& s = g2.spec;
  PowerIteration out;
  GridFn phi = GridFn::tabulate(s, [](double x) { return -std::expm1(-x); });
  phi = (1.0 / std::sqrt(inner_g2(phi, phi, g2))) * phi;
  double beta = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    GridFn psi = apply_H1(phi, g2);
    const double b = inner_g2(phi, psi, g2);
    phi = (1.0 / std::sqrt(inner_g2(psi, psi, g2))) * psi;
    out.iterations = it;
    if (it > 2 && std::abs(b - beta) <= tol * std::abs(b)) {
      beta = b;
      break;
    }
    beta = b;
  }
  out.beta = beta;
  out.f = phi;

  // deflated iteration for the second eigenpair
  const double period = s.x_max / 6.0;
  GridFn chi = GridFn::tabulate(s, [&](double x) { return std::sin(x / period) + 0.3 * x / s.x_max; });
  auto deflate = [&](GridFn& v) {
    const double c = inner_g2(v, out.f, g2);
    for (std::size_t i = 0; i < v.size(); ++i) v.values[i] -= c * out.f.values[i];
  };
  deflate(chi);
  chi = (1.0 / std::sqrt(inner_g2(chi, chi, g2))) * chi;
  double beta2 = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    GridFn psi = apply_H1(chi, g2);
    deflate(psi);
    const double b = inner_g2(chi, psi, g2);
    chi = (1.0 / std::sqrt(inner_g2(psi, psi, g2))) * psi;
    out.iterations2 = it;
    if (it > 2 && std::abs(b - beta2) <= tol * std::abs(b)) {
      beta2 = b;
      break;
    }
    beta2 = b;
  }
  deflate(chi);
  out.f2 = (1.0 / std::sqrt(inner_g2(chi, chi, g2))) * chi;
  out.beta2 = beta2;
  return out;
}

// ---------------------------------------------------------------------------

KernelGrid markov_kernel(const SpectralSolution& sol, std::size_t n_points) {
  if (!sol.normalized) throw domain_error("markov_kernel: solution not normalized");
  KernelGrid kg;
  kg.spec = GridSpec(sol.f0.spec.x_max, n_points);
  const std::size_t N = n_points;
  const double h = kg.spec.step();
  std::vector<double> g2(N), x(N);
  kg.weights.assign(N, h);
  kg.weights.front() = kg.weights.back() = 0.5 * h;
  for (std::size_t i = 0; i < N; ++i) {
    x[i] = kg.spec.x(i);
    g2[i] = g_series(2, x[i], sol.P);
  }
  // eigenpair of A_ij = min(x_i, x_j) g2_j w_j, started from f0
  std::vector<double> f(N), Af(N);
  for (std::size_t i = 0; i < N; ++i) f[i] = sol.f0.at(x[i]);
  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    // O(N) via prefix sums: sum_j min(x_i,x_j) c_j = sum_{j<=i} x_j c_j + x_i sum_{j>i} c_j
    std::vector<double> c(N);
    for (std::size_t j = 0; j < N; ++j) c[j] = g2[j] * kg.weights[j] * v[j];
    double low = 0.0, up = 0.0;
    for (std::size_t j = 0; j < N; ++j) up += c[j];
    for (std::size_t i = 0; i < N; ++i) {
      low += x[i] * c[i];
      up -= c[i];
      out[i] = low + x[i] * up;
    }
  };
  double beta = sol.beta0;
  for (int it = 0; it < 500; ++it) {
    apply(f, Af);
    double num = 0.0, den = 0.0, nrm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double wi = g2[i] * kg.weights[i];
      num += wi * f[i] * Af[i];
      den += wi * f[i] * f[i];
      nrm += wi * Af[i] * Af[i];
    }
    const double b = num / den;
    const double s = 1.0 / std::sqrt(nrm);
    for (std::size_t i = 0; i < N; ++i) f[i] = Af[i] * s;
    const bool done = std::abs(b - beta) <= 1e-16 * b && it > 5;
    beta = b;
    if (done) break;
  }
  // final consistent pair: f <- A f / beta
  apply(f, Af);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double wi = g2[i] * kg.weights[i];
    num += wi * f[i] * Af[i];
    den += wi * f[i] * f[i];
  }
  kg.beta_hat = num / den;
  double Z = 0.0;
  for (std::size_t j = 0; j < N; ++j) Z += kg.weights[j] * g2[j] * f[j] * f[j];
  for (double& v : f) v /= std::sqrt(Z);
  kg.f_hat = GridFn(kg.spec, f);

  kg.p_matrix.assign(N * N, 0.0);
  double row0 = 0.0;
  for (std::size_t j = 0; j < N; ++j) row0 += g2[j] * f[j] * kg.weights[j];
  for (std::size_t i = 0; i < N; ++i) {
    double* row = &kg.p_matrix[i * N];
    double sum = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      const double gw = g2[j] * f[j] * kg.weights[j];
      row[j] = i == 0 ? gw / row0 : std::min(x[i], x[j]) * gw / (kg.beta_hat * f[i]);
      sum += row[j];
    }
    kg.max_row_correction = std::max(kg.max_row_correction, std::abs(sum - 1.0));
    for (std::size_t j = 0; j < N; ++j) row[j] /= sum;
  }
  kg.pi = GridFn(kg.spec);
  for (std::size_t j = 0; j < N; ++j) kg.pi.values[j] = g2[j] * f[j] * f[j];
  return kg;
}

KernelChecks check_kernel(const KernelGrid& kg) {
  KernelChecks c;
  const std::size_t N = kg.n();
  const auto& P = kg.p_matrix;
  const auto& w = kg.weights;
  const auto& pi = kg.pi.values;
  for (std::size_t i = 0; i < N; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < N; ++j) s += P[i * N + j];
    c.row_sum_error = std::max(c.row_sum_error, std::abs(s - 1.0));
  }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      const double a = w[i] * pi[i] * P[i * N + j], b = w[j] * pi[j] * P[j * N + i];
      const double m = std::max(a, b);
      if (m > 0.0) c.detailed_balance = std::max(c.detailed_balance, std::abs(a - b) / m);
    }
  std::vector<double> flow(N, 0.0);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) flow[j] += w[i] * pi[i] * P[i * N + j];
  for (std::size_t j = 0; j < N; ++j)
    c.stationarity = std::max(c.stationarity, std::abs(flow[j] / w[j] - pi[j]));
  return c;
}

namespace {

std::vector<double> matmul(const std::vector<double>& A, const std::vector<double>& B, std::size_t N) {
  std::vector<double> C(N * N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    double* c = &C[i * N];
    for (std::size_t k = 0; k < N; ++k) {
      const double a = A[i * N + k];
      if (a == 0.0) continue;
      const double* b = &B[k * N];
      for (std::size_t j = 0; j < N; ++j) c[j] += a * b[j];
    }
  }
  return C;
}

}  // namespace

KernelIterates iterate_kernel(const KernelGrid& kg, int l, int fit_from) {
  if (l < 1) throw domain_error("iterate_kernel: l must be >= 1");
  const std::size_t N = kg.n();
  std::vector<double> target(N);
  for (std::size_t j = 0; j < N; ++j) target[j] = kg.weights[j] * kg.pi.values[j];
  KernelIterates out;
  out.l = l;
  std::vector<double> Pl = kg.p_matrix;
  for (int step = 1; step <= l; ++step) {
    if (step > 1) Pl = matmul(Pl, kg.p_matrix, N);
    double tvmax = 0.0, hdev = 0.0;
    std::vector<double> tv(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
      double t = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        t += std::abs(Pl[i * N + j] - target[j]);
        if (i > 0 && j > 0 && target[j] > 0.0)
          hdev = std::max(hdev, std::abs(Pl[i * N + j] / target[j] - 1.0));
      }
      tv[i] = 0.5 * t;
      tvmax = std::max(tvmax, tv[i]);
    }
    out.tv_max.push_back(tvmax);
    out.h_factor_dev.push_back(hdev);
    if (step == l) out.tv = tv;
  }
  out.p_l = std::move(Pl);

  const int a = std::min(std::max(fit_from, 1), l);
  const int n = l - a + 1;
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int s = a; s <= l; ++s) {
      const double y = std::log(out.tv_max[s - 1]);
      sx += s, sy += y, sxx += double(s) * s, sxy += s * y, syy += y * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    for (int s = a; s <= l; ++s) {
      const double y = std::log(out.tv_max[s - 1]);
      ss_res += std::pow(y - (icpt + slope * s), 2);
      ss_tot += std::pow(y - sy / n, 2);
    }
    out.rate_estimate = std::exp(slope);
    out.rate_r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  }
  return out;
}

std::vector<double> reconstruct_h(const KernelGrid& kg, const std::vector<double>& p_l, int l) {
  const std::size_t N = kg.n();
  std::vector<double> h(N * N, 0.0);
  const double bl = std::pow(kg.beta_hat, l);
  for (std::size_t i = 1; i < N; ++i)
    for (std::size_t j = 1; j < N; ++j) {
      const double f = kg.f_hat.values[j];
      const double d = f > 0.0 ? kg.pi.values[j] / f * kg.weights[j] : 0.0;  // g2_j f_j w_j
      if (d > 0.0) h[i * N + j] = bl * kg.f_hat.values[i] * p_l[i * N + j] / d;
    }
  return h;
}

// ---------------------------------------------------------------------------

double expected_Wl(const DegreePmf& P, int l) {
  if (l < 0) throw domain_error("expected_Wl: l must be >= 0");
  if (l == 0) return 1.0;
  return P.mean * std::pow(P.mean - 1.0, l - 1);
}

std::vector<double> expected_Zl_series(const DegreePmf& P, const GridSpec& spec, int L) {
  if (L < 1) throw domain_error("expected_Zl: l must be >= 1");
  const SeriesTables t = tabulate_series(P, spec);
  // E[Z_l] = int S K^{l-1} S with K(y,t) = R(max(y,t))
  std::vector<double> out;
  GridFn v = t.S;
  for (int l = 1; l <= L; ++l) {
    if (l > 1) {
      const GridFn F = forward_cumulative(v);
      const GridFn B = backward_tail(t.R * v);
      GridFn nv(spec);
      for (std::size_t i = 0; i < spec.n_points; ++i)
        nv.values[i] = t.R.values[i] * F.values[i] + B.values[i];
      v = std::move(nv);
    }
    out.push_back(integrate(t.S * v));
  }
  return out;
}

double expected_Zl_exact(const DegreePmf& P, const GridSpec& spec, int l) {
  return expected_Zl_series(P, spec, l).back();
}

GrowthConstants growth_constants(const SpectralSolution& sol) {
  if (!sol.normalized) throw domain_error("growth_constants: solution not normalized");
  const DegreePmf& P = sol.P;
  const GridSpec& s = sol.f0.spec;
  GridFn a(s), b(s);
  for (std::size_t i = 0; i < s.n_points; ++i) {
    const double x = s.x(i), f = sol.f0.values[i];
    // root factor: sum_m P(m) Pois(m; x) (m/x) f0(x); its x -> 0 limit is P(1) f0(0) = 0
    if (i == 0) {
      a.values[i] = P.prob(1) * f;
    } else {
      a.values[i] = poisson_mix([&](int m) { return P.prob(m) * m; }, P.k_max + 1, x) / x * f;
    }
    b.values[i] = poisson_mix([&](int j) { return P.prob(j + 1); }, P.k_max, x) * f;
  }
  GrowthConstants g;
  g.root_factor = integrate(a);
  g.nu_total = integrate(b);
  g.product = g.root_factor * g.nu_total;
  g.squared_form = g.nu_total * g.nu_total;
  return g;
}

double growth_constant(const SpectralSolution& sol) { return growth_constants(sol).nu_total; }
double ez_asymptote(const SpectralSolution& sol) { return growth_constants(sol).product; }

}  // namespace ewt
