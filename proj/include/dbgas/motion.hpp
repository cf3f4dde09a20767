// Copyright 2026 The dbgas Authors. - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef DBGAS_MOTION_HPP
#define DBGAS_MOTION_HPP

// Computable pieces of the stochastic many-delta motion: its singular drift,
// an exploratory Euler sampler stopped at a collision threshold, the
// multiplicative functional A and its Girsanov-type factor evaluated on given
// paths, and two one-delta oracles for N = 2.
//
// Notation: Z^j = rel_coord(z, j), x_j = sqrt(2 beta_j) |Z^j|,
// K_0^j = K_0(x_j), K_0^w = sum_j w_j K_0^j.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dbgas/coupling.hpp"
#include "dbgas/csv.hpp"
#include "dbgas/errors.hpp"
#include "dbgas/geometry.hpp"
#include "dbgas/kernels.hpp"
#include "dbgas/parallel.hpp"
#include "dbgas/quadrature.hpp"
#include "dbgas/rng.hpp"
#include "dbgas/specfun.hpp"

namespace dbgas {

// ---------------------------------------------------------------------------
// Kernel weights
// ---------------------------------------------------------------------------

namespace detail {

inline double log_sum_exp(const std::vector<double>& v) {
  double top = -std::numeric_limits<double>::infinity();
  for (double x : v) top = std::max(top, x);
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - top);
  return top + std::log(sum);
}

// log(w_j K_0^j) per pair slot, +inf for collapsed pairs.
inline std::vector<double> log_weighted_k0(const Configuration& z, const CouplingParams& params) {
  const auto pairs = enumerate_pairs(z.particles());
  std::vector<double> out(pairs.size());
  for (std::size_t s = 0; s < pairs.size(); ++s) {
    const double r = norm(rel_coord(z, pairs[s]));
    if (r == 0.0) {
      out[s] = std::numeric_limits<double>::infinity();
      continue;
    }
    const double x = std::sqrt(2.0 * params.beta(s)) * r;
    out[s] = std::log(params.w(s)) + std::log(macdonald_k01_scaled(x).k0) - x;
  }
  return out;
}

}  // namespace detail

/// log(w_j K_0^j / K_0^w) for every pair slot. Collapsed pairs (Z^j = 0)
/// share the whole mass in proportion to w_j; a state with every pair
/// collapsed has no defined shares.
inline std::vector<double> log_kernel_shares(const Configuration& z, const CouplingParams& params) {
  params.require_particles(z.particles());
  auto lw = detail::log_weighted_k0(z, params);
  std::size_t collapsed = 0;
  for (double v : lw) collapsed += std::isinf(v) && v > 0.0;
  if (collapsed == lw.size()) throw SingularityError("kernel shares: every pair is collapsed");
  if (collapsed > 0) {
    double wsum = 0.0;
    for (std::size_t s = 0; s < lw.size(); ++s) {
      if (std::isinf(lw[s])) wsum += params.w(s);
    }
    for (std::size_t s = 0; s < lw.size(); ++s) {
      lw[s] = std::isinf(lw[s]) ? std::log(params.w(s) / wsum) : -std::numeric_limits<double>::infinity();
    }
    return lw;
  }
  const double norm_log = detail::log_sum_exp(lw);
  for (double& v : lw) v -= norm_log;
  return lw;
}

// ---------------------------------------------------------------------------
// Drift
// ---------------------------------------------------------------------------

namespace detail {

// c_j = [w_j Khat_1^j / K_0^w] / conj(Z^j) per pair slot.
inline std::vector<Point> drift_terms(const Configuration& z, const CouplingParams& params) {
  params.require_particles(z.particles());
  const auto pairs = enumerate_pairs(z.particles());
  std::vector<double> log_k0(pairs.size());
  std::vector<double> log_k1hat(pairs.size());
  std::vector<Point> rel(pairs.size());
  for (std::size_t s = 0; s < pairs.size(); ++s) {
    rel[s] = rel_coord(z, pairs[s]);
    const double r = norm(rel[s]);
    if (!(r > 0.0)) {
      throw SingularityError("drift: pair " + to_string(pairs[s]) + " is collapsed (|Z| = 0)");
    }
    const double x = std::sqrt(2.0 * params.beta(s)) * r;
    const auto k = macdonald_k01_scaled(x);
    const double lw = std::log(params.w(s));
    log_k0[s] = lw + std::log(k.k0) - x;
    log_k1hat[s] = lw + std::log(x * k.k1) - x;
  }
  const double log_den = log_sum_exp(log_k0);
  std::vector<Point> c(pairs.size());
  for (std::size_t s = 0; s < pairs.size(); ++s) {
    c[s] = reciprocal_conj(rel[s]) * std::exp(log_k1hat[s] - log_den);
  }
  return c;
}

}  // namespace detail

/// Drift of the relative motion Z^i:
/// -sum_j (sigma(i).sigma(j) / 2) [w_j Khat_1^j / K_0^w] / conj(Z^j).
inline Point pair_drift(const Configuration& z, const CouplingParams& params, const PairIndex& i) {
  require_pair(i, z.particles());
  const auto c = detail::drift_terms(z, params);
  const auto pairs = enumerate_pairs(z.particles());
  Point b{0.0, 0.0};
  for (std::size_t s = 0; s < pairs.size(); ++s) {
    const int dot = sigma_dot(i, pairs[s], z.particles());
    if (dot != 0) b = b - c[s] * (0.5 * dot);
  }
  return b;
}

/// Particle drift b = -sum_j [w_j Khat_1^j / K_0^w] sigma(j) / (sqrt2 conj(Z^j)).
inline std::vector<Point> particle_drift(const Configuration& z, const CouplingParams& params) {
  const auto c = detail::drift_terms(z, params);
  const auto pairs = enumerate_pairs(z.particles());
  std::vector<Point> b(z.size(), Point{0.0, 0.0});
  for (std::size_t s = 0; s < pairs.size(); ++s) {
    const Point d = c[s] / kSqrt2;
    b[static_cast<std::size_t>(pairs[s].hi - 1)] = b[static_cast<std::size_t>(pairs[s].hi - 1)] - d;
    b[static_cast<std::size_t>(pairs[s].lo - 1)] = b[static_cast<std::size_t>(pairs[s].lo - 1)] + d;
  }
  return b;
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

struct PathStop {
  std::size_t step = 0;
  PairIndex pair;
};

/// States on a grid 0 = t_0 < ... < t_K. local_time_increments[k][slot] is
/// the local-time increment of that pair over [t_k, t_{k+1}].
struct PathSample {
  std::vector<double> times;
  std::vector<Configuration> states;
  std::optional<std::vector<std::vector<double>>> local_time_increments;
  std::optional<PathStop> stopped_at;
  double local_time_support = std::numeric_limits<double>::infinity();

  std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
  int particles() const { return states.empty() ? 0 : states.front().particles(); }
  double horizon() const { return times.empty() ? 0.0 : times.back(); }
  /// Time of the threshold stop, or the horizon when the path never stopped.
  double stop_time() const { return stopped_at ? times[stopped_at->step] : horizon(); }

  void validate() const {
    if (times.empty() || times.front() != 0.0) throw ValidationError("path: grid must start at t = 0");
    if (states.size() != times.size()) throw ValidationError("path: one state per grid point required");
    for (std::size_t k = 1; k < times.size(); ++k) {
      if (!(times[k] > times[k - 1])) throw ValidationError("path: grid must be strictly increasing");
    }
    const int n = particles();
    require_particles(n);
    for (const auto& s : states) {
      if (s.particles() != n) throw ValidationError("path: particle count changes along the path");
    }
    if (stopped_at && stopped_at->step > steps()) throw ValidationError("path: stop index out of range");
    if (!local_time_increments) return;
    const auto& dl = *local_time_increments;
    if (dl.size() != steps()) throw ValidationError("path: one local-time row per step required");
    const auto pairs = enumerate_pairs(n);
    for (std::size_t k = 0; k < dl.size(); ++k) {
      if (dl[k].size() != pairs.size()) throw ValidationError("path: one local-time entry per pair required");
      for (std::size_t s = 0; s < pairs.size(); ++s) {
        if (!(dl[k][s] >= 0.0) || !std::isfinite(dl[k][s])) {
          throw ValidationError("path: local-time increments must be finite and non-negative");
        }
        if (dl[k][s] > 0.0 && norm(rel_coord(states[k], pairs[s])) > local_time_support) {
          throw ValidationError("path: local time charged at step " + std::to_string(k) + " for pair " +
                                to_string(pairs[s]) + " outside the support threshold");
        }
      }
    }
  }
};

struct PathOptions {
  bool drift = true;  // false: plain Brownian motion
};

/// Euler-Maruyama for dZ = b(Z) dt + dW on K = ceil(T / h) equal steps,
/// stopped at the first grid point where some |Z^j| <= eta_stop. Path p of a
/// family uses Stream(seed, kPath, p).
inline PathSample sample_path(const Configuration& z0, const CouplingParams& params, double h,
                              double horizon, double eta_stop, std::uint64_t seed,
                              std::uint32_t path_index = 0, const PathOptions& opts = {}) {
  if (!(h > 0.0)) throw ValidationError("sample_path: step h must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("sample_path: horizon must be positive");
  if (!(eta_stop > 0.0)) throw ValidationError("sample_path: eta_stop must be positive");
  params.require_particles(z0.particles());
  if (!is_separated(z0, 1e-9)) throw ValidationError("sample_path: initial configuration must be separated");
  const auto steps = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(horizon / h - 1e-9)));
  const double dt = horizon / static_cast<double>(steps);
  const double sd = std::sqrt(dt);
  Stream rng(seed, task::kPath, path_index);

  PathSample path;
  path.times.reserve(steps + 1);
  path.states.reserve(steps + 1);
  Configuration z = z0;
  for (std::uint64_t k = 0;; ++k) {
    path.times.push_back(k == steps ? horizon : dt * static_cast<double>(k));
    path.states.push_back(z);
    const auto [sep, pair] = min_separation(z);
    if (sep <= eta_stop) {
      path.stopped_at = PathStop{static_cast<std::size_t>(k), pair};
      break;
    }
    if (k == steps) break;
    std::vector<Point> b(z.size(), Point{0.0, 0.0});
    if (opts.drift) b = particle_drift(z, params);
    std::vector<Point> next(z.size());
    for (std::size_t q = 0; q < z.size(); ++q) {
      const double gx = rng.normal();
      const double gy = rng.normal();
      next[q] = {z[q].x + b[q].x * dt + sd * gx, z[q].y + b[q].y * dt + sd * gy};
    }
    z = Configuration(std::move(next));
  }
  return path;
}

/// Paths 0..n-1 of the family (seed, kPath), computed in parallel.
inline std::vector<PathSample> sample_paths(std::uint64_t n, const Configuration& z0,
                                            const CouplingParams& params, double h, double horizon,
                                            double eta_stop, std::uint64_t seed, const PathOptions& opts = {},
                                            unsigned threads = 1) {
  if (n > std::numeric_limits<std::uint32_t>::max()) throw ValidationError("sample_paths: too many paths");
  std::vector<PathSample> out(n);
  parallel_for(n, threads, [&](std::uint64_t p) {
    out[p] = sample_path(z0, params, h, horizon, eta_stop, seed, static_cast<std::uint32_t>(p), opts);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Multiplicative functional
// ---------------------------------------------------------------------------

struct AFunctionalValue {
  double ring = 0.0;
  double bar = 0.0;
  double total = 0.0;
};

namespace detail {

inline void require_local_times(const PathSample& path, const CouplingParams& params) {
  path.validate();
  params.require_particles(path.particles());
  if (!path.local_time_increments) throw ValidationError("A functional: path has no local-time increments");
}

}  // namespace detail

/// sum_{j != i} 2 (w_j / w_i) sum_k K_0^j(t_k) dL^i_k.
inline double a_ring_i(const PathSample& path, const CouplingParams& params, const PairIndex& i) {
  detail::require_local_times(path, params);
  const int n = path.particles();
  require_pair(i, n);
  const auto pairs = enumerate_pairs(n);
  const std::size_t si = pair_slot(n, i);
  const auto& dl = *path.local_time_increments;
  double ring = 0.0;
  for (std::size_t sj = 0; sj < pairs.size(); ++sj) {
    if (sj == si) continue;
    const double k = std::sqrt(2.0 * params.beta(sj));
    double integral = 0.0;
    for (std::size_t step = 0; step < dl.size(); ++step) {
      const double d = dl[step][si];
      if (d == 0.0) continue;
      const double r = norm(rel_coord(path.states[step], pairs[sj]));
      if (r == 0.0) {
        throw SingularityError("A functional: local time of " + to_string(i) + " charged while pair " +
                               to_string(pairs[sj]) + " is collapsed");
      }
      integral += macdonald_k(0, k * r) * d;
    }
    ring += 2.0 * (params.w(sj) / params.w(si)) * integral;
  }
  return ring;
}

/// Left-endpoint rule for int_0^T sum_j beta_j w_j K_0^j / K_0^w ds.
inline double a_bar(const PathSample& path, const CouplingParams& params) {
  path.validate();
  params.require_particles(path.particles());
  double bar = 0.0;
  for (std::size_t k = 0; k + 1 < path.times.size(); ++k) {
    const auto shares = log_kernel_shares(path.states[k], params);
    double rate = 0.0;
    for (std::size_t s = 0; s < shares.size(); ++s) rate += params.beta(s) * std::exp(shares[s]);
    bar += (path.times[k + 1] - path.times[k]) * rate;
  }
  return bar;
}

/// ring = sum_i ring_i, bar as in a_bar(), total = ring + bar.
inline AFunctionalValue a_functional(const PathSample& path, const CouplingParams& params) {
  detail::require_local_times(path, params);
  AFunctionalValue v;
  for (const auto& i : enumerate_pairs(path.particles())) v.ring += a_ring_i(path, params, i);
  v.bar = a_bar(path, params);
  v.total = v.ring + v.bar;
  return v;
}

/// ring_i + bar - beta_i T.
inline double a_i_functional(const PathSample& path, const CouplingParams& params, const PairIndex& i) {
  const double ring_i = a_ring_i(path, params, i);
  const double bar = a_bar(path, params);
  return ring_i + bar - params.beta(i) * path.horizon();
}

/// [w_i K_0^i / K_0^w](0) exp(-A^i(T)) [K_0^w / (w_i K_0^i)](T); the share
/// w_i K_0^i / K_0^w counts as 1 at an endpoint where Z^i = 0.
inline double girsanov_factor(const PathSample& path, const CouplingParams& params, const PairIndex& i) {
  const double a = a_i_functional(path, params, i);
  const int n = path.particles();
  const std::size_t si = pair_slot(n, i);
  auto log_share = [&](const Configuration& z) {
    if (norm(rel_coord(z, i)) == 0.0) return 0.0;
    return log_kernel_shares(z, params)[si];
  };
  return std::exp(log_share(path.states.front()) - a - log_share(path.states.back()));
}

// ---------------------------------------------------------------------------
// One-delta oracles (N = 2)
// ---------------------------------------------------------------------------

using PlanarFunction = std::function<double(Point)>;

/// E[g(Z_t); t < T_0] for the one-delta relative motion from z0_rel, by
/// sampling Z_t from the free motion with weight
/// exp(-beta t) K_0(sqrt(2 beta) |Z_t|) / K_0(sqrt(2 beta) |z0_rel|).
inline Estimate one_delta_restricted_expectation(Point z0_rel, double beta, double t, const PlanarFunction& g,
                                                 std::uint64_t n, std::uint64_t seed,
                                                 const RunOptions& run = {}) {
  if (!(beta > 0.0)) throw DomainError("one_delta_restricted_expectation: beta must be positive");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("one_delta_restricted_expectation: t must be positive");
  const double r0 = norm(z0_rel);
  if (!(r0 > 0.0)) throw DomainError("one_delta_restricted_expectation: z0_rel must be nonzero");
  const double k = std::sqrt(2.0 * beta);
  const double x0 = k * r0;
  const double log_base = -beta * t + x0 - std::log(macdonald_k01_scaled(x0).k0);
  return monte_carlo(
      n, seed, task::kOneDelta,
      [&](Stream& rng) {
        const Point z = gaussian_point(rng, z0_rel, t);
        const double x = k * norm(z);
        if (!(x > 0.0)) throw SingularityError("one_delta_restricted_expectation: sample hit the origin");
        return g(z) * std::exp(log_base - x + std::log(macdonald_k01_scaled(x).k0));
      },
      run);
}

struct LocalTimeOptions {
  QuadratureSpec outer{1e-300, 1e-8, 2000};
  QuadratureSpec inner{1e-300, 1e-10, 2000};
};

namespace detail {

// Windows below exp(-40) times the available time are folded into one
// closed-form piece with h frozen at the window start.
inline constexpr double kLocalTimeLogCut = 40.0;

// int_s^t exp(-beta tau) s^beta(tau - s) h(tau) d tau, with u = tau - s
// written as u = exp(-y) so that the 1 / (u log^2 u) singularity flattens.
inline double contact_window_integral(double beta, double s, double t, const std::function<double(double)>& h,
                                      const LocalTimeOptions& opts) {
  const double window = t - s;
  if (!(window > 0.0)) return 0.0;
  auto checked_h = [&](double tau) {
    const double v = h(tau);
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("local_time_expectation: h must be finite and >= 0");
    return v;
  };
  const double log_beta = std::log(beta);
  const double y_lo = -std::log(window);
  const double y_hi = y_lo + kLocalTimeLogCut;
  const auto& table = SBetaTable::shared();
  auto integrand = [&](double y) {
    const double u = std::exp(-y);
    const double tau = s + u;
    return std::exp(-beta * tau + table.log_g(log_beta - y)) * checked_h(tau);
  };
  const double main = integrate(integrand, y_lo, y_hi, opts.inner).value;
  const double head = std::exp(-beta * s) * checked_h(s) * s_beta_integral(beta, std::exp(-y_hi));
  return main + head;
}

}  // namespace detail

/// E[int_0^t h(tau) dL_tau] in the one-delta local-time parametrization:
/// for z0_rel != 0,
///   int_0^t P_{2s}(sqrt2 z0) / (2 K_0(sqrt(2 beta)|z0|))
///           int_s^t exp(-beta tau) s^beta(tau - s) h(tau) d tau ds,
/// and for z0_rel = 0, int_0^t exp(-beta tau) s^beta(tau) h(tau) / (4 pi) d tau.
inline double local_time_expectation(Point z0_rel, double beta, double t, const std::function<double(double)>& h,
                                     const LocalTimeOptions& opts = {}) {
  if (!(beta > 0.0)) throw DomainError("local_time_expectation: beta must be positive");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("local_time_expectation: t must be positive");
  const double r2 = norm2(z0_rel);
  if (r2 == 0.0) return detail::contact_window_integral(beta, 0.0, t, h, opts) / (4.0 * Constants::pi);
  const double x0 = std::sqrt(2.0 * beta * r2);
  const double log_norm = x0 - std::log(2.0 * macdonald_k01_scaled(x0).k0);
  auto outer = [&](double s) {
    if (s <= 0.0 || s >= t) return 0.0;
    const double density = std::exp(-r2 / (2.0 * s) + log_norm) / (4.0 * Constants::pi * s);
    if (density == 0.0) return 0.0;
    return density * detail::contact_window_integral(beta, s, t, h, opts);
  };
  std::vector<double> cuts;
  for (double f : {0.5, 0.9, 0.99, 0.999, 0.9999}) cuts.push_back(f * t);
  return integrate(outer, 0.0, t, opts.outer, cuts).value;
}

// ---------------------------------------------------------------------------
// Path dumps
// ---------------------------------------------------------------------------

inline std::vector<std::string> path_csv_header(int n, bool local_times) {
  std::vector<std::string> h{"step", "time"};
  for (int k = 1; k <= n; ++k) {
    h.push_back("x" + std::to_string(k));
    h.push_back("y" + std::to_string(k));
  }
  if (local_times) {
    for (const auto& p : enumerate_pairs(n)) {
      h.push_back("dL_" + std::to_string(p.hi) + "_" + std::to_string(p.lo));
    }
  }
  return h;
}

/// One row per grid point: step, time, x1, y1, ..., xN, yN and, when present,
/// the local-time increments over [t_k, t_{k+1}] (0 on the final row).
inline CsvTable path_to_csv(const PathSample& path) {
  path.validate();
  const int n = path.particles();
  const bool lt = path.local_time_increments.has_value();
  CsvTable table{path_csv_header(n, lt), {}};
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    CsvRow row{static_cast<std::uint64_t>(k), path.times[k]};
    for (const auto& p : path.states[k]) {
      row.emplace_back(p.x);
      row.emplace_back(p.y);
    }
    if (lt) {
      for (std::size_t s = 0; s < static_cast<std::size_t>(pair_count(n)); ++s) {
        row.emplace_back(k < path.steps() ? (*path.local_time_increments)[k][s] : 0.0);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline PathSample path_from_csv(const CsvText& text) {
  const auto& hdr = text.header;
  if (hdr.size() < 6 || hdr[0] != "step" || hdr[1] != "time") {
    throw ValidationError("path csv: header must start with step,time,x1,y1,x2,y2");
  }
  int n = 0;
  while (3 + 2 * static_cast<std::size_t>(n) < hdr.size() && hdr[2 + 2 * static_cast<std::size_t>(n)] == "x" + std::to_string(n + 1)) {
    ++n;
  }
  const bool lt = hdr.size() > 2 + 2 * static_cast<std::size_t>(n);
  if (hdr != path_csv_header(n, lt)) throw ValidationError("path csv: unexpected columns");
  PathSample path;
  if (lt) path.local_time_increments.emplace();
  for (std::size_t r = 0; r < text.rows.size(); ++r) {
    const auto& row = text.rows[r];
    if (row[0] != std::to_string(r)) throw ValidationError("path csv: steps must be 0, 1, 2, ...");
    path.times.push_back(parse_real(row[1]));
    std::vector<Point> pts(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      pts[static_cast<std::size_t>(k)] = {parse_real(row[2 + 2 * k]), parse_real(row[3 + 2 * k])};
    }
    path.states.emplace_back(std::move(pts));
    if (lt && r + 1 < text.rows.size()) {
      std::vector<double> dl;
      for (std::size_t c = 2 + 2 * static_cast<std::size_t>(n); c < row.size(); ++c) dl.push_back(parse_real(row[c]));
      path.local_time_increments->push_back(std::move(dl));
    }
  }
  path.validate();
  return path;
}

}  // namespace dbgas

#endif  // DBGAS_MOTION_HPP
