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

#ifndef DBGAS_MOLLIFIED_HPP
#define DBGAS_MOLLIFIED_HPP

// Feynman-Kac Monte Carlo for the mollified N-body Hamiltonian:
//
//   E_z0[ exp{ sum_j int_0^t c_j eps^-2 phi((Z^hi_r - Z^lo_r) / eps) dr } f(Z_t) ],
//   c_j = 2 pi / log(1/eps) + 2 pi lambda_j / log^2(1/eps).
//
// Paths use exact Gaussian increments on a uniform grid of K = ceil(t / h)
// steps; the occupation integral uses the midpoint of each step.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dbgas/coupling.hpp"
#include "dbgas/errors.hpp"
#include "dbgas/geometry.hpp"
#include "dbgas/kernels.hpp"
#include "dbgas/observables.hpp"
#include "dbgas/parallel.hpp"
#include "dbgas/rng.hpp"

namespace dbgas {

inline constexpr double kStepRatio = 20.0;      // h <= eps^2 / kStepRatio
inline constexpr double kSeparationTol = 1e-9;  // initial configurations

struct FkOptions {
  RunOptions run{};
  double coupling_scale = 1.0;  // 0 switches the potential off
  std::uint32_t kind = task::kMollified;
};

inline double max_step_for(double eps) { return eps * eps / kStepRatio; }

/// Number of equal steps K = ceil(t / h) used on [0, t].
inline std::uint64_t fk_step_count(double t, double h) {
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(t / h - 1e-9)));
}

/// Pair prefactor 2 pi / L + 2 pi lambda / L^2 with L = log(1/eps).
inline double coupling_prefactor(double lambda, double eps) {
  const double big_l = std::log(1.0 / eps);
  return 2.0 * Constants::pi / big_l + 2.0 * Constants::pi * lambda / (big_l * big_l);
}

inline void require_separated(const Configuration& z0, const char* who) {
  require_particles(z0.particles());
  if (classify_config(z0, kSeparationTol).kind != ConfigKind::kSeparated) {
    throw ValidationError(std::string(who) +
                          ": initial configuration must be separated (all pair distances > 1e-9)");
  }
}

inline void validate_fk_inputs(double eps, double t, double h) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive and finite");
  if (!(h > 0.0)) throw ValidationError("step h must be positive");
  if (h > max_step_for(eps) * (1.0 + 1e-12)) {
    throw ValidationError("step h = " + std::to_string(h) + " exceeds eps^2/20 = " +
                          std::to_string(max_step_for(eps)) + " for eps = " + std::to_string(eps));
  }
}

namespace detail {

// One path weight. For N = 2 the potential only sees Z^2 - Z^1, which moves as
// a Brownian motion of variance 2 dt per step and is independent of the
// centre of mass; the latter is drawn once at the end. For N >= 3 every
// particle is stepped.
inline double fk_path(const CouplingParams& params, const std::vector<double>& pref, double inv_eps,
                      const Configuration& z0, double t, std::uint64_t steps, const Observable& f,
                      Stream& rng) {
  const MollifierSpec& phi = params.mollifier();
  const double dt = t / static_cast<double>(steps);
  const double inv_eps2 = inv_eps * inv_eps;
  // Squared support radius of phi_eps in the original units, for early outs.
  const double support2 = phi.radius() * phi.radius() / inv_eps2;
  double exponent = 0.0;

  if (z0.particles() == 2) {
    const double sd = std::sqrt(2.0 * dt);
    Point d = z0[1] - z0[0];
    const double c = pref[0] * inv_eps2 * dt;
    for (std::uint64_t k = 0; k < steps; ++k) {
      const Point next{d.x + sd * rng.normal(), d.y + sd * rng.normal()};
      const Point mid = (d + next) * 0.5;
      const double r2 = norm2(mid);
      if (r2 < support2) exponent += c * phi.density_r2(r2 * inv_eps2);
      d = next;
    }
    if (f.is_constant_one) return std::exp(exponent);
    const Point com0 = (z0[0] + z0[1]) * 0.5;
    const Point com = gaussian_point(rng, com0, 0.5 * t);
    return std::exp(exponent) * f(Configuration({com - d * 0.5, com + d * 0.5}));
  }

  const auto pairs = enumerate_pairs(z0.particles());
  const double sd = std::sqrt(dt);
  Configuration z = z0;
  Configuration next = z0;
  for (std::uint64_t k = 0; k < steps; ++k) {
    for (std::size_t q = 0; q < z.size(); ++q) {
      next[q] = {z[q].x + sd * rng.normal(), z[q].y + sd * rng.normal()};
    }
    for (std::size_t s = 0; s < pairs.size(); ++s) {
      const auto& p = pairs[s];
      const Point mid = ((next.label(p.hi) - next.label(p.lo)) + (z.label(p.hi) - z.label(p.lo))) * 0.5;
      const double r2 = norm2(mid);
      if (r2 < support2) exponent += pref[s] * inv_eps2 * dt * phi.density_r2(r2 * inv_eps2);
    }
    std::swap(z, next);
  }
  return std::exp(exponent) * f(z);
}

}  // namespace detail

/// Monte Carlo estimate of the mollified Feynman-Kac expectation at scale eps
/// with step bound h (the grid uses ceil(t / h) equal steps).
inline Estimate occupation_fk_estimate(const CouplingParams& params, double eps,
                                       const Configuration& z0, double t, const Observable& f,
                                       double h, std::uint64_t n, std::uint64_t seed,
                                       const FkOptions& opts = {}) {
  validate_fk_inputs(eps, t, h);
  params.require_particles(z0.particles());
  require_separated(z0, "occupation_fk_estimate");
  if (!(opts.coupling_scale >= 0.0)) throw DomainError("coupling_scale must be non-negative");
  const auto steps = fk_step_count(t, h);
  std::vector<double> pref(params.pairs());
  for (std::size_t s = 0; s < pref.size(); ++s) {
    pref[s] = opts.coupling_scale * coupling_prefactor(params.lambda(s), eps);
  }
  const double inv_eps = 1.0 / eps;
  return monte_carlo(
      n, seed, opts.kind,
      [&](Stream& rng) {
        return detail::fk_path(params, pref, inv_eps, z0, t, steps, f, rng);
      },
      opts.run);
}

struct SweepRow {
  double eps = 0.0;
  double h = 0.0;
  Estimate estimate;
  double lambda = 0.0;  // first pair
  double beta = 0.0;    // first pair
};

struct SweepOptions {
  RunOptions run{};
  bool common_random_numbers = false;  // every row reuses one stream family
  double coupling_scale = 1.0;
  double h = 0.0;                      // 0: h = eps^2 / 20 per row
};

/// occupation_fk_estimate for each eps. Rows draw from independent streams
/// unless common_random_numbers is set, in which case all rows share the
/// streams of row 0 and their estimates are positively correlated.
inline std::vector<SweepRow> epsilon_sweep(const CouplingParams& params, const Configuration& z0,
                                           double t, const Observable& f,
                                           const std::vector<double>& eps_list, std::uint64_t n,
                                           std::uint64_t seed, const SweepOptions& opts = {}) {
  if (eps_list.empty()) throw ValidationError("epsilon_sweep: eps_list is empty");
  std::vector<SweepRow> rows;
  rows.reserve(eps_list.size());
  for (std::size_t r = 0; r < eps_list.size(); ++r) {
    const double eps = eps_list[r];
    const double h = opts.h > 0.0 ? opts.h : max_step_for(eps);
    FkOptions fo;
    fo.run = opts.run;
    fo.coupling_scale = opts.coupling_scale;
    fo.kind = task::kMollified + (opts.common_random_numbers ? 0u : static_cast<std::uint32_t>(r));
    SweepRow row;
    row.eps = eps;
    row.h = h;
    row.estimate = occupation_fk_estimate(params, eps, z0, t, f, h, n, seed, fo);
    row.lambda = params.lambda(std::size_t{0});
    row.beta = params.beta(std::size_t{0});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dbgas

#endif  // DBGAS_MOLLIFIED_HPP
