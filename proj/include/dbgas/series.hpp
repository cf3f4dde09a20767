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

#ifndef DBGAS_SERIES_HPP
#define DBGAS_SERIES_HPP

// The diagram series
//
//   Q_t f(z0) = E[f(Z_t)] + sum_{m >= 1} sum_{i_1 != ... != i_m}
//               int_{0 < s_1 < ... < s_m < t} P^{i_1..i_m}_{s_1..s_m,t} f(z0) ds,
//
// evaluated term by term. Each sample walks one diagram: free motion, a
// meeting of the pair at each creation time (weight P_{2 dt}(z^hi - z^lo)),
// a contact window carrying s^beta, dissolution, and free motion to t.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dbgas/coupling.hpp"
#include "dbgas/errors.hpp"
#include "dbgas/geometry.hpp"
#include "dbgas/kernels.hpp"
#include "dbgas/mollified.hpp"
#include "dbgas/observables.hpp"
#include "dbgas/parallel.hpp"
#include "dbgas/quadrature.hpp"
#include "dbgas/rng.hpp"
#include "dbgas/specfun.hpp"

namespace dbgas {

using Sequence = std::vector<PairIndex>;

inline std::string sequence_to_string(const Sequence& seq) {
  std::string out;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (k) out += '-';
    out += to_string(seq[k]);
  }
  return out;
}

/// A sequence with its interleaved creation and dissolution times
/// 0 < s_1 < tau_1 < s_2 < ... < tau_m < t.
struct Diagram {
  Sequence sequence;
  std::vector<double> creation_times;
  std::vector<double> dissolution_times;

  bool valid(double t) const {
    if (creation_times.size() != sequence.size() || dissolution_times.size() != sequence.size()) {
      return false;
    }
    for (std::size_t k = 0; k + 1 < sequence.size(); ++k) {
      if (sequence[k] == sequence[k + 1]) return false;
    }
    double prev = 0.0;
    for (std::size_t k = 0; k < sequence.size(); ++k) {
      if (!(creation_times[k] > prev) || !(dissolution_times[k] > creation_times[k])) return false;
      prev = dissolution_times[k];
    }
    return prev < t;
  }
};

/// All length-m sequences over the pairs of N particles with adjacent entries
/// distinct, in lexicographic order of pair slots.
inline std::vector<Sequence> enumerate_sequences(int n, int m) {
  if (m < 0) throw DomainError("enumerate_sequences: m must be non-negative");
  const auto pairs = enumerate_pairs(n);
  std::vector<Sequence> out{Sequence{}};
  for (int level = 0; level < m; ++level) {
    std::vector<Sequence> next;
    for (const auto& s : out) {
      for (const auto& p : pairs) {
        if (!s.empty() && s.back() == p) continue;
        next.push_back(s);
        next.back().push_back(p);
      }
    }
    out = std::move(next);
  }
  return out;
}

/// How the time chain of a diagram is drawn.
///
/// kUniformSimplex sorts 2m uniforms on (0, t) and weights by t^2m / (2m)!.
/// The contact weight s^beta(delta) ~ 4 pi / (delta log^2 delta) then makes
/// the per-sample weight heavy-tailed with infinite variance.
///
/// kContactImportance draws the chain sequentially: each free gap uniformly on
/// the remaining time R, each contact length from the density
/// G(d)^2 / d on (0, R'] with G(d) = 1 / (1 + log(t / d)), which matches the
/// small-d shape of s^beta. Per-sample weights are bounded. Window lengths are
/// handled through their logarithms, so windows far below double resolution
/// of the time axis still contribute exactly.
enum class ChainSampling { kUniformSimplex, kContactImportance };

inline std::string to_string(ChainSampling c) {
  return c == ChainSampling::kUniformSimplex ? "uniform" : "importance";
}

inline ChainSampling chain_sampling_from_string(const std::string& s) {
  if (s == "uniform") return ChainSampling::kUniformSimplex;
  if (s == "importance") return ChainSampling::kContactImportance;
  throw ValidationError("unknown chain sampling '" + s + "' (expected uniform or importance)");
}

struct SeriesOptions {
  RunOptions run{};
  ChainSampling sampling = ChainSampling::kContactImportance;
};

namespace detail {

// Creation: free motion of everyone over dt, with the pair's two Gaussians
// merged into the meeting point. Returns the P_{2 dt}(z^hi - z^lo) factor.
inline double create_pair(Configuration& z, const PairIndex& p, double dt, Stream& rng) {
  const auto split = gaussian_product_split(dt, z.label(p.hi), z.label(p.lo));
  for (int k = 1; k <= z.particles(); ++k) {
    if (!p.contains(k)) z.label(k) = gaussian_point(rng, z.label(k), dt);
  }
  const Point meet = gaussian_point(rng, split.sampler_mean, split.sampler_time);
  z.label(p.hi) = meet;
  z.label(p.lo) = meet;
  return split.scalar_weight;
}

inline void free_move(Configuration& z, double dt, Stream& rng) {
  if (dt > 0.0) z = free_kernel_sample(0.0, dt, z, rng);
}

inline double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

inline double sample_uniform_chain(const CouplingParams& params, const Configuration& z0, double t,
                                   const Sequence& seq, const Observable& f, Stream& rng) {
  const auto m = seq.size();
  std::vector<double> times(2 * m);
  for (auto& x : times) x = t * rng.uniform();
  std::sort(times.begin(), times.end());
  double weight = std::exp(static_cast<double>(2 * m) * std::log(t) - log_factorial(static_cast<int>(2 * m)));
  const auto& table = SBetaTable::shared();
  Configuration z = z0;
  double prev = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double s = times[2 * k];
    const double tau = times[2 * k + 1];
    // Coincident draws have probability zero; they contribute nothing.
    if (!(s > prev) || !(tau > s)) return 0.0;
    weight *= create_pair(z, seq[k], s - prev, rng);
    auto c = contact_kernel_sample(params.beta(seq[k]), seq[k], s, tau, z, rng, table, 0.0);
    weight *= c.weight;
    z = dissolve(c.out, seq[k]);
    prev = tau;
  }
  free_move(z, t - prev, rng);
  return weight * f(z);
}

inline double sample_importance_chain(const CouplingParams& params, const Configuration& z0,
                                      double t, const Sequence& seq, const Observable& f,
                                      Stream& rng) {
  const auto& table = SBetaTable::shared();
  const double log_t = std::log(t);
  Configuration z = z0;
  double remaining = t;
  double weight = 1.0;
  for (const auto& p : seq) {
    // Free gap ~ U(0, R): density 1 / R.
    const double gap = remaining * rng.uniform();
    weight *= remaining;
    weight *= create_pair(z, p, gap, rng);
    remaining -= gap;
    if (!(remaining > 0.0)) return 0.0;
    // Contact length on (0, R] by inversion of G(d) / G(R).
    const double g_cap = 1.0 / (1.0 + log_t - std::log(remaining));
    const double u = rng.uniform();
    const double log_d = std::min(log_t + 1.0 - 1.0 / (u * g_cap), std::log(remaining));
    const double g_d = 1.0 / (1.0 + log_t - log_d);
    // s^beta(d) / [G(d)^2 / (d G(R))] = (d s^beta(d)) G(R) / G(d)^2.
    const double beta = params.beta(p);
    weight *= std::exp(table.log_g(std::log(beta) + log_d)) * g_cap / (g_d * g_d);
    z = dissolve(contact_window_sample(p, log_d, z, rng), p);
    remaining -= std::exp(log_d);
    if (remaining < 0.0) remaining = 0.0;
  }
  free_move(z, remaining, rng);
  return weight * f(z);
}

inline void validate_series_inputs(const CouplingParams& params, const Configuration& z0, double t,
                                   const Sequence& seq) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive and finite");
  params.require_particles(z0.particles());
  require_separated(z0, "term_mc");
  for (std::size_t k = 0; k < seq.size(); ++k) {
    require_pair(seq[k], z0.particles());
    if (k && seq[k] == seq[k - 1]) {
      throw DomainError("sequence " + sequence_to_string(seq) + " repeats a pair in adjacent slots");
    }
  }
}

}  // namespace detail

/// Monte Carlo estimate of one series term. The empty sequence gives the
/// free term E[f(Z_t)]. `kind` selects the stream family.
inline Estimate term_mc(const CouplingParams& params, const Configuration& z0, double t,
                        const Sequence& seq, const Observable& f, std::uint64_t n,
                        std::uint64_t seed, const SeriesOptions& opts = {},
                        std::uint32_t kind = task::kSeriesTerm) {
  detail::validate_series_inputs(params, z0, t, seq);
  if (seq.empty()) {
    return monte_carlo(
        n, seed, kind, [&](Stream& rng) { return f(free_kernel_sample(0.0, t, z0, rng)); }, opts.run);
  }
  if (opts.sampling == ChainSampling::kUniformSimplex) {
    return monte_carlo(
        n, seed, kind,
        [&](Stream& rng) { return detail::sample_uniform_chain(params, z0, t, seq, f, rng); },
        opts.run);
  }
  return monte_carlo(
      n, seed, kind,
      [&](Stream& rng) { return detail::sample_importance_chain(params, z0, t, seq, f, rng); },
      opts.run);
}

/// N = 2, m = 1, f = 1 term by nested quadrature:
///   int_0^t P_{2s}(sqrt2 z_rel) int_0^{t-s} s^beta(v) dv ds.
/// The inner integral is closed form in u; the outer is adaptive with
/// relative tolerance quad.rel_tol (default 1e-10, documented bound 1e-6).
inline double term_quadrature_n2(double beta, Point z0_rel, double t,
                                 const QuadratureSpec& quad = {1e-300, 1e-10, 2000}) {
  if (!(beta > 0.0)) throw DomainError("term_quadrature_n2: beta must be positive");
  if (!(t > 0.0)) throw DomainError("term_quadrature_n2: t must be positive");
  const double r2 = norm2(z0_rel);
  if (!(r2 > 0.0)) throw DomainError("term_quadrature_n2: the initial pair must be separated");
  auto integrand = [&](double s) {
    if (s <= 0.0 || s >= t) return 0.0;
    return std::exp(-r2 / (2.0 * s)) / (4.0 * Constants::pi * s) * s_beta_integral(beta, t - s);
  };
  // The inner integral has an infinite slope at s = t; extra breakpoints
  // near the end help the adaptive rule.
  std::vector<double> cuts;
  for (double f : {0.5, 0.9, 0.99, 0.999, 0.9999}) cuts.push_back(f * t);
  return integrate(integrand, 0.0, t, quad, cuts).value;
}

struct TermRow {
  int m = 0;
  Sequence sequence;
  Estimate estimate;
};

struct TruncationReport {
  int last_m = 0;                 // highest layer with at least one sequence
  double last_layer = 0.0;        // |sum of means in that layer|
  double ratio = 0.0;             // last_layer / previous layer (NaN if undefined)
  double geometric_bound = 0.0;   // last_layer * r / (1 - r), inf when r >= 1
  bool exhausted = false;         // no sequences exist beyond last_m
};

struct SeriesResult {
  Estimate total;
  std::vector<TermRow> terms;
  TruncationReport truncation;
};

/// Free term plus every term up to m_max. Term k (in enumeration order, the
/// free term being 0) draws from stream family kSeriesTerm + k. Standard
/// errors are combined in quadrature.
inline SeriesResult series_eval(const CouplingParams& params, const Configuration& z0, double t,
                                const Observable& f, int m_max, std::uint64_t n, std::uint64_t seed,
                                const SeriesOptions& opts = {}) {
  if (m_max < 0) throw DomainError("series_eval: m_max must be non-negative");
  detail::validate_series_inputs(params, z0, t, {});
  SeriesResult out;
  std::vector<double> layer;
  std::uint32_t ordinal = 0;
  double var = 0.0;
  double sum = 0.0;
  for (int m = 0; m <= m_max; ++m) {
    const auto seqs = enumerate_sequences(z0.particles(), m);
    if (seqs.empty()) break;
    double layer_sum = 0.0;
    for (const auto& seq : seqs) {
      TermRow row{m, seq, term_mc(params, z0, t, seq, f, n, seed, opts, task::kSeriesTerm + ordinal)};
      ++ordinal;
      layer_sum += row.estimate.mean;
      sum += row.estimate.mean;
      var += row.estimate.std_error * row.estimate.std_error;
      out.terms.push_back(std::move(row));
    }
    layer.push_back(layer_sum);
  }
  out.total.mean = sum;
  out.total.std_error = std::sqrt(var);
  out.total.n_samples = n;
  out.total.seed = seed;
  out.total.min_sample = NAN;
  out.total.max_sample = NAN;

  auto& tr = out.truncation;
  tr.last_m = static_cast<int>(layer.size()) - 1;
  tr.last_layer = std::abs(layer.back());
  // With a single pair no sequence of length >= 2 exists.
  tr.exhausted = z0.particles() == 2 && tr.last_m >= 1;
  if (tr.exhausted) {
    tr.ratio = 0.0;
    tr.geometric_bound = 0.0;
  } else if (layer.size() >= 2 && layer[layer.size() - 2] != 0.0) {
    tr.ratio = tr.last_layer / std::abs(layer[layer.size() - 2]);
    tr.geometric_bound = tr.ratio < 1.0 ? tr.last_layer * tr.ratio / (1.0 - tr.ratio)
                                        : std::numeric_limits<double>::infinity();
  } else {
    tr.ratio = std::numeric_limits<double>::quiet_NaN();
    tr.geometric_bound = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace dbgas

#endif  // DBGAS_SERIES_HPP
