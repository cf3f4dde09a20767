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

#ifndef DBGAS_COUPLING_HPP
#define DBGAS_COUPLING_HPP

// Mollifiers, the renormalized coupling lambda and its relation to beta, and
// the per-pair parameter set shared by every estimator.

#include <cmath>
#include <string>
#include <vector>

#include "dbgas/errors.hpp"
#include "dbgas/geometry.hpp"
#include "dbgas/quadrature.hpp"
#include "dbgas/specfun.hpp"

namespace dbgas {

enum class MollifierKind { kSmoothBump, kDiskUniform };

inline std::string to_string(MollifierKind k) {
  return k == MollifierKind::kSmoothBump ? "smooth_bump" : "disk_uniform";
}

inline MollifierKind mollifier_kind_from_string(const std::string& s) {
  if (s == "smooth_bump") return MollifierKind::kSmoothBump;
  if (s == "disk_uniform") return MollifierKind::kDiskUniform;
  throw ValidationError("unknown mollifier kind '" + s + "' (expected smooth_bump or disk_uniform)");
}

/// Radial probability density supported in the closed disk of the given
/// radius. The smooth bump is c exp(-1 / (1 - |z/R|^2)); the uniform disk is
/// discontinuous at |z| = R but has a closed-form log energy.
class MollifierSpec {
 public:
  MollifierSpec() : MollifierSpec(MollifierKind::kSmoothBump, 1.0) {}

  MollifierSpec(MollifierKind kind, double radius) : kind_(kind), radius_(radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
      throw DomainError("MollifierSpec: radius must be positive and finite");
    }
    if (kind_ == MollifierKind::kDiskUniform) {
      normalization_ = 1.0 / (Constants::pi * radius * radius);
      log_energy_ = std::log(radius) - 0.25;
      return;
    }
    // The bump profile is computed at unit radius and rescaled.
    static const UnitBump unit = UnitBump::build();
    normalization_ = unit.normalization / (radius * radius);
    log_energy_ = std::log(radius) + unit.log_energy;
  }

  static MollifierSpec smooth_bump(double radius = 1.0) {
    return {MollifierKind::kSmoothBump, radius};
  }
  static MollifierSpec disk_uniform(double radius = 1.0) {
    return {MollifierKind::kDiskUniform, radius};
  }

  MollifierKind kind() const { return kind_; }
  double radius() const { return radius_; }
  double normalization() const { return normalization_; }
  /// int int phi(z) phi(z') log|z - z'| dz dz'.
  double log_energy() const { return log_energy_; }

  /// Density as a function of |z|^2.
  double density_r2(double r2) const {
    const double q = r2 / (radius_ * radius_);
    if (q >= 1.0) return 0.0;
    if (kind_ == MollifierKind::kDiskUniform) return normalization_;
    return normalization_ * std::exp(-1.0 / (1.0 - q));
  }

  double density(Point z) const { return density_r2(norm2(z)); }

 private:
  struct UnitBump {
    double normalization;
    double log_energy;

    static double profile(double r) { return r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0; }

    static UnitBump build() {
      const QuadratureSpec q{1e-300, 1e-13, 2000};
      const double mass = 2.0 * Constants::pi *
                          integrate([](double r) { return r * profile(r); }, 0.0, 1.0, q).value;
      const double c = 1.0 / mass;
      // Radial CDF F(r) and, for radial laws, E log|z - z'| = E log max(R1, R2)
      // = log 1 - int_0^1 F(r)^2 / r dr.
      auto cdf = [&](double r) {
        return 2.0 * Constants::pi * c *
               integrate([](double s) { return s * profile(s); }, 0.0, r, q).value;
      };
      const double inner = integrate(
          [&](double r) {
            if (r <= 0.0) return 0.0;
            const double f = cdf(r);
            return f * f / r;
          },
          0.0, 1.0, QuadratureSpec{1e-300, 1e-12, 2000}).value;
      return {c, -inner};
    }
  };

  MollifierKind kind_;
  double radius_;
  double normalization_ = 0.0;
  double log_energy_ = 0.0;
};

inline double mollifier_density(const MollifierSpec& spec, Point z) { return spec.density(z); }
inline double mollifier_log_energy(const MollifierSpec& spec) { return spec.log_energy(); }

/// lambda = (log beta) / 2 - log 2 + gamma_EM + log_energy.
inline double lambda_from_beta(double beta, const MollifierSpec& spec) {
  if (!(beta > 0.0)) throw DomainError("lambda_from_beta: beta must be positive");
  return 0.5 * std::log(beta) - std::numbers::ln2_v<double> + Constants::euler_mascheroni +
         spec.log_energy();
}

inline double beta_from_lambda(double lambda, const MollifierSpec& spec) {
  if (!std::isfinite(lambda)) throw DomainError("beta_from_lambda: lambda must be finite");
  return std::exp(2.0 * (lambda + std::numbers::ln2_v<double> - Constants::euler_mascheroni -
                         spec.log_energy()));
}

/// Per-pair couplings in enumerate_pairs order. beta and lambda are always
/// kept consistent with the mollifier.
class CouplingParams {
 public:
  CouplingParams() = default;

  static CouplingParams from_beta(int n, std::vector<double> beta, std::vector<double> w = {},
                                  MollifierSpec mollifier = {}) {
    CouplingParams p(n, std::move(w), mollifier);
    p.beta_ = expand(std::move(beta), n, "beta");
    for (double b : p.beta_) {
      if (!(b > 0.0) || !std::isfinite(b)) throw ValidationError("beta must be positive and finite");
    }
    p.lambda_.resize(p.beta_.size());
    for (std::size_t k = 0; k < p.beta_.size(); ++k) p.lambda_[k] = lambda_from_beta(p.beta_[k], mollifier);
    return p;
  }

  static CouplingParams from_lambda(int n, std::vector<double> lambda, std::vector<double> w = {},
                                    MollifierSpec mollifier = {}) {
    CouplingParams p(n, std::move(w), mollifier);
    p.lambda_ = expand(std::move(lambda), n, "lambda");
    p.beta_.resize(p.lambda_.size());
    for (std::size_t k = 0; k < p.lambda_.size(); ++k) {
      p.beta_[k] = beta_from_lambda(p.lambda_[k], mollifier);
      if (!(p.beta_[k] > 0.0) || !std::isfinite(p.beta_[k])) {
        throw ValidationError("lambda maps to a beta outside (0, inf)");
      }
    }
    return p;
  }

  static CouplingParams uniform(int n, double beta, double w = 1.0, MollifierSpec mollifier = {}) {
    return from_beta(n, {beta}, {w}, mollifier);
  }

  int particles() const { return n_; }
  std::size_t pairs() const { return beta_.size(); }
  const MollifierSpec& mollifier() const { return mollifier_; }

  double beta(std::size_t slot) const { return beta_.at(slot); }
  double lambda(std::size_t slot) const { return lambda_.at(slot); }
  double w(std::size_t slot) const { return w_.at(slot); }
  double beta(const PairIndex& p) const { return beta_[pair_slot(n_, p)]; }
  double lambda(const PairIndex& p) const { return lambda_[pair_slot(n_, p)]; }
  double w(const PairIndex& p) const { return w_[pair_slot(n_, p)]; }

  const std::vector<double>& betas() const { return beta_; }
  const std::vector<double>& lambdas() const { return lambda_; }
  const std::vector<double>& weights() const { return w_; }

  void require_particles(int n) const {
    if (n != n_) {
      throw DomainError("coupling parameters are for N = " + std::to_string(n_) +
                        " but the configuration has N = " + std::to_string(n));
    }
  }

 private:
  CouplingParams(int n, std::vector<double> w, MollifierSpec mollifier)
      : n_(n), mollifier_(mollifier) {
    dbgas::require_particles(n);
    w_ = expand(w.empty() ? std::vector<double>{1.0} : std::move(w), n, "w");
    for (double x : w_) {
      if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError("w must be positive and finite");
    }
  }

  // A single value is broadcast to every pair.
  static std::vector<double> expand(std::vector<double> v, int n, const char* what) {
    const auto count = static_cast<std::size_t>(pair_count(n));
    if (v.size() == 1) return std::vector<double>(count, v[0]);
    if (v.size() != count) {
      throw ValidationError(std::string(what) + ": expected 1 or " + std::to_string(count) +
                            " values, got " + std::to_string(v.size()));
    }
    return v;
  }

  int n_ = 2;
  std::vector<double> beta_;
  std::vector<double> lambda_;
  std::vector<double> w_;
  MollifierSpec mollifier_;
};

}  // namespace dbgas

#endif  // DBGAS_COUPLING_HPP
