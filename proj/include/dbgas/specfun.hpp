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

#ifndef DBGAS_SPECFUN_HPP
#define DBGAS_SPECFUN_HPP

// Special functions behind every kernel: Gamma, the Macdonald functions
// K_0 and K_1, x^nu K_nu(x), and the contact kernel
//
//     s^beta(tau) = 4 pi * int_0^inf beta^u tau^(u-1) / Gamma(u) du,
//
// whose Laplace transform is 4 pi / log(lambda / beta) for lambda > beta.

#include <array>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>

#include "dbgas/errors.hpp"
#include "dbgas/quadrature.hpp"

namespace dbgas {

struct Constants {
  static constexpr double euler_mascheroni = std::numbers::egamma_v<double>;
  static constexpr double pi = std::numbers::pi_v<double>;
};

namespace detail {

// Lanczos approximation, g = 7, n = 9.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline double lanczos_sum(double z) {
  double a = kLanczosCoef[0];
  for (std::size_t k = 1; k < kLanczosCoef.size(); ++k) {
    a += kLanczosCoef[k] / (z + static_cast<double>(k));
  }
  return a;
}

}  // namespace detail

/// Gamma(u) for 0 < u <= 170.
inline double gamma_fn(double u) {
  if (!(u > 0.0)) throw DomainError("gamma_fn: argument must be positive");
  if (u > 170.0) throw OverflowError("gamma_fn: argument above 170 overflows");
  if (u < 0.5) return gamma_fn(u + 1.0) / u;
  const double z = u - 1.0;
  const double t = z + detail::kLanczosG + 0.5;
  // Split the power so t^(z+1/2) never overflows before e^-t scales it down.
  const double half_pow = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * Constants::pi) * half_pow * std::exp(-t) * half_pow *
         detail::lanczos_sum(z);
}

/// log Gamma(u) for u > 0.
inline double log_gamma(double u) {
  if (!(u > 0.0)) throw DomainError("log_gamma: argument must be positive");
  if (u < 0.5) return log_gamma(u + 1.0) - std::log(u);
  const double z = u - 1.0;
  const double t = z + detail::kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * Constants::pi) + (z + 0.5) * std::log(t) - t +
         std::log(detail::lanczos_sum(z));
}

// ---------------------------------------------------------------------------
// Macdonald functions
// ---------------------------------------------------------------------------

/// Pair (K_0, K_1) at a common argument.
struct MacdonaldPair {
  double k0;
  double k1;
};

namespace detail {

inline constexpr double kMacdonaldSwitch = 2.0;
inline constexpr double kMacdonaldSeries = 1e-8;

// Trapezoid rule on int_0^inf exp(-x cosh t) cosh(nu t) dt. The integrand is
// analytic in the strip |Im t| < pi/2, so the rule converges geometrically.
// For x > kMacdonaldSwitch the exponent is shifted by x (scaled form), which
// keeps the summands O(1) when K_nu itself is exponentially small.
inline MacdonaldPair macdonald_trapezoid(double x, bool scaled) {
  const double step = std::min(0.2, 0.5 / std::sqrt(x));
  MacdonaldPair sum{0.0, 0.0};
  // Summands below exp(-42) relative to the t = 0 term are dropped.
  for (int k = 0;; ++k) {
    const double t = step * k;
    const double sh = std::sinh(0.5 * t);
    const double expo = scaled ? -2.0 * x * sh * sh : -x * std::cosh(t);
    const double decay = scaled ? expo : expo + x;
    const double e = std::exp(expo);
    const double c = std::cosh(t);
    const double wgt = (k == 0) ? 0.5 : 1.0;
    sum.k0 += wgt * e;
    sum.k1 += wgt * e * c;
    if (decay + t < -42.0 && k > 2) break;
  }
  return {sum.k0 * step, sum.k1 * step};
}

inline MacdonaldPair macdonald_small_series(double x) {
  const double lg = std::log(0.5 * x) + Constants::euler_mascheroni;
  const double x2 = 0.25 * x * x;
  return {-lg * (1.0 + x2) + x2, 1.0 / x + 0.5 * x * (lg - 0.5)};
}

}  // namespace detail

/// e^x * K_nu(x) for nu in {0, 1}; finite for every x > 0.
inline MacdonaldPair macdonald_k01_scaled(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("macdonald_k: argument must be positive and finite");
  }
  if (x < detail::kMacdonaldSeries) {
    const auto s = detail::macdonald_small_series(x);
    const double ex = std::exp(x);
    return {s.k0 * ex, s.k1 * ex};
  }
  if (x <= detail::kMacdonaldSwitch) {
    const auto s = detail::macdonald_trapezoid(x, false);
    const double ex = std::exp(x);
    return {s.k0 * ex, s.k1 * ex};
  }
  return detail::macdonald_trapezoid(x, true);
}

/// (K_0(x), K_1(x)). Values below DBL_MIN flush to zero; `underflow` is set
/// when that happens (only possible for x > 700).
inline MacdonaldPair macdonald_k01(double x, bool* underflow = nullptr) {
  if (underflow) *underflow = false;
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("macdonald_k: argument must be positive and finite");
  }
  if (x < detail::kMacdonaldSeries) return detail::macdonald_small_series(x);
  if (x <= detail::kMacdonaldSwitch) return detail::macdonald_trapezoid(x, false);
  const auto s = detail::macdonald_trapezoid(x, true);
  const double ex = std::exp(-x);
  MacdonaldPair out{s.k0 * ex, s.k1 * ex};
  if (out.k0 < DBL_MIN || out.k1 < DBL_MIN) {
    if (underflow) *underflow = true;
    if (out.k0 < DBL_MIN) out.k0 = 0.0;
    if (out.k1 < DBL_MIN) out.k1 = 0.0;
  }
  return out;
}

inline void check_macdonald_order(int nu) {
  if (nu != 0 && nu != 1) throw DomainError("macdonald_k: only orders 0 and 1 are supported");
}

/// K_nu(x), nu in {0, 1}, x > 0.
inline double macdonald_k(int nu, double x, bool* underflow = nullptr) {
  check_macdonald_order(nu);
  const auto k = macdonald_k01(x, underflow);
  return nu == 0 ? k.k0 : k.k1;
}

/// x^nu K_nu(x). For nu = 1 this is bounded by 1 and tends to 1 as x -> 0.
inline double k_hat(int nu, double x, bool* underflow = nullptr) {
  check_macdonald_order(nu);
  const auto k = macdonald_k01(x, underflow);
  return nu == 0 ? k.k0 : x * k.k1;
}

// ---------------------------------------------------------------------------
// Contact kernel s^beta
// ---------------------------------------------------------------------------

/// Shortest contact window accepted by contact_kernel_sample() unless the
/// caller lowers the floor explicitly.
inline constexpr double kMinContactTime = 1e-12;

namespace detail {

// Below beta tau = e^-46 the u-integral is evaluated from its expansion in
// L = log 1/(beta tau): tau s^beta = 4 pi sum_k c_k k! / L^(k+1), with c_k the
// Taylor coefficients of 1/Gamma at 0. Twelve terms give relative error
// below 1e-13 for L >= 46.
inline constexpr double kSmallArgumentLog = -46.0;

inline constexpr std::array<double, 12> kInvGammaTaylor = {1.0,
                                               0.5772156649015328606065120900824,
                                               -0.6558780715202538810770195151453,
                                               -0.0420026350340952355290039348754,
                                               0.1665386113822914895017007951021,
                                               -0.0421977345555443367482083012891,
                                               -0.0096219715278769735621149216723,
                                               0.0072189432466630995423950103404,
                                               -0.0011651675918590651121139710840,
                                               -0.0002152416741149509728157299630,
                                               0.0001280502823881161861531986263,
                                               -0.0000201348547807882386556893914};

inline double log_small_argument_g(double log_x) {
  const auto& c = kInvGammaTaylor;
  const double big_l = -log_x;
  double sum = 0.0;
  double fact = 1.0;
  double pow_l = big_l;
  for (std::size_t k = 1; k <= c.size(); ++k) {
    fact *= static_cast<double>(k);
    pow_l *= big_l;
    sum += c[k - 1] * fact / pow_l;
  }
  return std::log(4.0 * Constants::pi * sum);
}

// Same expansion for int_0^T s^beta = 4 pi sum_k c_k (k-1)! / L^k.
inline double log_small_argument_nu(double log_x) {
  const double big_l = -log_x;
  double sum = 0.0;
  double fact = 1.0;
  double pow_l = 1.0;
  for (std::size_t k = 1; k <= kInvGammaTaylor.size(); ++k) {
    if (k > 1) fact *= static_cast<double>(k - 1);
    pow_l *= big_l;
    sum += kInvGammaTaylor[k - 1] * fact / pow_l;
  }
  return std::log(4.0 * Constants::pi * sum);
}

// Mode of u -> u log x - log Gamma(u): the root of digamma(u) = log x.
inline double s_beta_mode(double log_x) {
  double lo = 1e-12;
  double hi = std::max(2.0, std::exp(std::min(log_x, 700.0)) + 2.0);
  for (int it = 0; it < 300 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (boost::math::digamma(mid) < log_x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// log of int_0^inf x^u / Gamma(u + shift) du, shift in {0, 1}.
inline double log_power_over_gamma_integral(double log_x, int shift, const QuadratureSpec& quad) {
  // At u = 0 the integrand is 0 for shift 0 and 1 for shift 1.
  auto log_integrand = [&](double u) {
    if (u <= 0.0) return shift == 1 ? 0.0 : -INFINITY;
    return u * log_x - log_gamma(u + shift);
  };
  // Mode: digamma(u + shift) = log x.
  double mode = s_beta_mode(log_x) - shift;
  if (mode < 0.0) mode = 0.0;
  const double peak = log_integrand(mode);
  // Doubling search for the cutoff where the integrand drops below
  // rel_tol * 1e-3 of its peak; beyond it the decay is super-exponential.
  const double cutoff = std::log(quad.rel_tol * 1e-3);
  double width = std::max(1.0, std::sqrt(std::max(mode, 1.0)));
  double upper = mode + width;
  for (int it = 0; it < 200 && log_integrand(upper) - peak > cutoff; ++it) {
    width *= 2.0;
    upper = mode + width;
  }
  auto scaled = [&](double u) { return std::exp(log_integrand(u) - peak); };
  QuadratureSpec inner = quad;
  inner.abs_tol = std::max(quad.abs_tol * std::exp(-peak), 1e-300);
  std::vector<double> cuts;
  if (mode > 0.0) cuts.push_back(mode);
  const double spread = std::sqrt(std::max(mode, 1e-300));
  if (mode > 4.0) {
    cuts.push_back(mode - 3.0 * spread);
    cuts.push_back(mode + 3.0 * spread);
  }
  const auto r = integrate(scaled, 0.0, upper, inner, cuts);
  return std::log(r.value) + peak;
}

inline void check_s_beta_args(double beta, double tau) {
  if (!(beta > 0.0) || !(tau > 0.0) || !std::isfinite(beta) || !std::isfinite(tau)) {
    throw DomainError("s_beta: beta and tau must be positive and finite");
  }
}

}  // namespace detail

/// log s^beta(tau); finite for every admissible argument.
inline double log_s_beta(double beta, double tau, const QuadratureSpec& quad = {}) {
  detail::check_s_beta_args(beta, tau);
  quad.validate();
  const double log_x = std::log(beta) + std::log(tau);
  if (log_x < detail::kSmallArgumentLog) return detail::log_small_argument_g(log_x) - std::log(tau);
  return std::log(4.0 * Constants::pi) + detail::log_power_over_gamma_integral(log_x, 0, quad) -
         std::log(tau);
}

/// s^beta(tau) = 4 pi int_0^inf beta^u tau^(u-1) / Gamma(u) du by adaptive
/// quadrature on u, split at the integrand's mode; for beta tau < e^-46 a
/// convergent-in-practice expansion in 1/log(1/(beta tau)) is used instead.
/// Near 0, s^beta(tau) ~ 4 pi / (tau log^2(1/(beta tau))), whose integral
/// decays only like 4 pi / log(1/tau), so small arguments are never clamped.
/// The value grows like 4 pi beta e^(beta tau), so it is +inf once beta * tau
/// exceeds about 700; use log_s_beta() there.
inline double s_beta(double beta, double tau, const QuadratureSpec& quad = {}) {
  return std::exp(log_s_beta(beta, tau, quad));
}

/// int_0^T s^beta(v) dv = 4 pi int_0^inf (beta T)^u / Gamma(u + 1) du.
inline double s_beta_integral(double beta, double upper, const QuadratureSpec& quad = {}) {
  if (!(upper >= 0.0)) throw DomainError("s_beta_integral: upper limit must be non-negative");
  if (upper == 0.0) return 0.0;
  detail::check_s_beta_args(beta, upper);
  const double log_x = std::log(beta) + std::log(upper);
  if (log_x < detail::kSmallArgumentLog) return std::exp(detail::log_small_argument_nu(log_x));
  return std::exp(std::log(4.0 * Constants::pi) +
                  detail::log_power_over_gamma_integral(log_x, 1, quad));
}

/// Tabulated tau * s^beta(tau) as a function of y = log(beta tau), stored as
/// piecewise Chebyshev interpolants of its logarithm. Used by the Monte Carlo
/// samplers, which evaluate s^beta millions of times; relative agreement with
/// s_beta() is better than 1e-11 over the table range; below it the
/// small-argument expansion is used and above it s_beta() itself.
class SBetaTable {
 public:
  static constexpr double kLogLo = -46.0;  // beta tau = 1e-20
  static constexpr double kLogHi = 6.4;    // beta tau ~ 600
  static constexpr double kWidth = 0.4;
  static constexpr int kDegree = 16;

  SBetaTable() {
    const int segments = static_cast<int>(std::ceil((kLogHi - kLogLo) / kWidth));
    coef_.resize(static_cast<std::size_t>(segments) * (kDegree + 1));
    std::array<double, kDegree + 1> values{};
    const QuadratureSpec quad{1e-300, 1e-13, 2000};
    for (int s = 0; s < segments; ++s) {
      const double a = kLogLo + s * kWidth;
      for (int j = 0; j <= kDegree; ++j) {
        const double node = std::cos(Constants::pi * (j + 0.5) / (kDegree + 1));
        const double y = a + 0.5 * kWidth * (node + 1.0);
        values[j] = std::log(4.0 * Constants::pi) + detail::log_power_over_gamma_integral(y, 0, quad);
      }
      for (int k = 0; k <= kDegree; ++k) {
        double c = 0.0;
        for (int j = 0; j <= kDegree; ++j) {
          c += values[j] * std::cos(Constants::pi * k * (j + 0.5) / (kDegree + 1));
        }
        coef_[s * (kDegree + 1) + k] = c * 2.0 / (kDegree + 1);
      }
    }
  }

  /// log(tau s^beta(tau)) as a function of y = log(beta tau).
  double log_g(double y) const {
    if (y < kLogLo) return detail::log_small_argument_g(y);
    if (!(y < kLogHi)) {
      return std::log(4.0 * Constants::pi) + detail::log_power_over_gamma_integral(y, 0, QuadratureSpec{});
    }
    const auto s = static_cast<std::size_t>((y - kLogLo) / kWidth);
    const double a = kLogLo + static_cast<double>(s) * kWidth;
    const double x = 2.0 * (y - a) / kWidth - 1.0;
    const double* c = &coef_[s * (kDegree + 1)];
    // Clenshaw recurrence.
    double b1 = 0.0;
    double b2 = 0.0;
    for (int k = kDegree; k >= 1; --k) {
      const double b0 = 2.0 * x * b1 - b2 + c[k];
      b2 = b1;
      b1 = b0;
    }
    return x * b1 - b2 + 0.5 * c[0];
  }

  /// s^beta(tau), with the same errors and overflow as s_beta().
  double operator()(double beta, double tau) const {
    detail::check_s_beta_args(beta, tau);
    const double y = std::log(beta) + std::log(tau);
    if (!(y < kLogHi)) return s_beta(beta, tau);
    return std::exp(log_g(y)) / tau;
  }

  /// Process-wide instance, built on first use.
  static const SBetaTable& shared() {
    static const SBetaTable table;
    return table;
  }

 private:
  std::vector<double> coef_;
};

/// int_0^inf exp(-lambda tau) s^beta(tau) d tau by quadrature in y = log tau,
/// with the part below lambda tau = 1e-17 taken from s_beta_integral().
/// Finite for lambda > beta.
inline double s_beta_laplace(double beta, double lambda, const QuadratureSpec& quad = {1e-300, 1e-10, 2000}) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("s_beta_laplace: beta must be positive");
  if (!(lambda > beta) || !std::isfinite(lambda)) throw DomainError("s_beta_laplace: lambda must exceed beta");
  const double y_lo = std::log(1e-17 / lambda);
  const double y_hi = std::log(80.0 / (lambda - beta));
  const double log_beta = std::log(beta);
  const auto& table = SBetaTable::shared();
  auto integrand = [&](double y) { return std::exp(-lambda * std::exp(y) + table.log_g(log_beta + y)); };
  std::vector<double> cuts;
  for (double y = std::ceil(y_lo); y < y_hi; y += 4.0) cuts.push_back(y);
  const double body = integrate(integrand, y_lo, y_hi, quad, cuts).value;
  return s_beta_integral(beta, std::exp(y_lo)) + body;
}

}  // namespace dbgas

#endif  // DBGAS_SPECFUN_HPP
