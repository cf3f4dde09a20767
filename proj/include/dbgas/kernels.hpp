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

#ifndef DBGAS_KERNELS_HPP
#define DBGAS_KERNELS_HPP

// Heat kernel and the composite transition kernels of the diagram expansion,
// each in density form and as an exact sampler. Samplers never return the
// density of their own draw; only non-density factors enter the weight.

#include <cmath>
#include <string>
#include <vector>

#include "dbgas/errors.hpp"
#include "dbgas/geometry.hpp"
#include "dbgas/rng.hpp"
#include "dbgas/specfun.hpp"

namespace dbgas {

/// 2D heat kernel exp(-|dz|^2 / 2t) / (2 pi t).
inline double heat_kernel(double t, Point dz) {
  if (!(t > 0.0)) throw DomainError("heat_kernel: time must be positive");
  return std::exp(-norm2(dz) / (2.0 * t)) / (2.0 * Constants::pi * t);
}

/// P_t(x - a) P_t(x - b) = scalar_weight * P_{sampler_time}(x - sampler_mean).
struct GaussianSplit {
  double scalar_weight = 0.0;
  Point sampler_mean;
  double sampler_time = 0.0;
};

inline GaussianSplit gaussian_product_split(double t, Point a, Point b) {
  if (!(t > 0.0)) throw DomainError("gaussian_product_split: time must be positive");
  return {heat_kernel(2.0 * t, a - b), (a + b) / 2.0, t / 2.0};
}

/// Planar Gaussian draw with mean `mean` and per-coordinate variance `var`.
inline Point gaussian_point(Stream& rng, Point mean, double var) {
  const double sd = std::sqrt(var);
  const double gx = rng.normal();
  const double gy = rng.normal();
  return {mean.x + sd * gx, mean.y + sd * gy};
}

namespace detail {
inline void require_ordered(double from, double to, const char* what) {
  if (!(to > from)) throw DomainError(std::string(what) + ": end time must exceed start time");
}
}  // namespace detail

/// prod_k P_{s' - tau}(u^k, v^k).
inline double free_kernel_weight(double tau, double s_prime, const Configuration& u,
                                 const Configuration& v) {
  detail::require_ordered(tau, s_prime, "free_kernel_weight");
  if (u.size() != v.size()) throw DomainError("free_kernel_weight: configuration sizes differ");
  double w = 1.0;
  for (std::size_t k = 0; k < u.size(); ++k) w *= heat_kernel(s_prime - tau, v[k] - u[k]);
  return w;
}

/// Exact draw from the free kernel started at u.
inline Configuration free_kernel_sample(double tau, double s_prime, const Configuration& u,
                                        Stream& rng) {
  detail::require_ordered(tau, s_prime, "free_kernel_sample");
  Configuration v = u;
  const double var = s_prime - tau;
  for (auto& p : v) p = gaussian_point(rng, p, var);
  return v;
}

/// Exact s_beta evaluation; the default contact weight.
struct ExactContactWeight {
  QuadratureSpec quad{};
  double operator()(double beta, double tau) const { return s_beta(beta, tau, quad); }
};

struct ContactSample {
  double weight = 0.0;
  ReducedConfiguration out;
};

/// Spatial part of a contact window of length exp(log_window) for pair i:
/// the hi slot is drawn around sqrt2 * u^lo, every particle outside the pair
/// moves freely. Working with the log-length keeps windows far below the
/// resolution of the surrounding time grid exact.
inline ReducedConfiguration contact_window_sample(const PairIndex& i, double log_window,
                                                  const Configuration& u, Stream& rng) {
  require_pair(i, u.particles());
  if (!(u.label(i.hi) == u.label(i.lo))) {
    throw DomainError("contact_window_sample: pair " + to_string(i) + " is not collapsed");
  }
  if (std::isnan(log_window)) throw DomainError("contact_window_sample: window length is NaN");
  const double var = std::exp(log_window);
  std::vector<std::pair<int, Point>> slots;
  slots.reserve(u.size() - 1);
  for (int k = 1; k <= u.particles(); ++k) {
    if (k == i.lo) continue;
    const Point centre = k == i.hi ? kSqrt2 * u.label(i.lo) : u.label(k);
    slots.emplace_back(k, gaussian_point(rng, centre, var));
  }
  return ReducedConfiguration(i, std::move(slots));
}

/// One contact window [s, tau] of pair i: the spatial draw of
/// contact_window_sample() with weight s_beta(beta, tau - s). `u` must have the
/// pair collapsed; windows shorter than `min_window` are refused.
template <class ContactWeight = ExactContactWeight>
ContactSample contact_kernel_sample(double beta, const PairIndex& i, double s, double tau,
                                    const Configuration& u, Stream& rng,
                                    const ContactWeight& contact = {},
                                    double min_window = kMinContactTime) {
  require_pair(i, u.particles());
  if (!(beta > 0.0)) throw DomainError("contact_kernel_sample: beta must be positive");
  detail::require_ordered(s, tau, "contact_kernel_sample");
  const double dt = tau - s;
  if (dt < min_window) {
    throw DomainError("contact_kernel_sample: window shorter than the minimum contact time");
  }
  auto out = contact_window_sample(i, std::log(dt), u, rng);
  return {contact(beta, dt), std::move(out)};
}

/// Re-enter free motion after a contact: both pair members at slot(hi)/sqrt2.
inline Configuration dissolve(const ReducedConfiguration& u, const PairIndex& i) {
  if (!(u.pair() == i)) throw DomainError("dissolve: reduced configuration belongs to another pair");
  const Point mid = u.at(i.hi) / kSqrt2;
  std::vector<Point> pts(u.size() + 1);
  for (int k = 1; k <= static_cast<int>(pts.size()); ++k) {
    pts[static_cast<std::size_t>(k - 1)] = i.contains(k) ? mid : u.at(k);
  }
  return Configuration(std::move(pts));
}

}  // namespace dbgas

#endif  // DBGAS_KERNELS_HPP
