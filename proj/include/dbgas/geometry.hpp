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

#ifndef DBGAS_GEOMETRY_HPP
#define DBGAS_GEOMETRY_HPP

// Planar points, N-particle configurations, interacting pairs and the
// coordinate maps used by the diagram kernels.
//
// Particle labels are 1-based throughout the public API, matching the pair
// notation (hi, lo) with 1 <= lo < hi <= N.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dbgas/errors.hpp"

namespace dbgas {

inline constexpr double kSqrt2 = std::numbers::sqrt2_v<double>;

struct Point {
  double x = 0.0;
  double y = 0.0;

  Point& operator+=(Point o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Point& operator-=(Point o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  Point& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend Point operator+(Point a, Point b) { return a += b; }
  friend Point operator-(Point a, Point b) { return a -= b; }
  friend Point operator-(Point a) { return {-a.x, -a.y}; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
  friend bool operator==(const Point&, const Point&) = default;
};

inline double norm2(Point p) { return p.x * p.x + p.y * p.y; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Complex product of two points viewed as complex numbers.
inline Point complex_mul(Point a, Point b) { return {a.x * b.x - a.y * b.y, a.x * b.y + a.y * b.x}; }

/// 1 / conj(z) = z / |z|^2.
inline Point reciprocal_conj(Point z) {
  const double r2 = norm2(z);
  if (!(r2 > 0.0)) throw SingularityError("reciprocal_conj: zero argument");
  return z / r2;
}

/// N planar points. Storage is 0-based; label(j) is the 1-based accessor.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<Point> points) : points_(std::move(points)) {
    for (const auto& p : points_) {
      if (!is_finite(p)) throw ValidationError("Configuration: coordinates must be finite");
    }
  }

  /// From interleaved reals (x1, y1, x2, y2, ...).
  static Configuration from_reals(std::span<const double> xy) {
    if (xy.size() % 2 != 0) throw ValidationError("Configuration: need an even number of reals");
    std::vector<Point> pts(xy.size() / 2);
    for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = {xy[2 * k], xy[2 * k + 1]};
    return Configuration(std::move(pts));
  }

  std::size_t size() const { return points_.size(); }
  int particles() const { return static_cast<int>(points_.size()); }

  Point& operator[](std::size_t k) { return points_[k]; }
  const Point& operator[](std::size_t k) const { return points_[k]; }

  Point& label(int j) { return points_.at(static_cast<std::size_t>(j - 1)); }
  const Point& label(int j) const { return points_.at(static_cast<std::size_t>(j - 1)); }

  std::span<const Point> points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }
  auto begin() { return points_.begin(); }
  auto end() { return points_.end(); }

  std::vector<double> to_reals() const {
    std::vector<double> out;
    out.reserve(2 * points_.size());
    for (const auto& p : points_) {
      out.push_back(p.x);
      out.push_back(p.y);
    }
    return out;
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Point> points_;
};

/// Interacting pair (hi, lo) with 1 <= lo < hi <= N. Also read as the label
/// set {hi, lo}.
struct PairIndex {
  int hi = 2;
  int lo = 1;

  bool contains(int k) const { return k == hi || k == lo; }
  bool valid_for(int n) const { return lo >= 1 && lo < hi && hi <= n; }
  friend bool operator==(const PairIndex&, const PairIndex&) = default;
};

inline std::string to_string(const PairIndex& p) {
  return "(" + std::to_string(p.hi) + "," + std::to_string(p.lo) + ")";
}

inline void require_pair(const PairIndex& p, int n) {
  if (!p.valid_for(n)) {
    throw DomainError("pair " + to_string(p) + " is not valid for N = " + std::to_string(n));
  }
}

inline void require_particles(int n) {
  if (n < 2) throw DomainError("need at least two particles, got N = " + std::to_string(n));
}

inline int pair_count(int n) { return n * (n - 1) / 2; }

/// All pairs for N particles, lexicographic in (lo, hi).
inline std::vector<PairIndex> enumerate_pairs(int n) {
  require_particles(n);
  std::vector<PairIndex> out;
  out.reserve(static_cast<std::size_t>(pair_count(n)));
  for (int lo = 1; lo <= n; ++lo) {
    for (int hi = lo + 1; hi <= n; ++hi) out.push_back({hi, lo});
  }
  return out;
}

/// Position of `p` in enumerate_pairs(n).
inline std::size_t pair_slot(int n, const PairIndex& p) {
  require_pair(p, n);
  std::size_t slot = 0;
  for (int l = 1; l < p.lo; ++l) slot += static_cast<std::size_t>(n - l);
  return slot + static_cast<std::size_t>(p.hi - p.lo - 1);
}

/// (z^hi - z^lo) / sqrt2.
inline Point rel_coord(const Configuration& z, const PairIndex& p) {
  require_pair(p, z.particles());
  return (z.label(p.hi) - z.label(p.lo)) / kSqrt2;
}

/// (z^hi + z^lo) / sqrt2.
inline Point com_coord(const Configuration& z, const PairIndex& p) {
  require_pair(p, z.particles());
  return (z.label(p.hi) + z.label(p.lo)) / kSqrt2;
}

/// Both members of the pair moved to the lower-label particle's position.
inline Configuration slash(const Configuration& u, const PairIndex& p) {
  require_pair(p, u.particles());
  Configuration out = u;
  out.label(p.hi) = u.label(p.lo);
  return out;
}

/// Both members of the pair moved to their midpoint (com_coord / sqrt2).
inline Configuration dbl_backslash(const Configuration& u, const PairIndex& p) {
  require_pair(p, u.particles());
  Configuration out = u;
  const Point mid = com_coord(u, p) / kSqrt2;
  out.label(p.hi) = mid;
  out.label(p.lo) = mid;
  return out;
}

/// Points indexed by the labels {k not in pair} U {hi}; the hi slot carries a
/// centre-of-mass coordinate rather than a particle position.
class ReducedConfiguration {
 public:
  ReducedConfiguration() = default;
  ReducedConfiguration(PairIndex pair, std::vector<std::pair<int, Point>> slots)
      : pair_(pair), slots_(std::move(slots)) {
    std::sort(slots_.begin(), slots_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  const PairIndex& pair() const { return pair_; }
  std::size_t size() const { return slots_.size(); }
  const std::vector<std::pair<int, Point>>& slots() const { return slots_; }

  bool contains(int label) const { return find(label) != nullptr; }

  const Point& at(int label) const {
    const Point* p = find(label);
    if (!p) throw DomainError("ReducedConfiguration: missing slot " + std::to_string(label));
    return *p;
  }
  Point& at(int label) {
    return const_cast<Point&>(static_cast<const ReducedConfiguration&>(*this).at(label));
  }

 private:
  const Point* find(int label) const {
    auto it = std::lower_bound(slots_.begin(), slots_.end(), label,
                               [](const auto& s, int l) { return s.first < l; });
    return (it != slots_.end() && it->first == label) ? &it->second : nullptr;
  }

  PairIndex pair_;
  std::vector<std::pair<int, Point>> slots_;
};

/// The (N-1)-point reduction: label hi holds com_coord(u, p), labels outside
/// the pair are copied, label lo is dropped.
inline ReducedConfiguration backslash(const Configuration& u, const PairIndex& p) {
  require_pair(p, u.particles());
  std::vector<std::pair<int, Point>> slots;
  slots.reserve(u.size() - 1);
  for (int k = 1; k <= u.particles(); ++k) {
    if (k == p.lo) continue;
    slots.emplace_back(k, k == p.hi ? com_coord(u, p) : u.label(k));
  }
  return ReducedConfiguration(p, std::move(slots));
}

/// sigma(a) . sigma(b) where sigma(k) has +1 at k.hi, -1 at k.lo.
inline int sigma_dot(const PairIndex& a, const PairIndex& b, int n) {
  require_pair(a, n);
  require_pair(b, n);
  auto sig = [](const PairIndex& p, int k) { return (k == p.hi) - (k == p.lo); };
  int s = 0;
  for (int k : {a.hi, a.lo}) s += sig(a, k) * sig(b, k);
  return s;
}

enum class ConfigKind { kSeparated, kPairCollapsed, kMulti };

struct Classification {
  ConfigKind kind = ConfigKind::kSeparated;
  std::optional<PairIndex> pair;  // set for kPairCollapsed
};

/// Separated when every |rel_coord| > tol, PairCollapsed when exactly one pair
/// is within tol, Multi otherwise.
inline Classification classify_config(const Configuration& z, double tol) {
  if (!(tol > 0.0)) throw DomainError("classify_config: tolerance must be positive");
  require_particles(z.particles());
  Classification out;
  int collapsed = 0;
  for (const auto& p : enumerate_pairs(z.particles())) {
    if (norm(rel_coord(z, p)) <= tol) {
      ++collapsed;
      out.pair = p;
    }
  }
  if (collapsed == 0) {
    out.pair.reset();
  } else if (collapsed == 1) {
    out.kind = ConfigKind::kPairCollapsed;
  } else {
    out.kind = ConfigKind::kMulti;
    out.pair.reset();
  }
  return out;
}

inline bool is_separated(const Configuration& z, double tol) {
  return classify_config(z, tol).kind == ConfigKind::kSeparated;
}

/// Smallest |rel_coord| over all pairs, with the pair attaining it.
inline std::pair<double, PairIndex> min_separation(const Configuration& z) {
  require_particles(z.particles());
  double best = INFINITY;
  PairIndex arg{2, 1};
  for (const auto& p : enumerate_pairs(z.particles())) {
    const double r = norm(rel_coord(z, p));
    if (r < best) {
      best = r;
      arg = p;
    }
  }
  return {best, arg};
}

}  // namespace dbgas

#endif  // DBGAS_GEOMETRY_HPP
