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

#ifndef DBGAS_OBSERVABLES_HPP
#define DBGAS_OBSERVABLES_HPP

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "dbgas/errors.hpp"
#include "dbgas/geometry.hpp"

namespace dbgas {

/// Bounded observable on configurations.
struct Observable {
  std::function<double(const Configuration&)> fn;
  std::string name;
  double sup = 1.0;          // upper bound of |f|
  bool nonnegative = true;
  bool is_constant_one = false;

  double operator()(const Configuration& z) const { return fn(z); }
};

inline Observable constant_one() {
  return {[](const Configuration&) { return 1.0; }, "one", 1.0, true, true};
}

/// exp(-sum_k |z^k - c^k|^2 / (2 width^2)).
inline Observable gaussian_bump(Configuration centre, double width) {
  if (!(width > 0.0)) throw DomainError("gaussian_bump: width must be positive");
  auto fn = [c = std::move(centre), inv = 1.0 / (2.0 * width * width)](const Configuration& z) {
    if (z.size() != c.size()) throw DomainError("gaussian_bump: configuration size mismatch");
    double r2 = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) r2 += norm2(z[k] - c[k]);
    return std::exp(-r2 * inv);
  };
  return {std::move(fn), "gaussian_bump", 1.0, true, false};
}

/// 1 when particle `label` lies in [x_lo, x_hi) x [y_lo, y_hi).
inline Observable indicator_box(int label, double x_lo, double x_hi, double y_lo, double y_hi) {
  if (label < 1) throw DomainError("indicator_box: labels are 1-based");
  if (!(x_lo < x_hi) || !(y_lo < y_hi)) throw DomainError("indicator_box: empty box");
  auto fn = [=](const Configuration& z) {
    const Point& p = z.label(label);
    return (p.x >= x_lo && p.x < x_hi && p.y >= y_lo && p.y < y_hi) ? 1.0 : 0.0;
  };
  return {std::move(fn), "indicator_box", 1.0, true, false};
}

}  // namespace dbgas

#endif  // DBGAS_OBSERVABLES_HPP
