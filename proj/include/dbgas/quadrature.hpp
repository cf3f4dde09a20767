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

#ifndef DBGAS_QUADRATURE_HPP
#define DBGAS_QUADRATURE_HPP

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dbgas/errors.hpp"

namespace dbgas {

/// Tolerances for the adaptive integrator. The run converges once the summed
/// error estimate is at most max(abs_tol, rel_tol * |integral|).
struct QuadratureSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_subdivisions = 400;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1) {
      throw DomainError("QuadratureSpec: tolerances must be positive and max_subdivisions >= 1");
    }
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

namespace detail {

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double l1;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15_panel(F& f, double a, double b) {
  double err = 0.0;
  double l1 = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err, &l1);
  // Without recursion Boost (1.74) reports |K - G| of the rule on [-1, 1];
  // rescale it to the panel.
  return {a, b, v, err * 0.5 * (b - a), l1};
}

}  // namespace detail

/// Global adaptive Gauss-Kronrod (G7/K15) integration over [a, b]. The panel
/// with the largest error estimate is bisected until the tolerance is met;
/// throws ToleranceError if max_subdivisions bisections do not suffice.
/// `breakpoints` (strictly inside (a, b)) seed the initial partition.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureSpec& spec,
                           const std::vector<double>& breakpoints = {}) {
  spec.validate();
  if (!(a < b)) {
    if (a == b) return {};
    throw DomainError("integrate: require a <= b");
  }
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<detail::Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  double total_l1 = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    auto p = detail::gk15_panel(f, cuts[k], cuts[k + 1]);
    total += p.value;
    total_err += p.error;
    total_l1 += p.l1;
    heap.push(p);
  }
  // Target includes a rounding floor proportional to int |f|.
  auto target = [&] {
    return std::max({spec.abs_tol, spec.rel_tol * std::abs(total), 64.0 * DBL_EPSILON * total_l1});
  };
  int used = 0;
  while (total_err > target()) {
    if (used >= spec.max_subdivisions) {
      std::ostringstream msg;
      msg << "integrate: tolerance not met on [" << a << ", " << b << "] after " << used
          << " subdivisions (estimate " << total << ", error " << total_err << ")";
      throw ToleranceError(msg.str());
    }
    const detail::Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be split further in double precision; accept it.
      total_err -= worst.error;
      heap.push({worst.a, worst.b, worst.value, 0.0, worst.l1});
      ++used;
      continue;
    }
    auto left = detail::gk15_panel(f, worst.a, mid);
    auto right = detail::gk15_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
    ++used;
  }
  // Re-sum to shed the drift accumulated by incremental updates.
  double sum = 0.0;
  double err = 0.0;
  std::vector<detail::Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  for (const auto& p : panels) {
    sum += p.value;
    err += p.error;
  }
  return {sum, err, used};
}

}  // namespace dbgas

#endif  // DBGAS_QUADRATURE_HPP
