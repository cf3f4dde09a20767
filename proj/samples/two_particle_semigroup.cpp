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


// Two particles in the plane: the contact kernel, the series estimate of the
// semigroup applied to f = 1, its deterministic one-contact value, and the
// smeared-potential estimate at a few eps.

#include <cstdio>

#include "dbgas/mollified.hpp"
#include "dbgas/series.hpp"
#include "dbgas/specfun.hpp"

int main() {
  using namespace dbgas;
  const double beta = 1.0;
  const double t = 0.25;
  const auto params = CouplingParams::uniform(2, beta);
  const Configuration z0({{0.0, 0.0}, {1.0, 0.0}});

  std::printf("contact kernel s(0.1) = %.12g, Laplace transform at 2 = %.12g\n", s_beta(beta, 0.1),
              s_beta_laplace(beta, 2.0));

  SeriesOptions so;
  so.run.threads = 1;
  const auto series = series_eval(params, z0, t, constant_one(), 1, 200000, 42, so);
  const double exact = 1.0 + term_quadrature_n2(beta, rel_coord(z0, {2, 1}), t);
  std::printf("series  %.6f +- %.6f (one-contact quadrature %.6f)\n", series.total.mean, series.total.std_error, exact);

  for (const auto& row : epsilon_sweep(params, z0, t, constant_one(), {0.2, 0.1, 0.05}, 5000, 42)) {
    std::printf("eps %.3f  %.6f +- %.6f\n", row.eps, row.estimate.mean, row.estimate.std_error);
  }
  return 0;
}
