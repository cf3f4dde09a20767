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


#ifndef DBGAS_SELFTEST_HPP
#define DBGAS_SELFTEST_HPP

// Fast invariant checks across all modules, run by `dbgas selftest`.

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dbgas/coupling.hpp"
#include "dbgas/csv.hpp"
#include "dbgas/geometry.hpp"
#include "dbgas/kernels.hpp"
#include "dbgas/mollified.hpp"
#include "dbgas/motion.hpp"
#include "dbgas/parallel.hpp"
#include "dbgas/rng.hpp"
#include "dbgas/series.hpp"
#include "dbgas/specfun.hpp"

namespace dbgas {

struct SelfTestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::string fmt(double x) { return format_real(x); }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Uniform draws from the self-test stream family.
class SelfTestDraws {
 public:
  explicit SelfTestDraws(std::uint32_t chunk) : stream_(0x5e1f7e57ULL, task::kSelfTest, chunk) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * stream_.uniform(); }
  Configuration separated(int n, double spread = 2.0) {
    for (;;) {
      std::vector<Point> pts(static_cast<std::size_t>(n));
      for (auto& p : pts) p = {uniform(-spread, spread), uniform(-spread, spread)};
      Configuration z(std::move(pts));
      if (min_separation(z).first > 0.05) return z;
    }
  }

 private:
  Stream stream_;
};

}  // namespace detail

inline std::vector<std::function<SelfTestResult()>> selftest_checks(unsigned threads) {
  using detail::fmt;
  using detail::rel_diff;
  std::vector<std::function<SelfTestResult()>> checks;

  checks.emplace_back([] {
    double worst = 0.0;
    for (double lambda : {2.0, 4.0, 10.0}) {
      worst = std::max(worst, rel_diff(s_beta_laplace(1.0, lambda), 4.0 * Constants::pi / std::log(lambda)));
    }
    return SelfTestResult{"specfun.laplace_identity", worst < 1e-4, "max rel err " + fmt(worst)};
  });

  checks.emplace_back([] {
    double worst = 0.0;
    for (double x : {1e-6, 1e-2, 0.5, 3.0, 40.0}) {
      const double a = s_beta(0.5, x / 0.5) * (x / 0.5);
      const double b = s_beta(2.0, x / 2.0) * (x / 2.0);
      worst = std::max(worst, rel_diff(a, b));
    }
    return SelfTestResult{"specfun.scaling", worst < 1e-8, "max rel err " + fmt(worst)};
  });

  checks.emplace_back([] {
    const double small = std::abs(macdonald_k(0, 1e-3) / std::log(1e3) - 1.0);
    const double large = std::abs(macdonald_k(0, 20.0) * std::exp(20.0) * std::sqrt(40.0 / Constants::pi) - 1.0);
    return SelfTestResult{"specfun.macdonald_asymptotics", small < 0.25 && large < 0.02,
                          "small " + fmt(small) + ", large " + fmt(large)};
  });

  checks.emplace_back([] {
    detail::SelfTestDraws d(1);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double t = d.uniform(0.05, 3.0);
      const Point a{d.uniform(-2, 2), d.uniform(-2, 2)};
      const Point b{d.uniform(-2, 2), d.uniform(-2, 2)};
      const Point x{d.uniform(-2, 2), d.uniform(-2, 2)};
      const auto s = gaussian_product_split(t, a, b);
      const double lhs = heat_kernel(t, x - a) * heat_kernel(t, x - b);
      const double rhs = s.scalar_weight * heat_kernel(s.sampler_time, x - s.sampler_mean);
      if (lhs > 1e-250) worst = std::max(worst, rel_diff(rhs, lhs));
    }
    return SelfTestResult{"kernels.product_split", worst < 1e-12, "max rel err " + fmt(worst)};
  });

  checks.emplace_back([] {
    detail::SelfTestDraws d(2);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const auto u = dbl_backslash(d.separated(4), {3, 2});
      const auto v = dissolve(backslash(u, {3, 2}), {3, 2});
      for (std::size_t q = 0; q < u.size(); ++q) worst = std::max(worst, norm(v[q] - u[q]) / (1.0 + norm(u[q])));
    }
    return SelfTestResult{"geometry.backslash_dissolve", worst < 1e-14, "max err " + fmt(worst)};
  });

  checks.emplace_back([threads] {
    const auto params = CouplingParams::uniform(2, 1.0);
    const Configuration z0({{0.0, 0.0}, {kSqrt2, 0.0}});
    SeriesOptions o;
    o.run.threads = threads;
    const auto e = term_mc(params, z0, 1.0, {{2, 1}}, constant_one(), 200000, 1, o);
    const double q = term_quadrature_n2(1.0, {1.0, 0.0}, 1.0);
    const double z = (e.mean - q) / e.std_error;
    return SelfTestResult{"series.n2_term_vs_quadrature", std::abs(z) < 3.0,
                          "mc " + fmt(e.mean) + " +- " + fmt(e.std_error) + ", quadrature " + fmt(q)};
  });

  checks.emplace_back([] {
    const double q = term_quadrature_n2(1.0, {1.0, 0.0}, 1.0);
    const double via = 2.0 * macdonald_k(0, std::sqrt(2.0)) *
                       local_time_expectation({1.0, 0.0}, 1.0, 1.0, [](double tau) { return std::exp(tau); });
    const double err = rel_diff(via, q);
    return SelfTestResult{"motion.local_time_vs_term", err < 1e-5, "rel err " + fmt(err)};
  });

  checks.emplace_back([threads] {
    const auto params = CouplingParams::uniform(2, 1.0);
    const Configuration z0({{0.0, 0.0}, {1.0, 0.0}});
    FkOptions o;
    o.run.threads = threads;
    o.coupling_scale = 0.0;
    const auto e = occupation_fk_estimate(params, 0.1, z0, 0.05, constant_one(), max_step_for(0.1), 500, 1, o);
    return SelfTestResult{"mollified.potential_off", e.mean == 1.0 && e.std_error == 0.0, "mean " + fmt(e.mean)};
  });

  checks.emplace_back([] {
    double worst = 0.0;
    for (auto kind : {MollifierKind::kSmoothBump, MollifierKind::kDiskUniform}) {
      const MollifierSpec spec(kind, 0.8);
      for (double beta : {0.1, 1.0, 7.0}) worst = std::max(worst, rel_diff(beta_from_lambda(lambda_from_beta(beta, spec), spec), beta));
    }
    return SelfTestResult{"coupling.lambda_beta_round_trip", worst < 1e-12, "max rel err " + fmt(worst)};
  });

  checks.emplace_back([] {
    detail::SelfTestDraws d(3);
    double worst = 0.0;
    for (int n = 2; n <= 4; ++n) {
      std::vector<double> beta, w;
      for (int s = 0; s < pair_count(n); ++s) {
        beta.push_back(d.uniform(0.2, 3.0));
        w.push_back(d.uniform(0.1, 10.0));
      }
      const auto params = CouplingParams::from_beta(n, beta, w);
      for (int k = 0; k < 30; ++k) {
        const auto z = d.separated(n);
        const auto b = particle_drift(z, params);
        for (const auto& i : enumerate_pairs(n)) {
          const Point proj = (b[static_cast<std::size_t>(i.hi - 1)] - b[static_cast<std::size_t>(i.lo - 1)]) / kSqrt2;
          const Point pd = pair_drift(z, params, i);
          worst = std::max(worst, norm(proj - pd) / std::max(norm(pd), 1e-300));
        }
      }
    }
    return SelfTestResult{"motion.drift_consistency", worst < 1e-12, "max rel err " + fmt(worst)};
  });

  checks.emplace_back([] {
    detail::SelfTestDraws d(4);
    bool ok = true;
    for (int k = 0; k < 20; ++k) {
      const int n = 2 + k % 3;
      PathSample path;
      path.local_time_increments.emplace();
      double t = 0.0;
      for (int s = 0; s <= 10; ++s) {
        path.times.push_back(t);
        path.states.push_back(d.separated(n));
        t += d.uniform(0.01, 0.1);
        if (s < 10) {
          std::vector<double> row;
          for (int j = 0; j < pair_count(n); ++j) row.push_back(d.uniform(0.0, 0.2));
          path.local_time_increments->push_back(row);
        }
      }
      const auto params = CouplingParams::uniform(n, d.uniform(0.5, 2.0));
      const auto v = a_functional(path, params);
      ok = ok && v.total == v.ring + v.bar;
      for (const auto& i : enumerate_pairs(n)) {
        ok = ok && a_i_functional(path, params, i) ==
                       a_ring_i(path, params, i) + v.bar - params.beta(i) * path.horizon();
        ok = ok && girsanov_factor(path, params, i) > 0.0;
      }
    }
    return SelfTestResult{"motion.a_functional_identities", ok, ok ? "exact" : "identity violated"};
  });

  checks.emplace_back([] {
    auto run = [](unsigned th) {
      return monte_carlo(
          20000, 42, task::kSelfTest, [](Stream& s) { return s.normal(); }, RunOptions{th, 1000});
    };
    const auto a = run(1);
    const auto b = run(3);
    const bool ok = a.mean == b.mean && a.std_error == b.std_error;
    return SelfTestResult{"parallel.thread_invariance", ok, "mean " + fmt(a.mean)};
  });

  checks.emplace_back([] {
    CsvTable t{{"a", "b"}, {{1.0 / (2.0 * Constants::pi), std::string("x,\"y\"")}, {-0.0, std::string("z")}}};
    std::stringstream io;
    write_csv(io, t);
    const auto back = read_csv(io);
    const bool ok = back.rows.size() == 2 && back.rows[0][0] == "0.15915494309189535" &&
                    parse_real(back.rows[0][0]) == 1.0 / (2.0 * Constants::pi) && back.rows[0][1] == "x,\"y\"";
    return SelfTestResult{"csv.round_trip", ok, ok ? "bitwise" : "mismatch"};
  });

  return checks;
}

/// Runs every check; exceptions count as failures.
inline std::vector<SelfTestResult> run_selftest(unsigned threads = 1) {
  std::vector<SelfTestResult> out;
  const auto checks = selftest_checks(threads);
  for (std::size_t k = 0; k < checks.size(); ++k) {
    try {
      out.push_back(checks[k]());
    } catch (const std::exception& e) {
      out.push_back({"check_" + std::to_string(k + 1), false, std::string("threw: ") + e.what()});
    }
  }
  return out;
}

}  // namespace dbgas

#endif  // DBGAS_SELFTEST_HPP
