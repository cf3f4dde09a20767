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

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>

#include "dbgas/kernels.hpp"
#include "dbgas/observables.hpp"
#include "oracles.hpp"

namespace dbgas {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(HeatKernel, Values) {
  EXPECT_NEAR(heat_kernel(1.0, {0, 0}), 1.0 / (2.0 * kPi), 1e-16);
  EXPECT_NEAR(heat_kernel(2.0, {0, 0}), 1.0 / (4.0 * kPi), 1e-16);
  EXPECT_THROW(heat_kernel(0.0, {0, 0}), DomainError);
  Stream s(3, task::kSelfTest, 0);
  for (int k = 0; k < 100; ++k) {
    const double t = 0.1 + s.uniform();
    const Point d{s.normal(), s.normal()};
    EXPECT_EQ(heat_kernel(t, d), heat_kernel(t, -d));
  }
}

TEST(HeatKernel, UnitMass) {
  // Radial integral of the heat kernel.
  const double t = 0.7;
  const double mass = oracle::gk_adaptive(
      [&](double r) { return 2.0 * kPi * r * heat_kernel(t, {r, 0.0}); }, 0.0, 40.0);
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(HeatKernel, ChapmanKolmogorov) {
  for (auto [s1, s2] : {std::pair{0.5, 0.5}, std::pair{0.2, 1.0}}) {
    for (Point x : {Point{0, 0}, Point{1, 0}}) {
      const double lhs = oracle::chapman_kolmogorov(s1, s2, x.x, x.y);
      EXPECT_NEAR(lhs, heat_kernel(s1 + s2, x), 1e-6);
    }
  }
}

TEST(GaussianSplit, Examples) {
  const auto g = gaussian_product_split(1.0, {0, 0}, {0, 0});
  EXPECT_NEAR(g.scalar_weight, 1.0 / (4.0 * kPi), 1e-16);
  EXPECT_EQ(g.sampler_mean, (Point{0, 0}));
  EXPECT_EQ(g.sampler_time, 0.5);

  const Point x{0.3, -0.2}, a{1, 0}, b{0, 1};
  const auto h = gaussian_product_split(0.7, a, b);
  const double lhs = heat_kernel(0.7, x - a) * heat_kernel(0.7, x - b);
  const double rhs = h.scalar_weight * heat_kernel(h.sampler_time, x - h.sampler_mean);
  EXPECT_NEAR(lhs, rhs, 1e-12 * lhs);
  EXPECT_EQ(h.scalar_weight, heat_kernel(1.4, a - b));
  EXPECT_THROW(gaussian_product_split(-1.0, a, b), DomainError);
}

TEST(GaussianSplit, RandomIdentity) {
  Stream s(4, task::kSelfTest, 0);
  for (int k = 0; k < 10000; ++k) {
    const double t = 0.05 + 2.0 * s.uniform();
    const Point a{s.normal(), s.normal()}, b{s.normal(), s.normal()}, x{s.normal(), s.normal()};
    const auto g = gaussian_product_split(t, a, b);
    const double lhs = heat_kernel(t, x - a) * heat_kernel(t, x - b);
    const double rhs = g.scalar_weight * heat_kernel(g.sampler_time, x - g.sampler_mean);
    ASSERT_NEAR(lhs, rhs, 1e-12 * lhs);
  }
}

TEST(FreeKernel, Weight) {
  const Configuration u({{0.1, 0.2}});
  EXPECT_NEAR(free_kernel_weight(0.0, 1.0, u, u), 1.0 / (2.0 * kPi), 1e-16);
  Stream s(5, task::kSelfTest, 0);
  const Configuration a({{s.normal(), s.normal()}, {s.normal(), s.normal()}, {s.normal(), s.normal()}});
  const Configuration b({{s.normal(), s.normal()}, {s.normal(), s.normal()}, {s.normal(), s.normal()}});
  const double prod =
      heat_kernel(0.8, b[0] - a[0]) * heat_kernel(0.8, b[1] - a[1]) * heat_kernel(0.8, b[2] - a[2]);
  EXPECT_NEAR(free_kernel_weight(0.2, 1.0, a, b), prod, 1e-14 * prod);
  EXPECT_THROW(free_kernel_weight(1.0, 1.0, a, b), DomainError);
}

TEST(FreeKernel, SamplerMeanAndChiSquare) {
  const Configuration u({{1.0, -2.0}, {0.5, 0.0}});
  const double var = 0.6;
  Stream s(6, task::kSelfTest, 0);
  const int n = 100000;
  double mx = 0.0, my = 0.0;
  // Chi-square on the standardized first coordinate over 20 equiprobable bins.
  const int bins = 20;
  std::vector<int> counts(bins, 0);
  boost::math::normal_distribution<double> nd;
  for (int k = 0; k < n; ++k) {
    const auto v = free_kernel_sample(0.4, 1.0, u, s);
    mx += v[0].x;
    my += v[0].y;
    const double zx = (v[0].x - u[0].x) / std::sqrt(var);
    const int bin = std::min(bins - 1, static_cast<int>(boost::math::cdf(nd, zx) * bins));
    ++counts[static_cast<std::size_t>(bin)];
  }
  const double sd = std::sqrt(var / n);
  EXPECT_NEAR(mx / n, 1.0, 4.0 * sd);
  EXPECT_NEAR(my / n, -2.0, 4.0 * sd);
  double chi2 = 0.0;
  const double expected = static_cast<double>(n) / bins;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared_distribution<double> dist(bins - 1);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 1e-3);
}

TEST(ContactKernel, WeightAndSlotMean) {
  const Point p{0.4, -0.3};
  const Configuration u({p, p, {2.0, 1.0}});
  const PairIndex i{2, 1};
  Stream s(7, task::kSelfTest, 0);
  const int n = 100000;
  Point sum{0, 0};
  const double dt = 0.5;
  const double w_exact = s_beta(1.3, dt);
  for (int k = 0; k < n; ++k) {
    const auto c = contact_kernel_sample(1.3, i, 0.25, 0.75, u, s);
    ASSERT_EQ(c.weight, w_exact);
    sum += c.out.at(2);
    ASSERT_FALSE(c.out.contains(1));
  }
  const double sd = std::sqrt(dt / n);
  EXPECT_NEAR(sum.x / n, kSqrt2 * p.x, 4.0 * sd);
  EXPECT_NEAR(sum.y / n, kSqrt2 * p.y, 4.0 * sd);
}

TEST(ContactKernel, Refusals) {
  const Configuration sep({{0, 0}, {1, 0}});
  const Configuration col({{0, 0}, {0, 0}});
  Stream s(8, task::kSelfTest, 0);
  EXPECT_THROW(contact_kernel_sample(1.0, {2, 1}, 0.0, 1.0, sep, s), DomainError);
  EXPECT_THROW(contact_kernel_sample(1.0, {2, 1}, 1.0, 1.0, col, s), DomainError);
  EXPECT_THROW(contact_kernel_sample(1.0, {2, 1}, 0.0, 1e-13, col, s), DomainError);
  EXPECT_THROW(contact_kernel_sample(0.0, {2, 1}, 0.0, 1.0, col, s), DomainError);
  // Table-backed weight agrees with the exact one.
  const auto& table = SBetaTable::shared();
  Stream a(9, 0, 0), b(9, 0, 0);
  const auto exact = contact_kernel_sample(1.0, {2, 1}, 0.0, 0.3, col, a);
  const auto fast = contact_kernel_sample(1.0, {2, 1}, 0.0, 0.3, col, b, table);
  EXPECT_NEAR(fast.weight, exact.weight, 1e-11 * exact.weight);
  EXPECT_EQ(fast.out.at(2), exact.out.at(2));
}

TEST(Dissolve, ExamplesAndRoundTrip) {
  const Point pslot{2.0, -1.0}, c{5.0, 5.0};
  const ReducedConfiguration red({2, 1}, {{2, pslot}, {3, c}});
  const auto z = dissolve(red, {2, 1});
  EXPECT_EQ(z[0], pslot / kSqrt2);
  EXPECT_EQ(z[1], pslot / kSqrt2);
  EXPECT_EQ(z[2], c);
  EXPECT_NEAR(norm(z[0]), norm(pslot) / kSqrt2, 1e-15);

  const Point m{0.7, 0.1};
  const Configuration collapsed({{1, 1}, m, {3, 3}, m});
  const PairIndex i{4, 2};
  const auto back = dissolve(backslash(collapsed, i), i);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(back[k].x, collapsed[k].x, 1e-15);
    EXPECT_NEAR(back[k].y, collapsed[k].y, 1e-15);
  }
  EXPECT_THROW(dissolve(red, {3, 1}), DomainError);
}

TEST(Observables, Basics) {
  const Configuration z({{0, 0}, {1, 0}});
  EXPECT_EQ(constant_one()(z), 1.0);
  EXPECT_TRUE(constant_one().is_constant_one);
  EXPECT_EQ(gaussian_bump(z, 0.5)(z), 1.0);
  EXPECT_LT(gaussian_bump(z, 0.5)(Configuration({{1, 0}, {1, 0}})), 1.0);
  const auto box = indicator_box(2, 0.5, 1.5, -1, 1);
  EXPECT_EQ(box(z), 1.0);
  EXPECT_EQ(box(Configuration({{1, 0}, {0, 0}})), 0.0);
  EXPECT_THROW(gaussian_bump(z, 0.0), DomainError);
}

}  // namespace
}  // namespace dbgas
