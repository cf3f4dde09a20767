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

#include <cmath>
#include <set>

#include "dbgas/geometry.hpp"
#include "dbgas/rng.hpp"

namespace dbgas {
namespace {

Configuration random_config(Stream& s, int n, double scale = 3.0) {
  std::vector<Point> pts(static_cast<std::size_t>(n));
  for (auto& p : pts) p = {scale * s.normal(), scale * s.normal()};
  return Configuration(pts);
}

TEST(Pairs, SmallCases) {
  EXPECT_EQ(enumerate_pairs(2), (std::vector<PairIndex>{{2, 1}}));
  EXPECT_EQ(enumerate_pairs(3), (std::vector<PairIndex>{{2, 1}, {3, 1}, {3, 2}}));
  EXPECT_EQ(enumerate_pairs(4).size(), 6u);
  EXPECT_THROW(enumerate_pairs(1), DomainError);
}

TEST(Pairs, CountSlotsAndUniqueness) {
  for (int n = 2; n <= 8; ++n) {
    const auto pairs = enumerate_pairs(n);
    ASSERT_EQ(static_cast<int>(pairs.size()), n * (n - 1) / 2);
    std::set<std::pair<int, int>> seen;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      EXPECT_TRUE(pairs[k].valid_for(n));
      EXPECT_EQ(pair_slot(n, pairs[k]), k);
      seen.insert({pairs[k].lo, pairs[k].hi});
    }
    EXPECT_EQ(seen.size(), pairs.size());
    EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
  }
}

TEST(Coordinates, Examples) {
  const Configuration same({{0.3, 0.4}, {0.3, 0.4}});
  EXPECT_EQ(rel_coord(same, {2, 1}), (Point{0.0, 0.0}));
  const Configuration z({{0, 0}, {2, 0}});
  EXPECT_NEAR(rel_coord(z, {2, 1}).x, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(com_coord(z, {2, 1}).x, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(rel_coord(z, {2, 1}).y, 0.0);
  EXPECT_THROW(rel_coord(z, {3, 1}), DomainError);
  EXPECT_THROW(com_coord(z, {1, 1}), DomainError);
}

TEST(Coordinates, Isometry) {
  Stream s(1, task::kSelfTest, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto z = random_config(s, 3);
    for (const auto& p : enumerate_pairs(3)) {
      const double lhs = norm2(rel_coord(z, p)) + norm2(com_coord(z, p));
      const double rhs = norm2(z.label(p.hi)) + norm2(z.label(p.lo));
      EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
    }
  }
}

TEST(SlashMaps, Examples) {
  const Point a{1, 2}, b{-3, 0.5}, c{4, -1};
  const Configuration u({a, b, c});
  EXPECT_EQ(slash(u, {2, 1}), Configuration({a, a, c}));
  const auto dbl = dbl_backslash(u, {2, 1});
  const Point mid = (a + b) / 2.0;
  EXPECT_NEAR(dbl[0].x, mid.x, 1e-15);
  EXPECT_NEAR(dbl[0].y, mid.y, 1e-15);
  EXPECT_EQ(dbl[0], dbl[1]);
  EXPECT_EQ(dbl[2], c);

  const auto red = backslash(u, {3, 2});
  EXPECT_EQ(red.size(), 2u);
  EXPECT_TRUE(red.contains(1));
  EXPECT_TRUE(red.contains(3));
  EXPECT_FALSE(red.contains(2));
  EXPECT_EQ(red.at(1), a);
  EXPECT_NEAR(red.at(3).x, (c.x + b.x) / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(red.at(3).y, (c.y + b.y) / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(red.at(2), DomainError);
}

TEST(SlashMaps, IdempotenceAndCollapse) {
  Stream s(2, task::kSelfTest, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = random_config(s, 4);
    for (const auto& p : enumerate_pairs(4)) {
      const auto once = slash(u, p);
      EXPECT_EQ(slash(once, p), once);
      const auto dbl = dbl_backslash(u, p);
      EXPECT_EQ(dbl.label(p.hi), dbl.label(p.lo));
    }
  }
}

TEST(Sigma, Examples) {
  EXPECT_EQ(sigma_dot({2, 1}, {2, 1}, 2), 2);
  EXPECT_EQ(sigma_dot({2, 1}, {3, 2}, 3), -1);
  EXPECT_EQ(sigma_dot({2, 1}, {3, 1}, 3), 1);
  EXPECT_EQ(sigma_dot({2, 1}, {4, 3}, 4), 0);
  EXPECT_THROW(sigma_dot({2, 1}, {4, 3}, 3), DomainError);
}

TEST(Sigma, Symmetric) {
  for (int n = 2; n <= 6; ++n) {
    for (const auto& a : enumerate_pairs(n)) {
      for (const auto& b : enumerate_pairs(n)) {
        const int v = sigma_dot(a, b, n);
        EXPECT_EQ(v, sigma_dot(b, a, n));
        EXPECT_TRUE(v >= -1 && v <= 2);
      }
    }
  }
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify_config(Configuration({{0, 0}, {1, 0}}), 1e-9).kind, ConfigKind::kSeparated);
  const auto one = classify_config(Configuration({{0, 0}, {0, 0}, {5, 0}}), 1e-9);
  EXPECT_EQ(one.kind, ConfigKind::kPairCollapsed);
  ASSERT_TRUE(one.pair.has_value());
  EXPECT_EQ(*one.pair, (PairIndex{2, 1}));
  EXPECT_EQ(classify_config(Configuration({{0, 0}, {0, 0}, {0, 0}}), 1e-9).kind, ConfigKind::kMulti);
  EXPECT_THROW(classify_config(Configuration({{0, 0}, {1, 0}}), 0.0), DomainError);
}

TEST(ConfigurationType, Validation) {
  EXPECT_THROW(Configuration({{NAN, 0.0}}), ValidationError);
  const std::vector<double> odd{1.0, 2.0, 3.0};
  EXPECT_THROW(Configuration::from_reals(odd), ValidationError);
  const std::vector<double> xy{1.0, 2.0, 3.0, 4.0};
  const auto z = Configuration::from_reals(xy);
  EXPECT_EQ(z.label(2), (Point{3.0, 4.0}));
  EXPECT_EQ(z.to_reals(), xy);
}

TEST(ComplexHelpers, ReciprocalConj) {
  const Point z{3.0, 4.0};
  const Point r = reciprocal_conj(z);
  // (1 / conj z) * conj z = 1.
  const Point prod = complex_mul(r, {z.x, -z.y});
  EXPECT_NEAR(prod.x, 1.0, 1e-15);
  EXPECT_NEAR(prod.y, 0.0, 1e-15);
  EXPECT_THROW(reciprocal_conj({0.0, 0.0}), SingularityError);
}

}  // namespace
}  // namespace dbgas
