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

#include "dbgas/series.hpp"
#include "golden.hpp"

namespace dbgas {
namespace {

const Configuration kPairUnitRel({{0.0, 0.0}, {std::sqrt(2.0), 0.0}});

TEST(Sequences, Examples) {
  EXPECT_EQ(enumerate_sequences(2, 1), (std::vector<Sequence>{{{2, 1}}}));
  EXPECT_TRUE(enumerate_sequences(2, 2).empty());
  EXPECT_EQ(enumerate_sequences(3, 2).size(), 6u);
  const auto empty = enumerate_sequences(3, 0);
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_TRUE(empty[0].empty());
  EXPECT_THROW(enumerate_sequences(3, -1), DomainError);
}

TEST(Sequences, CountsAndAdjacency) {
  for (int n = 2; n <= 4; ++n) {
    const auto e = static_cast<std::size_t>(n * (n - 1) / 2);
    std::size_t expected = e;
    for (int m = 1; m <= 4; ++m) {
      const auto seqs = enumerate_sequences(n, m);
      EXPECT_EQ(seqs.size(), expected) << n << " " << m;
      for (const auto& s : seqs) {
        for (std::size_t k = 1; k < s.size(); ++k) EXPECT_FALSE(s[k] == s[k - 1]);
      }
      expected *= e - 1;
    }
  }
  EXPECT_EQ(sequence_to_string({{2, 1}, {3, 2}}), "(2,1)-(3,2)");
}

TEST(DiagramType, Validity) {
  Diagram d{{{2, 1}, {3, 2}}, {0.1, 0.5}, {0.2, 0.6}};
  EXPECT_TRUE(d.valid(1.0));
  EXPECT_FALSE(d.valid(0.55));
  d.dissolution_times[0] = 0.05;
  EXPECT_FALSE(d.valid(1.0));
  Diagram rep{{{2, 1}, {2, 1}}, {0.1, 0.5}, {0.2, 0.6}};
  EXPECT_FALSE(rep.valid(1.0));
}

TEST(TermQuadrature, GoldenAndLimits) {
  const Point r1{1.0, 0.0};
  EXPECT_NEAR(term_quadrature_n2(1.0, r1, 1.0) / golden::kTermN2Beta1T1R1, 1.0, 1e-9);
  EXPECT_NEAR(term_quadrature_n2(1.0, {0.0, 1.0 / std::sqrt(2.0)}, 0.25) / golden::kTermN2Beta1T025Unit,
              1.0, 1e-9);
  EXPECT_LT(term_quadrature_n2(1.0, r1, 1e-3), 1e-100);
  EXPECT_LT(term_quadrature_n2(1.0, r1, 1.0), term_quadrature_n2(1.0, r1, 2.0));
  EXPECT_THROW(term_quadrature_n2(1.0, {0.0, 0.0}, 1.0), DomainError);
}

TEST(TermMc, FreeTerm) {
  const auto params = CouplingParams::uniform(2, 1.0);
  const auto one = term_mc(params, kPairUnitRel, 1.0, {}, constant_one(), 1000, 1);
  EXPECT_EQ(one.mean, 1.0);
  EXPECT_EQ(one.std_error, 0.0);

  // Gaussian bump: E exp(-|X - c|^2 / 2w^2), X ~ N(z, t I), per particle
  // w^2 / (w^2 + t) exp(-|z - c|^2 / (2 (w^2 + t))).
  const Configuration centre({{0.5, 0.0}, {1.0, 1.0}});
  const double w = 0.8, t = 0.6;
  double exact = 1.0;
  for (std::size_t k = 0; k < 2; ++k) {
    exact *= w * w / (w * w + t) * std::exp(-norm2(kPairUnitRel[k] - centre[k]) / (2.0 * (w * w + t)));
  }
  const auto est = term_mc(params, kPairUnitRel, t, {}, gaussian_bump(centre, w), 200000, 2);
  EXPECT_NEAR(est.mean, exact, 3.0 * est.std_error);
}

TEST(TermMc, MatchesQuadratureAtN2) {
  const auto params = CouplingParams::uniform(2, 1.0);
  const double v = term_quadrature_n2(1.0, rel_coord(kPairUnitRel, {2, 1}), 1.0);
  const auto est = term_mc(params, kPairUnitRel, 1.0, {{2, 1}}, constant_one(), 200000, 3);
  EXPECT_NEAR(est.mean, v, 3.0 * est.std_error);
  EXPECT_GE(est.min_sample, 0.0);
}

TEST(TermMc, WeightsDoNotEnterTheSeries) {
  const auto a = CouplingParams::from_beta(2, {1.0}, {0.1});
  const auto b = CouplingParams::from_beta(2, {1.0}, {10.0});
  const auto ea = term_mc(a, kPairUnitRel, 1.0, {{2, 1}}, constant_one(), 5000, 4);
  const auto eb = term_mc(b, kPairUnitRel, 1.0, {{2, 1}}, constant_one(), 5000, 4);
  EXPECT_EQ(ea.mean, eb.mean);
}

TEST(TermMc, UniformChainIsAnAlternative) {
  const auto params = CouplingParams::uniform(2, 1.0);
  SeriesOptions o;
  o.sampling = ChainSampling::kUniformSimplex;
  const auto est = term_mc(params, kPairUnitRel, 1.0, {{2, 1}}, constant_one(), 20000, 5, o);
  EXPECT_GE(est.min_sample, 0.0);
  EXPECT_GT(est.mean, 0.0);
}

TEST(TermMc, ThreeParticleSeedsAgree) {
  const auto params = CouplingParams::uniform(3, 1.0);
  const Configuration z0({{0.0, 0.0}, {1.0, 0.0}, {0.3, 0.9}});
  for (const Sequence& seq : {Sequence{{2, 1}, {3, 2}}, Sequence{{2, 1}, {3, 1}}}) {
    const auto a = term_mc(params, z0, 1.0, seq, constant_one(), 100000, 11);
    const auto b = term_mc(params, z0, 1.0, seq, constant_one(), 100000, 12);
    const double se = std::hypot(a.std_error, b.std_error);
    EXPECT_NEAR(a.mean, b.mean, 3.0 * se);
    EXPECT_GE(a.min_sample, 0.0);
    EXPECT_GE(b.min_sample, 0.0);
    EXPECT_GT(a.mean, 0.0);
  }
}

TEST(TermMc, Refusals) {
  const auto params = CouplingParams::uniform(2, 1.0);
  const Configuration collapsed({{0.0, 0.0}, {0.0, 0.0}});
  EXPECT_THROW(term_mc(params, collapsed, 1.0, {{2, 1}}, constant_one(), 10, 1), ValidationError);
  EXPECT_THROW(term_mc(params, kPairUnitRel, 0.0, {{2, 1}}, constant_one(), 10, 1), DomainError);
  const auto p3 = CouplingParams::uniform(3, 1.0);
  const Configuration z3({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}});
  EXPECT_THROW(term_mc(p3, z3, 1.0, {{2, 1}, {2, 1}}, constant_one(), 10, 1), DomainError);
  EXPECT_THROW(term_mc(params, z3, 1.0, {}, constant_one(), 10, 1), DomainError);
}

TEST(SeriesEval, TwoParticlesStopAfterOneContact) {
  const auto params = CouplingParams::uniform(2, 1.0);
  const auto a = series_eval(params, kPairUnitRel, 1.0, constant_one(), 5, 20000, 6);
  const auto b = series_eval(params, kPairUnitRel, 1.0, constant_one(), 1, 20000, 6);
  EXPECT_EQ(a.total.mean, b.total.mean);
  EXPECT_EQ(a.terms.size(), 2u);
  EXPECT_TRUE(a.truncation.exhausted);
  EXPECT_EQ(a.truncation.geometric_bound, 0.0);
  EXPECT_EQ(a.terms[0].estimate.mean, 1.0);
}

TEST(SeriesEval, WeakCouplingApproachesFreeMotion) {
  const auto params = CouplingParams::uniform(2, 1e-6);
  const Configuration z0({{0.0, 0.0}, {3.0, 0.0}});
  const auto r = series_eval(params, z0, 1.0, constant_one(), 2, 50000, 7);
  EXPECT_LT(std::abs(r.total.mean - 1.0), 0.01);
}

TEST(SeriesEval, DeterministicReplayAndThreads) {
  const auto params = CouplingParams::uniform(3, 0.7);
  const Configuration z0({{0.0, 0.0}, {1.0, 0.0}, {0.3, 0.9}});
  SeriesOptions one, three;
  three.run.threads = 3;
  const auto a = series_eval(params, z0, 0.5, constant_one(), 2, 9000, 8, one);
  const auto b = series_eval(params, z0, 0.5, constant_one(), 2, 9000, 8, one);
  const auto c = series_eval(params, z0, 0.5, constant_one(), 2, 9000, 8, three);
  ASSERT_EQ(a.terms.size(), 1u + 3u + 6u);
  EXPECT_EQ(a.total.mean, b.total.mean);
  EXPECT_EQ(a.total.mean, c.total.mean);
  EXPECT_EQ(a.total.std_error, c.total.std_error);
  EXPECT_FALSE(a.truncation.exhausted);
  EXPECT_EQ(a.truncation.last_m, 2);
  EXPECT_GT(a.truncation.ratio, 0.0);
}

TEST(SeriesEval, PositivityForNonnegativeObservables) {
  const auto params = CouplingParams::uniform(3, 2.0);
  const Configuration z0({{0.0, 0.0}, {1.0, 0.0}, {0.3, 0.9}});
  const auto r = series_eval(params, z0, 0.5, indicator_box(1, -1.0, 1.0, -1.0, 1.0), 2, 5000, 9);
  for (const auto& row : r.terms) EXPECT_GE(row.estimate.min_sample, 0.0);
  EXPECT_GE(r.total.mean, 0.0);
}

}  // namespace
}  // namespace dbgas
