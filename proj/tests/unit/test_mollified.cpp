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

#include "dbgas/mollified.hpp"
#include "golden.hpp"
#include "oracles.hpp"

namespace dbgas {
namespace {

// E log|X - Y| for X, Y iid from the mollifier, by rejection sampling.
double log_energy_mc(const MollifierSpec& spec, int n, std::uint64_t seed) {
  Stream s(seed, task::kSelfTest, 0);
  const double r = spec.radius();
  const double peak = spec.density({0.0, 0.0});
  auto draw = [&] {
    for (;;) {
      const Point p{r * (2.0 * s.uniform() - 1.0), r * (2.0 * s.uniform() - 1.0)};
      if (s.uniform() * peak < spec.density(p)) return p;
    }
  };
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += std::log(norm(draw() - draw()));
  return sum / n;
}

TEST(Mollifier, Normalization) {
  for (auto kind : {MollifierKind::kSmoothBump, MollifierKind::kDiskUniform}) {
    for (double radius : {0.5, 1.0, 2.0}) {
      const MollifierSpec spec(kind, radius);
      // Radial mass; the disk's jump sits at the upper limit.
      const double mass = oracle::gk_adaptive(
          [&](double r) { return 2.0 * oracle::kPi * r * spec.density_r2(r * r); }, 0.0,
          radius * (1.0 - 1e-15), 1e-14);
      EXPECT_NEAR(mass, 1.0, 1e-8) << to_string(kind) << " " << radius;
    }
  }
}

TEST(Mollifier, SupportAndContinuity) {
  const auto bump = MollifierSpec::smooth_bump(1.5);
  EXPECT_EQ(bump.density({1.5, 0.0}), 0.0);
  EXPECT_EQ(bump.density({0.0, -2.0}), 0.0);
  EXPECT_GT(bump.density({1.49, 0.0}), 0.0);
  EXPECT_LT(bump.density({1.4999, 0.0}), 1e-100);
  EXPECT_THROW(MollifierSpec::disk_uniform(0.0), DomainError);
  EXPECT_EQ(mollifier_kind_from_string("disk_uniform"), MollifierKind::kDiskUniform);
  EXPECT_THROW(mollifier_kind_from_string("box"), ValidationError);
}

TEST(Mollifier, LogEnergy) {
  EXPECT_NEAR(mollifier_log_energy(MollifierSpec::disk_uniform(1.0)), -0.25, 1e-15);
  const double disk_mc = log_energy_mc(MollifierSpec::disk_uniform(1.0), 2000000, 1);
  EXPECT_NEAR(disk_mc, -0.25, 1e-3);
  const auto bump = MollifierSpec::smooth_bump(1.0);
  const double bump_mc = log_energy_mc(bump, 2000000, 2);
  EXPECT_NEAR(bump_mc, bump.log_energy(), 1.5e-3);
  for (double radius : {0.5, 2.0, 3.7}) {
    for (auto kind : {MollifierKind::kSmoothBump, MollifierKind::kDiskUniform}) {
      EXPECT_NEAR(MollifierSpec(kind, radius).log_energy(),
                  std::log(radius) + MollifierSpec(kind, 1.0).log_energy(), 1e-13);
    }
  }
}

TEST(Coupling, LambdaBeta) {
  const auto disk = MollifierSpec::disk_uniform(1.0);
  EXPECT_NEAR(lambda_from_beta(1.0, disk), golden::kLambdaBeta1UnitDisk, 1e-14);
  for (const auto& spec : {disk, MollifierSpec::smooth_bump(0.7)}) {
    double prev = -INFINITY;
    for (double beta : {0.1, 1.0, 10.0}) {
      const double lam = lambda_from_beta(beta, spec);
      EXPECT_NEAR(beta_from_lambda(lam, spec) / beta, 1.0, 1e-12);
      EXPECT_GT(lam, prev);
      prev = lam;
    }
  }
  EXPECT_THROW(lambda_from_beta(0.0, disk), DomainError);
}

TEST(Coupling, Params) {
  const auto p = CouplingParams::from_beta(3, {1.0, 2.0, 3.0}, {0.5});
  EXPECT_EQ(p.pairs(), 3u);
  EXPECT_EQ(p.beta(PairIndex{3, 2}), 3.0);
  EXPECT_EQ(p.w(PairIndex{3, 1}), 0.5);
  EXPECT_NEAR(p.lambda(std::size_t{1}), lambda_from_beta(2.0, p.mollifier()), 1e-15);
  const auto q = CouplingParams::from_lambda(3, {p.lambda(std::size_t{1})});
  EXPECT_NEAR(q.beta(std::size_t{2}), 2.0, 1e-12);
  EXPECT_THROW(CouplingParams::from_beta(3, {1.0, 2.0}), ValidationError);
  EXPECT_THROW(CouplingParams::from_beta(2, {-1.0}), ValidationError);
  EXPECT_THROW(CouplingParams::from_beta(2, {1.0}, {0.0}), ValidationError);
  EXPECT_THROW(p.require_particles(2), DomainError);
}

TEST(OccupationFk, PotentialOffIsFreeMotion) {
  const auto params = CouplingParams::uniform(2, 1.0);
  const Configuration z0({{0.0, 0.0}, {1.0, 0.0}});
  FkOptions o;
  o.coupling_scale = 0.0;
  const auto e = occupation_fk_estimate(params, 0.1, z0, 0.25, constant_one(), 5e-4, 2000, 1, o);
  EXPECT_EQ(e.mean, 1.0);
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(OccupationFk, InputChecks) {
  const auto params = CouplingParams::uniform(2, 1.0);
  const Configuration z0({{0.0, 0.0}, {1.0, 0.0}});
  EXPECT_THROW(occupation_fk_estimate(params, 0.5, z0, 0.25, constant_one(), 0.5, 10, 1), ValidationError);
  EXPECT_THROW(occupation_fk_estimate(params, 1.0, z0, 0.25, constant_one(), 1e-3, 10, 1), DomainError);
  const Configuration bad({{0.0, 0.0}, {0.0, 0.0}});
  EXPECT_THROW(occupation_fk_estimate(params, 0.1, bad, 0.25, constant_one(), 5e-4, 10, 1), ValidationError);
  EXPECT_THROW(occupation_fk_estimate(params, 0.1, Configuration({{0, 0}, {1, 0}, {2, 0}}), 0.25,
                                      constant_one(), 5e-4, 10, 1),
               DomainError);
}

TEST(OccupationFk, PositiveCouplingRaisesTheMean) {
  const auto params = CouplingParams::uniform(2, 10.0);
  const Configuration z0({{0.0, 0.0}, {0.3, 0.0}});
  ASSERT_GE(params.lambda(std::size_t{0}), 0.0);
  const double eps = 0.1;
  const auto e = occupation_fk_estimate(params, eps, z0, 0.25, constant_one(), max_step_for(eps), 4000, 2);
  EXPECT_GE(e.mean, 1.0 - 3.0 * e.std_error);
  EXPECT_GE(e.min_sample, 1.0);
}

TEST(OccupationFk, StepHalving) {
  const auto params = CouplingParams::uniform(2, 1.0);
  const Configuration z0({{0.0, 0.0}, {0.5, 0.0}});
  const double eps = 0.1;
  const double h = max_step_for(eps);
  const auto a = occupation_fk_estimate(params, eps, z0, 0.25, constant_one(), h, 20000, 3);
  const auto b = occupation_fk_estimate(params, eps, z0, 0.25, constant_one(), h / 2, 20000, 4);
  EXPECT_LT(std::abs(a.mean - b.mean), 2.0 * std::hypot(a.std_error, b.std_error));
}

TEST(OccupationFk, ThreeParticlesAndObservable) {
  const auto params = CouplingParams::uniform(3, 1.0);
  const Configuration z0({{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}});
  const double eps = 0.2;
  RunOptions one{1, 4096}, three{3, 512};
  FkOptions o1, o3;
  o1.run = one;
  o3.run = three;
  o3.run.chunk_size = 4096;
  const auto f = gaussian_bump(z0, 1.0);
  const auto a = occupation_fk_estimate(params, eps, z0, 0.1, f, max_step_for(eps), 3000, 5, o1);
  const auto b = occupation_fk_estimate(params, eps, z0, 0.1, f, max_step_for(eps), 3000, 5, o3);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_GT(a.mean, 0.0);
}

TEST(Sweep, RowsAndStreams) {
  const auto params = CouplingParams::uniform(2, 1.0);
  const Configuration z0({{0.0, 0.0}, {1.0, 0.0}});
  const auto single = epsilon_sweep(params, z0, 0.1, constant_one(), {0.2}, 2000, 1);
  ASSERT_EQ(single.size(), 1u);
  const auto direct = occupation_fk_estimate(params, 0.2, z0, 0.1, constant_one(), max_step_for(0.2), 2000, 1);
  EXPECT_EQ(single[0].estimate.mean, direct.mean);
  EXPECT_EQ(single[0].h, max_step_for(0.2));

  const auto rows = epsilon_sweep(params, z0, 0.1, constant_one(), {0.2, 0.2}, 2000, 1);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NE(rows[0].estimate.mean, rows[1].estimate.mean);
  SweepOptions crn;
  crn.common_random_numbers = true;
  const auto coupled = epsilon_sweep(params, z0, 0.1, constant_one(), {0.2, 0.2}, 2000, 1, crn);
  EXPECT_EQ(coupled[0].estimate.mean, coupled[1].estimate.mean);
  EXPECT_EQ(rows[0].beta, 1.0);
  EXPECT_THROW(epsilon_sweep(params, z0, 0.1, constant_one(), {}, 10, 1), ValidationError);
  SweepOptions coarse;
  coarse.h = 0.1;
  EXPECT_THROW(epsilon_sweep(params, z0, 0.1, constant_one(), {0.5}, 10, 1, coarse), ValidationError);
}

}  // namespace
}  // namespace dbgas
