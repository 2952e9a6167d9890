// Copyright 2026 The chores-eq Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chores_eq/certify.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chores_eq/gfw.h"
#include "chores_eq/instances.h"

namespace chores_eq {
namespace {

constexpr double kBigM = 100, kEps = 0.01;

EquilibriumCandidate FarApartEquilibrium() {
  EquilibriumCandidate c;
  c.prices = Eigen::Vector2d(2 / (kBigM + 1), 2 * kBigM / (kBigM + 1));
  c.allocation.resize(2, 2);
  c.allocation << 1, (kBigM - 1) / (2 * kBigM), 0, (kBigM + 1) / (2 * kBigM);
  return c;
}

KktWitness SingleChoreWitness() {
  KktWitness w;
  w.beta = Eigen::Vector2d(1, 2);
  w.prices = Eigen::VectorXd::Constant(1, 2);
  w.x.resize(2, 1);
  w.x << 0.5, 0.5;
  return w;
}

TEST(CertifyCeTest, SingleChoreAllToOneAgent) {
  Allocation x(2, 1);
  x << 0, 1;
  const Certificate c =
      CertifyCe(SingleChoreInstance(), {Eigen::VectorXd::Constant(1, 2), x});
  // Agent 1 earns nothing; agent 2 earns 2 = B / (1 - 1/2); supply exact.
  EXPECT_DOUBLE_EQ(c.eps_earning, 1.0);
  EXPECT_DOUBLE_EQ(c.eps_optimality, 0.0);
  EXPECT_DOUBLE_EQ(c.eps_supply, 0.0);
}

TEST(CertifyCeTest, FarApartEquilibriumIsExact) {
  const Certificate c = CertifyCe(FarApartInstance(kBigM, kEps), FarApartEquilibrium());
  EXPECT_LE(c.eps_earning, 1e-12);
  EXPECT_LE(c.eps_optimality, 1e-12);
  EXPECT_LE(c.eps_supply, 1e-12);
  EXPECT_TRUE(c.IsExact());
}

TEST(CertifyCeTest, FarApartNearEquilibriumLevels) {
  // p = (1 - e, 1 + e), x_11 = 1 - e, x_22 = 1. Agent 1 earns (1 - e)^2,
  // agent 2 earns 1 + e and chore 1 is covered to 1 - e; both agents buy
  // only minimum-ratio chores.
  EquilibriumCandidate c;
  c.prices = Eigen::Vector2d(1 - kEps, 1 + kEps);
  c.allocation.resize(2, 2);
  c.allocation << 1 - kEps, 0, 0, 1;
  const Certificate cert = CertifyCe(FarApartInstance(kBigM, kEps), c);
  EXPECT_NEAR(cert.eps_earning, 1 - (1 - kEps) * (1 - kEps), 1e-15);
  EXPECT_NEAR(cert.eps_optimality, 0, 1e-15);
  EXPECT_NEAR(cert.eps_supply, kEps, 1e-15);
  const double price_gap =
      (c.prices - FarApartEquilibrium().prices).cwiseAbs().maxCoeff();
  EXPECT_GT(price_gap, 0.9);

  // Giving agent 1 all of chore 1 instead reaches level e.
  c.allocation(0, 0) = 1;
  const Certificate full = CertifyCe(FarApartInstance(kBigM, kEps), c);
  EXPECT_NEAR(full.eps_earning, kEps, 1e-15);
  EXPECT_TRUE(full.IsStronglyApprox(kEps + 1e-12));
}

TEST(CertifyCeTest, OptimalityUsesMinimumRatio) {
  // One agent, two chores, d = (1, 4), p = (1, 1): earning 1 from chore 2
  // costs 4 while chore 1 would cost 1.
  const ChoresInstance inst(Eigen::RowVector2d(1, 4), Eigen::VectorXd::Ones(1));
  Allocation x(1, 2);
  x << 0, 1;
  const Certificate c = CertifyCe(inst, {Eigen::Vector2d(1, 1), x});
  EXPECT_NEAR(c.eps_optimality, 0.75, 1e-15);
  // Zero-price chores are never a cheaper way to earn.
  const Certificate z = CertifyCe(inst, {Eigen::Vector2d(0, 1), x});
  EXPECT_NEAR(z.eps_optimality, 0.0, 1e-15);
}

TEST(CertifyCeTest, Errors) {
  const ChoresInstance inst = SingleChoreInstance();
  Allocation x = Allocation::Constant(2, 1, 0.5);
  EXPECT_THROW(CertifyCe(inst, {Eigen::VectorXd::Zero(1), x}), InvalidArgument);
  EXPECT_THROW(CertifyCe(inst, {Eigen::VectorXd::Constant(1, -1), x}), InvalidArgument);
  EXPECT_THROW(CertifyCe(inst, {Eigen::Vector2d(1, 1), x}), InvalidArgument);
  x(0, 0) = -0.1;
  EXPECT_THROW(CertifyCe(inst, {Eigen::VectorXd::Constant(1, 2), x}), InvalidArgument);
}

TEST(CertifyCeTest, ScaleConsistent) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.05, 2);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd d(3, 4);
    Eigen::VectorXd b(3);
    Eigen::VectorXd p(4);
    Allocation x(3, 4);
    for (int i = 0; i < 3; ++i) {
      b(i) = u(gen);
      for (int j = 0; j < 4; ++j) {
        d(i, j) = u(gen);
        x(i, j) = u(gen) / 3;
      }
    }
    for (int j = 0; j < 4; ++j) p(j) = u(gen);
    const double s = 0.1 + 10 * u(gen);
    const Certificate a = CertifyCe(ChoresInstance(d, b), {p, x});
    const Certificate c = CertifyCe(ChoresInstance(d, s * b), {s * p, x});
    EXPECT_NEAR(a.eps_earning, c.eps_earning, 1e-12);
    EXPECT_NEAR(a.eps_optimality, c.eps_optimality, 1e-12);
    EXPECT_NEAR(a.eps_supply, c.eps_supply, 1e-12);
  }
}

TEST(KktTest, SingleChorePointPasses) {
  const KktReport dual = CheckKktDual(SingleChoreInstance(), SingleChoreWitness(), 1e-9);
  EXPECT_TRUE(dual.passed) << dual.max_residual;
  const KktReport red = CheckKktRedundant(SingleChoreInstance(), SingleChoreWitness(), 1e-9);
  EXPECT_TRUE(red.passed) << red.max_residual;
  EXPECT_EQ(red.Get("mu"), 0.0);
  EXPECT_THROW(red.Get("nonexistent"), InvalidArgument);
}

TEST(KktTest, NonzeroMuFails) {
  KktWitness w = SingleChoreWitness();
  w.mu = 0.5;
  w.x *= 0.5;  // keeps sum_i x + mu = 1
  const KktReport r = CheckKktRedundant(SingleChoreInstance(), w, 1e-9);
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.Get("mu"), 0.5, 1e-15);
  EXPECT_LE(r.Get("clearing"), 1e-15);
}

TEST(KktTest, SymmetricPointPasses) {
  const ChoresInstance ones = ChoresInstance::Ceei(Eigen::MatrixXd::Ones(2, 2));
  KktWitness w{Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 1),
               Allocation::Constant(2, 2, 0.5), 0.0};
  EXPECT_TRUE(CheckKktDual(ones, w, 1e-12).passed);
  EXPECT_TRUE(CheckKktRedundant(ones, w, 1e-12).passed);
  EXPECT_NEAR(KktDualityGap(ones, w), 0.0, 1e-14);
}

TEST(KktTest, UniformPricesOnFarApartFail) {
  const ChoresInstance inst = FarApartInstance(kBigM, kEps);
  const DualPoint y = InitialPoint(inst);
  // Proportional allocation: every agent gets an equal share of each chore.
  KktWitness w{y.beta, y.prices, Allocation::Constant(2, 2, 0.5), 0.0};
  const KktReport r = CheckKktDual(inst, w, 1e-6);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.max_residual, 0.1);
  EXPECT_GT(KktDualityGap(inst, w), 0.01);
}

TEST(KktTest, DualityGapAtSingleChorePoint) {
  // Primal: log 1 + log 1/2; dual: 2 - (0 + log 2) + (0 - 2).
  EXPECT_NEAR(KktDualityGap(SingleChoreInstance(), SingleChoreWitness()), 0.0, 1e-15);
}

TEST(KktTest, EquilibriaYieldPassingWitnesses) {
  const ChoresInstance single = SingleChoreInstance();
  Allocation x(2, 1);
  x << 0.5, 0.5;
  const KktWitness a = WitnessFromCe(single, {Eigen::VectorXd::Constant(1, 2), x});
  EXPECT_NEAR(a.beta(0), 1, 1e-15);
  EXPECT_NEAR(a.beta(1), 2, 1e-15);
  EXPECT_TRUE(CheckKktRedundant(single, a, 1e-12).passed);

  const ChoresInstance far = FarApartInstance(kBigM, kEps);
  const KktWitness b = WitnessFromCe(far, FarApartEquilibrium());
  EXPECT_NEAR(b.beta(0), 2 / (kBigM + 1), 1e-15);
  EXPECT_NEAR(b.beta(1), 2 * kBigM / ((kBigM + 1) * (1 + kEps)), 1e-14);
  const KktReport r = CheckKktRedundant(far, b, 1e-12);
  EXPECT_TRUE(r.passed) << r.max_residual;
  EXPECT_LE(KktDualityGap(far, b), 1e-12);
}

TEST(KktTest, PassingWitnessCertifiesExact) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GenSpec spec;
    spec.n = 6;
    spec.seed = seed;
    const ChoresInstance inst = Generate(spec);
    const GfwResult res = RunGfw(inst);
    const KktWitness w = res.Witness();
    const KktReport r = CheckKktRedundant(inst, w, 1e-8);
    ASSERT_TRUE(r.passed) << r.max_residual;
    EXPECT_TRUE(CertifyCe(inst, {w.prices, w.x}).IsExact(1e-6));
  }
}

}  // namespace
}  // namespace chores_eq
