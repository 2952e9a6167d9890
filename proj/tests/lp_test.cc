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

#include "chores_eq/lp.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chores_eq/market.h"

namespace chores_eq {
namespace {

LpProblem SingleVariable() {
  LpProblem lp;
  lp.c = Eigen::VectorXd::Constant(1, -1);
  lp.a_ub = Eigen::MatrixXd::Ones(1, 1);
  lp.b_ub = Eigen::VectorXd::Ones(1);
  lp.a_eq.resize(0, 1);
  lp.b_eq.resize(0);
  return lp;
}

// min beta1 + beta2 / 2 s.t. p <= 2 beta1, p <= beta2, p = 2 over
// z = (beta1, beta2, p).
LpProblem SingleChoreStep() {
  LpProblem lp;
  lp.c = Eigen::Vector3d(1, 0.5, 0);
  lp.a_ub.resize(2, 3);
  lp.a_ub << -2, 0, 1, 0, -1, 1;
  lp.b_ub = Eigen::Vector2d(0, 0);
  lp.a_eq.resize(1, 3);
  lp.a_eq << 0, 0, 1;
  lp.b_eq = Eigen::VectorXd::Constant(1, 2);
  return lp;
}

void ExpectKkt(const LpProblem& lp, const LpSolution& sol, double tol = 1e-8) {
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  const LpResiduals r = ComputeLpResiduals(lp, sol);
  EXPECT_LE(r.primal, 1e-9);
  EXPECT_LE(r.dual, 1e-9);
  EXPECT_LE(r.complementarity, tol);
  EXPECT_LE(r.duality_gap, tol * std::max(1.0, std::abs(sol.objective)));
}

TEST(LpTest, SingleVariable) {
  for (const LpSolution& sol :
       {SolveLp(SingleVariable()), BruteForceSolveLp(SingleVariable())}) {
    ASSERT_EQ(sol.status, LpStatus::kOptimal);
    EXPECT_NEAR(sol.z(0), 1, 1e-12);
    EXPECT_NEAR(sol.duals_ub(0), 1, 1e-12);
    EXPECT_NEAR(sol.objective, -1, 1e-12);
    ExpectKkt(SingleVariable(), sol);
  }
}

TEST(LpTest, SingleChoreStepMatchesVertexEnumeration) {
  const LpProblem lp = SingleChoreStep();
  const LpSolution oracle = BruteForceSolveLp(lp);
  const LpSolution sol = SolveLp(lp);
  for (const LpSolution* s : {&oracle, &sol}) {
    ASSERT_EQ(s->status, LpStatus::kOptimal);
    EXPECT_NEAR(s->z(0), 1, 1e-12);
    EXPECT_NEAR(s->z(1), 2, 1e-12);
    EXPECT_NEAR(s->z(2), 2, 1e-12);
    EXPECT_NEAR(s->objective, 2, 1e-12);
    // Stationarity in beta forces 2 x1 = 1 and x2 = 1/2.
    EXPECT_NEAR(s->duals_ub(0), 0.5, 1e-12);
    EXPECT_NEAR(s->duals_ub(1), 0.5, 1e-12);
    EXPECT_NEAR(s->duals_eq(0), 1.0, 1e-12);
    ExpectKkt(lp, *s);
  }
}

TEST(LpTest, Infeasible) {
  LpProblem lp;
  lp.c = Eigen::VectorXd::Zero(1);
  lp.a_ub = Eigen::MatrixXd::Ones(1, 1);
  lp.b_ub = Eigen::VectorXd::Constant(1, -1);
  lp.a_eq.resize(0, 1);
  lp.b_eq.resize(0);
  EXPECT_EQ(SolveLp(lp).status, LpStatus::kInfeasible);
  EXPECT_EQ(BruteForceSolveLp(lp).status, LpStatus::kInfeasible);
}

TEST(LpTest, InfeasibleEqualities) {
  LpProblem lp;
  lp.c = Eigen::Vector2d(1, 1);
  lp.a_ub.resize(0, 2);
  lp.b_ub.resize(0);
  lp.a_eq.resize(2, 2);
  lp.a_eq << 1, 1, 1, 1;
  lp.b_eq = Eigen::Vector2d(1, 2);
  EXPECT_EQ(SolveLp(lp).status, LpStatus::kInfeasible);
}

TEST(LpTest, Unbounded) {
  LpProblem lp;
  lp.c = Eigen::Vector2d(-1, 0);
  lp.a_ub.resize(1, 2);
  lp.a_ub << -1, 1;
  lp.b_ub = Eigen::VectorXd::Ones(1);
  lp.a_eq.resize(0, 2);
  lp.b_eq.resize(0);
  EXPECT_EQ(SolveLp(lp).status, LpStatus::kUnbounded);
  EXPECT_EQ(BruteForceSolveLp(lp).status, LpStatus::kUnbounded);
}

TEST(LpTest, RedundantEqualityRowKeepsArtificialPinned) {
  LpProblem lp;
  lp.c = Eigen::Vector3d(1, 2, 3);
  lp.a_ub.resize(0, 3);
  lp.b_ub.resize(0);
  lp.a_eq.resize(2, 3);
  lp.a_eq << 1, 1, 1, 2, 2, 2;
  lp.b_eq = Eigen::Vector2d(1, 2);
  const LpSolution sol = SolveLp(lp);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 1, 1e-12);
  ExpectKkt(lp, sol);
}

TEST(LpTest, NegativeRightHandSides) {
  // z1 + z2 >= 1 written as -z1 - z2 <= -1.
  LpProblem lp;
  lp.c = Eigen::Vector2d(2, 3);
  lp.a_ub.resize(2, 2);
  lp.a_ub << -1, -1, 1, 0;
  lp.b_ub = Eigen::Vector2d(-1, 0.25);
  lp.a_eq.resize(0, 2);
  lp.b_eq.resize(0);
  const LpSolution sol = SolveLp(lp);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 0.5 + 2.25, 1e-12);
  EXPECT_NEAR(sol.objective, BruteForceSolveLp(lp).objective, 1e-12);
  ExpectKkt(lp, sol);
}

TEST(LpTest, DegenerateCyclingExample) {
  // Beale's example, which cycles under the textbook Dantzig rule without
  // an anti-cycling safeguard.
  LpProblem lp;
  lp.c.resize(4);
  lp.c << -0.75, 150, -0.02, 6;
  lp.a_ub.resize(3, 4);
  lp.a_ub << 0.25, -60, -0.04, 9, 0.5, -90, -0.02, 3, 0, 0, 1, 0;
  lp.b_ub = Eigen::Vector3d(0, 0, 1);
  lp.a_eq.resize(0, 4);
  lp.b_eq.resize(0);
  const LpSolution oracle = BruteForceSolveLp(lp);
  for (int bland_after : {0, 1}) {
    SimplexOptions opts;
    opts.bland_after = bland_after;
    const LpSolution sol = SolveLp(lp, opts);
    ASSERT_EQ(sol.status, LpStatus::kOptimal);
    EXPECT_NEAR(sol.objective, -0.05, 1e-12);
    EXPECT_NEAR(sol.objective, oracle.objective, 1e-12);
    ExpectKkt(lp, sol);
  }
}

TEST(LpTest, PivotCapRaises) {
  SimplexOptions opts;
  opts.max_pivots = 1;
  LpProblem lp = SingleChoreStep();
  EXPECT_THROW(SolveLp(lp, opts), SolverError);
}

TEST(LpTest, ValidateRejectsBadShapes) {
  LpProblem lp = SingleVariable();
  lp.b_ub = Eigen::Vector2d(1, 1);
  EXPECT_THROW(SolveLp(lp), InvalidArgument);
  lp = SingleVariable();
  lp.c(0) = std::nan("");
  EXPECT_THROW(SolveLp(lp), InvalidArgument);
}

TEST(LpTest, BruteForceGuard) {
  LpProblem lp;
  lp.c = Eigen::VectorXd::Zero(13);
  lp.a_ub = Eigen::MatrixXd::Ones(1, 13);
  lp.b_ub = Eigen::VectorXd::Ones(1);
  lp.a_eq.resize(0, 13);
  lp.b_eq.resize(0);
  EXPECT_THROW(BruteForceSolveLp(lp), InvalidArgument);
}

TEST(LpTest, DumpListsEveryRow) {
  const std::string dump = DumpLp(SingleChoreStep());
  EXPECT_NE(dump.find("min:"), std::string::npos);
  EXPECT_NE(dump.find("ub0:"), std::string::npos);
  EXPECT_NE(dump.find("ub1:"), std::string::npos);
  EXPECT_NE(dump.find("eq0:"), std::string::npos);
}

// Random LPs bounded by a box row sum z <= U; some carry equality rows.
LpProblem RandomBoundedLp(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> vars(2, 6), ub_rows(1, 7), eq_rows(0, 2);
  std::uniform_real_distribution<double> coef(-3, 3), pos(0.5, 4);
  LpProblem lp;
  const int nv = vars(gen);
  const int nub = ub_rows(gen);
  const int neq = std::min(eq_rows(gen), 10 - nub - 1);
  lp.c.resize(nv);
  for (int j = 0; j < nv; ++j) lp.c(j) = coef(gen);
  lp.a_ub.resize(nub + 1, nv);
  lp.b_ub.resize(nub + 1);
  // A random interior point makes most instances feasible.
  Eigen::VectorXd z0(nv);
  for (int j = 0; j < nv; ++j) z0(j) = 0.5 * pos(gen);
  for (int r = 0; r < nub; ++r) {
    for (int j = 0; j < nv; ++j) lp.a_ub(r, j) = std::round(coef(gen) * 2) / 2;
    lp.b_ub(r) = lp.a_ub.row(r).dot(z0) + (gen() % 3 == 0 ? 0.0 : pos(gen));
  }
  lp.a_ub.row(nub).setOnes();
  lp.b_ub(nub) = z0.sum() + pos(gen);
  lp.a_eq.resize(neq, nv);
  lp.b_eq.resize(neq);
  for (int r = 0; r < neq; ++r) {
    for (int j = 0; j < nv; ++j) lp.a_eq(r, j) = std::round(coef(gen));
    lp.b_eq(r) = lp.a_eq.row(r).dot(z0);
  }
  return lp;
}

TEST(LpTest, AgreesWithVertexOracleOnRandomBoundedLps) {
  std::mt19937_64 gen(20240601);
  int optimal = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const LpProblem lp = RandomBoundedLp(gen);
    const LpSolution oracle = BruteForceSolveLp(lp);
    const LpSolution sol = SolveLp(lp);
    SCOPED_TRACE("trial " + std::to_string(trial) + "\n" + DumpLp(lp));
    if (oracle.status != LpStatus::kOptimal) {
      // Only rank-deficient equality blocks defeat the vertex oracle.
      if (oracle.status == LpStatus::kInfeasible) {
        EXPECT_NE(sol.status, LpStatus::kUnbounded);
      }
      continue;
    }
    ++optimal;
    ASSERT_EQ(sol.status, LpStatus::kOptimal);
    EXPECT_NEAR(sol.objective, oracle.objective,
                1e-8 * std::max(1.0, std::abs(oracle.objective)));
    ExpectKkt(lp, sol);
  }
  EXPECT_GE(optimal, 500);
}

TEST(LpTest, DeterministicAndWarmStartable) {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 50; ++trial) {
    LpProblem lp = RandomBoundedLp(gen);
    const LpSolution a = SolveLp(lp);
    const LpSolution b = SolveLp(lp);
    ASSERT_EQ(a.status, b.status);
    if (a.status != LpStatus::kOptimal) continue;
    EXPECT_EQ(a.basis, b.basis);
    EXPECT_TRUE((a.z.array() == b.z.array()).all());
    EXPECT_TRUE((a.duals_ub.array() == b.duals_ub.array()).all());

    // Same constraints, new costs: the old basis is still primal feasible.
    for (int j = 0; j < lp.num_vars(); ++j) lp.c(j) = std::sin(j + trial);
    const LpSolution cold = SolveLp(lp);
    const LpSolution warm = SolveLp(lp, {}, &a.basis);
    ASSERT_EQ(cold.status, warm.status);
    if (cold.status == LpStatus::kOptimal) {
      EXPECT_NEAR(cold.objective, warm.objective,
                  1e-9 * std::max(1.0, std::abs(cold.objective)));
      ExpectKkt(lp, warm);
    }
  }
}

TEST(LpTest, InvalidWarmBasisIsIgnored) {
  const LpProblem lp = SingleChoreStep();
  const std::vector<int> junk = {0, 0, 99};
  const LpSolution sol = SolveLp(lp, {}, &junk);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 2, 1e-12);
}

}  // namespace
}  // namespace chores_eq
