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

#ifndef CHORES_EQ_MARKET_H_
#define CHORES_EQ_MARKET_H_

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace chores_eq {

// Raised when an input violates a documented precondition (dimension
// mismatch, non-positive disutility, zero price vector, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a numerical routine fails for reasons that are not the
// caller's fault (singular basis, cycling guard, invariant violation).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// x(i, j) is the amount of chore j assigned to agent i.
using Allocation = Eigen::MatrixXd;

// A Fisher market with divisible chores. Agent i suffers disutilities(i, j)
// per unit of chore j and must earn budgets(i). Immutable after
// construction; the constructor rejects zero or negative disutilities and
// budgets.
class ChoresInstance {
 public:
  ChoresInstance(Eigen::MatrixXd disutilities, Eigen::VectorXd budgets);

  // Competitive equilibrium with equal incomes: every budget is 1.
  static ChoresInstance Ceei(Eigen::MatrixXd disutilities);

  int num_agents() const { return static_cast<int>(d_.rows()); }
  int num_chores() const { return static_cast<int>(d_.cols()); }
  const Eigen::MatrixXd& disutilities() const { return d_; }
  const Eigen::VectorXd& budgets() const { return b_; }
  double disutility(int i, int j) const { return d_(i, j); }
  double budget(int i) const { return b_(i); }

  double total_budget() const { return total_budget_; }
  double max_disutility() const { return d_.maxCoeff(); }
  double min_budget() const { return b_.minCoeff(); }
  double max_budget() const { return b_.maxCoeff(); }

 private:
  Eigen::MatrixXd d_;
  Eigen::VectorXd b_;
  double total_budget_;
};

// A point (beta, p) of the redundant chores dual: p_j <= beta_i d_ij for all
// i, j and sum_j p_j = sum_i B_i.
struct DualPoint {
  Eigen::VectorXd beta;
  Eigen::VectorXd prices;
};

// Prices and an allocation proposed as a competitive equilibrium.
struct EquilibriumCandidate {
  Eigen::VectorXd prices;
  Allocation allocation;
};

// Absolute feasibility tolerance for DualPoint constraints, scaled by
// max(1, total budget).
double DualFeasibilityTolerance(const ChoresInstance& inst);

// Largest violation of the DualPoint constraints (0 when feasible). Includes
// the price-sum equality and nonnegativity of prices.
double DualInfeasibility(const ChoresInstance& inst, const DualPoint& y);

bool IsDualFeasible(const ChoresInstance& inst, const DualPoint& y);

// f(y) = -sum_i B_i log(beta_i). The constant price sum is dropped.
double DualObjective(const ChoresInstance& inst, const DualPoint& y);

// sum_i B_i log(<d_i, x_i>). Throws InvalidArgument when some agent has zero
// disutility, which is a pole of the objective.
double NashDisutilityLog(const ChoresInstance& inst, const Allocation& x);

// beta_i = max_j p_j / d_ij: the smallest beta making (beta, p) feasible for
// the per-chore constraints.
Eigen::VectorXd InducedBeta(const ChoresInstance& inst,
                            const Eigen::VectorXd& prices);

// Itakura-Saito divergence sum_i (-log(y_i/x_i) + y_i/x_i - 1).
double ItakuraSaito(const Eigen::VectorXd& y, const Eigen::VectorXd& x);

// (sum B)(1 - log(sum B) + log(m max d)); no feasible point of the redundant
// dual, counting the constant price sum, exceeds this value.
double DualObjectiveUpperBound(const ChoresInstance& inst);

// Throws InvalidArgument unless x is an n-by-m nonnegative matrix.
void ValidateAllocation(const ChoresInstance& inst, const Allocation& x);

}  // namespace chores_eq

#endif  // CHORES_EQ_MARKET_H_
