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

#include "chores_eq/market.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace chores_eq {
namespace {

std::string Shape(Eigen::Index rows, Eigen::Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace

ChoresInstance::ChoresInstance(Eigen::MatrixXd disutilities,
                               Eigen::VectorXd budgets)
    : d_(std::move(disutilities)), b_(std::move(budgets)) {
  if (d_.rows() < 1 || d_.cols() < 1) {
    throw InvalidArgument("instance needs at least one agent and one chore");
  }
  if (b_.size() != d_.rows()) {
    throw InvalidArgument("budget vector has " + std::to_string(b_.size()) +
                          " entries for " + std::to_string(d_.rows()) +
                          " agents");
  }
  for (Eigen::Index i = 0; i < d_.rows(); ++i) {
    if (!(b_(i) > 0.0) || !std::isfinite(b_(i))) {
      throw InvalidArgument("budget of agent " + std::to_string(i) +
                            " must be positive and finite");
    }
    for (Eigen::Index j = 0; j < d_.cols(); ++j) {
      if (!(d_(i, j) > 0.0) || !std::isfinite(d_(i, j))) {
        throw InvalidArgument("disutility d(" + std::to_string(i) + "," +
                              std::to_string(j) +
                              ") must be positive and finite");
      }
    }
  }
  total_budget_ = b_.sum();
}

ChoresInstance ChoresInstance::Ceei(Eigen::MatrixXd disutilities) {
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(disutilities.rows());
  return ChoresInstance(std::move(disutilities), std::move(ones));
}

double DualFeasibilityTolerance(const ChoresInstance& inst) {
  return 1e-9 * std::max(1.0, inst.total_budget());
}

double DualInfeasibility(const ChoresInstance& inst, const DualPoint& y) {
  const int n = inst.num_agents();
  const int m = inst.num_chores();
  if (y.beta.size() != n || y.prices.size() != m) {
    throw InvalidArgument("dual point has shape (" +
                          std::to_string(y.beta.size()) + "," +
                          std::to_string(y.prices.size()) +
                          ") for instance " + Shape(n, m));
  }
  double worst = std::abs(y.prices.sum() - inst.total_budget());
  for (int j = 0; j < m; ++j) {
    worst = std::max(worst, -y.prices(j));
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, y.prices(j) - y.beta(i) * inst.disutility(i, j));
    }
  }
  return std::max(worst, 0.0);
}

bool IsDualFeasible(const ChoresInstance& inst, const DualPoint& y) {
  return DualInfeasibility(inst, y) <= DualFeasibilityTolerance(inst);
}

double DualObjective(const ChoresInstance& inst, const DualPoint& y) {
  if (y.beta.size() != inst.num_agents() ||
      y.prices.size() != inst.num_chores()) {
    throw InvalidArgument("dual point dimensions do not match instance");
  }
  double value = 0.0;
  for (int i = 0; i < inst.num_agents(); ++i) {
    if (!(y.beta(i) > 0.0)) {
      throw InvalidArgument("beta_" + std::to_string(i) +
                            " must be strictly positive");
    }
    value -= inst.budget(i) * std::log(y.beta(i));
  }
  return value;
}

void ValidateAllocation(const ChoresInstance& inst, const Allocation& x) {
  if (x.rows() != inst.num_agents() || x.cols() != inst.num_chores()) {
    throw InvalidArgument("allocation has shape " + Shape(x.rows(), x.cols()) +
                          ", expected " +
                          Shape(inst.num_agents(), inst.num_chores()));
  }
  if (x.size() > 0 && x.minCoeff() < 0.0) {
    throw InvalidArgument("allocation has a negative entry");
  }
}

double NashDisutilityLog(const ChoresInstance& inst, const Allocation& x) {
  ValidateAllocation(inst, x);
  double value = 0.0;
  for (int i = 0; i < inst.num_agents(); ++i) {
    const double u = inst.disutilities().row(i).dot(x.row(i));
    if (!(u > 0.0)) {
      throw InvalidArgument("agent " + std::to_string(i) +
                            " has zero disutility (pole of the log objective)");
    }
    value += inst.budget(i) * std::log(u);
  }
  return value;
}

Eigen::VectorXd InducedBeta(const ChoresInstance& inst,
                            const Eigen::VectorXd& prices) {
  if (prices.size() != inst.num_chores()) {
    throw InvalidArgument("price vector has " + std::to_string(prices.size()) +
                          " entries for " + std::to_string(inst.num_chores()) +
                          " chores");
  }
  if (prices.minCoeff() < 0.0) {
    throw InvalidArgument("prices must be nonnegative");
  }
  if (!(prices.maxCoeff() > 0.0)) {
    throw InvalidArgument("induced beta needs a strictly positive price");
  }
  Eigen::VectorXd beta(inst.num_agents());
  for (int i = 0; i < inst.num_agents(); ++i) {
    double best = 0.0;
    for (int j = 0; j < inst.num_chores(); ++j) {
      best = std::max(best, prices(j) / inst.disutility(i, j));
    }
    beta(i) = best;
  }
  return beta;
}

double ItakuraSaito(const Eigen::VectorXd& y, const Eigen::VectorXd& x) {
  if (y.size() != x.size()) {
    throw InvalidArgument("Itakura-Saito needs equal-length vectors");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!(y(i) > 0.0) || !(x(i) > 0.0)) {
      throw InvalidArgument("Itakura-Saito needs strictly positive vectors");
    }
    const double r = y(i) / x(i);
    total += -std::log(r) + r - 1.0;
  }
  return total;
}

double DualObjectiveUpperBound(const ChoresInstance& inst) {
  const double total = inst.total_budget();
  return total * (1.0 - std::log(total) +
                  std::log(inst.num_chores() * inst.max_disutility()));
}

}  // namespace chores_eq
