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

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "chores_eq/lp.h"
#include "chores_eq/market.h"

namespace chores_eq {
namespace {

constexpr int kMaxVars = 12;
constexpr int kMaxRows = 20;
constexpr double kTol = 1e-9;

struct Candidate {
  std::vector<int> cols;
  Eigen::VectorXd x_basic;
  Eigen::VectorXd y;
  double objective;
};

// Advances `idx` to the next k-subset of [0, n) in lexicographic order.
bool NextSubset(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

}  // namespace

LpSolution BruteForceSolveLp(const LpProblem& problem) {
  problem.Validate();
  const int nv = problem.num_vars();
  const int nub = problem.num_ub_rows();
  const int rows = problem.num_rows();
  if (nv > kMaxVars || rows > kMaxRows) {
    throw InvalidArgument("brute-force LP oracle is limited to 12 variables "
                          "and 20 rows");
  }
  const int ncols = nv + nub;

  // Standard form [a_ub I; a_eq 0] (z, s) = b with costs (c, 0).
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, ncols);
  Eigen::VectorXd b(rows);
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(ncols);
  cost.head(nv) = problem.c;
  for (int r = 0; r < nub; ++r) {
    a.row(r).head(nv) = problem.a_ub.row(r);
    a(r, nv + r) = 1.0;
    b(r) = problem.b_ub(r);
  }
  for (int r = nub; r < rows; ++r) {
    a.row(r).head(nv) = problem.a_eq.row(r - nub);
    b(r) = problem.b_eq(r - nub);
  }

  LpSolution out;
  out.status = LpStatus::kInfeasible;
  if (rows == 0) {
    if (problem.c.size() > 0 && problem.c.minCoeff() < -kTol) {
      out.status = LpStatus::kUnbounded;
      return out;
    }
    out.status = LpStatus::kOptimal;
    out.z = Eigen::VectorXd::Zero(nv);
    out.duals_ub.resize(0);
    out.duals_eq.resize(0);
    return out;
  }
  if (ncols < rows) return out;

  std::vector<Candidate> feasible;
  std::vector<int> idx(rows);
  for (int k = 0; k < rows; ++k) idx[k] = k;
  do {
    Eigen::MatrixXd basis(rows, rows);
    for (int k = 0; k < rows; ++k) basis.col(k) = a.col(idx[k]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    if (lu.rank() < rows) continue;
    const Eigen::VectorXd x_basic = lu.solve(b);
    if (x_basic.minCoeff() < -kTol) continue;
    Eigen::VectorXd c_basic(rows);
    for (int k = 0; k < rows; ++k) c_basic(k) = cost(idx[k]);
    const Eigen::VectorXd y = basis.transpose().fullPivLu().solve(c_basic);
    feasible.push_back({idx, x_basic, y, c_basic.dot(x_basic)});
  } while (NextSubset(idx, ncols));

  if (feasible.empty()) return out;

  double best = std::numeric_limits<double>::infinity();
  for (const Candidate& cand : feasible) best = std::min(best, cand.objective);
  const double tie = kTol * std::max(1.0, std::abs(best));

  for (const Candidate& cand : feasible) {
    if (cand.objective > best + tie) continue;
    const Eigen::VectorXd rc = cost - a.transpose() * cand.y;
    if (rc.minCoeff() < -kTol * std::max(1.0, cost.cwiseAbs().maxCoeff())) {
      continue;
    }
    out.status = LpStatus::kOptimal;
    out.z = Eigen::VectorXd::Zero(nv);
    for (int k = 0; k < rows; ++k) {
      if (cand.cols[k] < nv) out.z(cand.cols[k]) = std::max(0.0, cand.x_basic(k));
    }
    out.duals_ub = -cand.y.head(nub);
    out.duals_eq = cand.y.tail(rows - nub);
    out.objective = problem.c.dot(out.z);
    out.basis = cand.cols;
    return out;
  }
  // Every optimal-valued vertex admits an improving ray.
  out.status = LpStatus::kUnbounded;
  return out;
}

}  // namespace chores_eq
