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

#ifndef CHORES_EQ_LP_H_
#define CHORES_EQ_LP_H_

#include <Eigen/Core>

#include <string>
#include <vector>

namespace chores_eq {

// min c.z  s.t.  a_ub z <= b_ub,  a_eq z = b_eq,  z >= 0.
//
// Either constraint block may have zero rows; its column count must still
// equal c.size().
struct LpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd a_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;

  int num_vars() const { return static_cast<int>(c.size()); }
  int num_ub_rows() const { return static_cast<int>(b_ub.size()); }
  int num_eq_rows() const { return static_cast<int>(b_eq.size()); }
  int num_rows() const { return num_ub_rows() + num_eq_rows(); }

  // Throws InvalidArgument on inconsistent shapes or non-finite entries.
  void Validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* LpStatusName(LpStatus status);

// Multiplier conventions (both solvers):
//   duals_ub >= 0 and objective == duals_eq.b_eq - duals_ub.b_ub,
//   reduced costs c + a_ub^T duals_ub - a_eq^T duals_eq >= 0,
//   duals_ub(k) * slack_k == 0 for every inequality row.
//
// Basis indices: [0, num_vars) are structural columns, [num_vars,
// num_vars + num_ub_rows) are inequality slacks, and num_vars + num_ub_rows
// + r is the artificial column of row r (ub rows first, then eq rows). An
// artificial is only basic at level zero, on a redundant equality row.
struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd z;
  Eigen::VectorXd duals_ub;
  Eigen::VectorXd duals_eq;
  double objective = 0.0;
  std::vector<int> basis;
  int pivots = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  // Switch from Dantzig to Bland after this many consecutive degenerate
  // pivots; <= 0 means 3 * (rows + columns).
  int bland_after = 0;
  // Hard pivot cap; <= 0 means 50 * (rows + columns) + 1000.
  int max_pivots = 0;
};

// Dense two-phase revised simplex. `warm_basis` (a `basis` from an earlier
// solve of a problem with the same constraints) skips phase 1 when it is
// still primal feasible; otherwise it is ignored.
//
// Only the rows whose unit column is nonbasic enter the factorized kernel,
// so the cost of a pivot scales with the number of basic structurals rather
// than the row count. Throws SolverError on a singular basis or when the
// pivot cap is exceeded.
LpSolution SolveLp(const LpProblem& problem, const SimplexOptions& options = {},
                   const std::vector<int>* warm_basis = nullptr);

// Test oracle: enumerates every basis of [a_ub I; a_eq 0]. Guarded to
// num_vars <= 12 and num_rows <= 20; throws InvalidArgument beyond that.
LpSolution BruteForceSolveLp(const LpProblem& problem);

struct LpResiduals {
  double primal = 0.0;            // max constraint / bound violation
  double dual = 0.0;              // max reduced-cost or dual-sign violation
  double complementarity = 0.0;   // max |dual_k * slack_k| and |z_j * rc_j|
  double duality_gap = 0.0;       // |c.z - dual objective|
};

LpResiduals ComputeLpResiduals(const LpProblem& problem,
                               const LpSolution& solution);

// One line per constraint, for inspection.
std::string DumpLp(const LpProblem& problem);

}  // namespace chores_eq

#endif  // CHORES_EQ_LP_H_
