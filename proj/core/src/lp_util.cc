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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "chores_eq/lp.h"
#include "chores_eq/market.h"

namespace chores_eq {
namespace {

bool AllFinite(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace

void LpProblem::Validate() const {
  const Eigen::Index nv = c.size();
  if (a_ub.rows() != b_ub.size() || (a_ub.rows() > 0 && a_ub.cols() != nv)) {
    throw InvalidArgument("inequality block has inconsistent shape");
  }
  if (a_eq.rows() != b_eq.size() || (a_eq.rows() > 0 && a_eq.cols() != nv)) {
    throw InvalidArgument("equality block has inconsistent shape");
  }
  if (!AllFinite(c) || !AllFinite(a_ub) || !AllFinite(b_ub) ||
      !AllFinite(a_eq) || !AllFinite(b_eq)) {
    throw InvalidArgument("LP data contains a non-finite entry");
  }
}

LpResiduals ComputeLpResiduals(const LpProblem& problem,
                               const LpSolution& solution) {
  LpResiduals res;
  if (solution.status != LpStatus::kOptimal) return res;
  const Eigen::VectorXd& z = solution.z;
  const int nub = problem.num_ub_rows();
  const int neq = problem.num_eq_rows();

  Eigen::VectorXd rc = problem.c;
  if (nub > 0) rc += problem.a_ub.transpose() * solution.duals_ub;
  if (neq > 0) rc -= problem.a_eq.transpose() * solution.duals_eq;

  for (int j = 0; j < problem.num_vars(); ++j) {
    res.primal = std::max(res.primal, -z(j));
    res.dual = std::max(res.dual, -rc(j));
    res.complementarity =
        std::max(res.complementarity, std::abs(z(j) * rc(j)));
  }
  for (int r = 0; r < nub; ++r) {
    const double slack = problem.b_ub(r) - problem.a_ub.row(r).dot(z);
    res.primal = std::max(res.primal, -slack);
    res.dual = std::max(res.dual, -solution.duals_ub(r));
    res.complementarity =
        std::max(res.complementarity, std::abs(solution.duals_ub(r) * slack));
  }
  for (int r = 0; r < neq; ++r) {
    res.primal = std::max(
        res.primal, std::abs(problem.a_eq.row(r).dot(z) - problem.b_eq(r)));
  }
  double dual_obj = 0.0;
  if (nub > 0) dual_obj -= solution.duals_ub.dot(problem.b_ub);
  if (neq > 0) dual_obj += solution.duals_eq.dot(problem.b_eq);
  res.duality_gap = std::abs(problem.c.dot(z) - dual_obj);
  return res;
}

std::string DumpLp(const LpProblem& problem) {
  std::ostringstream out;
  out.precision(17);
  auto row = [&](const Eigen::VectorXd& coef) {
    bool first = true;
    for (Eigen::Index j = 0; j < coef.size(); ++j) {
      if (coef(j) == 0.0) continue;
      out << (first ? "" : " ") << (coef(j) < 0 ? "- " : (first ? "" : "+ "))
          << std::abs(coef(j)) << " z" << j;
      first = false;
    }
    if (first) out << "0";
  };
  out << "min: ";
  row(problem.c);
  out << "\n";
  for (int r = 0; r < problem.num_ub_rows(); ++r) {
    out << "ub" << r << ": ";
    row(problem.a_ub.row(r).transpose());
    out << " <= " << problem.b_ub(r) << "\n";
  }
  for (int r = 0; r < problem.num_eq_rows(); ++r) {
    out << "eq" << r << ": ";
    row(problem.a_eq.row(r).transpose());
    out << " = " << problem.b_eq(r) << "\n";
  }
  return out.str();
}

}  // namespace chores_eq
