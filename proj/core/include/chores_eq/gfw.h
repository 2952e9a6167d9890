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

#ifndef CHORES_EQ_GFW_H_
#define CHORES_EQ_GFW_H_

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "chores_eq/certify.h"
#include "chores_eq/lp.h"
#include "chores_eq/market.h"

namespace chores_eq {

// sqrt(3) - 1 - log(3) / 2: the Itakura-Saito level below which the
// divergence dominates a third of the squared relative step.
inline const double kIsConstant = std::sqrt(3.0) - 1.0 - 0.5 * std::log(3.0);

struct GfwConfig {
  // Stop when the linearized gain <grad f(y^t), y^{t+1} - y^t> is at most
  // term_tol * max(1, |f(y^t)|).
  double term_tol = 1e-10;
  // Record the first iterate whose (p, x_bar) certifies as an
  // eps_target-strongly approximate equilibrium.
  std::optional<double> eps_target;
  // Return at that first hit instead of continuing to an exact point.
  bool stop_at_eps = false;
  // <= 0 selects 10 * IterationBound(eps_target) if set, else 10000.
  int max_iters = 0;
  // Throw SolverError when a per-step identity or bound is violated.
  bool check_invariants = false;
  // Keep every k-th iterate in the trace (iterate 0 and the last are kept).
  int trace_stride = 1;
  SimplexOptions lp;
};

enum class GfwStatus { kExactKkt, kEpsReached, kIterCap };

const char* GfwStatusName(GfwStatus status);

struct GfwIterate {
  int t = 0;
  DualPoint y;
  // Raw duals of the inequality rows of the LP that produced y (zero at t=0).
  Allocation x;
  // x scaled so every column sums to one.
  Allocation x_bar;
  // Multiplier of the price-sum constraint in the redundant program's KKT
  // system: 1 minus the LP's equality-row dual, since the LP drops the
  // linear price term of the objective.
  double mu = 0.0;
  double objective = 0.0;
  // beta^t / beta^{t-1} componentwise.
  Eigen::VectorXd step_ratio;
  // D_IS(beta^t || beta^{t-1}).
  double d_is = 0.0;
  // max_i |step_ratio_i - 1|; +inf at t = 0.
  double eps_estimate = 0.0;
};

struct GfwResult {
  // On kExactKkt: y is the last iterate, paired with the duals of the LP that
  // certified it stationary, which form an exact equilibrium with y's prices.
  GfwIterate final;
  std::vector<GfwIterate> trace;
  GfwStatus status = GfwStatus::kIterCap;
  // Number of LP solves.
  int iters = 0;
  // LP solves after which the prices and scaled allocation first met
  // eps_target. Equals an iterate index, except when only the terminal
  // certificate meets it (the exact allocation comes from one extra solve).
  std::optional<int> first_eps_iter;
  long long lp_pivots = 0;

  EquilibriumCandidate Candidate() const;
  KktWitness Witness() const;
};

DualPoint InitialPoint(const ChoresInstance& inst);

// min sum_i (B_i / beta_prev_i) beta_i over z = (beta, p) >= 0 subject to
// p_j - d_ij beta_i <= 0 (row i * m + j) and sum_j p_j = sum_i B_i.
LpProblem BuildSubproblem(const ChoresInstance& inst,
                          const Eigen::VectorXd& beta_prev);

// (sum B / sum_i B_i step_ratio_i) x.
Allocation NormalizeAllocation(const ChoresInstance& inst, const Allocation& x,
                               const Eigen::VectorXd& step_ratio);

// Largest relative residual of the per-step identities for the step
// prev -> cur:
//   disutility:  <d_i, x^cur_i> = B_i / beta^prev_i
//   outflow:     <d_i, x^cur_i> = <p^cur, x^cur_i> / beta^cur_i
//   allocation:  sum_i x^cur_ij = sum_i B_i step_ratio_i / sum B
//   progress:    shortfall of f(cur) - f(prev) below
//                min_i B_i eps^2 / 2.3 - 1e-9, with eps the largest
//                certificate level of (p^cur, x^cur) (zero when it certifies)
std::vector<KktResidual> StepIdentityResiduals(const ChoresInstance& inst,
                                               const GfwIterate& prev,
                                               const GfwIterate& cur);

// ceil(3 G / (min B eps^2) + G / (c min B)) with
// G = n max B log(m max d / min B). eps must lie in (0, 1].
long long IterationBound(const ChoresInstance& inst, double eps);

GfwResult RunGfw(const ChoresInstance& inst, const GfwConfig& cfg = {});

}  // namespace chores_eq

#endif  // CHORES_EQ_GFW_H_
