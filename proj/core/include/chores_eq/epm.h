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

#ifndef CHORES_EQ_EPM_H_
#define CHORES_EQ_EPM_H_

#include <optional>
#include <string>
#include <vector>

#include "chores_eq/certify.h"
#include "chores_eq/lp.h"
#include "chores_eq/market.h"

namespace chores_eq {

struct EpmConfig {
  // Frank-Wolfe gap at which a projection is accepted.
  double proj_tol = 1e-8;
  int proj_max_steps = 20000;
  int max_iters = 200;
  // Initial profile; defaults to 1e-3 * min_j d_ij per agent.
  std::optional<Eigen::VectorXd> d0;
  // A profile is feasible when the minimal total slack is at most
  // feas_threshold * max(1, max_i d_i).
  double feas_threshold = 1e-9;
  double exact_tol = kExactTol;
  double approx_eps = 1e-2;
  SimplexOptions lp;
};

enum class EpmStatus { kRunning, kExact, kApprox, kFailed };

const char* EpmStatusName(EpmStatus status);

struct EpmState {
  int k = 0;
  Eigen::VectorXd d_k;
  Eigen::VectorXd d_star;
  Eigen::VectorXd a_k;
  EpmStatus status = EpmStatus::kRunning;
};

struct EpmTraceRow {
  int k = 0;
  double proj_dist = 0.0;
  double fw_gap = 0.0;
  double feas_margin = 0.0;
};

struct EpmResult {
  EpmState state;
  EquilibriumCandidate candidate;
  Certificate certificate;
  std::vector<EpmTraceRow> trace;
  // Number of projections performed.
  int iters = 0;
  std::string failure_reason;
};

struct FeasibilityResult {
  // min sum_i s_i s.t. <d_i, x_i> <= profile_i + s_i, sum_i x_ij = 1.
  double slack = 0.0;
  Allocation x;
};

FeasibilityResult MinSlackAllocation(const ChoresInstance& inst,
                                     const Eigen::VectorXd& profile,
                                     const SimplexOptions& lp = {});

bool IsFeasibleProfile(const ChoresInstance& inst,
                       const Eigen::VectorXd& profile,
                       double threshold = 1e-9);

struct ProjectionResult {
  Eigen::VectorXd d_star;
  Allocation x_witness;
  double fw_gap = 0.0;
  int steps = 0;
  bool converged = false;
};

// Euclidean projection of d_k onto {d in D+ : d >= d_k}. Since D+ is upward
// closed, this is a min-norm point problem over e = d - d_k >= 0, solved with
// Wolfe's method; the linear oracle is an LP over (x, e). x_witness is the
// matching convex combination of oracle allocations, so <d_i, x_i> <=
// d_star_i. Stops when the Frank-Wolfe gap <e, e - q> is at most tol |e|^2;
// an absolute test would accept any point once |e|^2 falls below tol, and
// the normal of a short projection would then point the wrong way. When the
// oracle repeats a corral vertex, the projection is accepted only if the gap
// is within sqrt(n) * lp.feasibility_tol * |e|.
ProjectionResult ProjectOntoFeasible(const ChoresInstance& inst,
                                     const Eigen::VectorXd& d_k, double tol,
                                     int max_steps = 20000,
                                     const SimplexOptions& lp = {});

// p_j = min_i a_i d_ij.
Eigen::VectorXd PricesFromNormal(const ChoresInstance& inst,
                                 const Eigen::VectorXd& a);

// An allocation on the minimum pain-per-buck edges of `prices` (edges with
// a_i d_ij <= (1 + edge_tol) p_j) that clears every chore and minimizes the
// largest relative earning error |<p, x_i> - B_i| / B_i.
Allocation MbbAllocation(const ChoresInstance& inst, const Eigen::VectorXd& a,
                         const Eigen::VectorXd& prices, double edge_tol = 1e-9,
                         const SimplexOptions& lp = {});

// Cutting-plane loop d^{k+1} = B / a^k with a^k = (d* - d^k) sum B /
// <d* - d^k, d*>. At a feasible profile the prices p_j = min_i a_i d_ij of
// the last normal are paired with the min-slack allocation, then with
// MbbAllocation. Every normal along the way is also paired with its
// MbbAllocation; when the loop itself does not end in an equilibrium, the
// best such pair that is strongly approximate is returned with kApprox.
// Otherwise numerical trouble and the iteration cap are reported as kFailed
// with failure_reason set; only invalid input throws.
EpmResult RunEpm(const ChoresInstance& inst, const EpmConfig& cfg = {});

}  // namespace chores_eq

#endif  // CHORES_EQ_EPM_H_
