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

#include "chores_eq/gfw.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace chores_eq {
namespace {

constexpr double kIdentityTol = 1e-7;
constexpr double kMonotoneTol = 1e-9;

double RelErr(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

GfwIterate StartIterate(const ChoresInstance& inst) {
  GfwIterate it;
  it.t = 0;
  it.y = InitialPoint(inst);
  it.x = Allocation::Zero(inst.num_agents(), inst.num_chores());
  it.x_bar = it.x;
  it.objective = DualObjective(inst, it.y);
  it.step_ratio = Eigen::VectorXd::Ones(inst.num_agents());
  it.d_is = 0.0;
  it.eps_estimate = std::numeric_limits<double>::infinity();
  return it;
}

void CheckStep(const ChoresInstance& inst, const GfwIterate& prev,
               const GfwIterate& cur) {
  for (const KktResidual& r : StepIdentityResiduals(inst, prev, cur)) {
    if (r.name != "progress" && r.value > kIdentityTol) {
      throw SolverError("GFW step " + std::to_string(cur.t) + ": identity '" +
                        r.name + "' residual " + std::to_string(r.value));
    }
  }
  if (cur.objective < prev.objective - kMonotoneTol) {
    throw SolverError("GFW step " + std::to_string(cur.t) +
                      " decreased the objective");
  }
  if (cur.objective + inst.total_budget() >
      DualObjectiveUpperBound(inst) + 1e-8) {
    throw SolverError("GFW step " + std::to_string(cur.t) +
                      " exceeded the objective upper bound");
  }
  if (!(cur.y.prices.minCoeff() > 0.0)) {
    throw SolverError("GFW step " + std::to_string(cur.t) +
                      " produced a zero price");
  }
}

}  // namespace

const char* GfwStatusName(GfwStatus status) {
  switch (status) {
    case GfwStatus::kExactKkt:
      return "exact_kkt";
    case GfwStatus::kEpsReached:
      return "eps_reached";
    case GfwStatus::kIterCap:
      return "iter_cap";
  }
  return "unknown";
}

EquilibriumCandidate GfwResult::Candidate() const {
  return {final.y.prices, final.x_bar};
}

KktWitness GfwResult::Witness() const {
  return {final.y.beta, final.y.prices, final.x_bar, final.mu};
}

DualPoint InitialPoint(const ChoresInstance& inst) {
  DualPoint y;
  y.prices = Eigen::VectorXd::Constant(
      inst.num_chores(), inst.total_budget() / inst.num_chores());
  y.beta = InducedBeta(inst, y.prices);
  return y;
}

LpProblem BuildSubproblem(const ChoresInstance& inst,
                          const Eigen::VectorXd& beta_prev) {
  const int n = inst.num_agents();
  const int m = inst.num_chores();
  if (beta_prev.size() != n) {
    throw InvalidArgument("beta_prev has wrong length");
  }
  if (!(beta_prev.minCoeff() > 0.0)) {
    throw InvalidArgument("beta_prev must be strictly positive");
  }
  LpProblem lp;
  lp.c = Eigen::VectorXd::Zero(n + m);
  for (int i = 0; i < n; ++i) lp.c(i) = inst.budget(i) / beta_prev(i);
  lp.a_ub = Eigen::MatrixXd::Zero(n * m, n + m);
  lp.b_ub = Eigen::VectorXd::Zero(n * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      lp.a_ub(i * m + j, i) = -inst.disutility(i, j);
      lp.a_ub(i * m + j, n + j) = 1.0;
    }
  }
  lp.a_eq = Eigen::MatrixXd::Zero(1, n + m);
  lp.a_eq.rightCols(m).setOnes();
  lp.b_eq = Eigen::VectorXd::Constant(1, inst.total_budget());
  return lp;
}

Allocation NormalizeAllocation(const ChoresInstance& inst, const Allocation& x,
                               const Eigen::VectorXd& step_ratio) {
  ValidateAllocation(inst, x);
  if (step_ratio.size() != inst.num_agents()) {
    throw InvalidArgument("step ratio has wrong length");
  }
  if (!(step_ratio.minCoeff() > 0.0)) {
    throw InvalidArgument("step ratio must be strictly positive");
  }
  const double scale =
      inst.total_budget() / inst.budgets().dot(step_ratio);
  return scale * x;
}

std::vector<KktResidual> StepIdentityResiduals(const ChoresInstance& inst,
                                               const GfwIterate& prev,
                                               const GfwIterate& cur) {
  const int n = inst.num_agents();
  const int m = inst.num_chores();
  double disutility = 0.0, outflow = 0.0, allocation = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dis = inst.disutilities().row(i).dot(cur.x.row(i));
    disutility = std::max(
        disutility, RelErr(dis, inst.budget(i) / prev.y.beta(i)));
    const double paid = cur.y.prices.dot(cur.x.row(i).transpose());
    outflow = std::max(outflow, RelErr(dis, paid / cur.y.beta(i)));
  }
  const double supply =
      inst.budgets().dot(cur.step_ratio) / inst.total_budget();
  for (int j = 0; j < m; ++j) {
    allocation = std::max(allocation, RelErr(cur.x.col(j).sum(), supply));
  }

  double progress = 0.0;
  if (cur.t != prev.t) {
    const Certificate cert = CertifyCe(inst, {cur.y.prices, cur.x});
    const double eps = cert.MaxEps();
    const double required = inst.min_budget() * eps * eps / 2.3 - 1e-9;
    progress = std::max(0.0, required - (cur.objective - prev.objective));
  }
  return {{"disutility", disutility},
          {"outflow", outflow},
          {"allocation", allocation},
          {"progress", progress}};
}

long long IterationBound(const ChoresInstance& inst, double eps) {
  if (!(eps > 0.0) || eps > 1.0) {
    throw InvalidArgument("iteration bound needs eps in (0, 1]");
  }
  const double min_b = inst.min_budget();
  const double g = std::max(
      0.0, inst.num_agents() * inst.max_budget() *
               std::log(inst.num_chores() * inst.max_disutility() / min_b));
  const double bound =
      3.0 * g / (min_b * eps * eps) + g / (kIsConstant * min_b);
  if (bound >= 9e18) return std::numeric_limits<long long>::max();
  return std::max(1LL, static_cast<long long>(std::ceil(bound)));
}

GfwResult RunGfw(const ChoresInstance& inst, const GfwConfig& cfg) {
  if (!(cfg.term_tol > 0.0)) throw InvalidArgument("term_tol must be positive");
  if (cfg.trace_stride < 1) throw InvalidArgument("trace_stride must be >= 1");
  if (cfg.eps_target && !(*cfg.eps_target > 0.0 && *cfg.eps_target <= 1.0)) {
    throw InvalidArgument("eps_target must lie in (0, 1]");
  }
  int max_iters = cfg.max_iters;
  if (max_iters <= 0) {
    if (cfg.eps_target) {
      const long long bound = IterationBound(inst, *cfg.eps_target);
      max_iters = static_cast<int>(std::min<long long>(
          bound > std::numeric_limits<int>::max() / 10
              ? std::numeric_limits<int>::max()
              : 10 * bound,
          std::numeric_limits<int>::max()));
    } else {
      max_iters = 10000;
    }
  }

  const int n = inst.num_agents();
  const int m = inst.num_chores();
  GfwResult result;
  GfwIterate cur = StartIterate(inst);
  result.trace.push_back(cur);
  std::vector<int> basis;

  for (int t = 1;; ++t) {
    if (t > max_iters) {
      result.status = GfwStatus::kIterCap;
      result.final = cur;
      break;
    }
    const LpProblem lp = BuildSubproblem(inst, cur.y.beta);
    const LpSolution sol =
        SolveLp(lp, cfg.lp, basis.empty() ? nullptr : &basis);
    if (sol.status != LpStatus::kOptimal) {
      throw SolverError(std::string("GFW subproblem is ") +
                        LpStatusName(sol.status));
    }
    basis = sol.basis;
    result.lp_pivots += sol.pivots;
    result.iters = t;

    GfwIterate next;
    next.t = t;
    next.y.prices = sol.z.tail(m).cwiseMax(0.0);
    if (!(next.y.prices.maxCoeff() > 0.0)) {
      throw SolverError("GFW subproblem returned all-zero prices");
    }
    next.y.beta = InducedBeta(inst, next.y.prices);
    next.x.resize(n, m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        next.x(i, j) = std::max(0.0, sol.duals_ub(i * m + j));
      }
    }
    next.mu = 1.0 - sol.duals_eq(0);
    next.step_ratio = next.y.beta.cwiseQuotient(cur.y.beta);
    next.x_bar = NormalizeAllocation(inst, next.x, next.step_ratio);

    const double gain =
        inst.total_budget() - inst.budgets().dot(next.step_ratio);
    if (gain <= cfg.term_tol * std::max(1.0, std::abs(cur.objective))) {
      result.status = GfwStatus::kExactKkt;
      result.final = cur;
      result.final.x = next.x;
      result.final.x_bar = next.x_bar;
      result.final.mu = next.mu;
      if (cfg.eps_target && !result.first_eps_iter &&
          CertifyCe(inst, result.Candidate())
              .IsStronglyApprox(*cfg.eps_target)) {
        result.first_eps_iter = t;
      }
      break;
    }

    next.objective = DualObjective(inst, next.y);
    next.d_is = ItakuraSaito(next.y.beta, cur.y.beta);
    next.eps_estimate = (next.step_ratio.array() - 1.0).abs().maxCoeff();
    if (cfg.check_invariants) CheckStep(inst, cur, next);
    if (t % cfg.trace_stride == 0) result.trace.push_back(next);

    if (cfg.eps_target && !result.first_eps_iter &&
        CertifyCe(inst, {next.y.prices, next.x_bar})
            .IsStronglyApprox(*cfg.eps_target)) {
      result.first_eps_iter = t;
      if (cfg.stop_at_eps) {
        result.status = GfwStatus::kEpsReached;
        result.final = next;
        cur = next;
        break;
      }
    }
    cur = std::move(next);
  }
  if (result.trace.back().t != cur.t) result.trace.push_back(cur);
  return result;
}

}  // namespace chores_eq
