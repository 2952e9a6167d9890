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

#include "chores_eq/epm.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace chores_eq {
namespace {

struct Vertex {
  Eigen::VectorXd e;
  Allocation x;
};

void CheckProfile(const ChoresInstance& inst, const Eigen::VectorXd& d) {
  if (d.size() != inst.num_agents()) {
    throw InvalidArgument("disutility profile has wrong length");
  }
  if (!d.allFinite() || d.minCoeff() < 0.0) {
    throw InvalidArgument("disutility profile must be finite and >= 0");
  }
}

// Variables (x row-major, e); rows <d_i, x_i> - e_i <= d_k_i and
// sum_i x_ij = 1.
LpProblem ProjectionOracleLp(const ChoresInstance& inst,
                             const Eigen::VectorXd& d_k) {
  const int n = inst.num_agents();
  const int m = inst.num_chores();
  LpProblem lp;
  lp.c = Eigen::VectorXd::Zero(n * m + n);
  lp.a_ub = Eigen::MatrixXd::Zero(n, n * m + n);
  lp.b_ub = d_k;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) lp.a_ub(i, i * m + j) = inst.disutility(i, j);
    lp.a_ub(i, n * m + i) = -1.0;
  }
  lp.a_eq = Eigen::MatrixXd::Zero(m, n * m + n);
  lp.b_eq = Eigen::VectorXd::Ones(m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) lp.a_eq(j, i * m + j) = 1.0;
  }
  return lp;
}

Allocation UnpackX(const Eigen::VectorXd& z, int n, int m) {
  Allocation x(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) x(i, j) = z(i * m + j);
  }
  return x;
}

Vertex SolveOracle(LpProblem& lp, const Eigen::VectorXd& cost, int n, int m,
                   const SimplexOptions& opts) {
  // Only the direction matters; unscaled costs near a short projection fall
  // below the simplex optimality tolerance.
  const double scale = cost.cwiseAbs().maxCoeff();
  lp.c.setZero();
  lp.c.tail(n) = scale > 0.0 ? Eigen::VectorXd(cost / scale) : cost;
  const LpSolution sol = SolveLp(lp, opts);
  if (sol.status != LpStatus::kOptimal) {
    throw SolverError(std::string("projection oracle LP is ") +
                      LpStatusName(sol.status));
  }
  return {sol.z.tail(n), UnpackX(sol.z, n, m)};
}

// Minimizes |sum_k a_k v_k| subject to sum_k a_k = 1.
Eigen::VectorXd AffineMinimizer(const std::vector<Vertex>& corral) {
  const int k = static_cast<int>(corral.size());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) kkt(a, b) = corral[a].e.dot(corral[b].e);
    kkt(a, k) = 1.0;
    kkt(k, a) = 1.0;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs(k) = 1.0;
  return kkt.completeOrthogonalDecomposition().solve(rhs).head(k);
}

}  // namespace

const char* EpmStatusName(EpmStatus status) {
  switch (status) {
    case EpmStatus::kRunning:
      return "running";
    case EpmStatus::kExact:
      return "exact";
    case EpmStatus::kApprox:
      return "approx";
    case EpmStatus::kFailed:
      return "failed";
  }
  return "unknown";
}

FeasibilityResult MinSlackAllocation(const ChoresInstance& inst,
                                     const Eigen::VectorXd& profile,
                                     const SimplexOptions& lp_opts) {
  CheckProfile(inst, profile);
  const int n = inst.num_agents();
  const int m = inst.num_chores();
  LpProblem lp = ProjectionOracleLp(inst, profile);
  lp.c.tail(n).setOnes();
  const LpSolution sol = SolveLp(lp, lp_opts);
  if (sol.status != LpStatus::kOptimal) {
    throw SolverError(std::string("min-slack LP is ") +
                      LpStatusName(sol.status));
  }
  return {std::max(0.0, sol.objective), UnpackX(sol.z, n, m)};
}

bool IsFeasibleProfile(const ChoresInstance& inst,
                       const Eigen::VectorXd& profile, double threshold) {
  const double slack = MinSlackAllocation(inst, profile).slack;
  return slack <= threshold * std::max(1.0, profile.maxCoeff());
}

ProjectionResult ProjectOntoFeasible(const ChoresInstance& inst,
                                     const Eigen::VectorXd& d_k, double tol,
                                     int max_steps,
                                     const SimplexOptions& lp_opts) {
  CheckProfile(inst, d_k);
  if (!(tol > 0.0)) throw InvalidArgument("projection tol must be positive");
  if (max_steps < 1) throw InvalidArgument("projection needs max_steps >= 1");
  const int n = inst.num_agents();
  const int m = inst.num_chores();
  LpProblem lp = ProjectionOracleLp(inst, d_k);

  std::vector<Vertex> corral;
  std::vector<double> weight;
  corral.push_back(
      SolveOracle(lp, Eigen::VectorXd::Ones(n), n, m, lp_opts));
  weight.push_back(1.0);
  Eigen::VectorXd e = corral[0].e;

  ProjectionResult out;
  for (out.steps = 1; out.steps <= max_steps; ++out.steps) {
    Vertex q = SolveOracle(lp, e, n, m, lp_opts);
    out.fw_gap = std::max(0.0, e.dot(e - q.e));
    if (out.fw_gap <= tol * e.squaredNorm()) {
      out.converged = true;
      break;
    }
    bool duplicate = false;
    for (const Vertex& v : corral) {
      if ((v.e - q.e).cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + v.e.norm())) {
        duplicate = true;
      }
    }
    if (duplicate) {
      // Wolfe cannot move; accept when the gap is below what the oracle's
      // primal tolerance can resolve.
      out.converged = out.fw_gap <= std::sqrt(static_cast<double>(n)) *
                                        lp_opts.feasibility_tol * e.norm();
      break;
    }
    corral.push_back(std::move(q));
    weight.push_back(0.0);

    // Minor cycles: move to the affine minimizer of the corral, dropping
    // points whose weight would turn negative.
    for (;;) {
      const Eigen::VectorXd alpha = AffineMinimizer(corral);
      const int k = static_cast<int>(corral.size());
      if (alpha.minCoeff() > 1e-12) {
        for (int a = 0; a < k; ++a) weight[a] = alpha(a);
        break;
      }
      // Each minor cycle removes at least the blocking point, so the loop
      // ends within |corral| passes.
      double theta = 1.0;
      int blocking = -1;
      for (int a = 0; a < k; ++a) {
        if (alpha(a) <= 1e-12) {
          const double denom = weight[a] - alpha(a);
          const double ratio = denom > 0.0 ? weight[a] / denom : 0.0;
          if (blocking < 0 || ratio < theta) {
            theta = std::min(1.0, ratio);
            blocking = a;
          }
        }
      }
      for (int a = 0; a < k; ++a) {
        weight[a] = (1.0 - theta) * weight[a] + theta * alpha(a);
      }
      weight[blocking] = 0.0;
      int write = 0;
      for (int a = 0; a < k; ++a) {
        if (weight[a] > 1e-14) {
          corral[write] = std::move(corral[a]);
          weight[write] = weight[a];
          ++write;
        }
      }
      corral.resize(write);
      weight.resize(write);
      if (write <= 1) {
        if (write == 1) weight[0] = 1.0;
        break;
      }
    }
    double total = 0.0;
    for (double w : weight) total += w;
    e.setZero();
    for (size_t a = 0; a < corral.size(); ++a) {
      weight[a] /= total;
      e += weight[a] * corral[a].e;
    }
  }
  out.steps = std::min(out.steps, max_steps);
  out.d_star = d_k + e.cwiseMax(0.0);
  out.x_witness = Allocation::Zero(n, m);
  for (size_t a = 0; a < corral.size(); ++a) {
    out.x_witness += weight[a] * corral[a].x;
  }
  return out;
}

Eigen::VectorXd PricesFromNormal(const ChoresInstance& inst,
                                 const Eigen::VectorXd& a) {
  if (a.size() != inst.num_agents()) {
    throw InvalidArgument("normal vector has wrong length");
  }
  Eigen::VectorXd p(inst.num_chores());
  for (int j = 0; j < inst.num_chores(); ++j) {
    p(j) = (a.array() * inst.disutilities().col(j).array()).minCoeff();
  }
  return p;
}

Allocation MbbAllocation(const ChoresInstance& inst, const Eigen::VectorXd& a,
                         const Eigen::VectorXd& prices, double edge_tol,
                         const SimplexOptions& lp_opts) {
  const int n = inst.num_agents();
  const int m = inst.num_chores();
  if (a.size() != n || prices.size() != m) {
    throw InvalidArgument("normal or price vector has wrong length");
  }
  std::vector<std::pair<int, int>> edges;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      if (a(i) * inst.disutility(i, j) <= (1.0 + edge_tol) * prices(j)) {
        edges.emplace_back(i, j);
      }
    }
  }
  // Variables: one per edge, then s.
  const int ne = static_cast<int>(edges.size());
  LpProblem lp;
  lp.c = Eigen::VectorXd::Zero(ne + 1);
  lp.c(ne) = 1.0;
  lp.a_ub = Eigen::MatrixXd::Zero(2 * n, ne + 1);
  lp.b_ub.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    lp.b_ub(2 * i) = inst.budget(i);
    lp.b_ub(2 * i + 1) = -inst.budget(i);
    lp.a_ub(2 * i, ne) = -inst.budget(i);
    lp.a_ub(2 * i + 1, ne) = -inst.budget(i);
  }
  lp.a_eq = Eigen::MatrixXd::Zero(m, ne + 1);
  lp.b_eq = Eigen::VectorXd::Ones(m);
  for (int k = 0; k < ne; ++k) {
    const auto [i, j] = edges[k];
    lp.a_ub(2 * i, k) = prices(j);
    lp.a_ub(2 * i + 1, k) = -prices(j);
    lp.a_eq(j, k) = 1.0;
  }
  const LpSolution sol = SolveLp(lp, lp_opts);
  if (sol.status != LpStatus::kOptimal) {
    throw SolverError(std::string("MBB allocation LP is ") +
                      LpStatusName(sol.status));
  }
  Allocation x = Allocation::Zero(n, m);
  for (int k = 0; k < ne; ++k) {
    x(edges[k].first, edges[k].second) = std::max(0.0, sol.z(k));
  }
  return x;
}

EpmResult RunEpm(const ChoresInstance& inst, const EpmConfig& cfg) {
  const int n = inst.num_agents();
  EpmResult out;
  Eigen::VectorXd d = cfg.d0 ? *cfg.d0
                             : Eigen::VectorXd(
                                   1e-3 * inst.disutilities().rowwise().minCoeff());
  CheckProfile(inst, d);
  if (!(d.minCoeff() > 0.0)) {
    throw InvalidArgument("initial profile must be strictly positive");
  }
  const double total = inst.total_budget();
  out.state.status = EpmStatus::kRunning;
  std::optional<Eigen::VectorXd> a_prev;
  Allocation last_witness;

  // Best strongly approximate pair seen along the way.
  std::optional<EquilibriumCandidate> fallback;
  Certificate fallback_cert;
  auto consider = [&](const EquilibriumCandidate& cand) {
    const Certificate cert = CertifyCe(inst, cand);
    if (!cert.IsStronglyApprox(cfg.approx_eps, cfg.exact_tol)) return;
    if (!fallback || cert.MaxEps() < fallback_cert.MaxEps()) {
      fallback = cand;
      fallback_cert = cert;
    }
  };
  auto fail = [&](const std::string& why) {
    out.state.status = EpmStatus::kFailed;
    out.failure_reason = why;
  };

  try {
    for (int k = 0;; ++k) {
      out.state.k = k;
      out.state.d_k = d;
      const FeasibilityResult feas = MinSlackAllocation(inst, d, cfg.lp);
      EpmTraceRow row;
      row.k = k;
      row.feas_margin = feas.slack;
      const bool feasible =
          feas.slack <= cfg.feas_threshold * std::max(1.0, d.maxCoeff());
      if (feasible) {
        out.trace.push_back(row);
        if (!a_prev) {
          fail("initial profile is already feasible");
          break;
        }
        const Eigen::VectorXd prices = PricesFromNormal(inst, *a_prev);
        out.candidate = {prices, feas.x};
        out.certificate = CertifyCe(inst, out.candidate);
        if (!out.certificate.IsExact(cfg.exact_tol)) {
          const EquilibriumCandidate mbb{
              prices, MbbAllocation(inst, *a_prev, prices, 1e-9, cfg.lp)};
          const Certificate mbb_cert = CertifyCe(inst, mbb);
          if (mbb_cert.MaxEps() < out.certificate.MaxEps()) {
            out.candidate = mbb;
            out.certificate = mbb_cert;
          }
        }
        if (out.certificate.IsExact(cfg.exact_tol)) {
          out.state.status = EpmStatus::kExact;
          break;
        }
        if (out.certificate.IsStronglyApprox(cfg.approx_eps, cfg.exact_tol)) {
          out.state.status = EpmStatus::kApprox;
          break;
        }
        // Fall back to the allocation behind the last projection.
        const EquilibriumCandidate alt{prices, last_witness};
        const Certificate alt_cert = CertifyCe(inst, alt);
        if (alt_cert.IsStronglyApprox(cfg.approx_eps, cfg.exact_tol)) {
          out.candidate = alt;
          out.certificate = alt_cert;
          out.state.status = EpmStatus::kApprox;
          break;
        }
        fail("terminal profile does not yield a strongly approximate CE");
        break;
      }
      if (k >= cfg.max_iters) {
        out.trace.push_back(row);
        fail("iteration cap reached");
        break;
      }
      const ProjectionResult proj = ProjectOntoFeasible(
          inst, d, cfg.proj_tol, cfg.proj_max_steps, cfg.lp);
      ++out.iters;
      row.proj_dist = (proj.d_star - d).norm();
      row.fw_gap = proj.fw_gap;
      out.trace.push_back(row);
      out.state.d_star = proj.d_star;
      if (!proj.converged) {
        fail("projection did not reach the requested gap");
        break;
      }
      const Eigen::VectorXd diff = proj.d_star - d;
      const double denom = diff.dot(proj.d_star);
      if (!(denom > 0.0)) {
        fail("projection did not move the profile");
        break;
      }
      Eigen::VectorXd a = diff * (total / denom);
      const double floor = 1e-12 * a.maxCoeff();
      a = a.cwiseMax(floor);
      out.state.a_k = a;
      a_prev = a;
      last_witness = proj.x_witness;
      const Eigen::VectorXd prices = PricesFromNormal(inst, a);
      consider({prices, MbbAllocation(inst, a, prices, 1e-9, cfg.lp)});
      d = inst.budgets().cwiseQuotient(a);
      if (!d.allFinite()) {
        fail("profile update overflowed");
        break;
      }
    }
  } catch (const SolverError& err) {
    fail(std::string("LP failure: ") + err.what());
  }
  if (out.state.status == EpmStatus::kFailed && fallback) {
    out.candidate = *fallback;
    out.certificate = fallback_cert;
    out.state.status = EpmStatus::kApprox;
    out.failure_reason.clear();
  }
  if (out.state.status == EpmStatus::kFailed && out.candidate.prices.size() == 0 &&
      a_prev) {
    out.candidate = {PricesFromNormal(inst, *a_prev),
                     last_witness.size() > 0
                         ? last_witness
                         : Allocation(Allocation::Zero(n, inst.num_chores()))};
    out.certificate = CertifyCe(inst, out.candidate);
  }
  return out;
}

}  // namespace chores_eq
