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
#include <string>
#include <vector>

#include "chores_eq/lp.h"
#include "chores_eq/market.h"

namespace chores_eq {
namespace {

struct Entry {
  int row;
  double value;
};

// Basis bookkeeping: every row either owns one basic unit column (its slack
// or its artificial) or belongs to the kernel K. The basic structurals S
// satisfy |S| == |K| and B^{-1} only needs the LU of A[K, S].
class RevisedSimplex {
 public:
  RevisedSimplex(const LpProblem& problem, const SimplexOptions& options)
      : problem_(problem), options_(options) {
    nv_ = problem.num_vars();
    nub_ = problem.num_ub_rows();
    rows_ = problem.num_rows();
    ncols_ = nv_ + nub_ + rows_;

    sign_.assign(rows_, 1.0);
    rhs_.resize(rows_);
    has_artificial_.assign(rows_, false);
    for (int r = 0; r < rows_; ++r) {
      const double b = RowRhs(r);
      if (b < 0.0) sign_[r] = -1.0;
      rhs_(r) = sign_[r] * b;
      has_artificial_[r] = (r >= nub_) || sign_[r] < 0.0;
    }
    cols_.assign(nv_, {});
    for (int j = 0; j < nv_; ++j) {
      for (int r = 0; r < rows_; ++r) {
        const double a = RowCoef(r, j);
        if (a != 0.0) cols_[j].push_back({r, sign_[r] * a});
      }
    }
    double cmax = 0.0;
    for (int j = 0; j < nv_; ++j) cmax = std::max(cmax, std::abs(problem.c(j)));
    rc_tol_ = options.optimality_tol * std::max(1.0, cmax);
    const double bmax = rows_ > 0 ? rhs_.cwiseAbs().maxCoeff() : 0.0;
    feas_tol_ = options.feasibility_tol * std::max(1.0, bmax);
    bland_after_ = options.bland_after > 0 ? options.bland_after
                                           : 3 * (rows_ + nv_ + nub_);
    max_pivots_ = options.max_pivots > 0 ? options.max_pivots
                                         : 50 * (rows_ + nv_ + nub_) + 1000;
  }

  LpSolution Run(const std::vector<int>* warm_basis) {
    bool warm = warm_basis != nullptr && TryWarmStart(*warm_basis);
    if (!warm) {
      ColdStart();
      RunPhase(/*phase_one=*/true);
      if (Phase1Objective() > feas_tol_) {
        LpSolution out;
        out.status = LpStatus::kInfeasible;
        out.pivots = pivots_;
        return out;
      }
      DriveOutArtificials();
    }
    const bool bounded = RunPhase(/*phase_one=*/false);
    return Extract(bounded);
  }

 private:
  double RowRhs(int r) const {
    return r < nub_ ? problem_.b_ub(r) : problem_.b_eq(r - nub_);
  }
  double RowCoef(int r, int j) const {
    return r < nub_ ? problem_.a_ub(r, j) : problem_.a_eq(r - nub_, j);
  }

  bool IsStructural(int k) const { return k < nv_; }
  bool IsSlack(int k) const { return k >= nv_ && k < nv_ + nub_; }
  bool IsArtificial(int k) const { return k >= nv_ + nub_; }
  int UnitRow(int k) const { return IsSlack(k) ? k - nv_ : k - nv_ - nub_; }
  double UnitCoef(int k) const {
    return IsSlack(k) ? sign_[UnitRow(k)] : 1.0;
  }
  int SlackOf(int r) const { return nv_ + r; }
  int ArtificialOf(int r) const { return nv_ + nub_ + r; }

  double Cost(int k, bool phase_one) const {
    if (phase_one) return IsArtificial(k) ? 1.0 : 0.0;
    return IsStructural(k) ? problem_.c(k) : 0.0;
  }

  void ColdStart() {
    row_unit_.assign(rows_, -1);
    structurals_.clear();
    for (int r = 0; r < rows_; ++r) {
      row_unit_[r] = (r < nub_ && sign_[r] > 0.0) ? SlackOf(r) : ArtificialOf(r);
    }
    Refactor();
  }

  bool TryWarmStart(const std::vector<int>& basis) {
    if (static_cast<int>(basis.size()) != rows_) return false;
    row_unit_.assign(rows_, -1);
    structurals_.clear();
    for (int k : basis) {
      if (k < 0 || k >= ncols_) return false;
      if (IsStructural(k)) {
        structurals_.push_back(k);
        continue;
      }
      const int r = UnitRow(k);
      if (IsArtificial(k) && !has_artificial_[r]) return false;
      if (row_unit_[r] != -1) return false;
      row_unit_[r] = k;
    }
    std::sort(structurals_.begin(), structurals_.end());
    if (std::adjacent_find(structurals_.begin(), structurals_.end()) !=
        structurals_.end()) {
      return false;
    }
    try {
      Refactor();
    } catch (const SolverError&) {
      return false;
    }
    ComputeValues();
    for (int c = 0; c < static_cast<int>(structurals_.size()); ++c) {
      if (x_s_(c) < -feas_tol_) return false;
    }
    for (int r = 0; r < rows_; ++r) {
      const int k = row_unit_[r];
      if (k < 0) continue;
      if (x_unit_(r) < -feas_tol_) return false;
      if (IsArtificial(k) && std::abs(x_unit_(r)) > feas_tol_) return false;
    }
    return true;
  }

  void Refactor() {
    std::sort(structurals_.begin(), structurals_.end());
    kernel_rows_.clear();
    kernel_pos_.assign(rows_, -1);
    for (int r = 0; r < rows_; ++r) {
      if (row_unit_[r] < 0) {
        kernel_pos_[r] = static_cast<int>(kernel_rows_.size());
        kernel_rows_.push_back(r);
      }
    }
    const int k = static_cast<int>(kernel_rows_.size());
    if (k != static_cast<int>(structurals_.size())) {
      throw SolverError("simplex basis bookkeeping is inconsistent");
    }
    if (k == 0) return;
    Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(k, k);
    for (int c = 0; c < k; ++c) {
      for (const Entry& e : cols_[structurals_[c]]) {
        if (kernel_pos_[e.row] >= 0) kernel(kernel_pos_[e.row], c) = e.value;
      }
    }
    lu_.compute(kernel);
    const Eigen::VectorXd diag = lu_.matrixLU().diagonal().cwiseAbs();
    const double scale = std::max(1.0, kernel.cwiseAbs().maxCoeff());
    if (diag.minCoeff() <= 1e-11 * scale) {
      throw SolverError("numerically singular simplex basis");
    }
  }

  // Solves B w = a; w_s_ holds the structural part (kernel order) and
  // w_unit_(r) the component of the unit column basic in row r.
  void Ftran(const Eigen::VectorXd& a, Eigen::VectorXd* w_s,
             Eigen::VectorXd* w_unit) const {
    const int k = static_cast<int>(kernel_rows_.size());
    w_s->resize(k);
    if (k > 0) {
      Eigen::VectorXd a_k(k);
      for (int c = 0; c < k; ++c) a_k(c) = a(kernel_rows_[c]);
      *w_s = lu_.solve(a_k);
    }
    Eigen::VectorXd t = a;
    for (int c = 0; c < k; ++c) {
      const double v = (*w_s)(c);
      if (v == 0.0) continue;
      for (const Entry& e : cols_[structurals_[c]]) t(e.row) -= e.value * v;
    }
    w_unit->setZero(rows_);
    for (int r = 0; r < rows_; ++r) {
      if (row_unit_[r] >= 0) (*w_unit)(r) = t(r) / UnitCoef(row_unit_[r]);
    }
  }

  // Solves y^T B = c_B^T for the given basic costs.
  Eigen::VectorXd Btran(const Eigen::VectorXd& c_s,
                        const Eigen::VectorXd& c_unit) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(rows_);
    for (int r = 0; r < rows_; ++r) {
      if (row_unit_[r] >= 0) y(r) = c_unit(r) / UnitCoef(row_unit_[r]);
    }
    const int k = static_cast<int>(kernel_rows_.size());
    if (k > 0) {
      Eigen::VectorXd rhs = c_s;
      for (int c = 0; c < k; ++c) {
        for (const Entry& e : cols_[structurals_[c]]) {
          if (kernel_pos_[e.row] < 0) rhs(c) -= e.value * y(e.row);
        }
      }
      const Eigen::VectorXd y_k = lu_.transpose().solve(rhs);
      for (int c = 0; c < k; ++c) y(kernel_rows_[c]) = y_k(c);
    }
    return y;
  }

  void ComputeValues() { Ftran(rhs_, &x_s_, &x_unit_); }

  Eigen::VectorXd Duals(bool phase_one) const {
    const int k = static_cast<int>(structurals_.size());
    Eigen::VectorXd c_s(k);
    for (int c = 0; c < k; ++c) c_s(c) = Cost(structurals_[c], phase_one);
    Eigen::VectorXd c_unit = Eigen::VectorXd::Zero(rows_);
    for (int r = 0; r < rows_; ++r) {
      if (row_unit_[r] >= 0) c_unit(r) = Cost(row_unit_[r], phase_one);
    }
    return Btran(c_s, c_unit);
  }

  double ReducedCost(int q, const Eigen::VectorXd& y, bool phase_one) const {
    if (IsStructural(q)) {
      double rc = Cost(q, phase_one);
      for (const Entry& e : cols_[q]) rc -= e.value * y(e.row);
      return rc;
    }
    return Cost(q, phase_one) - UnitCoef(q) * y(UnitRow(q));
  }

  Eigen::VectorXd DenseColumn(int q) const {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(rows_);
    if (IsStructural(q)) {
      for (const Entry& e : cols_[q]) a(e.row) = e.value;
    } else {
      a(UnitRow(q)) = UnitCoef(q);
    }
    return a;
  }

  double Phase1Objective() const {
    double total = 0.0;
    for (int r = 0; r < rows_; ++r) {
      if (row_unit_[r] >= 0 && IsArtificial(row_unit_[r])) {
        total += std::max(0.0, x_unit_(r));
      }
    }
    return total;
  }

  std::vector<char> BasicMask() const {
    std::vector<char> basic(ncols_, 0);
    for (int s : structurals_) basic[s] = 1;
    for (int r = 0; r < rows_; ++r) {
      if (row_unit_[r] >= 0) basic[row_unit_[r]] = 1;
    }
    return basic;
  }

  // Replaces basic variable `leaving` with column `entering`.
  void Pivot(int entering, int leaving) {
    if (IsStructural(leaving)) {
      structurals_.erase(
          std::find(structurals_.begin(), structurals_.end(), leaving));
    } else {
      row_unit_[UnitRow(leaving)] = -1;
    }
    if (IsStructural(entering)) {
      structurals_.push_back(entering);
    } else {
      row_unit_[UnitRow(entering)] = entering;
    }
    ++pivots_;
    if (pivots_ > max_pivots_) {
      throw SolverError("simplex pivot cap exceeded (" +
                        std::to_string(max_pivots_) + ")");
    }
    Refactor();
  }

  // Returns false if phase 2 detects an unbounded ray.
  bool RunPhase(bool phase_one) {
    int degenerate_run = 0;
    for (;;) {
      ComputeValues();
      const Eigen::VectorXd y = Duals(phase_one);
      const std::vector<char> basic = BasicMask();
      const bool bland = degenerate_run >= bland_after_;

      int entering = -1;
      double best_rc = -rc_tol_;
      for (int q = 0; q < nv_ + nub_; ++q) {
        if (basic[q]) continue;
        const double rc = ReducedCost(q, y, phase_one);
        if (rc < best_rc) {
          entering = q;
          if (bland) break;
          best_rc = rc;
        }
      }
      if (entering < 0) return true;

      Eigen::VectorXd w_s, w_unit;
      Ftran(DenseColumn(entering), &w_s, &w_unit);

      int leaving = -1;
      double best_theta = std::numeric_limits<double>::infinity();
      double best_w = 0.0;
      auto consider = [&](int var, double value, double w) {
        double theta;
        if (!phase_one && IsArtificial(var)) {
          if (std::abs(w) <= options_.pivot_tol) return;
          theta = 0.0;
          w = std::abs(w);
        } else {
          if (w <= options_.pivot_tol) return;
          theta = std::max(value, 0.0) / w;
        }
        const double tie = 1e-12 * std::max(1.0, best_theta);
        bool take = false;
        if (leaving < 0 || theta < best_theta - tie) {
          take = true;
        } else if (theta <= best_theta + tie) {
          if (bland) {
            take = var < leaving;
          } else {
            take = w > best_w || (w == best_w && var < leaving);
          }
        }
        if (take) {
          leaving = var;
          best_theta = std::min(theta, best_theta);
          best_w = w;
        }
      };
      for (int c = 0; c < static_cast<int>(structurals_.size()); ++c) {
        consider(structurals_[c], x_s_(c), w_s(c));
      }
      for (int r = 0; r < rows_; ++r) {
        if (row_unit_[r] >= 0) consider(row_unit_[r], x_unit_(r), w_unit(r));
      }
      if (leaving < 0) {
        if (phase_one) throw SolverError("phase 1 reported an unbounded ray");
        unbounded_ray_ = entering;
        return false;
      }
      degenerate_run = best_theta <= 1e-12 ? degenerate_run + 1 : 0;
      Pivot(entering, leaving);
    }
  }

  void DriveOutArtificials() {
    for (int r = 0; r < rows_; ++r) {
      const int art = row_unit_[r];
      if (art < 0 || !IsArtificial(art)) continue;
      // Row of B^{-1} belonging to this artificial.
      const int k = static_cast<int>(structurals_.size());
      Eigen::VectorXd c_unit = Eigen::VectorXd::Zero(rows_);
      c_unit(r) = 1.0;
      const Eigen::VectorXd rho = Btran(Eigen::VectorXd::Zero(k), c_unit);
      const std::vector<char> basic = BasicMask();
      int best = -1;
      double best_alpha = 1e-7;
      for (int q = 0; q < nv_ + nub_; ++q) {
        if (basic[q]) continue;
        double alpha;
        if (IsStructural(q)) {
          alpha = 0.0;
          for (const Entry& e : cols_[q]) alpha += e.value * rho(e.row);
        } else {
          alpha = UnitCoef(q) * rho(UnitRow(q));
        }
        if (std::abs(alpha) > best_alpha) {
          best_alpha = std::abs(alpha);
          best = q;
        }
      }
      if (best >= 0) Pivot(best, art);
    }
    ComputeValues();
  }

  LpSolution Extract(bool bounded) {
    LpSolution out;
    out.pivots = pivots_;
    if (!bounded) {
      out.status = LpStatus::kUnbounded;
      return out;
    }
    out.status = LpStatus::kOptimal;
    ComputeValues();
    out.z = Eigen::VectorXd::Zero(nv_);
    for (int c = 0; c < static_cast<int>(structurals_.size()); ++c) {
      out.z(structurals_[c]) = std::max(0.0, x_s_(c));
    }
    const Eigen::VectorXd y = Duals(/*phase_one=*/false);
    out.duals_ub.resize(nub_);
    out.duals_eq.resize(rows_ - nub_);
    for (int r = 0; r < rows_; ++r) {
      const double y_orig = sign_[r] * y(r);
      if (r < nub_) {
        out.duals_ub(r) = -y_orig;
      } else {
        out.duals_eq(r - nub_) = y_orig;
      }
    }
    out.objective = problem_.c.dot(out.z);
    for (int s : structurals_) out.basis.push_back(s);
    for (int r = 0; r < rows_; ++r) {
      if (row_unit_[r] >= 0) out.basis.push_back(row_unit_[r]);
    }
    std::sort(out.basis.begin(), out.basis.end());
    return out;
  }

  const LpProblem& problem_;
  const SimplexOptions options_;
  int nv_ = 0, nub_ = 0, rows_ = 0, ncols_ = 0;
  double rc_tol_ = 0.0, feas_tol_ = 0.0;
  int bland_after_ = 0, max_pivots_ = 0, pivots_ = 0;
  int unbounded_ray_ = -1;

  std::vector<double> sign_;
  Eigen::VectorXd rhs_;
  std::vector<bool> has_artificial_;
  std::vector<std::vector<Entry>> cols_;

  std::vector<int> row_unit_;
  std::vector<int> structurals_;
  std::vector<int> kernel_rows_;
  std::vector<int> kernel_pos_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd x_s_, x_unit_;
};

}  // namespace

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

LpSolution SolveLp(const LpProblem& problem, const SimplexOptions& options,
                   const std::vector<int>* warm_basis) {
  problem.Validate();
  RevisedSimplex simplex(problem, options);
  return simplex.Run(warm_basis);
}

}  // namespace chores_eq
