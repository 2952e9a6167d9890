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

#include "chores_eq/certify.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace chores_eq {
namespace {

// Smallest e with (1 - e) target <= value <= target / (1 - e).
double RangeEps(double value, double target) {
  if (value <= 0.0) return 1.0;
  if (value >= target) return 1.0 - target / value;
  return 1.0 - value / target;
}

void CheckWitnessShape(const ChoresInstance& inst, const KktWitness& w) {
  if (w.beta.size() != inst.num_agents() ||
      w.prices.size() != inst.num_chores()) {
    throw InvalidArgument("KKT witness dimensions do not match instance");
  }
  ValidateAllocation(inst, w.x);
  if (w.beta.minCoeff() <= 0.0) {
    throw InvalidArgument("KKT witness needs strictly positive beta");
  }
}

class ReportBuilder {
 public:
  void Add(const std::string& name, double value) {
    report_.residuals.push_back({name, std::max(0.0, value)});
    report_.max_residual = std::max(report_.max_residual, std::max(0.0, value));
  }
  KktReport Finish(double tol) {
    report_.passed = report_.max_residual <= tol;
    return report_;
  }

 private:
  KktReport report_;
};

// Shared conditions; `clearing_shift` is mu for the redundant program.
void AddCommonResiduals(const ChoresInstance& inst, const KktWitness& w,
                        double clearing_shift, ReportBuilder* out) {
  const int n = inst.num_agents();
  const int m = inst.num_chores();
  double nonneg = 0.0;
  for (int j = 0; j < m; ++j) nonneg = std::max(nonneg, -w.prices(j));
  nonneg = std::max(nonneg, -w.x.minCoeff());
  out->Add("nonnegativity", nonneg);

  double feas = 0.0, feas_cs = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double cap = inst.disutility(i, j) * w.beta(i);
      const double scale = std::max(1.0, cap);
      feas = std::max(feas, (w.prices(j) - cap) / scale);
      feas_cs =
          std::max(feas_cs, std::abs(w.x(i, j) * (cap - w.prices(j))) / scale);
    }
  }
  out->Add("price_cap", feas);
  out->Add("price_cap_complementarity", feas_cs);

  double clear = 0.0, clear_cs = 0.0;
  for (int j = 0; j < m; ++j) {
    const double s = w.x.col(j).sum() + clearing_shift;
    clear = std::max(clear, 1.0 - s);
    clear_cs = std::max(
        clear_cs, std::abs(w.prices(j) * (s - 1.0)) /
                      std::max(1.0, w.prices(j)));
  }
  out->Add("clearing", clear);
  out->Add("clearing_complementarity", clear_cs);

  double dis = 0.0, dis_cs = 0.0;
  for (int i = 0; i < n; ++i) {
    const double have = inst.disutilities().row(i).dot(w.x.row(i));
    const double need = inst.budget(i) / w.beta(i);
    dis = std::max(dis, (need - have) / std::max(1.0, need));
    dis_cs = std::max(dis_cs, std::abs(w.beta(i) * have - inst.budget(i)) /
                                  std::max(1.0, inst.budget(i)));
  }
  out->Add("disutility", dis);
  out->Add("disutility_complementarity", dis_cs);
}

}  // namespace

double Certificate::MaxEps() const {
  return std::max({eps_earning, eps_optimality, eps_supply});
}

bool Certificate::IsExact(double tol) const { return MaxEps() <= tol; }

bool Certificate::IsStronglyApprox(double eps, double exact_tol) const {
  return eps_earning <= eps && eps_optimality <= exact_tol &&
         eps_supply <= exact_tol;
}

Certificate CertifyCe(const ChoresInstance& inst,
                      const EquilibriumCandidate& cand) {
  const int n = inst.num_agents();
  const int m = inst.num_chores();
  if (cand.prices.size() != m) {
    throw InvalidArgument("candidate price vector has wrong length");
  }
  ValidateAllocation(inst, cand.allocation);
  if (cand.prices.minCoeff() < 0.0) {
    throw InvalidArgument("candidate prices must be nonnegative");
  }
  if (!(cand.prices.maxCoeff() > 0.0)) {
    throw InvalidArgument("candidate prices are all zero");
  }
  const Allocation& x = cand.allocation;
  Certificate cert;
  for (int i = 0; i < n; ++i) {
    const double earned = cand.prices.dot(x.row(i).transpose());
    cert.eps_earning =
        std::max(cert.eps_earning, RangeEps(earned, inst.budget(i)));

    const double dis = inst.disutilities().row(i).dot(x.row(i));
    if (dis > 0.0) {
      double ratio = std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j) {
        if (cand.prices(j) > 0.0) {
          ratio = std::min(ratio, inst.disutility(i, j) / cand.prices(j));
        }
      }
      const double best = earned * ratio;
      cert.eps_optimality =
          std::max(cert.eps_optimality, std::max(0.0, 1.0 - best / dis));
    }
  }
  for (int j = 0; j < m; ++j) {
    cert.eps_supply = std::max(cert.eps_supply, RangeEps(x.col(j).sum(), 1.0));
  }
  return cert;
}

double KktReport::Get(const std::string& name) const {
  for (const KktResidual& r : residuals) {
    if (r.name == name) return r.value;
  }
  throw InvalidArgument("no KKT residual named " + name);
}

KktReport CheckKktDual(const ChoresInstance& inst, const KktWitness& w,
                       double tol) {
  CheckWitnessShape(inst, w);
  ReportBuilder out;
  AddCommonResiduals(inst, w, 0.0, &out);
  return out.Finish(tol);
}

KktReport CheckKktRedundant(const ChoresInstance& inst, const KktWitness& w,
                            double tol) {
  CheckWitnessShape(inst, w);
  ReportBuilder out;
  AddCommonResiduals(inst, w, w.mu, &out);
  const double total = inst.total_budget();
  out.Add("price_sum", std::abs(w.prices.sum() - total) / std::max(1.0, total));
  out.Add("mu", std::abs(w.mu));
  return out.Finish(tol);
}

double KktDualityGap(const ChoresInstance& inst, const KktWitness& w) {
  CheckWitnessShape(inst, w);
  const double primal = NashDisutilityLog(inst, w.x);
  double dual = w.prices.sum();
  for (int i = 0; i < inst.num_agents(); ++i) {
    const double b = inst.budget(i);
    dual += -b * std::log(w.beta(i)) + b * std::log(b) - b;
  }
  return std::abs(primal - dual);
}

KktWitness WitnessFromCe(const ChoresInstance& inst,
                         const EquilibriumCandidate& cand) {
  ValidateAllocation(inst, cand.allocation);
  KktWitness w;
  w.beta.resize(inst.num_agents());
  for (int i = 0; i < inst.num_agents(); ++i) {
    const double dis =
        inst.disutilities().row(i).dot(cand.allocation.row(i));
    if (!(dis > 0.0)) {
      throw InvalidArgument("agent " + std::to_string(i) +
                            " has zero disutility");
    }
    w.beta(i) = inst.budget(i) / dis;
  }
  w.prices = cand.prices;
  w.x = cand.allocation;
  w.mu = 0.0;
  return w;
}

}  // namespace chores_eq
