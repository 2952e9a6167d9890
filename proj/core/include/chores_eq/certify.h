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

#ifndef CHORES_EQ_CERTIFY_H_
#define CHORES_EQ_CERTIFY_H_

#include <string>
#include <vector>

#include "chores_eq/market.h"

namespace chores_eq {

// Threshold at which a condition is treated as holding exactly.
inline constexpr double kExactTol = 1e-6;

// Smallest epsilon for which each relaxed equilibrium condition holds:
//   earning:    (1 - e) B_i <= <p, x_i> <= B_i / (1 - e)
//   optimality: (1 - e) <d_i, x_i> <= <d_i, y_i> whenever <p, y_i> >= <p, x_i>
//   supply:     1 - e <= sum_i x_ij <= 1 / (1 - e)
// Each value lies in [0, 1].
struct Certificate {
  double eps_earning = 0.0;
  double eps_optimality = 0.0;
  double eps_supply = 0.0;

  double MaxEps() const;
  bool IsExact(double tol = kExactTol) const;
  // Earning relaxed to `eps`; optimality and supply within `exact_tol`.
  bool IsStronglyApprox(double eps, double exact_tol = kExactTol) const;
};

// Throws InvalidArgument on shape mismatch, negative entries or an all-zero
// price vector.
Certificate CertifyCe(const ChoresInstance& inst,
                      const EquilibriumCandidate& cand);

struct KktWitness {
  Eigen::VectorXd beta;
  Eigen::VectorXd prices;
  Allocation x;
  double mu = 0.0;
};

struct KktResidual {
  std::string name;
  double value = 0.0;
};

struct KktReport {
  std::vector<KktResidual> residuals;
  double max_residual = 0.0;
  bool passed = false;

  // Residual by name; throws InvalidArgument when absent.
  double Get(const std::string& name) const;
};

// Conditions of the plain chores dual: nonnegativity, p_j <= beta_i d_ij with
// complementarity against x_ij, sum_i x_ij >= 1 with complementarity against
// p_j, and <d_i, x_i> >= B_i / beta_i with complementarity against beta_i.
// Residuals are relative to max(1, natural scale of the condition).
KktReport CheckKktDual(const ChoresInstance& inst, const KktWitness& w,
                       double tol);

// Same set with the clearing condition shifted to sum_i x_ij + mu >= 1, plus
// the price-sum equality. A point only passes when also |mu| <= tol.
KktReport CheckKktRedundant(const ChoresInstance& inst, const KktWitness& w,
                            double tol);

// |sum_i B_i log<d_i, x_i> - (sum_j p_j - sum_i B_i log beta_i
//   + sum_i (B_i log B_i - B_i))|; zero at KKT points.
double KktDualityGap(const ChoresInstance& inst, const KktWitness& w);

// beta_i = B_i / <d_i, x_i> and mu = 0: the witness of a CE.
KktWitness WitnessFromCe(const ChoresInstance& inst,
                         const EquilibriumCandidate& cand);

}  // namespace chores_eq

#endif  // CHORES_EQ_CERTIFY_H_
