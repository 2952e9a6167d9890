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

#include "chores_eq/instances.h"

#include <cmath>
#include <string>

namespace chores_eq {

const char* DistributionName(Distribution dist) {
  switch (dist) {
    case Distribution::kUniform01:
      return "uniform01";
    case Distribution::kLognormal:
      return "lognormal";
    case Distribution::kTruncNormal:
      return "truncnormal";
    case Distribution::kExponential:
      return "exponential";
    case Distribution::kRandInt:
      return "randint";
  }
  return "unknown";
}

Distribution ParseDistribution(const std::string& name) {
  for (Distribution d : AllDistributions()) {
    if (name == DistributionName(d)) return d;
  }
  throw InvalidArgument("unknown distribution '" + name + "'");
}

std::vector<Distribution> AllDistributions() {
  return {Distribution::kUniform01, Distribution::kLognormal,
          Distribution::kTruncNormal, Distribution::kExponential,
          Distribution::kRandInt};
}

double SampleDisutility(Distribution dist, Xoshiro256& rng) {
  switch (dist) {
    case Distribution::kUniform01:
      return rng.UniformPositive();
    case Distribution::kLognormal:
      return std::exp(rng.Normal());
    case Distribution::kTruncNormal:
      for (;;) {
        const double z = rng.Normal();
        if (z >= 1e-3 && z <= 10.0) return z;
      }
    case Distribution::kExponential:
      return -std::log1p(-rng.Uniform01());
    case Distribution::kRandInt:
      return 1.0 + std::floor(1000.0 * rng.Uniform01());
  }
  throw InvalidArgument("unknown distribution");
}

ChoresInstance Generate(const GenSpec& spec) {
  if (spec.n < 1) throw InvalidArgument("instance size must be >= 1");
  const int m = spec.m > 0 ? spec.m : spec.n;
  Xoshiro256 rng(spec.seed);
  Eigen::MatrixXd d(spec.n, m);
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < m; ++j) d(i, j) = SampleDisutility(spec.dist, rng);
  }
  Eigen::VectorXd b =
      spec.budgets ? *spec.budgets : Eigen::VectorXd::Ones(spec.n);
  return ChoresInstance(std::move(d), std::move(b));
}

ChoresInstance SingleChoreInstance() {
  Eigen::MatrixXd d(2, 1);
  d << 2.0, 1.0;
  return ChoresInstance::Ceei(d);
}

ChoresInstance TwoByEightInstance(std::uint64_t seed) {
  GenSpec spec;
  spec.n = 2;
  spec.m = 8;
  spec.seed = seed;
  return Generate(spec);
}

ChoresInstance FarApartInstance(double big_m, double eps) {
  if (!(big_m > 0.0) || !(eps >= 0.0 && eps < 1.0)) {
    throw InvalidArgument("need M > 0 and eps in [0, 1)");
  }
  Eigen::MatrixXd d(2, 2);
  d << 1.0, big_m, 1.0 - eps, 1.0 + eps;
  return ChoresInstance::Ceei(d);
}

std::vector<NamedInstance> Fixtures() {
  return {{"fig1", SingleChoreInstance()},
          {"fig2", TwoByEightInstance()},
          {"appendixB", FarApartInstance()}};
}

}  // namespace chores_eq
