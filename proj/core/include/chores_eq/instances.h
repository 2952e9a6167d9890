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

#ifndef CHORES_EQ_INSTANCES_H_
#define CHORES_EQ_INSTANCES_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chores_eq/market.h"
#include "chores_eq/rng.h"

namespace chores_eq {

// Disutility distributions of the random suites:
//   uniform01    U[0, 1), exact zeros resampled
//   lognormal    exp(N(0, 1))
//   truncnormal  N(0, 1) conditioned on [1e-3, 10] (rejection)
//   exponential  -log(1 - U), scale 1
//   randint      1 + floor(1000 U), uniform on {1, ..., 1000}
enum class Distribution {
  kUniform01,
  kLognormal,
  kTruncNormal,
  kExponential,
  kRandInt,
};

const char* DistributionName(Distribution dist);
// Throws InvalidArgument on an unknown name.
Distribution ParseDistribution(const std::string& name);
std::vector<Distribution> AllDistributions();

double SampleDisutility(Distribution dist, Xoshiro256& rng);

struct GenSpec {
  int n = 1;
  // Chore count; <= 0 means square (m = n).
  int m = 0;
  Distribution dist = Distribution::kUniform01;
  std::uint64_t seed = 0;
  // Defaults to all ones.
  std::optional<Eigen::VectorXd> budgets;
};

// Entries are drawn row-major from Xoshiro256(seed).
ChoresInstance Generate(const GenSpec& spec);

// Two agents, one chore, d = [[2], [1]]. Unique CE: p = 2, beta = (1, 2).
ChoresInstance SingleChoreInstance();

// Two agents and eight chores with U[0, 1) disutilities.
ChoresInstance TwoByEightInstance(std::uint64_t seed = 2);

// d = [[1, M], [1 - eps, 1 + eps]]. Its unique CEEI has prices
// (2 / (M + 1), 2M / (M + 1)) while p = (1 - eps, 1 + eps) is nearly an
// equilibrium.
ChoresInstance FarApartInstance(double big_m = 100.0, double eps = 0.01);

struct NamedInstance {
  std::string name;
  ChoresInstance instance;
};

// "fig1", "fig2" and "appendixB" with default parameters.
std::vector<NamedInstance> Fixtures();

// Ordinal bids of reviewers on papers.
enum class Bid { kYes, kMaybe, kNoResponse, kNo, kConflict };

// Throws InvalidArgument on an unknown label.
Bid ParseBid(const std::string& label);
const char* BidName(Bid bid);

struct BidMapping {
  double yes = 1.0;
  double maybe = 3.0;
  double no_response = 5.0;
  double no = 7.0;
  double conflict = 4000.0;

  double Value(Bid bid) const;
};

// rows = members, columns = papers.
using BidMatrix = std::vector<std::vector<Bid>>;

// Headerless CSV with one row per member and cells from {yes, maybe,
// no_response, no, conflict}. Throws InvalidArgument on ragged rows.
BidMatrix ParseBidCsv(std::istream& in);

struct BidSpec {
  int n = 2;
  std::uint64_t seed = 0;
  double noise_sd = 0.0;
  BidMapping mapping;
};

struct BidSubsample {
  ChoresInstance instance;
  std::vector<int> members;
  std::vector<int> papers;
};

// Picks a paper uniformly, keeps the n papers closest to it (Euclidean
// distance between mapped columns), then the n members with the most
// non-conflict bids on those papers. Ties go to the lowest index and the
// chosen indices are returned sorted. Noise N(0, noise_sd^2) comes from a
// stream separate from the selection and results are clamped to >= 1e-6.
BidSubsample SubsampleBidding(const BidMatrix& bids, const BidSpec& spec);

}  // namespace chores_eq

#endif  // CHORES_EQ_INSTANCES_H_
