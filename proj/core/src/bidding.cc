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
#include <istream>
#include <numeric>
#include <sstream>
#include <string>

#include "chores_eq/instances.h"

namespace chores_eq {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// Indices of the k smallest keys; ties keep the lower index.
std::vector<int> SmallestK(const std::vector<double>& key, int k) {
  std::vector<int> order(key.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return key[a] < key[b]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

Bid ParseBid(const std::string& label) {
  const std::string t = Trim(label);
  if (t == "yes") return Bid::kYes;
  if (t == "maybe") return Bid::kMaybe;
  if (t == "no_response") return Bid::kNoResponse;
  if (t == "no") return Bid::kNo;
  if (t == "conflict") return Bid::kConflict;
  throw InvalidArgument("unknown bid label '" + t + "'");
}

const char* BidName(Bid bid) {
  switch (bid) {
    case Bid::kYes:
      return "yes";
    case Bid::kMaybe:
      return "maybe";
    case Bid::kNoResponse:
      return "no_response";
    case Bid::kNo:
      return "no";
    case Bid::kConflict:
      return "conflict";
  }
  return "unknown";
}

double BidMapping::Value(Bid bid) const {
  switch (bid) {
    case Bid::kYes:
      return yes;
    case Bid::kMaybe:
      return maybe;
    case Bid::kNoResponse:
      return no_response;
    case Bid::kNo:
      return no;
    case Bid::kConflict:
      return conflict;
  }
  return conflict;
}

BidMatrix ParseBidCsv(std::istream& in) {
  BidMatrix bids;
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    std::vector<Bid> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(ParseBid(cell));
    if (!bids.empty() && row.size() != bids.front().size()) {
      throw InvalidArgument("bid CSV row " + std::to_string(bids.size() + 1) +
                            " has " + std::to_string(row.size()) +
                            " cells, expected " +
                            std::to_string(bids.front().size()));
    }
    bids.push_back(std::move(row));
  }
  return bids;
}

BidSubsample SubsampleBidding(const BidMatrix& bids, const BidSpec& spec) {
  const int members = static_cast<int>(bids.size());
  const int papers = members > 0 ? static_cast<int>(bids.front().size()) : 0;
  if (spec.n < 1 || spec.n > members || spec.n > papers) {
    throw InvalidArgument("subsample size " + std::to_string(spec.n) +
                          " exceeds the " + std::to_string(members) + "x" +
                          std::to_string(papers) + " bid matrix");
  }
  if (!(spec.noise_sd >= 0.0)) throw InvalidArgument("noise_sd must be >= 0");
  for (Bid b : {Bid::kYes, Bid::kMaybe, Bid::kNoResponse, Bid::kNo,
                Bid::kConflict}) {
    if (!(spec.mapping.Value(b) > 0.0)) {
      throw InvalidArgument("bid mapping values must be positive");
    }
  }

  Xoshiro256 pick(DeriveSeed(spec.seed, 0));
  const int anchor = std::min(
      papers - 1, static_cast<int>(std::floor(pick.Uniform01() * papers)));

  std::vector<double> distance(papers, 0.0);
  for (int q = 0; q < papers; ++q) {
    double total = 0.0;
    for (int r = 0; r < members; ++r) {
      const double diff =
          spec.mapping.Value(bids[r][q]) - spec.mapping.Value(bids[r][anchor]);
      total += diff * diff;
    }
    distance[q] = std::sqrt(total);
  }
  BidSubsample out{ChoresInstance::Ceei(Eigen::MatrixXd::Ones(1, 1)), {}, {}};
  out.papers = SmallestK(distance, spec.n);

  std::vector<double> negated_count(members, 0.0);
  for (int r = 0; r < members; ++r) {
    for (int q : out.papers) {
      if (bids[r][q] != Bid::kConflict) negated_count[r] -= 1.0;
    }
  }
  out.members = SmallestK(negated_count, spec.n);

  Xoshiro256 noise(DeriveSeed(spec.seed, 1));
  Eigen::MatrixXd d(spec.n, spec.n);
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      double v = spec.mapping.Value(bids[out.members[i]][out.papers[j]]);
      if (spec.noise_sd > 0.0) {
        v = std::max(1e-6, v + spec.noise_sd * noise.Normal());
      }
      d(i, j) = v;
    }
  }
  out.instance = ChoresInstance::Ceei(std::move(d));
  return out;
}

}  // namespace chores_eq
