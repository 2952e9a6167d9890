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

#ifndef CHORES_EQ_RNG_H_
#define CHORES_EQ_RNG_H_

#include <cstdint>

namespace chores_eq {

// splitmix64 step; used to expand seeds.
std::uint64_t SplitMix64(std::uint64_t& state);

// Seed for an independent stream `stream` derived from `seed`.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

// xoshiro256** (Blackman and Vigna), state filled from splitmix64(seed).
// Every sampler below is defined bit-exactly so instances reproduce across
// implementations:
//   Uniform01   (Next() >> 11) * 2^-53, in [0, 1)
//   Normal      Marsaglia polar method on 2 U - 1, second value cached
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t Next();
  double Uniform01();
  // Uniform01 resampled while it returns exactly 0.
  double UniformPositive();
  double Normal();

 private:
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace chores_eq

#endif  // CHORES_EQ_RNG_H_
