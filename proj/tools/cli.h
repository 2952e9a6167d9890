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

#ifndef CHORES_EQ_TOOLS_CLI_H_
#define CHORES_EQ_TOOLS_CLI_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace chores_eq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolveFailure = 1;
inline constexpr int kExitUsage = 2;

// One solver run in a bench sweep. Schema version 1.
struct BenchRow {
  std::string algo;
  int n = 0;
  std::string dist;
  std::string seed;
  std::string status;
  int iters = 0;
  double wall_ms = 0.0;
  double eps_earning = 1.0;
  double eps_optimality = 1.0;
  double eps_supply = 1.0;
  bool solved_exact = false;
  bool solved_approx = false;
  std::string instance;
};

struct BenchOptions {
  std::filesystem::path dir;
  std::vector<std::string> algos = {"gfw"};
  double exact_tol = 1e-6;
  double approx_eps = 1e-2;
  double term_tol = 1e-10;
  double proj_tol = 1e-8;
  int max_iters = 0;
  int jobs = 1;
};

std::string BenchCsvHeader();
std::string BenchRowCsv(const BenchRow& row);

// Solves every *.json / *.csv instance in opts.dir with each algorithm.
// Failures become rows with status "error"; rows are ordered by file name
// then algorithm regardless of the worker count.
std::vector<BenchRow> RunBench(const BenchOptions& opts);

// Per (algo, dist, n): count, solved fractions, mean and median iterations
// over exactly solved runs, and mean wall time.
std::string BenchSummaryCsv(const std::vector<BenchRow>& rows);

// Entry point of the chores_eq tool. Returns the process exit code.
int Main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace chores_eq::cli

#endif  // CHORES_EQ_TOOLS_CLI_H_
