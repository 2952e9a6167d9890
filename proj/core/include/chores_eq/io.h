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

#ifndef CHORES_EQ_IO_H_
#define CHORES_EQ_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "chores_eq/certify.h"
#include "chores_eq/epm.h"
#include "chores_eq/gfw.h"
#include "chores_eq/market.h"

namespace chores_eq {

// Optional provenance stored under "meta" in instance JSON.
struct InstanceMeta {
  std::string dist;
  std::optional<std::uint64_t> seed;
};

// %.17g; round-trips every finite double.
std::string FormatDouble(double v);

// {"n": n, "m": m, "budgets": [...], "disutilities": [[...], ...],
//  "meta": {...}} with disutilities row-major.
std::string InstanceToJson(const ChoresInstance& inst,
                           const InstanceMeta* meta = nullptr);
ChoresInstance InstanceFromJson(const std::string& text,
                                InstanceMeta* meta = nullptr);

// Headerless matrix, one agent per line; budgets are all 1.
std::string InstanceToCsv(const ChoresInstance& inst);
ChoresInstance InstanceFromCsv(const std::string& text);

// Dispatches on the extension (.json or .csv). Throws InvalidArgument on
// unreadable or malformed files.
ChoresInstance ReadInstanceFile(const std::filesystem::path& path,
                                InstanceMeta* meta = nullptr);
void WriteInstanceFile(const std::filesystem::path& path,
                       const ChoresInstance& inst,
                       const InstanceMeta* meta = nullptr);

// {"prices": [...], "allocation": [[...], ...]}
std::string CandidateToJson(const EquilibriumCandidate& cand);
EquilibriumCandidate CandidateFromJson(const std::string& text);

// {"eps_earning": ..., "eps_optimality": ..., "eps_supply": ...}
std::string CertificateToJson(const Certificate& cert);
Certificate CertificateFromJson(const std::string& text);

// Columns t, objective, eps_estimate, d_is, min_price, max_step_ratio_dev.
std::string GfwTraceCsv(const GfwResult& result);
// Columns k, proj_dist, fw_gap, feas_margin.
std::string EpmTraceCsv(const EpmResult& result);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace chores_eq

#endif  // CHORES_EQ_IO_H_
