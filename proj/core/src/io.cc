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

#include "chores_eq/io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace chores_eq {
namespace {

using nlohmann::json;

json Parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& err) {
    throw InvalidArgument(std::string("malformed ") + what + " JSON: " +
                          err.what());
  }
}

std::string VectorJson(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k > 0) out += ", ";
    out += FormatDouble(v(k));
  }
  return out + "]";
}

std::string MatrixJson(const Eigen::MatrixXd& a) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (i > 0) out += ",\n    ";
    out += VectorJson(a.row(i).transpose());
  }
  return out + "]";
}

Eigen::VectorXd VectorFrom(const json& node, const char* what) {
  if (!node.is_array()) {
    throw InvalidArgument(std::string(what) + " must be an array");
  }
  Eigen::VectorXd v(node.size());
  for (size_t k = 0; k < node.size(); ++k) {
    if (!node[k].is_number()) {
      throw InvalidArgument(std::string(what) + " must hold numbers");
    }
    v(k) = node[k].get<double>();
  }
  return v;
}

Eigen::MatrixXd MatrixFrom(const json& node, const char* what) {
  if (!node.is_array() || node.empty()) {
    throw InvalidArgument(std::string(what) + " must be a non-empty array");
  }
  const size_t cols = node[0].is_array() ? node[0].size() : 0;
  Eigen::MatrixXd a(node.size(), cols);
  for (size_t i = 0; i < node.size(); ++i) {
    const Eigen::VectorXd row = VectorFrom(node[i], what);
    if (static_cast<size_t>(row.size()) != cols) {
      throw InvalidArgument(std::string(what) + " rows differ in length");
    }
    a.row(i) = row.transpose();
  }
  return a;
}

const json& Member(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw InvalidArgument(std::string("missing field '") + key + "'");
  }
  return doc.at(key);
}

template <typename T>
T Field(const json& doc, const char* key) {
  const json& value = Member(doc, key);
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("field '") + key + "' has wrong type");
  }
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string InstanceToJson(const ChoresInstance& inst,
                           const InstanceMeta* meta) {
  std::string out = "{\n";
  out += "  \"n\": " + std::to_string(inst.num_agents()) + ",\n";
  out += "  \"m\": " + std::to_string(inst.num_chores()) + ",\n";
  out += "  \"budgets\": " + VectorJson(inst.budgets()) + ",\n";
  out += "  \"disutilities\": " + MatrixJson(inst.disutilities());
  if (meta != nullptr) {
    json m = json::object();
    if (!meta->dist.empty()) m["dist"] = meta->dist;
    if (meta->seed) m["seed"] = *meta->seed;
    out += ",\n  \"meta\": " + m.dump();
  }
  return out + "\n}\n";
}

ChoresInstance InstanceFromJson(const std::string& text, InstanceMeta* meta) {
  const json doc = Parse(text, "instance");
  if (!doc.is_object()) throw InvalidArgument("instance JSON must be an object");
  const int n = Field<int>(doc, "n");
  const int m = Field<int>(doc, "m");
  Eigen::MatrixXd d = MatrixFrom(Member(doc, "disutilities"), "disutilities");
  if (d.rows() != n || d.cols() != m) {
    throw InvalidArgument("disutilities shape does not match n and m");
  }
  Eigen::VectorXd b = doc.contains("budgets")
                          ? VectorFrom(doc.at("budgets"), "budgets")
                          : Eigen::VectorXd::Ones(n);
  if (meta != nullptr) {
    *meta = InstanceMeta{};
    if (doc.contains("meta") && doc["meta"].is_object()) {
      const json& mj = doc["meta"];
      if (mj.contains("dist") && mj["dist"].is_string()) {
        meta->dist = mj["dist"].get<std::string>();
      }
      if (mj.contains("seed") && mj["seed"].is_number_unsigned()) {
        meta->seed = mj["seed"].get<std::uint64_t>();
      }
    }
  }
  return ChoresInstance(std::move(d), std::move(b));
}

std::string InstanceToCsv(const ChoresInstance& inst) {
  std::string out;
  for (int i = 0; i < inst.num_agents(); ++i) {
    for (int j = 0; j < inst.num_chores(); ++j) {
      if (j > 0) out += ",";
      out += FormatDouble(inst.disutility(i, j));
    }
    out += "\n";
  }
  return out;
}

ChoresInstance InstanceFromCsv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) {
          throw std::invalid_argument("trailing characters");
        }
      } catch (const std::exception&) {
        throw InvalidArgument("bad CSV cell '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidArgument("CSV rows differ in length");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument("CSV instance is empty");
  Eigen::MatrixXd d(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) d(i, j) = rows[i][j];
  }
  return ChoresInstance::Ceei(std::move(d));
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteTextFile(const std::filesystem::path& path,
                   const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
  if (!out) throw InvalidArgument("write failed for " + path.string());
}

ChoresInstance ReadInstanceFile(const std::filesystem::path& path,
                                InstanceMeta* meta) {
  const std::string text = ReadTextFile(path);
  if (path.extension() == ".csv") {
    if (meta != nullptr) *meta = InstanceMeta{};
    return InstanceFromCsv(text);
  }
  return InstanceFromJson(text, meta);
}

void WriteInstanceFile(const std::filesystem::path& path,
                       const ChoresInstance& inst, const InstanceMeta* meta) {
  WriteTextFile(path, path.extension() == ".csv" ? InstanceToCsv(inst)
                                                 : InstanceToJson(inst, meta));
}

std::string CandidateToJson(const EquilibriumCandidate& cand) {
  return "{\n  \"prices\": " + VectorJson(cand.prices) +
         ",\n  \"allocation\": " + MatrixJson(cand.allocation) + "\n}\n";
}

EquilibriumCandidate CandidateFromJson(const std::string& text) {
  const json doc = Parse(text, "candidate");
  if (!doc.is_object() || !doc.contains("prices") ||
      !doc.contains("allocation")) {
    throw InvalidArgument("candidate JSON needs prices and allocation");
  }
  return {VectorFrom(doc["prices"], "prices"),
          MatrixFrom(doc["allocation"], "allocation")};
}

std::string CertificateToJson(const Certificate& cert) {
  return "{\n  \"eps_earning\": " + FormatDouble(cert.eps_earning) +
         ",\n  \"eps_optimality\": " + FormatDouble(cert.eps_optimality) +
         ",\n  \"eps_supply\": " + FormatDouble(cert.eps_supply) + "\n}\n";
}

Certificate CertificateFromJson(const std::string& text) {
  const json doc = Parse(text, "certificate");
  if (!doc.is_object()) throw InvalidArgument("certificate must be an object");
  Certificate cert;
  cert.eps_earning = Field<double>(doc, "eps_earning");
  cert.eps_optimality = Field<double>(doc, "eps_optimality");
  cert.eps_supply = Field<double>(doc, "eps_supply");
  return cert;
}

std::string GfwTraceCsv(const GfwResult& result) {
  std::string out =
      "t,objective,eps_estimate,d_is,min_price,max_step_ratio_dev\n";
  for (const GfwIterate& it : result.trace) {
    const double dev = (it.step_ratio.array() - 1.0).abs().maxCoeff();
    out += std::to_string(it.t) + "," + FormatDouble(it.objective) + "," +
           FormatDouble(it.eps_estimate) + "," + FormatDouble(it.d_is) + "," +
           FormatDouble(it.y.prices.minCoeff()) + "," + FormatDouble(dev) +
           "\n";
  }
  return out;
}

std::string EpmTraceCsv(const EpmResult& result) {
  std::string out = "k,proj_dist,fw_gap,feas_margin\n";
  for (const EpmTraceRow& row : result.trace) {
    out += std::to_string(row.k) + "," + FormatDouble(row.proj_dist) + "," +
           FormatDouble(row.fw_gap) + "," + FormatDouble(row.feas_margin) +
           "\n";
  }
  return out;
}

}  // namespace chores_eq
