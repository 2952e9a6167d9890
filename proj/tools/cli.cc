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

#include "cli.h"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "chores_eq/certify.h"
#include "chores_eq/epm.h"
#include "chores_eq/gfw.h"
#include "chores_eq/instances.h"
#include "chores_eq/io.h"

namespace chores_eq::cli {
namespace fs = std::filesystem;
namespace {

std::shared_ptr<spdlog::logger> Logger() {
  static std::shared_ptr<spdlog::logger> logger = [] {
    auto l = spdlog::stderr_color_mt("chores_eq");
    l->set_level(spdlog::level::warn);
    if (const char* env = std::getenv("CHORES_EQ_LOG")) {
      l->set_level(spdlog::level::from_str(env));
    }
    return l;
  }();
  return logger;
}

std::string Fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

std::string Join(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    out += (k ? ", " : "") + Fmt(v(k));
  }
  return out + "]";
}

struct SolveOptions {
  std::string instance;
  std::string algo = "gfw";
  std::optional<double> eps;
  double term_tol = 1e-10;
  double proj_tol = 1e-8;
  int max_iters = 0;
  std::string out_dir = ".";
  double exact_tol = kExactTol;
  double approx_eps = 1e-2;
};

int CmdSolve(const SolveOptions& o, std::ostream& out) {
  InstanceMeta meta;
  const ChoresInstance inst = ReadInstanceFile(o.instance, &meta);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  const std::string stem = fs::path(o.instance).stem().string() + "." + o.algo;

  EquilibriumCandidate cand;
  std::string trace;
  std::string status;
  int iters = 0;
  if (o.algo == "gfw") {
    GfwConfig cfg;
    cfg.term_tol = o.term_tol;
    cfg.eps_target = o.eps;
    cfg.max_iters = o.max_iters;
    const GfwResult res = RunGfw(inst, cfg);
    cand = res.Candidate();
    trace = GfwTraceCsv(res);
    status = GfwStatusName(res.status);
    iters = res.iters;
    if (o.eps) {
      if (res.first_eps_iter) {
        out << "first " << Fmt(*o.eps)
            << "-strongly-approximate CE at iteration " << *res.first_eps_iter
            << "\n";
      } else {
        out << "no " << Fmt(*o.eps)
            << "-strongly-approximate CE was reached\n";
      }
    }
  } else {
    EpmConfig cfg;
    cfg.proj_tol = o.proj_tol;
    if (o.max_iters > 0) cfg.max_iters = o.max_iters;
    cfg.exact_tol = o.exact_tol;
    cfg.approx_eps = o.eps.value_or(o.approx_eps);
    const EpmResult res = RunEpm(inst, cfg);
    cand = res.candidate;
    trace = EpmTraceCsv(res);
    status = EpmStatusName(res.state.status);
    iters = res.iters;
    if (!res.failure_reason.empty()) {
      Logger()->warn("epm: {}", res.failure_reason);
    }
  }
  Certificate cert;
  if (cand.prices.size() > 0 && cand.prices.maxCoeff() > 0.0) {
    cert = CertifyCe(inst, cand);
  } else {
    cert = {1.0, 1.0, 1.0};
    cand.prices = Eigen::VectorXd::Zero(inst.num_chores());
    cand.allocation = Allocation::Zero(inst.num_agents(), inst.num_chores());
  }
  WriteTextFile(dir / (stem + ".candidate.json"), CandidateToJson(cand));
  WriteTextFile(dir / (stem + ".certificate.json"), CertificateToJson(cert));
  WriteTextFile(dir / (stem + ".trace.csv"), trace);

  const bool solved = o.eps ? cert.IsStronglyApprox(*o.eps, o.exact_tol)
                            : cert.IsExact(o.exact_tol);
  out << "status=" << status << " iters=" << iters
      << " eps_earning=" << Fmt(cert.eps_earning)
      << " eps_optimality=" << Fmt(cert.eps_optimality)
      << " eps_supply=" << Fmt(cert.eps_supply) << "\n";
  out << "prices=" << Join(cand.prices) << "\n";
  return solved ? kExitOk : kExitSolveFailure;
}

struct GenOptions {
  std::string dist = "uniform01";
  int n = 0;
  int m = 0;
  int count = 1;
  std::uint64_t seed = 0;
  std::string out = ".";
  std::string fixture;
  double big_m = 100.0;
  double eps = 0.01;
  std::string bids;
  double noise_sd = 0.0;
};

int CmdGen(const GenOptions& o, std::ostream& out) {
  if (o.count < 1) throw InvalidArgument("--count must be >= 1");
  const fs::path target(o.out);
  const bool single_file =
      o.count == 1 &&
      (target.extension() == ".json" || target.extension() == ".csv");
  if (!single_file) fs::create_directories(target);
  auto emit = [&](const std::string& name, const ChoresInstance& inst,
                  const InstanceMeta* meta) {
    const fs::path path = single_file ? target : target / (name + ".json");
    WriteInstanceFile(path, inst, meta);
    out << path.string() << "\n";
  };

  if (!o.fixture.empty()) {
    if (o.fixture == "fig1") {
      emit("fig1", SingleChoreInstance(), nullptr);
    } else if (o.fixture == "fig2") {
      InstanceMeta meta{"uniform01", o.seed};
      emit("fig2", TwoByEightInstance(o.seed), &meta);
    } else if (o.fixture == "appendixB") {
      emit("appendixB", FarApartInstance(o.big_m, o.eps), nullptr);
    } else {
      throw InvalidArgument("unknown fixture '" + o.fixture + "'");
    }
    return kExitOk;
  }
  if (o.n < 1) throw InvalidArgument("--n must be >= 1");
  if (!o.bids.empty()) {
    std::istringstream in(ReadTextFile(o.bids));
    const BidMatrix bids = ParseBidCsv(in);
    for (int k = 0; k < o.count; ++k) {
      BidSpec spec;
      spec.n = o.n;
      spec.seed = o.seed + k;
      spec.noise_sd = o.noise_sd;
      InstanceMeta meta{o.noise_sd > 0 ? "bids_noise" : "bids", spec.seed};
      emit("bids_n" + std::to_string(o.n) + "_s" + std::to_string(spec.seed),
           SubsampleBidding(bids, spec).instance, &meta);
    }
    return kExitOk;
  }
  const Distribution dist = ParseDistribution(o.dist);
  for (int k = 0; k < o.count; ++k) {
    GenSpec spec;
    spec.n = o.n;
    spec.m = o.m;
    spec.dist = dist;
    spec.seed = o.seed + k;
    InstanceMeta meta{o.dist, spec.seed};
    emit(o.dist + "_n" + std::to_string(o.n) + "_s" + std::to_string(spec.seed),
         Generate(spec), &meta);
  }
  return kExitOk;
}

int CmdCertify(const std::string& instance, const std::string& candidate,
               std::optional<double> eps, double exact_tol,
               std::ostream& out) {
  const ChoresInstance inst = ReadInstanceFile(instance);
  const EquilibriumCandidate cand =
      CandidateFromJson(ReadTextFile(candidate));
  const Certificate cert = CertifyCe(inst, cand);
  out << CertificateToJson(cert);
  const bool ok = eps ? cert.IsStronglyApprox(*eps, exact_tol)
                      : cert.IsExact(exact_tol);
  return ok ? kExitOk : kExitSolveFailure;
}

BenchRow BenchOne(const fs::path& path, const std::string& algo,
                  const BenchOptions& opts) {
  BenchRow row;
  row.algo = algo;
  row.instance = path.filename().string();
  try {
    InstanceMeta meta;
    const ChoresInstance inst = ReadInstanceFile(path, &meta);
    row.n = inst.num_agents();
    row.dist = meta.dist;
    row.seed = meta.seed ? std::to_string(*meta.seed) : "";
    const auto t0 = std::chrono::steady_clock::now();
    EquilibriumCandidate cand;
    if (algo == "gfw") {
      GfwConfig cfg;
      cfg.term_tol = opts.term_tol;
      cfg.max_iters = opts.max_iters;
      const GfwResult res = RunGfw(inst, cfg);
      row.status = GfwStatusName(res.status);
      row.iters = res.iters;
      cand = res.Candidate();
    } else {
      EpmConfig cfg;
      cfg.proj_tol = opts.proj_tol;
      if (opts.max_iters > 0) cfg.max_iters = opts.max_iters;
      cfg.exact_tol = opts.exact_tol;
      cfg.approx_eps = opts.approx_eps;
      const EpmResult res = RunEpm(inst, cfg);
      row.status = EpmStatusName(res.state.status);
      row.iters = res.iters;
      cand = res.candidate;
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (cand.prices.size() > 0 && cand.prices.maxCoeff() > 0.0) {
      const Certificate cert = CertifyCe(inst, cand);
      row.eps_earning = cert.eps_earning;
      row.eps_optimality = cert.eps_optimality;
      row.eps_supply = cert.eps_supply;
      row.solved_exact = cert.IsExact(opts.exact_tol);
      row.solved_approx = cert.IsStronglyApprox(opts.approx_eps, opts.exact_tol);
    }
  } catch (const std::exception& err) {
    row.status = "error";
    Logger()->error("{} ({}): {}", row.instance, algo, err.what());
  }
  return row;
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

std::string BenchCsvHeader() {
  return "algo,n,dist,seed,status,iters,wall_ms,eps_earning,eps_optimality,"
         "eps_supply,solved_exact,solved_approx,instance\n";
}

std::string BenchRowCsv(const BenchRow& r) {
  return r.algo + "," + std::to_string(r.n) + "," + r.dist + "," + r.seed +
         "," + r.status + "," + std::to_string(r.iters) + "," +
         FormatDouble(r.wall_ms) + "," + FormatDouble(r.eps_earning) + "," +
         FormatDouble(r.eps_optimality) + "," + FormatDouble(r.eps_supply) +
         "," + (r.solved_exact ? "1" : "0") + "," +
         (r.solved_approx ? "1" : "0") + "," + r.instance + "\n";
}

std::vector<BenchRow> RunBench(const BenchOptions& opts) {
  if (!fs::is_directory(opts.dir)) {
    throw InvalidArgument("not a directory: " + opts.dir.string());
  }
  for (const std::string& a : opts.algos) {
    if (a != "gfw" && a != "epm") {
      throw InvalidArgument("unknown algorithm '" + a + "'");
    }
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opts.dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".json" || ext == ".csv")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<std::pair<fs::path, std::string>> jobs;
  for (const fs::path& f : files) {
    for (const std::string& a : opts.algos) jobs.emplace_back(f, a);
  }
  std::vector<BenchRow> rows(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < jobs.size(); k = next++) {
      rows[k] = BenchOne(jobs[k].first, jobs[k].second, opts);
      Logger()->info("{} {} {}", rows[k].instance, rows[k].algo,
                     rows[k].status);
    }
  };
  const int workers = std::max(1, opts.jobs);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return rows;
}

std::string BenchSummaryCsv(const std::vector<BenchRow>& rows) {
  struct Group {
    int count = 0, exact = 0, approx = 0;
    double wall = 0.0;
    std::vector<double> iters;
  };
  std::map<std::tuple<std::string, std::string, int>, Group> groups;
  for (const BenchRow& r : rows) {
    Group& g = groups[{r.algo, r.dist, r.n}];
    ++g.count;
    g.exact += r.solved_exact;
    g.approx += r.solved_approx;
    g.wall += r.wall_ms;
    if (r.solved_exact) g.iters.push_back(r.iters);
  }
  std::string out =
      "algo,dist,n,count,solved_exact_frac,solved_approx_frac,mean_iters,"
      "median_iters,mean_wall_ms\n";
  for (const auto& [key, g] : groups) {
    double mean_iters = 0.0;
    for (double v : g.iters) mean_iters += v;
    if (!g.iters.empty()) mean_iters /= g.iters.size();
    out += std::get<0>(key) + "," + std::get<1>(key) + "," +
           std::to_string(std::get<2>(key)) + "," + std::to_string(g.count) +
           "," + FormatDouble(double(g.exact) / g.count) + "," +
           FormatDouble(double(g.approx) / g.count) + "," +
           FormatDouble(mean_iters) + "," + FormatDouble(Median(g.iters)) +
           "," + FormatDouble(g.wall / g.count) + "\n";
  }
  return out;
}

int Main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Competitive equilibria for Fisher markets with chores"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write instance files");
  gen_cmd->add_option("--dist", gen.dist, "uniform01|lognormal|truncnormal|"
                                          "exponential|randint");
  gen_cmd->add_option("--n", gen.n, "Agents (and chores unless --m)");
  gen_cmd->add_option("--m", gen.m, "Chores");
  gen_cmd->add_option("--count", gen.count, "Instances; seeds seed..seed+count-1");
  gen_cmd->add_option("--seed", gen.seed, "Base seed");
  gen_cmd->add_option("--out", gen.out, "Output directory or .json/.csv file");
  gen_cmd->add_option("--fixture", gen.fixture, "fig1|fig2|appendixB")
      ->check(CLI::IsMember({"fig1", "fig2", "appendixB"}));
  gen_cmd->add_option("--M", gen.big_m, "appendixB parameter M");
  gen_cmd->add_option("--eps", gen.eps, "appendixB parameter eps");
  gen_cmd->add_option("--bids", gen.bids, "Bid CSV to subsample");
  gen_cmd->add_option("--noise-sd", gen.noise_sd, "Gaussian noise on bids");

  SolveOptions solve;
  double solve_eps = -1.0;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  solve_cmd->add_option("instance", solve.instance, "Instance file")
      ->required();
  solve_cmd->add_option("--algo", solve.algo)
      ->check(CLI::IsMember({"gfw", "epm"}));
  solve_cmd->add_option("--eps", solve_eps,
                        "Target strongly approximate level");
  solve_cmd->add_option("--term-tol", solve.term_tol);
  solve_cmd->add_option("--proj-tol", solve.proj_tol);
  solve_cmd->add_option("--max-iters", solve.max_iters);
  solve_cmd->add_option("--out", solve.out_dir, "Output directory");
  solve_cmd->add_option("--exact-tol", solve.exact_tol);

  std::string cert_instance, cert_candidate;
  double cert_eps = -1.0, cert_exact = kExactTol;
  auto* cert_cmd = app.add_subcommand("certify", "Certify a candidate");
  cert_cmd->add_option("instance", cert_instance)->required();
  cert_cmd->add_option("candidate", cert_candidate)->required();
  cert_cmd->add_option("--eps", cert_eps);
  cert_cmd->add_option("--exact-tol", cert_exact);

  BenchOptions bench;
  std::string bench_dir, bench_algo = "gfw", bench_out, bench_summary;
  auto* bench_cmd = app.add_subcommand("bench", "Solve a directory");
  bench_cmd->add_option("dir", bench_dir)->required();
  bench_cmd->add_option("--algo", bench_algo)
      ->check(CLI::IsMember({"gfw", "epm", "both"}));
  bench_cmd->add_option("--out", bench_out, "CSV path (default stdout)");
  bench_cmd->add_option("--summary", bench_summary, "Summary CSV path");
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads");
  bench_cmd->add_option("--term-tol", bench.term_tol);
  bench_cmd->add_option("--proj-tol", bench.proj_tol);
  bench_cmd->add_option("--max-iters", bench.max_iters);
  bench_cmd->add_option("--exact-tol", bench.exact_tol);
  bench_cmd->add_option("--approx-eps", bench.approx_eps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return CmdGen(gen, out);
    if (*solve_cmd) {
      if (solve_eps > 0.0) solve.eps = solve_eps;
      return CmdSolve(solve, out);
    }
    if (*cert_cmd) {
      return CmdCertify(cert_instance, cert_candidate,
                        cert_eps > 0.0 ? std::optional<double>(cert_eps)
                                       : std::nullopt,
                        cert_exact, out);
    }
    if (*bench_cmd) {
      bench.dir = bench_dir;
      bench.algos = bench_algo == "both"
                        ? std::vector<std::string>{"gfw", "epm"}
                        : std::vector<std::string>{bench_algo};
      const std::vector<BenchRow> rows = RunBench(bench);
      std::string csv = BenchCsvHeader();
      for (const BenchRow& r : rows) csv += BenchRowCsv(r);
      if (bench_out.empty()) {
        out << csv;
      } else {
        WriteTextFile(bench_out, csv);
      }
      if (!bench_summary.empty()) {
        WriteTextFile(bench_summary, BenchSummaryCsv(rows));
      }
      return kExitOk;
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolveFailure;
  }
  return kExitUsage;
}

}  // namespace chores_eq::cli
