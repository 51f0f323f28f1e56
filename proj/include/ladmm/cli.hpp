// Copyright 2026 The ladmm Authors
//
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

#ifndef LADMM_CLI_HPP_
#define LADMM_CLI_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ladmm/bench.hpp"
#include "ladmm/lasso.hpp"
#include "ladmm/run_record_io.hpp"
#include "ladmm/solver.hpp"

namespace ladmm::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kSolverFailure = 2 };

inline int cmd_gen(std::size_t m, std::size_t n, std::uint64_t seed, const std::filesystem::path& out_path,
                   std::ostream& err) {
  if (m == 0 || n == 0) {
    err << "gen: --m and --n must be >= 1\n";
    return kUsage;
  }
  const auto text = lasso::format_instance(lasso::generate_instance(m, n, seed));
  std::ofstream out(out_path, std::ios::binary);
  if (out) out << text;
  if (!out) {
    err << "gen: cannot write " << out_path.string() << "\n";
    return kUsage;
  }
  return kOk;
}

inline std::string summary_line(const RunRecord& rec) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s iter=%d time_s=%.6f p=%.6g d=%.6g obj=%.10g",
                std::string(to_string(rec.algorithm)).c_str(), rec.iter(), rec.time_s, rec.final_p(),
                rec.final_d(), rec.final_objective());
  return buf;
}

inline int cmd_solve(const std::filesystem::path& instance_path, Algorithm alg,
                     const bench::ConfigOverrides& overrides, const std::filesystem::path& log_path,
                     std::ostream& out, std::ostream& err) {
  std::optional<lasso::LassoInstance> inst;
  {
    std::ifstream in(instance_path, std::ios::binary);
    if (!in) {
      err << "solve: cannot open " << instance_path.string() << "\n";
      return kUsage;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      inst = lasso::parse_instance(buf.str());
    } catch (const lasso::ParseError& e) {
      err << "solve: " << instance_path.string() << ": " << e.what() << "\n";
      return kUsage;
    }
  }

  RunRecord rec;
  try {
    const SolverConfig cfg = overrides.apply(SolverConfig::defaults(inst->m()));
    cfg.validate();
    const auto problem = lasso::to_separable(*inst);
    rec = solve(problem, cfg, Iterate::zeros(problem), alg);
  } catch (const InvalidArgument& e) {
    err << "solve: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "solve: " << e.what() << "\n";
    return kSolverFailure;
  }

  try {
    export_run(rec, log_path);
  } catch (const IoError& e) {
    err << "solve: " << e.what() << "\n";
    return kUsage;
  }
  out << summary_line(rec) << "\n";
  if (rec.status != Status::kConverged) {
    err << "solve: " << to_string(rec.status) << " after " << rec.iter() << " iterations\n";
    return kSolverFailure;
  }
  return kOk;
}

inline int cmd_bench(const bench::BenchSpec& spec, std::ostream& out, std::ostream& err) {
  bench::Result res;
  try {
    res = bench::run(spec);
  } catch (const InvalidArgument& e) {
    err << "bench: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "bench: " << e.what() << "\n";
    return kSolverFailure;
  }
  out << bench::render(res, spec);
  for (const auto& c : res.cells) {
    if (c.ok()) continue;
    err << "bench: " << c.size.m << "x" << c.size.n << " seed " << c.seed << " " << to_string(c.algorithm)
        << ": " << (c.record ? std::string(to_string(c.record->status)) : c.error) << "\n";
  }
  return res.any_failure() ? kSolverFailure : kOk;
}

inline void add_overrides(CLI::App* cmd, bench::ConfigOverrides& o) {
  cmd->add_option("--sigma", o.sigma, "relaxation factor in (0, 2)");
  cmd->add_option("--beta", o.beta, "penalty parameter");
  cmd->add_option("--tau0", o.tau0, "initial proximal scale");
  cmd->add_option("--tau-min", o.tau_min, "lower bound for tau decreases");
  cmd->add_option("--gamma", o.gamma, "backtracking growth factor");
  cmd->add_option("--rho", o.rho, "safeguard growth factor");
  cmd->add_option("--upsilon", o.upsilon, "decrease trigger ratio");
  cmd->add_option("--eps-abs", o.eps_abs, "absolute tolerance");
  cmd->add_option("--eps-rel", o.eps_rel, "relative tolerance");
  cmd->add_option("--max-iter", o.max_iter, "iteration limit");
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Adaptive linearized ADMM for Lasso"};
  app.require_subcommand(1);

  std::size_t m = 0, n = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  auto* gen = app.add_subcommand("gen", "generate a random Lasso instance");
  gen->add_option("--m", m, "rows")->required();
  gen->add_option("--n", n, "columns")->required();
  gen->add_option("--seed", seed, "RNG seed")->required();
  gen->add_option("--out", out_path, "output file")->required();

  std::string instance_path, alg_name, log_path;
  bench::ConfigOverrides solve_overrides;
  auto* solve_cmd = app.add_subcommand("solve", "solve one instance");
  solve_cmd->add_option("--instance", instance_path, "instance file")->required();
  solve_cmd->add_option("--algorithm", alg_name, "alg1 or oladmm")
      ->required()
      ->check(CLI::IsMember({"alg1", "oladmm"}));
  solve_cmd->add_option("--log", log_path, "RunRecord JSON output")->required();
  add_overrides(solve_cmd, solve_overrides);

  std::string sizes, seeds, algorithms = "alg1,oladmm", format = "markdown", log_dir;
  bench::BenchSpec spec;
  auto* bench_cmd = app.add_subcommand("bench", "run the benchmark grid");
  bench_cmd->add_option("--sizes", sizes, "MxN[,MxN...]")->required();
  bench_cmd->add_option("--seeds", seeds, "A..B or comma list")->required();
  bench_cmd->add_option("--algorithms", algorithms, "comma list of alg1, oladmm");
  bench_cmd->add_option("--format", format, "markdown, csv or json")
      ->check(CLI::IsMember({"markdown", "csv", "json"}));
  bench_cmd->add_flag("--single-seed", spec.single_seed, "use only the first seed");
  bench_cmd->add_option("--jobs", spec.jobs, "concurrent instances")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--log-dir", log_dir, "write one RunRecord per cell");
  add_overrides(bench_cmd, spec.overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  if (gen->parsed()) return cmd_gen(m, n, seed, out_path, err);
  if (solve_cmd->parsed())
    return cmd_solve(instance_path, *parse_algorithm(alg_name), solve_overrides, log_path, out, err);

  try {
    spec.sizes = bench::parse_sizes(sizes);
    spec.seeds = bench::parse_seeds(seeds);
    spec.algorithms = bench::parse_algorithms(algorithms);
    spec.format = *bench::parse_format(format);
    if (!log_dir.empty()) spec.log_dir = log_dir;
    spec.validate();
  } catch (const InvalidArgument& e) {
    err << "bench: " << e.what() << "\n";
    return kUsage;
  }
  return cmd_bench(spec, out, err);
}

}  // namespace ladmm::cli

#endif  // LADMM_CLI_HPP_
