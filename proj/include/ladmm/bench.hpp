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

#ifndef LADMM_BENCH_HPP_
#define LADMM_BENCH_HPP_

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <future>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "ladmm/lasso.hpp"
#include "ladmm/run_record_io.hpp"
#include "ladmm/solver.hpp"

namespace ladmm::bench {

struct Size {
  std::size_t m = 0;
  std::size_t n = 0;
  bool operator==(const Size&) const = default;
};

enum class Format { kMarkdown, kCsv, kJson };

inline std::optional<Format> parse_format(std::string_view s) {
  if (s == "markdown") return Format::kMarkdown;
  if (s == "csv") return Format::kCsv;
  if (s == "json") return Format::kJson;
  return std::nullopt;
}

/// Command-line overrides on top of SolverConfig::defaults(m).
struct ConfigOverrides {
  std::optional<double> sigma, beta, tau0, tau_min, gamma, rho, upsilon, eps_abs, eps_rel;
  std::optional<int> max_iter;

  SolverConfig apply(SolverConfig c) const {
    if (sigma) c.set_sigma(*sigma);
    if (beta) c.beta = *beta;
    if (tau0) c.tau0 = *tau0;
    if (tau_min) c.tau_min = *tau_min;
    if (gamma) c.gamma = *gamma;
    if (rho) c.rho = *rho;
    if (upsilon) c.upsilon = *upsilon;
    if (eps_abs) c.eps_abs = *eps_abs;
    if (eps_rel) c.eps_rel = *eps_rel;
    if (max_iter) c.max_iter = *max_iter;
    return c;
  }
};

struct BenchSpec {
  std::vector<Size> sizes;
  std::vector<std::uint64_t> seeds;
  std::vector<Algorithm> algorithms;
  Format format = Format::kMarkdown;
  ConfigOverrides overrides;
  bool single_seed = false;  // run only the first seed, as a single-run table
  unsigned jobs = 1;
  std::optional<std::filesystem::path> log_dir;

  void validate() const {
    detail::require(!sizes.empty(), "bench: at least one size required");
    detail::require(!seeds.empty(), "bench: at least one seed required");
    detail::require(!algorithms.empty(), "bench: at least one algorithm required");
    detail::require(jobs >= 1, "bench: jobs must be >= 1");
  }

  std::vector<std::uint64_t> effective_seeds() const {
    if (single_seed) return {seeds.front()};
    return seeds;
  }
};

// ---------------------------------------------------------------------------
// Argument parsing

namespace parse_detail {

template <typename T>
std::optional<T> number(std::string_view s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == s.npos ? s.npos : next - pos));
    if (next == s.npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace parse_detail

/// "MxN[,MxN...]"
inline std::vector<Size> parse_sizes(std::string_view text) {
  std::vector<Size> out;
  for (auto item : parse_detail::split(text, ',')) {
    const auto x = item.find('x');
    if (x == item.npos) throw InvalidArgument("bad size '" + std::string(item) + "', expected MxN");
    const auto m = parse_detail::number<std::size_t>(item.substr(0, x));
    const auto n = parse_detail::number<std::size_t>(item.substr(x + 1));
    if (!m || !n || *m == 0 || *n == 0)
      throw InvalidArgument("bad size '" + std::string(item) + "', expected MxN with M, N >= 1");
    out.push_back({*m, *n});
  }
  return out;
}

/// "A..B" (inclusive) or a comma list "s1,s2,...".
inline std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> out;
  if (const auto dots = text.find(".."); dots != text.npos) {
    const auto lo = parse_detail::number<std::uint64_t>(text.substr(0, dots));
    const auto hi = parse_detail::number<std::uint64_t>(text.substr(dots + 2));
    if (!lo || !hi || *lo > *hi) throw InvalidArgument("bad seed range '" + std::string(text) + "'");
    for (std::uint64_t s = *lo;; ++s) {
      out.push_back(s);
      if (s == *hi) break;
    }
    return out;
  }
  for (auto item : parse_detail::split(text, ',')) {
    const auto s = parse_detail::number<std::uint64_t>(item);
    if (!s) throw InvalidArgument("bad seed '" + std::string(item) + "'");
    out.push_back(*s);
  }
  return out;
}

inline std::vector<Algorithm> parse_algorithms(std::string_view text) {
  std::vector<Algorithm> out;
  for (auto item : parse_detail::split(text, ',')) {
    const auto a = parse_algorithm(item);
    if (!a) throw InvalidArgument("unknown algorithm '" + std::string(item) + "'");
    if (std::find(out.begin(), out.end(), *a) == out.end()) out.push_back(*a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Grid execution

struct Cell {
  Size size;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kAdaptiveRelaxed;
  std::optional<RunRecord> record;  // empty if the solve threw
  std::string error;

  bool ok() const { return record && record->status == Status::kConverged; }
};

struct Row {
  Size size;
  Algorithm algorithm = Algorithm::kAdaptiveRelaxed;
  bool failed = false;
  int runs = 0;
  double iter = 0.0;  // medians over seeds
  double time_s = 0.0;
  double p = 0.0;
  double d = 0.0;
};

struct Result {
  std::vector<Cell> cells;
  std::vector<Row> rows;
  bool any_failure() const {
    return std::any_of(rows.begin(), rows.end(), [](const Row& r) { return r.failed; });
  }
};

inline double median(std::vector<double> xs) {
  detail::require(!xs.empty(), "median of empty set");
  std::sort(xs.begin(), xs.end());
  const std::size_t h = xs.size() / 2;
  return xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
}

inline std::string cell_log_name(const Cell& c) {
  return std::to_string(c.size.m) + "x" + std::to_string(c.size.n) + "_seed" + std::to_string(c.seed) +
         "_" + std::string(to_string(c.algorithm)) + ".json";
}

/// Solves every selected algorithm on one generated instance.
inline std::vector<Cell> run_instance(const BenchSpec& spec, Size size, std::uint64_t seed) {
  std::vector<Cell> out;
  try {
    const auto inst = lasso::generate_instance(size.m, size.n, seed);
    const auto problem = lasso::to_separable(inst);
    const SolverConfig cfg = spec.overrides.apply(SolverConfig::defaults(size.m));
    const Iterate w0 = Iterate::zeros(problem);
    for (Algorithm alg : spec.algorithms) {
      Cell cell{size, seed, alg, std::nullopt, {}};
      try {
        cell.record = solve(problem, cfg, w0, alg);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      out.push_back(std::move(cell));
    }
  } catch (const std::exception& e) {
    for (Algorithm alg : spec.algorithms) out.push_back({size, seed, alg, std::nullopt, e.what()});
  }
  return out;
}

inline std::vector<Row> aggregate(const BenchSpec& spec, const std::vector<Cell>& cells) {
  std::vector<Row> rows;
  for (const Size& size : spec.sizes) {
    for (Algorithm alg : spec.algorithms) {
      Row row{size, alg};
      std::vector<double> it, ts, ps, ds;
      for (const auto& c : cells) {
        if (!(c.size == size) || c.algorithm != alg) continue;
        ++row.runs;
        if (!c.ok()) {
          row.failed = true;
          continue;
        }
        it.push_back(c.record->iter());
        ts.push_back(c.record->time_s);
        ps.push_back(c.record->final_p());
        ds.push_back(c.record->final_d());
      }
      if (!row.failed && !it.empty()) {
        row.iter = median(it);
        row.time_s = median(ts);
        row.p = median(ps);
        row.d = median(ds);
      } else {
        row.failed = true;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

inline Result run(const BenchSpec& spec) {
  spec.validate();
  std::vector<std::pair<Size, std::uint64_t>> work;
  for (const Size& s : spec.sizes)
    for (auto seed : spec.effective_seeds()) work.emplace_back(s, seed);

  Result res;
  for (std::size_t start = 0; start < work.size(); start += spec.jobs) {
    std::vector<std::future<std::vector<Cell>>> batch;
    for (std::size_t i = start; i < std::min(work.size(), start + spec.jobs); ++i) {
      batch.push_back(std::async(spec.jobs == 1 ? std::launch::deferred : std::launch::async,
                                 [&spec, item = work[i]] { return run_instance(spec, item.first, item.second); }));
    }
    for (auto& f : batch)
      for (auto& c : f.get()) res.cells.push_back(std::move(c));
  }

  if (spec.log_dir) {
    std::filesystem::create_directories(*spec.log_dir);
    for (const auto& c : res.cells)
      if (c.record) export_run(*c.record, *spec.log_dir / cell_log_name(c));
  }
  res.rows = aggregate(spec, res.cells);
  return res;
}

// ---------------------------------------------------------------------------
// Output

namespace format_detail {

inline std::string num(double v, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

inline std::string_view title(Algorithm a) {
  return a == Algorithm::kAdaptiveRelaxed ? "alg1" : "OLADMM";
}

}  // namespace format_detail

inline std::string to_csv(const Result& res) {
  using format_detail::num;
  std::string out = "m,n,algorithm,iter,time_s,p,d\n";
  for (const auto& r : res.rows) {
    out += std::to_string(r.size.m) + "," + std::to_string(r.size.n) + "," + std::string(to_string(r.algorithm)) + ",";
    out += r.failed ? "FAIL,FAIL,FAIL,FAIL" : num(r.iter) + "," + num(r.time_s) + "," + num(r.p) + "," + num(r.d);
    out += "\n";
  }
  return out;
}

inline nlohmann::json to_json(const Result& res) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : res.rows) {
    nlohmann::json row = {{"m", r.size.m},
                          {"n", r.size.n},
                          {"algorithm", std::string(to_string(r.algorithm))},
                          {"runs", r.runs},
                          {"status", r.failed ? "FAIL" : "ok"}};
    if (!r.failed) {
      row["iter"] = r.iter;
      row["time_s"] = r.time_s;
      row["p"] = r.p;
      row["d"] = r.d;
    }
    arr.push_back(std::move(row));
  }
  return arr;
}

/// One line per size with a column group per algorithm, OLADMM first.
inline std::string to_markdown(const Result& res, const std::vector<Algorithm>& algorithms) {
  using format_detail::num;
  std::vector<Algorithm> order;
  for (Algorithm a : {Algorithm::kOladmm, Algorithm::kAdaptiveRelaxed})
    if (std::find(algorithms.begin(), algorithms.end(), a) != algorithms.end()) order.push_back(a);

  std::string out = "| m | n |";
  std::string rule = "|---|---|";
  for (Algorithm a : order) {
    const std::string t(format_detail::title(a));
    out += " " + t + " Iter. | " + t + " CPU(s) | " + t + " ‖p‖ | " + t + " ‖d‖ |";
    rule += "---|---|---|---|";
  }
  out += "\n" + rule + "\n";

  std::vector<Size> sizes;
  for (const auto& r : res.rows)
    if (std::find(sizes.begin(), sizes.end(), r.size) == sizes.end()) sizes.push_back(r.size);
  for (const Size& s : sizes) {
    out += "| " + std::to_string(s.m) + " | " + std::to_string(s.n) + " |";
    for (Algorithm a : order) {
      const auto it = std::find_if(res.rows.begin(), res.rows.end(),
                                   [&](const Row& r) { return r.size == s && r.algorithm == a; });
      if (it == res.rows.end() || it->failed) {
        out += " FAIL | FAIL | FAIL | FAIL |";
      } else {
        out += " " + num(it->iter, "%g") + " | " + num(it->time_s, "%.3f") + " | " + num(it->p, "%.4f") +
               " | " + num(it->d, "%.4f") + " |";
      }
    }
    out += "\n";
  }
  return out;
}

inline std::string render(const Result& res, const BenchSpec& spec) {
  switch (spec.format) {
    case Format::kCsv: return to_csv(res);
    case Format::kJson: return to_json(res).dump(2) + "\n";
    case Format::kMarkdown: break;
  }
  return to_markdown(res, spec.algorithms);
}

}  // namespace ladmm::bench

#endif  // LADMM_BENCH_HPP_
