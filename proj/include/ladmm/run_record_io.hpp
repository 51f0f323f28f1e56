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

#ifndef LADMM_RUN_RECORD_IO_HPP_
#define LADMM_RUN_RECORD_IO_HPP_

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "ladmm/solver.hpp"

// RunRecord JSON layout:
//
// {
//   "algorithm": "alg1" | "oladmm",
//   "params": { beta, sigma, tau0, tau_min, gamma, rho, upsilon, eps_prime,
//               eps_abs, eps_rel, p0, d0, l, max_iter, max_backtracks,
//               tau_cap, eq_tol, r },
//   "status": "Converged" | "MaxIter" | "BacktrackFail",
//   "iterations": [ { k, tau, p, d, theta1, theta2, backtracks, objective,
//                     elapsed_ms, eps_pri, eps_dual }, ... ],
//   "final": { p, d, objective, iter, time_s, inflation_count, x, y, lambda }
// }
//
// Doubles are written in shortest round-trip form, so import(export(r))
// reproduces every field except the optional trajectory.

namespace ladmm {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace io_detail {

using nlohmann::json;

inline json vector_to_json(const Vector& v) { return json(v.values()); }

inline Vector vector_from_json(const json& j) { return Vector(j.get<std::vector<double>>()); }

}  // namespace io_detail

inline nlohmann::json params_to_json(const SolverConfig& c, double r) {
  return {{"beta", c.beta},         {"sigma", c.sigma},
          {"tau0", c.tau0},         {"tau_min", c.tau_min},
          {"gamma", c.gamma},       {"rho", c.rho},
          {"upsilon", c.upsilon},   {"eps_prime", c.eps_prime},
          {"eps_abs", c.eps_abs},   {"eps_rel", c.eps_rel},
          {"p0", c.p0},             {"d0", c.d0},
          {"l", c.l},               {"max_iter", c.max_iter},
          {"max_backtracks", c.max_backtracks},
          {"tau_cap", c.tau_cap},   {"eq_tol", c.eq_tol},
          {"r", r}};
}

inline nlohmann::json run_to_json(const RunRecord& rec) {
  using io_detail::json;
  json iters = json::array();
  for (const auto& e : rec.iterations) {
    iters.push_back({{"k", e.k},
                     {"tau", e.tau},
                     {"p", e.p},
                     {"d", e.d},
                     {"theta1", e.theta1},
                     {"theta2", e.theta2},
                     {"backtracks", e.backtracks},
                     {"objective", e.objective},
                     {"elapsed_ms", e.elapsed_ms},
                     {"eps_pri", e.eps_pri},
                     {"eps_dual", e.eps_dual}});
  }
  return {{"algorithm", std::string(to_string(rec.algorithm))},
          {"params", params_to_json(rec.config, rec.r)},
          {"status", std::string(to_string(rec.status))},
          {"iterations", std::move(iters)},
          {"final",
           {{"p", rec.final_p()},
            {"d", rec.final_d()},
            {"objective", rec.final_objective()},
            {"iter", rec.iter()},
            {"time_s", rec.time_s},
            {"inflation_count", rec.inflation_count},
            {"x", io_detail::vector_to_json(rec.final_iterate.x)},
            {"y", io_detail::vector_to_json(rec.final_iterate.y)},
            {"lambda", io_detail::vector_to_json(rec.final_iterate.lambda)}}}};
}

inline RunRecord run_from_json(const nlohmann::json& j) {
  RunRecord rec;
  try {
    const auto alg = parse_algorithm(j.at("algorithm").get<std::string>());
    const auto status = parse_status(j.at("status").get<std::string>());
    if (!alg || !status) throw IoError("run record: unknown algorithm or status");
    rec.algorithm = *alg;
    rec.status = *status;

    const auto& p = j.at("params");
    SolverConfig& c = rec.config;
    c.beta = p.at("beta");
    c.sigma = p.at("sigma");
    c.tau0 = p.at("tau0");
    c.tau_min = p.at("tau_min");
    c.gamma = p.at("gamma");
    c.rho = p.at("rho");
    c.upsilon = p.at("upsilon");
    c.eps_prime = p.at("eps_prime");
    c.eps_abs = p.at("eps_abs");
    c.eps_rel = p.at("eps_rel");
    c.p0 = p.at("p0");
    c.d0 = p.at("d0");
    c.l = p.at("l");
    c.max_iter = p.at("max_iter");
    c.max_backtracks = p.at("max_backtracks");
    c.tau_cap = p.at("tau_cap");
    c.eq_tol = p.at("eq_tol");
    rec.r = p.at("r");

    for (const auto& e : j.at("iterations")) {
      IterationLog it;
      it.k = e.at("k");
      it.tau = e.at("tau");
      it.p = e.at("p");
      it.d = e.at("d");
      it.theta1 = e.at("theta1");
      it.theta2 = e.at("theta2");
      it.backtracks = e.at("backtracks");
      it.objective = e.at("objective");
      it.elapsed_ms = e.at("elapsed_ms");
      it.eps_pri = e.value("eps_pri", 0.0);
      it.eps_dual = e.value("eps_dual", 0.0);
      rec.iterations.push_back(it);
    }

    const auto& f = j.at("final");
    rec.time_s = f.at("time_s");
    rec.inflation_count = f.value("inflation_count", 0);
    if (f.contains("x")) {
      rec.final_iterate = {io_detail::vector_from_json(f.at("x")),
                           io_detail::vector_from_json(f.at("y")),
                           io_detail::vector_from_json(f.at("lambda"))};
    }
    if (f.at("iter").get<int>() != rec.iter()) throw IoError("run record: final.iter disagrees with iterations");
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("run record: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("run record: ") + e.what());
  }
  return rec;
}

inline void export_run(const RunRecord& rec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << run_to_json(rec).dump(1) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

inline RunRecord import_run(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return run_from_json(j);
}

}  // namespace ladmm

#endif  // LADMM_RUN_RECORD_IO_HPP_
