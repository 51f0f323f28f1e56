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


// Solves one random Lasso instance with both algorithms and prints a short
// comparison, then checks the solution through the diagnostics layer.

#include <cstdio>

#include "ladmm/diagnostics.hpp"
#include "ladmm/lasso.hpp"
#include "ladmm/solver.hpp"

int main() {
  using namespace ladmm;

  const auto inst = lasso::generate_instance(300, 450, 2026);
  const auto problem = lasso::to_separable(inst);
  auto cfg = SolverConfig::defaults(inst.m());
  cfg.keep_trajectory = true;

  for (Algorithm alg : {Algorithm::kOladmm, Algorithm::kAdaptiveRelaxed}) {
    const RunRecord rec = solve(problem, cfg, Iterate::zeros(problem), alg);
    const auto wit = lasso::lasso_kkt_witnesses(inst, rec.final_iterate, 1e-12);
    std::size_t nnz = 0;
    for (double v : rec.final_iterate.y) nnz += v != 0.0;
    std::printf("%-7s %-9s iter=%3d  obj=%.6f  p=%.2e  d=%.2e  nnz(y)=%zu  kkt=%.2e  pc=%.1e\n",
                std::string(to_string(alg)).c_str(), std::string(to_string(rec.status)).c_str(), rec.iter(),
                rec.final_objective(), rec.final_p(), rec.final_d(), nnz, wit.violation,
                diagnostics::max_prediction_correction(rec, problem.B));
  }
  return 0;
}
