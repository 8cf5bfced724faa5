// Copyright 2026 The seqdisc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "seqdisc/sweep.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

#include "parallel.hpp"
#include "seqdisc/trine.hpp"

namespace seqdisc {

std::vector<SweepRow> trine_sweep(double p_min, double p_max, int steps, const SweepOptions& options) {
  if (!(p_min >= 0.0 && p_min <= p_max && p_max <= 0.5)) {
    throw std::invalid_argument("sweep range must satisfy 0 <= p_min <= p_max <= 0.5");
  }
  if (steps < 1) throw std::invalid_argument("sweep needs at least one step");
  std::vector<SweepRow> rows(static_cast<size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    rows[static_cast<size_t>(i)].p_i = steps == 1 ? p_min : p_min + (p_max - p_min) * i / (steps - 1);
  }
  detail::parallel_for(rows.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SweepRow& r = rows[i];
      r.analytic = trine::success_probability(r.p_i);
      const GeneralizedProblem p = trine::inconclusive_problem(r.p_i, options.theta_steps, options.alpha_steps);
      SolverConfig cfg = options.solver;
      cfg.scalar_x_fast_path = options.scalar_x;
      const DualSolution sol = solve_dual(p, cfg);
      r.sequential = sol.report.dual_value;
      r.lambda_star = sol.dual.lambda.front();
      r.gap_sequential = sol.report.gap;
      r.global = solve_global_dual(p.c(), p.a(), p.b(), options.solver).value;
    }
  }, 1);
  return rows;
}

namespace {

void append_number(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  out.append(buf, res.ptr);
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "p_I,P_S_analytic,P_S_numeric_sequential,P_S_numeric_global,lambda_star,gap_sequential\n";
  for (const SweepRow& r : rows) {
    const double fields[] = {r.p_i, r.analytic, r.sequential, r.global, r.lambda_star, r.gap_sequential};
    for (size_t k = 0; k < 6; ++k) {
      if (k) out += ',';
      append_number(out, fields[k]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace seqdisc
