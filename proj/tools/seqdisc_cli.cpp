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

// Command-line front end. Links only the C API in seqdisc.h.
//
// Exit codes: 0 success, 1 gap or certificate failure, 2 parse/usage/range
// errors, 3 nonconvergence, 4 primal infeasible, 5 internal error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "seqdisc/seqdisc.h"

namespace {

struct CommonFlags {
  seqdisc_options options{};
  std::string scalar_x = "auto";
};

int exit_code_of(seqdisc_status s) {
  switch (s) {
    case SEQDISC_OK:
      return 0;
    case SEQDISC_ERR_INVALID_ARGUMENT:
    case SEQDISC_ERR_PARSE:
    case SEQDISC_ERR_MISSING_SECTION:
      return 2;
    case SEQDISC_ERR_NONCONVERGENCE:
    case SEQDISC_ERR_EXTRACTION_FAILED:
      return 3;
    case SEQDISC_ERR_PRIMAL_INFEASIBLE:
      return 4;
    case SEQDISC_ERR_INTERNAL:
      break;
  }
  return 5;
}

int fail(seqdisc_status s) {
  std::fprintf(stderr, "error: %s\n", seqdisc_last_error());
  return exit_code_of(s);
}

void add_solver_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--eps-gap", f.options.eps_gap, "duality gap tolerance");
  cmd->add_option("--eps-feas", f.options.eps_feas, "dual feasibility tolerance");
  cmd->add_option("--max-iters", f.options.max_iters, "outer iteration cap");
  cmd->add_option("--seed", f.options.seed, "seed for local-search restarts");
  cmd->add_option("--grid-theta", f.options.grid_theta, "override rotation-grid theta steps");
  cmd->add_option("--grid-alpha", f.options.grid_alpha, "override rotation-grid alpha steps");
  cmd->add_option("--scalar-x", f.scalar_x, "scalar dual variable: auto, on or off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
}

seqdisc_options resolve(const CommonFlags& f) {
  seqdisc_options o = f.options;
  o.scalar_x = f.scalar_x == "on"    ? SEQDISC_SCALAR_X_ON
               : f.scalar_x == "off" ? SEQDISC_SCALAR_X_OFF
                                     : SEQDISC_SCALAR_X_AUTO;
  return o;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

int cmd_solve(const std::string& file, const CommonFlags& flags, const std::string& solution_out) {
  const seqdisc_options o = resolve(flags);
  seqdisc_problem* p = nullptr;
  if (seqdisc_status s = seqdisc_problem_load(file.c_str(), &o, &p); s != SEQDISC_OK) return fail(s);
  seqdisc_solution* sol = nullptr;
  const seqdisc_status s = seqdisc_solve(p, &o, &sol);
  seqdisc_problem_free(p);
  if (s != SEQDISC_OK) return fail(s);

  seqdisc_solve_report r;
  seqdisc_solution_report(sol, &r);
  std::printf("dual_value %.12f\n", r.dual_value);
  std::printf("primal_value %.12f\n", r.primal_value);
  std::printf("gap %.3e\n", r.gap);
  std::printf("feasibility_margin %.3e\n", r.feasibility_margin);
  std::printf("outcomes %d\n", r.outcome_count);
  std::printf("iterations %d\n", r.iterations);
  std::printf("scalar_x %s\n", r.scalar_x_used ? "on" : "off");
  for (int j = 0; j < r.constraint_count; ++j) {
    double eta = 0.0, lambda = 0.0;
    seqdisc_solution_constraint(sol, j, &eta);
    seqdisc_solution_lambda(sol, j, &lambda);
    std::printf("constraint %d slack %.3e lambda %.12f\n", j, -eta, lambda);
  }
  int code = r.gap <= o.eps_gap ? 0 : 1;
  if (!solution_out.empty()) {
    char* text = nullptr;
    if (seqdisc_status ws = seqdisc_solution_write(sol, &text); ws != SEQDISC_OK) {
      code = fail(ws);
    } else {
      if (!write_file(solution_out, text)) {
        std::fprintf(stderr, "error: cannot write %s\n", solution_out.c_str());
        code = 5;
      }
      seqdisc_string_free(text);
    }
  }
  seqdisc_solution_free(sol);
  return code;
}

int cmd_certify(const std::string& problem_file, const std::string& solution_file,
                const std::string& dual_file, double tol, const seqdisc_options& options) {
  std::string solution_text, dual_text;
  if (!read_file(solution_file, solution_text) || (!dual_file.empty() && !read_file(dual_file, dual_text))) {
    std::fprintf(stderr, "error: cannot read solution or dual file\n");
    return 2;
  }
  seqdisc_problem* p = nullptr;
  if (seqdisc_status s = seqdisc_problem_load(problem_file.c_str(), &options, &p); s != SEQDISC_OK) return fail(s);
  seqdisc_certificate c;
  const seqdisc_status s =
      seqdisc_certify(p, solution_text.c_str(), dual_file.empty() ? nullptr : dual_text.c_str(), tol, &c);
  seqdisc_problem_free(p);
  if (s != SEQDISC_OK) return fail(s);
  std::printf("tol %.3e\n", c.tol);
  std::printf("kernel_residual %.3e\n", c.kernel_residual);
  std::printf("slackness_residual %.3e\n", c.slackness_residual);
  std::printf("dominance_margin %.3e\n", c.dominance_margin);
  std::printf("reconstruction_margin %.3e\n", c.reconstruction_margin);
  std::printf("antihermitian_residual %.3e\n", c.antihermitian_residual);
  std::printf("normalization_residual %.3e\n", c.normalization_residual);
  std::printf("max_constraint %.3e\n", c.max_constraint);
  std::printf("gap %.3e\n", c.gap);
  std::printf("condition2 %s\n", c.condition2_pass ? "pass" : "fail");
  std::printf("condition3 %s\n", c.condition3_pass ? "pass" : "fail");
  std::printf("primal_feasible %s\n", c.primal_feasible ? "yes" : "no");
  std::printf("outcome_bound %s\n", c.outcome_bound_pass ? "pass" : "fail");
  std::printf("certificate %s\n", c.pass ? "pass" : "fail");
  return c.pass ? 0 : 1;
}

int cmd_sweep(double p_min, double p_max, int steps, const CommonFlags& flags, const std::string& out) {
  const seqdisc_options o = resolve(flags);
  char* csv = nullptr;
  if (seqdisc_status s = seqdisc_trine_sweep(p_min, p_max, steps, &o, &csv); s != SEQDISC_OK) return fail(s);
  int code = 0;
  if (out.empty()) {
    std::fputs(csv, stdout);
  } else if (!write_file(out, csv)) {
    std::fprintf(stderr, "error: cannot write %s\n", out.c_str());
    code = 5;
  }
  seqdisc_string_free(csv);
  return code;
}

int cmd_minimax(const std::string& file, const CommonFlags& flags, double tol) {
  const seqdisc_options o = resolve(flags);
  seqdisc_problem* p = nullptr;
  if (seqdisc_status s = seqdisc_problem_load(file.c_str(), &o, &p); s != SEQDISC_OK) return fail(s);
  seqdisc_minimax_result* r = nullptr;
  const seqdisc_status s = seqdisc_minimax(p, &o, &r);
  seqdisc_problem_free(p);
  if (s != SEQDISC_OK) return fail(s);
  std::printf("mu");
  for (int k = 0; k < seqdisc_minimax_k(r); ++k) std::printf(" %.9f", seqdisc_minimax_mu(r, k));
  std::printf("\nf");
  for (int k = 0; k < seqdisc_minimax_k(r); ++k) std::printf(" %.9f", seqdisc_minimax_f(r, k));
  std::printf("\nvalue %.12f\n", seqdisc_minimax_value(r));
  std::printf("outcomes %d\n", seqdisc_minimax_outcome_count(r));
  std::printf("symmetrized %s\n", seqdisc_minimax_symmetrized(r) ? "yes" : "no");
  seqdisc_saddle_report sr;
  int code = 0;
  if (seqdisc_status ss = seqdisc_minimax_saddle(r, tol, &sr); ss != SEQDISC_OK) {
    code = fail(ss);
  } else {
    std::printf("optimal_value %.12f\n", sr.optimal_value);
    std::printf("value_gap %.3e\n", sr.value_gap);
    std::printf("worst_shortfall %.3e\n", sr.worst_shortfall);
    std::printf("support_spread %.3e\n", sr.support_spread);
    std::printf("saddle %s\n", sr.pass ? "pass" : "fail");
    code = sr.pass ? 0 : 1;
  }
  seqdisc_minimax_free(r);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential bipartite state discrimination solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", seqdisc_version());

  CommonFlags solve_flags, sweep_flags, minimax_flags;
  seqdisc_options_default(&solve_flags.options);
  seqdisc_options_default(&sweep_flags.options);
  seqdisc_options_default(&minimax_flags.options);

  std::string solve_file, solution_out;
  CLI::App* solve = app.add_subcommand("solve", "solve the dual and extract an optimal sequential measurement");
  solve->add_option("file", solve_file, "problem file")->required();
  solve->add_option("--solution-out", solution_out, "write the solution document here");
  add_solver_flags(solve, solve_flags);

  std::string cert_problem, cert_solution, cert_dual;
  double cert_tol = 0.0;
  CLI::App* certify = app.add_subcommand("certify", "check an optimality certificate");
  certify->add_option("problem", cert_problem, "problem file")->required();
  certify->add_option("solution", cert_solution, "solution file (Alice outcomes, optionally with dual)")->required();
  certify->add_option("dual", cert_dual, "separate dual file");
  certify->add_option("--tol", cert_tol, "certificate tolerance (default scales with the objective)");
  seqdisc_options cert_options;
  seqdisc_options_default(&cert_options);
  certify->add_option("--grid-theta", cert_options.grid_theta, "override rotation-grid theta steps");
  certify->add_option("--grid-alpha", cert_options.grid_alpha, "override rotation-grid alpha steps");

  double p_min = 0.0, p_max = 0.5;
  int steps = 11;
  std::string sweep_out;
  CLI::App* sweep = app.add_subcommand("trine-sweep", "sweep the double-trine inconclusive curve");
  sweep->add_option("p_min", p_min, "smallest inconclusive probability");
  sweep->add_option("p_max", p_max, "largest inconclusive probability");
  sweep->add_option("steps", steps, "number of rows");
  sweep->add_option("--out", sweep_out, "CSV output path (default: standard output)");
  add_solver_flags(sweep, sweep_flags);

  std::string minimax_file;
  double saddle_tol = 1e-3;
  CLI::App* minimax = app.add_subcommand("minimax", "solve the minimax prior problem");
  minimax->add_option("file", minimax_file, "problem file with a minimax section")->required();
  minimax->add_option("--saddle-tol", saddle_tol, "saddle check tolerance");
  add_solver_flags(minimax, minimax_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*solve) return cmd_solve(solve_file, solve_flags, solution_out);
  if (*certify) return cmd_certify(cert_problem, cert_solution, cert_dual, cert_tol, cert_options);
  if (*sweep) return cmd_sweep(p_min, p_max, steps, sweep_flags, sweep_out);
  return cmd_minimax(minimax_file, minimax_flags, saddle_tol);
}
