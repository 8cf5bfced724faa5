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

// extern "C" boundary: every entry point translates exceptions into status
// codes and never lets one escape.

#include "seqdisc/seqdisc.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <optional>
#include <string>

#include "seqdisc/certificate.hpp"
#include "seqdisc/dual_solver.hpp"
#include "seqdisc/minimax.hpp"
#include "seqdisc/problem_io.hpp"
#include "seqdisc/sweep.hpp"
#include "seqdisc/symmetry.hpp"
#include "seqdisc/trine.hpp"

struct seqdisc_problem {
  seqdisc::ProblemDocument doc;
};

struct seqdisc_solution {
  seqdisc::DualSolution sol;
  bool scalar_x = false;
};

struct seqdisc_minimax_result {
  seqdisc::MinimaxSolution sol;
  std::vector<double> f;
  seqdisc::SolverConfig inner;
  bool symmetrized = false;
};

namespace {

thread_local std::string g_last_error;

seqdisc_status record(seqdisc_status s, const std::string& what) {
  g_last_error = what;
  return s;
}

seqdisc_status from_solver(const seqdisc::SolverError& e) {
  switch (e.status()) {
    case seqdisc::SolverStatus::kNonconvergence:
      return record(SEQDISC_ERR_NONCONVERGENCE, e.what());
    case seqdisc::SolverStatus::kPrimalInfeasible:
      return record(SEQDISC_ERR_PRIMAL_INFEASIBLE, e.what());
    case seqdisc::SolverStatus::kExtractionFailed:
      return record(SEQDISC_ERR_EXTRACTION_FAILED, e.what());
  }
  return record(SEQDISC_ERR_INTERNAL, e.what());
}

// Runs body, mapping exceptions to status codes. `invalid_as` lets callers
// that validate user documents report shape errors as parse errors.
template <class Body>
seqdisc_status guarded(Body&& body, seqdisc_status invalid_as = SEQDISC_ERR_INVALID_ARGUMENT) {
  try {
    g_last_error.clear();
    return body();
  } catch (const seqdisc::ParseError& e) {
    return record(SEQDISC_ERR_PARSE, e.what());
  } catch (const seqdisc::SolverError& e) {
    return from_solver(e);
  } catch (const std::invalid_argument& e) {
    return record(invalid_as, e.what());
  } catch (const std::out_of_range& e) {
    return record(invalid_as, e.what());
  } catch (const std::bad_alloc&) {
    return record(SEQDISC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(SEQDISC_ERR_INTERNAL, e.what());
  } catch (...) {
    return record(SEQDISC_ERR_INTERNAL, "unknown error");
  }
}

seqdisc_options defaults() {
  seqdisc_options o;
  const seqdisc::SolverConfig cfg;
  o.eps_gap = cfg.eps_gap;
  o.eps_feas = cfg.eps_feas;
  o.max_iters = cfg.max_iters;
  o.seed = cfg.seed;
  o.scalar_x = SEQDISC_SCALAR_X_AUTO;
  o.grid_theta = 0;
  o.grid_alpha = 0;
  return o;
}

seqdisc::SolverConfig config_of(const seqdisc_options& o) {
  seqdisc::SolverConfig cfg;
  if (!(o.eps_gap > 0.0) || !(o.eps_feas > 0.0) || o.max_iters < 1) {
    throw std::invalid_argument("eps_gap, eps_feas and max_iters must be positive");
  }
  cfg.eps_gap = o.eps_gap;
  cfg.eps_feas = o.eps_feas;
  cfg.max_iters = o.max_iters;
  cfg.seed = o.seed;
  return cfg;
}

// A scalar X is licensed when the problem carries a symmetry it satisfies
// whose representation on H_A has a trivial Hermitian commutant.
bool symmetry_forces_scalar(const seqdisc::ProblemDocument& doc) {
  if (!doc.symmetry) return false;
  return seqdisc::check_problem_symmetry(*doc.symmetry, doc.problem, 1e-9) &&
         seqdisc::certify_scalar_x(*doc.symmetry);
}

bool use_scalar(const seqdisc_options& o, const seqdisc::ProblemDocument& doc) {
  switch (o.scalar_x) {
    case SEQDISC_SCALAR_X_ON:
      return true;
    case SEQDISC_SCALAR_X_OFF:
      return false;
    case SEQDISC_SCALAR_X_AUTO:
      return symmetry_forces_scalar(doc);
  }
  throw std::invalid_argument("unknown scalar_x mode");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* seqdisc_version(void) { return "1.0.0"; }

const char* seqdisc_last_error(void) { return g_last_error.c_str(); }

void seqdisc_string_free(char* s) { std::free(s); }

void seqdisc_options_default(seqdisc_options* out) {
  if (out) *out = defaults();
}

seqdisc_status seqdisc_problem_parse(const char* text, const seqdisc_options* options, seqdisc_problem** out) {
  if (!text || !out) return record(SEQDISC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const seqdisc_options o = options ? *options : defaults();
    auto* p = new seqdisc_problem{seqdisc::parse_problem(text, {o.grid_theta, o.grid_alpha})};
    *out = p;
    return SEQDISC_OK;
  }, SEQDISC_ERR_PARSE);
}

seqdisc_status seqdisc_problem_load(const char* path, const seqdisc_options* options, seqdisc_problem** out) {
  if (!path || !out) return record(SEQDISC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const seqdisc_options o = options ? *options : defaults();
    auto* p = new seqdisc_problem{seqdisc::read_problem_file(path, {o.grid_theta, o.grid_alpha})};
    *out = p;
    return SEQDISC_OK;
  }, SEQDISC_ERR_PARSE);
}

void seqdisc_problem_free(seqdisc_problem* p) { delete p; }

int seqdisc_problem_dim_a(const seqdisc_problem* p) { return p ? p->doc.problem.dim_a() : 0; }
int seqdisc_problem_dim_b(const seqdisc_problem* p) { return p ? p->doc.problem.shape().dim_b : 0; }
int seqdisc_problem_outcomes(const seqdisc_problem* p) { return p ? p->doc.problem.M() : 0; }
int seqdisc_problem_constraints(const seqdisc_problem* p) { return p ? p->doc.problem.J() : 0; }
int seqdisc_problem_family_size(const seqdisc_problem* p) { return p ? p->doc.problem.family().size() : 0; }
int seqdisc_problem_has_minimax(const seqdisc_problem* p) { return p && p->doc.minimax ? 1 : 0; }
int seqdisc_problem_has_symmetry(const seqdisc_problem* p) { return p && p->doc.symmetry ? 1 : 0; }

seqdisc_status seqdisc_solve(const seqdisc_problem* p, const seqdisc_options* options, seqdisc_solution** out) {
  if (!p || !out) return record(SEQDISC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const seqdisc_options o = options ? *options : defaults();
    seqdisc::SolverConfig cfg = config_of(o);
    const bool scalar = use_scalar(o, p->doc);
    cfg.scalar_x_fast_path = scalar;
    *out = new seqdisc_solution{seqdisc::solve_dual(p->doc.problem, cfg), scalar};
    return SEQDISC_OK;
  });
}

void seqdisc_solution_free(seqdisc_solution* s) { delete s; }

seqdisc_status seqdisc_solution_report(const seqdisc_solution* s, seqdisc_solve_report* out) {
  if (!s || !out) return record(SEQDISC_ERR_INVALID_ARGUMENT, "null argument");
  const seqdisc::SolveReport& r = s->sol.report;
  out->dual_value = r.dual_value;
  out->primal_value = r.primal_value;
  out->gap = r.gap;
  out->feasibility_margin = r.feasibility_margin;
  out->outcome_count = r.outcome_count;
  out->constraint_count = static_cast<int>(r.constraint_values.size());
  out->iterations = r.iterations;
  out->scalar_x_used = s->scalar_x ? 1 : 0;
  return SEQDISC_OK;
}

seqdisc_status seqdisc_solution_constraint(const seqdisc_solution* s, int j, double* out) {
  if (!s || !out) return record(SEQDISC_ERR_INVALID_ARGUMENT, "null argument");
  const auto& eta = s->sol.report.constraint_values;
  if (j < 0 || j >= static_cast<int>(eta.size())) return record(SEQDISC_ERR_INVALID_ARGUMENT, "constraint index out of range");
  *out = eta[static_cast<size_t>(j)];
  return SEQDISC_OK;
}

seqdisc_status seqdisc_solution_lambda(const seqdisc_solution* s, int j, double* out) {
  if (!s || !out) return record(SEQDISC_ERR_INVALID_ARGUMENT, "null argument");
  const auto& lambda = s->sol.dual.lambda;
  if (j < 0 || j >= static_cast<int>(lambda.size())) return record(SEQDISC_ERR_INVALID_ARGUMENT, "constraint index out of range");
  *out = lambda[static_cast<size_t>(j)];
  return SEQDISC_OK;
}

seqdisc_status seqdisc_solution_write(const seqdisc_solution* s, char** out) {
  if (!s || !out) return record(SEQDISC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(seqdisc::write_solution(s->sol.problem, s->sol.primal, &s->sol.dual));
    return SEQDISC_OK;
  });
}

seqdisc_status seqdisc_certify(const seqdisc_problem* p, const char* solution_text, const char* dual_text,
                               double tol, seqdisc_certificate* out) {
  if (!p || !solution_text || !out) return record(SEQDISC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const seqdisc::SolutionDocument sol = seqdisc::parse_solution(solution_text);
    std::optional<seqdisc::DualPoint> dual = sol.dual;
    if (dual_text) dual = seqdisc::parse_solution(dual_text).dual;
    if (!dual) throw seqdisc::ParseError("no dual section in the solution or dual document");
    if (sol.atoms.empty()) throw seqdisc::ParseError("solution has no Alice outcomes");
    const seqdisc::GeneralizedProblem& base = p->doc.problem;
    if (dual->x.dim() != base.dim_a()) throw seqdisc::ParseError("dual X dimension does not match dim_a");
    if (static_cast<int>(dual->lambda.size()) != base.J()) {
      throw seqdisc::ParseError("dual lambda length does not match the constraint count");
    }
    const auto [problem, alice] = seqdisc::attach_solution(base, sol);
    const double t = tol > 0.0 ? tol : seqdisc::default_certificate_tol(problem);
    const seqdisc::CertificateReport c2 = seqdisc::check_condition_2(problem, alice, *dual, t);
    const seqdisc::CertificateReport c3 = seqdisc::check_condition_3(problem, alice, dual->lambda, t);
    out->kernel_residual = c2.kernel_residual;
    out->slackness_residual = c2.slackness_residual;
    out->dominance_margin = c2.dominance_margin;
    out->reconstruction_margin = c3.dominance_margin;
    out->antihermitian_residual = c3.antihermitian_residual;
    out->normalization_residual = c2.normalization_residual;
    out->max_constraint = c2.max_constraint;
    out->gap = c2.gap;
    out->tol = t;
    out->condition2_pass = c2.pass ? 1 : 0;
    out->condition3_pass = c3.pass ? 1 : 0;
    out->primal_feasible = c2.primal_feasible ? 1 : 0;
    out->outcome_bound_pass = seqdisc::check_outcome_bound(alice, problem) ? 1 : 0;
    out->pass = c2.pass && c3.pass && out->outcome_bound_pass;
    return SEQDISC_OK;
  }, SEQDISC_ERR_PARSE);
}

seqdisc_status seqdisc_minimax(const seqdisc_problem* p, const seqdisc_options* options,
                               seqdisc_minimax_result** out) {
  if (!p || !out) return record(SEQDISC_ERR_INVALID_ARGUMENT, "null argument");
  if (!p->doc.minimax) return record(SEQDISC_ERR_MISSING_SECTION, "problem has no minimax section");
  return guarded([&] {
    const seqdisc_options o = options ? *options : defaults();
    seqdisc::MinimaxConfig cfg;
    cfg.inner = config_of(o);
    cfg.scalar_x_at_uniform = o.scalar_x == SEQDISC_SCALAR_X_ON ||
                              (o.scalar_x == SEQDISC_SCALAR_X_AUTO && p->doc.symmetry &&
                               seqdisc::certify_scalar_x(*p->doc.symmetry));
    auto result = std::make_unique<seqdisc_minimax_result>(
        seqdisc_minimax_result{seqdisc::solve_minimax(*p->doc.minimax, cfg), {}, cfg.inner, false});
    if (p->doc.symmetry && p->doc.symmetry->prior_count() == p->doc.minimax->K()) {
      result->sol = seqdisc::symmetrize_minimax(*p->doc.symmetry, result->sol);
      result->symmetrized = true;
    }
    result->f = seqdisc::objective_values(result->sol.problem, result->sol.alice);
    *out = result.release();
    return SEQDISC_OK;
  });
}

void seqdisc_minimax_free(seqdisc_minimax_result* r) { delete r; }
int seqdisc_minimax_k(const seqdisc_minimax_result* r) { return r ? static_cast<int>(r->sol.mu.mu.size()) : 0; }

double seqdisc_minimax_mu(const seqdisc_minimax_result* r, int k) {
  if (!r || k < 0 || k >= seqdisc_minimax_k(r)) return std::numeric_limits<double>::quiet_NaN();
  return r->sol.mu.mu[static_cast<size_t>(k)];
}

double seqdisc_minimax_value(const seqdisc_minimax_result* r) {
  return r ? r->sol.value : std::numeric_limits<double>::quiet_NaN();
}

double seqdisc_minimax_f(const seqdisc_minimax_result* r, int k) {
  if (!r || k < 0 || k >= static_cast<int>(r->f.size())) return std::numeric_limits<double>::quiet_NaN();
  return r->f[static_cast<size_t>(k)];
}

int seqdisc_minimax_outcome_count(const seqdisc_minimax_result* r) { return r ? r->sol.alice.size() : 0; }
int seqdisc_minimax_symmetrized(const seqdisc_minimax_result* r) { return r && r->symmetrized ? 1 : 0; }

seqdisc_status seqdisc_minimax_saddle(const seqdisc_minimax_result* r, double tol, seqdisc_saddle_report* out) {
  if (!r || !out) return record(SEQDISC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const seqdisc::SaddleReport s = seqdisc::check_saddle(r->sol.problem, r->sol.mu, r->sol.alice, tol, r->inner);
    out->optimal_value = s.optimal_value;
    out->value = s.value;
    out->value_gap = s.value_gap;
    out->worst_shortfall = s.worst_shortfall;
    out->support_spread = s.support_spread;
    out->pass = s.pass ? 1 : 0;
    return SEQDISC_OK;
  });
}

double seqdisc_trine_success_probability(double p_i) {
  if (!(p_i >= 0.0 && p_i <= 0.5)) return std::numeric_limits<double>::quiet_NaN();
  return seqdisc::trine::success_probability(p_i);
}

seqdisc_status seqdisc_trine_sweep(double p_min, double p_max, int steps, const seqdisc_options* options,
                                   char** csv) {
  if (!csv) return record(SEQDISC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const seqdisc_options o = options ? *options : defaults();
    seqdisc::SweepOptions so;
    so.solver = config_of(o);
    if (o.grid_theta > 0) so.theta_steps = o.grid_theta;
    if (o.grid_alpha > 0) so.alpha_steps = o.grid_alpha;
    so.scalar_x = o.scalar_x == SEQDISC_SCALAR_X_ON ||
                  (o.scalar_x == SEQDISC_SCALAR_X_AUTO &&
                   seqdisc::certify_scalar_x(seqdisc::trine::symmetry_group(true)));
    *csv = copy_string(seqdisc::sweep_csv(seqdisc::trine_sweep(p_min, p_max, steps, so)));
    return SEQDISC_OK;
  });
}

}  // extern "C"
