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

#ifndef SEQDISC_SEQDISC_H
#define SEQDISC_SEQDISC_H

/* C interface to the sequential-measurement discrimination library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a seqdisc_status;
 * on failure the calling thread's last error message describes it and
 * output handles are left untouched. Strings returned through char** are
 * released with seqdisc_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(SEQDISC_BUILDING_LIBRARY)
#define SEQDISC_API __attribute__((visibility("default")))
#else
#define SEQDISC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum seqdisc_status {
  SEQDISC_OK = 0,
  SEQDISC_ERR_INVALID_ARGUMENT = 1,
  SEQDISC_ERR_PARSE = 2,
  SEQDISC_ERR_NONCONVERGENCE = 3,
  SEQDISC_ERR_PRIMAL_INFEASIBLE = 4,
  SEQDISC_ERR_EXTRACTION_FAILED = 5,
  SEQDISC_ERR_MISSING_SECTION = 6,
  SEQDISC_ERR_INTERNAL = 7
} seqdisc_status;

typedef enum seqdisc_scalar_x {
  SEQDISC_SCALAR_X_AUTO = 0, /* on when the file's symmetry forces a scalar X */
  SEQDISC_SCALAR_X_ON = 1,
  SEQDISC_SCALAR_X_OFF = 2
} seqdisc_scalar_x;

typedef struct seqdisc_options {
  double eps_gap;
  double eps_feas;
  int max_iters;
  uint64_t seed;
  seqdisc_scalar_x scalar_x;
  int grid_theta; /* 0 keeps the problem file's value */
  int grid_alpha;
} seqdisc_options;

typedef struct seqdisc_problem seqdisc_problem;
typedef struct seqdisc_solution seqdisc_solution;
typedef struct seqdisc_minimax_result seqdisc_minimax_result;

typedef struct seqdisc_solve_report {
  double dual_value;
  double primal_value;
  double gap;
  double feasibility_margin; /* over the enumerated family only */
  int outcome_count;
  int constraint_count; /* expanded inequality rows */
  int iterations;
  int scalar_x_used;
} seqdisc_solve_report;

typedef struct seqdisc_certificate {
  double kernel_residual;
  double slackness_residual;
  double dominance_margin;
  double reconstruction_margin; /* dominance of the rebuilt X */
  double antihermitian_residual;
  double normalization_residual;
  double max_constraint;
  double gap;
  double tol;
  int condition2_pass;
  int condition3_pass;
  int primal_feasible;
  int outcome_bound_pass;
  int pass; /* both conditions and the outcome bound */
} seqdisc_certificate;

typedef struct seqdisc_saddle_report {
  double optimal_value;
  double value;
  double value_gap;
  double worst_shortfall;
  double support_spread;
  int pass;
} seqdisc_saddle_report;

SEQDISC_API const char* seqdisc_version(void);
SEQDISC_API const char* seqdisc_last_error(void);
SEQDISC_API void seqdisc_string_free(char* s);
SEQDISC_API void seqdisc_options_default(seqdisc_options* out);

SEQDISC_API seqdisc_status seqdisc_problem_parse(const char* text, const seqdisc_options* options,
                                                 seqdisc_problem** out);
SEQDISC_API seqdisc_status seqdisc_problem_load(const char* path, const seqdisc_options* options,
                                                seqdisc_problem** out);
SEQDISC_API void seqdisc_problem_free(seqdisc_problem* p);
SEQDISC_API int seqdisc_problem_dim_a(const seqdisc_problem* p);
SEQDISC_API int seqdisc_problem_dim_b(const seqdisc_problem* p);
SEQDISC_API int seqdisc_problem_outcomes(const seqdisc_problem* p);
SEQDISC_API int seqdisc_problem_constraints(const seqdisc_problem* p);
SEQDISC_API int seqdisc_problem_family_size(const seqdisc_problem* p);
SEQDISC_API int seqdisc_problem_has_minimax(const seqdisc_problem* p);
SEQDISC_API int seqdisc_problem_has_symmetry(const seqdisc_problem* p);

/* Solves the dual and extracts an optimal Alice measure. */
SEQDISC_API seqdisc_status seqdisc_solve(const seqdisc_problem* p, const seqdisc_options* options,
                                         seqdisc_solution** out);
SEQDISC_API void seqdisc_solution_free(seqdisc_solution* s);
SEQDISC_API seqdisc_status seqdisc_solution_report(const seqdisc_solution* s, seqdisc_solve_report* out);
/* eta_j of the extracted measure (<= 0 when satisfied), expanded rows. */
SEQDISC_API seqdisc_status seqdisc_solution_constraint(const seqdisc_solution* s, int j, double* out);
SEQDISC_API seqdisc_status seqdisc_solution_lambda(const seqdisc_solution* s, int j, double* out);
/* Alice weights, active Bob POVMs and the dual point as JSON. */
SEQDISC_API seqdisc_status seqdisc_solution_write(const seqdisc_solution* s, char** out);

/* Certifies a solution document against the problem. dual_text may be
 * NULL when the solution document carries a dual section. tol <= 0 selects
 * 1e-7 times the objective scale. */
SEQDISC_API seqdisc_status seqdisc_certify(const seqdisc_problem* p, const char* solution_text,
                                           const char* dual_text, double tol, seqdisc_certificate* out);

SEQDISC_API seqdisc_status seqdisc_minimax(const seqdisc_problem* p, const seqdisc_options* options,
                                           seqdisc_minimax_result** out);
SEQDISC_API void seqdisc_minimax_free(seqdisc_minimax_result* r);
SEQDISC_API int seqdisc_minimax_k(const seqdisc_minimax_result* r);
SEQDISC_API double seqdisc_minimax_mu(const seqdisc_minimax_result* r, int k);
SEQDISC_API double seqdisc_minimax_value(const seqdisc_minimax_result* r);
SEQDISC_API double seqdisc_minimax_f(const seqdisc_minimax_result* r, int k);
SEQDISC_API int seqdisc_minimax_outcome_count(const seqdisc_minimax_result* r);
SEQDISC_API int seqdisc_minimax_symmetrized(const seqdisc_minimax_result* r);
SEQDISC_API seqdisc_status seqdisc_minimax_saddle(const seqdisc_minimax_result* r, double tol,
                                                  seqdisc_saddle_report* out);

/* Closed-form success probability of the double trine at inconclusive
 * rate p_i in [0, 1/2]; NaN outside. */
SEQDISC_API double seqdisc_trine_success_probability(double p_i);
SEQDISC_API seqdisc_status seqdisc_trine_sweep(double p_min, double p_max, int steps,
                                               const seqdisc_options* options, char** csv);

#ifdef __cplusplus
}
#endif

#endif /* SEQDISC_SEQDISC_H */
