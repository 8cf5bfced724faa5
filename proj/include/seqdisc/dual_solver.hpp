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

#ifndef SEQDISC_DUAL_SOLVER_HPP
#define SEQDISC_DUAL_SOLVER_HPP

// Problem DP: minimize Tr X + lambda . b subject to X >= sigma_omega(lambda)
// for every omega and lambda >= 0. Feasibility is always relative to the
// enumerated family (grid plus appended members), never the continuum.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqdisc/measurement.hpp"
#include "seqdisc/problem.hpp"

namespace seqdisc {

struct DualPoint {
  Operator x;
  std::vector<double> lambda;
};

struct SolverConfig {
  double eps_feas = 1e-7;
  double eps_gap = 1e-4;
  int max_iters = 200;          // exchange rounds
  double penalty_growth = 8.0;  // barrier parameter growth per centering
  bool scalar_x_fast_path = false;
  bool refine_local = true;
  std::uint64_t seed = 0;       // jitter of local-polish restarts
  double kernel_tol = 1e-6;
  double lambda_cap = 1e4;
  double infeasible_floor = -1e6;
  int cuts_per_round = 10;
};

struct TrajectoryPoint {
  double dual_value = 0.0;         // restricted-problem value
  double lifted_dual_value = 0.0;  // after lifting X to full-family feasibility
  double primal_value = 0.0;       // multiplier-based Alice measure
  bool primal_feasible = false;
};

struct SolveReport {
  double dual_value = 0.0;
  double primal_value = 0.0;
  double gap = 0.0;
  std::vector<int> active_omegas;
  int iterations = 0;
  double feasibility_margin = 0.0;  // over the enumerated family only
  bool margin_grid_restricted = true;
  int outcome_count = 0;
  std::vector<double> constraint_values;
  int appended_members = 0;
  std::vector<TrajectoryPoint> trajectory;
};

enum class SolverStatus { kNonconvergence = 3, kPrimalInfeasible = 4, kExtractionFailed = 5 };

class SolverError : public std::runtime_error {
 public:
  SolverError(SolverStatus status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  SolverStatus status() const { return status_; }

 private:
  SolverStatus status_;
};

/// Result of a solve. `problem` is the input problem on the final family,
/// which may contain polished members appended after the grid; omega ids in
/// `primal` and `report` refer to it.
struct DualSolution {
  DualPoint dual;
  AliceMeasure primal;
  SolveReport report;
  GeneralizedProblem problem;
};

double dual_objective(const GeneralizedProblem& p, const DualPoint& d);

struct MarginResult {
  double margin = 0.0;
  int worst_omega = -1;
  Vector worst_vector;
};

/// min over omegas of lambda_min(X - sigma_omega(lambda)); lowest index wins
/// ties. Throws std::invalid_argument on an empty set.
MarginResult feasibility_margin(const GeneralizedProblem& p, const DualPoint& d,
                                const std::vector<int>& omegas);
/// Over every member of the family.
MarginResult feasibility_margin(const GeneralizedProblem& p, const DualPoint& d);

DualSolution solve_dual(const GeneralizedProblem& p, const SolverConfig& cfg = {});

/// X restricted to multiples of the identity; valid when the problem's
/// symmetry forces a scalar optimal X.
DualSolution solve_dual_scalar_x(const GeneralizedProblem& p,
                                 const SolverConfig& cfg = {});

/// Alice measure supported on kernels of X - sigma_omega(lambda), with
/// weights fitted by nonnegative least squares. Throws SolverError
/// (kExtractionFailed) when the fit residual exceeds 1e-6.
AliceMeasure extract_primal(const GeneralizedProblem& p, const DualPoint& d,
                            const SolverConfig& cfg = {});

struct GlobalDualResult {
  Operator x;
  std::vector<double> lambda;
  double value = 0.0;
  Povm measurement;  // joint POVM read off the multipliers
  double primal_value = 0.0;
};

/// min Tr X + lambda . b subject to X >= c_m - sum_j lambda_j a_jm on the
/// joint space (unrestricted global measurements). `a` is indexed [j][m].
GlobalDualResult solve_global_dual(const std::vector<Operator>& c,
                                   const std::vector<std::vector<Operator>>& a,
                                   const std::vector<double>& b,
                                   const SolverConfig& cfg = {});

/// Orthonormal (Hilbert-Schmidt) basis of d x d Hermitian matrices:
/// E_ii, (E_ij + E_ji)/sqrt2, i(E_ij - E_ji)/sqrt2 for i < j.
std::vector<Matrix> hermitian_basis(int dim);

}  // namespace seqdisc

#endif  // SEQDISC_DUAL_SOLVER_HPP
