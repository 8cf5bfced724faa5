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

#ifndef SEQDISC_MINIMAX_HPP
#define SEQDISC_MINIMAX_HPP

// Worst case over priors: maximize min_mu F(mu, A) with
// F(mu, A) = sum_k mu_k f_k(A) and f_k(A) = sum_m Tr[c_km Pi_m] + d_k, over
// Alice measures feasible for a fixed set of constraints.

#include <vector>

#include "seqdisc/dual_solver.hpp"
#include "seqdisc/measurement.hpp"
#include "seqdisc/problem.hpp"
#include "seqdisc/symmetry.hpp"

namespace seqdisc {

class MinimaxProblem {
 public:
  /// `base` supplies shape, constraints and family; its own objective is
  /// ignored. c is K x M. Throws std::invalid_argument on inconsistent sizes.
  MinimaxProblem(GeneralizedProblem base, std::vector<std::vector<Operator>> c,
                 std::vector<double> d);

  const GeneralizedProblem& base() const { return base_; }
  int K() const { return static_cast<int>(c_.size()); }
  const std::vector<std::vector<Operator>>& c() const { return c_; }
  const std::vector<double>& d() const { return d_; }
  const BobFamily& family() const { return base_.family(); }
  MinimaxProblem with_family(BobFamily family) const;

 private:
  GeneralizedProblem base_;
  std::vector<std::vector<Operator>> c_;
  std::vector<double> d_;
};

/// A point of the probability simplex.
struct SimplexPoint {
  std::vector<double> mu;

  /// Throws std::invalid_argument unless mu >= 0 and sums to 1 within 1e-12.
  static SimplexPoint checked(std::vector<double> mu);
  static SimplexPoint uniform(int k);
};

/// Euclidean projection onto the simplex (sorting construction).
std::vector<double> project_to_simplex(const std::vector<double>& v);

/// f_k(A) for every k, offsets d_k included.
std::vector<double> objective_values(const MinimaxProblem& mp, const AliceMeasure& a);
double mixed_objective(const MinimaxProblem& mp, const SimplexPoint& mu, const AliceMeasure& a);

/// Problem P with c_m = sum_k mu_k c_km; add mixed_offset to its optimum.
GeneralizedProblem reduce_to_p(const MinimaxProblem& mp, const SimplexPoint& mu);
double mixed_offset(const MinimaxProblem& mp, const SimplexPoint& mu);

struct MinimaxConfig {
  SolverConfig inner;
  int max_iters = 100;
  double tol = 1e-6;  // stop when best upper bound minus model bound <= tol
  bool scalar_x_at_uniform = false;  // inner fast path when mu is uniform
};

struct MinimaxSolution {
  SimplexPoint mu;
  AliceMeasure alice;
  double value = 0.0;        // F(mu, alice)
  double lower_bound = 0.0;  // cutting-plane model minimum
  double upper_bound = 0.0;  // best certified F*(mu) seen
  int iterations = 0;
  /// Problem on the family the Alice measure refers to.
  MinimaxProblem problem;
};

/// Kelley cutting planes on the convex function F*(mu): each inner solve
/// at mu gives the affine minorant F(., A_mu); the model is minimized over
/// the simplex by the barrier engine and its multipliers mix the A_mu into
/// the returned measure. Inner failures are rethrown as SolverError naming
/// the offending mu.
MinimaxSolution solve_minimax(const MinimaxProblem& mp, const MinimaxConfig& cfg = {});

struct SaddleReport {
  double optimal_value = 0.0;  // F*(mu) from one inner solve (dual value)
  double value = 0.0;          // F(mu, A)
  std::vector<double> f;       // f_k(A)
  double value_gap = 0.0;      // F*(mu) - F(mu, A)
  double worst_shortfall = 0.0;  // max_k F*(mu) - f_k(A)
  double support_spread = 0.0;   // max over k, k' with mu_k' > tol of f_k' - f_k
  bool value_pass = false;
  bool worst_case_pass = false;
  bool support_pass = false;
  bool primal_feasible = false;
  bool pass = false;
};

SaddleReport check_saddle(const MinimaxProblem& mp, const SimplexPoint& mu, const AliceMeasure& a,
                          double tol, const SolverConfig& inner = {});

/// mu_k -> |G|^-1 sum_g mu_{g o k}; A symmetrized over the group on a family
/// closed under it. Throws std::invalid_argument when the objectives,
/// offsets or constraints are not symmetric.
MinimaxSolution symmetrize_minimax(const GroupAction& gr, const MinimaxSolution& sol);

namespace trine {

/// Per-state success objectives f_k = P(guess k | state k) for the double
/// trine on the three-outcome rotation grid (no constraints).
MinimaxProblem minimax_problem(int theta_steps = 720);

}  // namespace trine

}  // namespace seqdisc

#endif  // SEQDISC_MINIMAX_HPP
