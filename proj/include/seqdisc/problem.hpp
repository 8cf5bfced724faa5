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

#ifndef SEQDISC_PROBLEM_HPP
#define SEQDISC_PROBLEM_HPP

// Problem P: maximize sum_m Tr[c_m Pi_m] over sequential measurements
// subject to sum_m Tr[a_jm Pi_m] <= b_j.

#include <memory>
#include <vector>

#include "seqdisc/measurement.hpp"
#include "seqdisc/operator.hpp"

namespace seqdisc {

enum class ConstraintKind { kInequality, kEquality };

/// Absolute tolerance for eta_j <= 0.
inline constexpr double kFeasibilityTol = 1e-8;

class GeneralizedProblem {
 public:
  /// `a` is indexed [j][m]. Equality rows are expanded into a pair of
  /// inequalities (the row and its negation), so J() counts expanded rows.
  GeneralizedProblem(BipartiteShape shape, std::vector<Operator> c,
                     std::vector<std::vector<Operator>> a, std::vector<double> b,
                     BobFamily family, std::vector<ConstraintKind> kinds = {});

  const BipartiteShape& shape() const { return shape_; }
  int dim_a() const { return shape_.dim_a; }
  int M() const { return static_cast<int>(c_.size()); }
  int J() const { return static_cast<int>(b_.size()); }
  const std::vector<Operator>& c() const { return c_; }
  const Operator& c(int m) const { return c_[static_cast<size_t>(m)]; }
  const Operator& a(int j, int m) const {
    return a_[static_cast<size_t>(j)][static_cast<size_t>(m)];
  }
  const std::vector<std::vector<Operator>>& a() const { return a_; }
  const std::vector<double>& b() const { return b_; }
  const BobFamily& family() const { return family_; }

  /// Expanded row j comes from input row source_row(j); negated rows of an
  /// equality report true in source_negated(j).
  int source_row(int j) const { return source_row_[static_cast<size_t>(j)]; }
  bool source_negated(int j) const { return source_negated_[static_cast<size_t>(j)] != 0; }

  /// max_m ||c_m||_F (at least 1e-300).
  double objective_scale() const;

  /// Same data on a different family. Reduced operators of a shared grid are
  /// reused.
  GeneralizedProblem with_family(BobFamily family) const;
  GeneralizedProblem with_objective(std::vector<Operator> c) const;

  /// Tr_B sum_m c_m (I (x) B_m(omega)) and Tr_B sum_m a_jm (I (x) B_m(omega)),
  /// as dim_a x dim_a matrices. sigma(omega, lambda) = objective part minus
  /// sum_j lambda_j constraint part.
  Matrix reduced_objective(int omega) const;
  Matrix reduced_constraint(int j, int omega) const;
  Matrix sigma(int omega, const std::vector<double>& lambda) const;
  /// sigma for a POVM that need not belong to the family.
  Matrix sigma_of(const Povm& bob, const std::vector<double>& lambda) const;
  /// Reduced objective followed by the J reduced constraint operators for a
  /// POVM that need not belong to the family.
  std::vector<Matrix> reduced_of(const Povm& bob) const;

  /// Raw reduced operators of one member: 1 + J column-major dim_a x dim_a
  /// blocks (objective first). Valid while the problem is alive.
  const Complex* reduced_data(int omega) const { return reduced_block(omega); }

  /// Precomputes reduced operators for every grid member (idempotent,
  /// thread-safe).
  void warm_cache() const;

 private:
  struct Cache;
  void reduce_into(const Povm& bob, Complex* out) const;
  const Complex* reduced_block(int omega) const;
  int block_stride() const { return (1 + J()) * dim_a() * dim_a(); }

  BipartiteShape shape_;
  std::vector<Operator> c_;
  std::vector<std::vector<Operator>> a_;
  std::vector<double> b_;
  BobFamily family_;
  std::vector<int> source_row_;
  std::vector<char> source_negated_;
  std::shared_ptr<Cache> cache_;
  std::vector<Complex> extras_reduced_;
};

/// Reduction of arbitrary joint operators against one Bob POVM:
/// sum_m Tr_B[q_m (I (x) B_m)].
Matrix reduce_against(const std::vector<Operator>& q, const Povm& bob,
                      BipartiteShape shape);

double objective(const GeneralizedProblem& p, const AliceMeasure& a);
std::vector<double> constraint_values(const GeneralizedProblem& p,
                                      const AliceMeasure& a);
bool is_primal_feasible(const GeneralizedProblem& p, const AliceMeasure& a,
                        double tol = kFeasibilityTol);

/// c_m = prior_m * state_m, J = 0. States live on the joint space of `shape`.
GeneralizedProblem build_min_error(const std::vector<Operator>& states,
                                   const std::vector<double>& priors,
                                   BobFamily family, BipartiteShape shape);

/// R states, M = R + 1 outcomes (the last is inconclusive), one constraint
/// -Tr[(sum_r rho_r) Pi_R] <= -p_i.
GeneralizedProblem build_inconclusive(const std::vector<Operator>& states,
                                      const std::vector<double>& priors,
                                      double p_i, BobFamily family,
                                      BipartiteShape shape);

/// z_m(lambda) = c_m - sum_j lambda_j a_jm.
std::vector<Operator> z_operators(const GeneralizedProblem& p,
                                  const std::vector<double>& lambda);

/// sigma_omega(lambda) = Tr_B sum_m z_m(lambda) (I (x) B_m(omega)).
Operator sigma_omega(const GeneralizedProblem& p, const std::vector<double>& lambda,
                     int omega);

}  // namespace seqdisc

#endif  // SEQDISC_PROBLEM_HPP
