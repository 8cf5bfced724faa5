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

#ifndef SEQDISC_SYMMETRY_HPP
#define SEQDISC_SYMMETRY_HPP

// Finite groups acting on outcome, constraint and prior indices, on H_A and
// H_B by (anti)unitary conjugation, and on the Bob family. Averages over
// the group are computed literally from the explicit table.

#include <functional>
#include <string>
#include <vector>

#include "seqdisc/dual_solver.hpp"
#include "seqdisc/measurement.hpp"
#include "seqdisc/operator.hpp"
#include "seqdisc/problem.hpp"

namespace seqdisc {

/// Q -> u Q u^dagger, or u conj(Q) u^dagger when antiunitary.
struct Conjugation {
  Matrix u;
  bool antiunitary = false;
};

class GroupAction {
 public:
  /// Image of a family member's parameters under element g. Used for
  /// parametric families; explicit families use omega_permutation instead.
  using ParamAction = std::function<std::vector<double>(int g, const std::vector<double>&)>;

  /// table[g][h] = index of g h. Throws std::invalid_argument unless the
  /// table is a group (identity, inverses, associativity on all triples)
  /// and every per-element list has one entry per element.
  GroupAction(std::vector<std::vector<int>> table, std::vector<std::vector<int>> perm_m,
              std::vector<std::vector<int>> perm_j, std::vector<Conjugation> rep_a,
              std::vector<Conjugation> rep_b);

  GroupAction& with_prior_permutation(std::vector<std::vector<int>> perm_k);
  GroupAction& with_param_action(ParamAction action);
  /// perm[g][omega] for explicit (grid-free) families.
  GroupAction& with_omega_permutation(std::vector<std::vector<int>> perm);

  int size() const { return static_cast<int>(table_.size()); }
  int identity() const { return identity_; }
  int compose(int g, int h) const { return table_[static_cast<size_t>(g)][static_cast<size_t>(h)]; }
  int inverse(int g) const { return inverse_[static_cast<size_t>(g)]; }
  int act_m(int g, int m) const { return perm_m_[static_cast<size_t>(g)][static_cast<size_t>(m)]; }
  int act_j(int g, int j) const { return perm_j_[static_cast<size_t>(g)][static_cast<size_t>(j)]; }
  int act_k(int g, int k) const;
  int outcome_count() const { return static_cast<int>(perm_m_.front().size()); }
  int constraint_count() const { return static_cast<int>(perm_j_.front().size()); }
  int prior_count() const { return perm_k_.empty() ? 0 : static_cast<int>(perm_k_.front().size()); }
  const Conjugation& rep_a(int g) const { return rep_a_[static_cast<size_t>(g)]; }
  const Conjugation& rep_b(int g) const { return rep_b_[static_cast<size_t>(g)]; }

  /// Index of g o omega in `family`, or -1 when the image is not a member.
  int act_omega(int g, int omega, const BobFamily& family, double tol = 1e-9) const;
  /// Parameters of g o omega (parametric families only).
  std::vector<double> image_params(int g, const std::vector<double>& params) const;
  bool has_param_action() const { return static_cast<bool>(param_action_); }

 private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  int identity_ = 0;
  std::vector<std::vector<int>> perm_m_;
  std::vector<std::vector<int>> perm_j_;
  std::vector<std::vector<int>> perm_k_;
  std::vector<Conjugation> rep_a_;
  std::vector<Conjugation> rep_b_;
  ParamAction param_action_;
  std::vector<std::vector<int>> omega_perm_;
};

enum class Subsystem { kA, kB, kJoint };

/// g o q by the representation of `which`; the joint action uses
/// V_g (x) W_g and requires matching antiunitary flags. Throws
/// std::invalid_argument on a dimension mismatch.
Operator act(const GroupAction& gr, int g, const Operator& q, Subsystem which);

struct GroupReport {
  double rep_a_defect = 0.0;     // max_gh (d_A - |Tr(V_gh^dagger V_g V_h)|)
  double rep_b_defect = 0.0;
  double identity_defect = 0.0;  // identity element acts trivially
  double omega_defect = 0.0;     // max ||g o B_m(omega) - B_{g o m}(g o omega)||_F on samples
  int missing_images = 0;        // sampled omegas whose image is not a member
  std::vector<std::string> errors;
  bool passes = false;
};

/// Checks representation consistency up to global phase and compatibility
/// of the omega action with the Bob POVMs on up to `samples` members (all
/// extras are always included).
GroupReport validate_group(const GroupAction& gr, const BobFamily& family, double tol = 1e-8,
                           int samples = 64);

/// g o a_jm = a_{g o j, g o m}, b_j = b_{g o j}, g o c_m = c_{g o m} for all g,
/// compared entrywise to tol. Index permutations must be sized to p.
bool check_problem_symmetry(const GroupAction& gr, const GeneralizedProblem& p, double tol);
/// Same for several objectives (c_{k,m}) permuted by the prior action.
bool check_objective_symmetry(const GroupAction& gr, const std::vector<std::vector<Operator>>& c,
                              double tol);

/// A(omega) = |G|^-1 sum_g g^-1 o phi(g o omega). Atoms landing on the same
/// omega are merged. Throws std::invalid_argument("family not closed under
/// group") when an image is missing, and "omega action incompatible" when
/// g o B(omega) differs from B(g o omega) by more than 1e-8.
AliceMeasure symmetrize_alice(const GroupAction& gr, const BobFamily& family,
                              const AliceMeasure& phi);

/// X = |G|^-1 sum_g g o Y, lambda_j = |G|^-1 sum_g nu_{g^-1 o j}.
DualPoint symmetrize_dual(const GroupAction& gr, const DualPoint& y);

/// Family with the orbit images of `omegas` appended where missing.
BobFamily close_under(const GroupAction& gr, const BobFamily& family,
                      const std::vector<int>& omegas);

/// True iff the only Hermitian operators on H_A fixed by every V_g are real
/// multiples of the identity.
bool certify_scalar_x(const GroupAction& gr);

/// Max over g, omega of ||g o A(omega) - A(g o omega)||_F (zero for
/// covariant measures).
double covariance_residual(const GroupAction& gr, const BobFamily& family, const AliceMeasure& a);
/// Max over g, m of ||g o Pi_m - Pi_{g o m}||_F for the assembled measurement.
double joint_covariance_residual(const GroupAction& gr, const SequentialMeasurement& m);

namespace trine {

/// Rotation by 2 pi/3 and complex conjugation acting on both qubits; these
/// commute, so the group is C3 x C2 with element k + 3 l = rot^k conj^l.
/// Outcomes m < 3 (and priors) shift by k; the inconclusive outcome and the
/// single constraint are fixed. Omega acts on rotation-grid parameters as
/// (theta, [alpha,] shift) -> (theta + 2 pi k/3, [alpha,] shift + k).
GroupAction symmetry_group(bool inconclusive);

}  // namespace trine

}  // namespace seqdisc

#endif  // SEQDISC_SYMMETRY_HPP
