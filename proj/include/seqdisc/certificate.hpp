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

#ifndef SEQDISC_CERTIFICATE_HPP
#define SEQDISC_CERTIFICATE_HPP

// Optimality certificates for a candidate (Alice measure, dual point) pair,
// independent of how the candidate was produced. Dual feasibility is always
// checked over the enumerated family, never the continuum.

#include "seqdisc/dual_solver.hpp"
#include "seqdisc/measurement.hpp"
#include "seqdisc/problem.hpp"

namespace seqdisc {

struct CertificateReport {
  double kernel_residual = 0.0;      // max over support of ||(X - sigma_omega) A(omega)||_F
  double slackness_residual = 0.0;   // max_j |lambda_j eta_j(A)|
  double dominance_margin = 0.0;     // min_omega lambda_min(X - sigma_omega(lambda))
  double antihermitian_residual = 0.0;  // of the reconstructed X (condition 3 only)
  double normalization_residual = 0.0;  // Alice measure: max(PSD violation, ||sum - I||_F)
  double max_constraint = 0.0;       // max_j eta_j(A)
  double min_lambda = 0.0;
  double gap = 0.0;                  // Tr X + lambda . b - f(A)
  Operator x;                        // the X that was checked
  int worst_omega = -1;

  bool kernel_pass = false;
  bool slackness_pass = false;
  bool dominance_pass = false;
  bool primal_feasible = false;
  bool hermitian_pass = true;  // condition 3 only
  /// Condition 2: kernel, slackness, dominance and primal feasibility.
  /// Condition 3: hermitian, slackness, dominance and primal feasibility.
  bool pass = false;
};

/// Default tolerance: 1e-7 * max_m ||c_m||_F.
double default_certificate_tol(const GeneralizedProblem& p);

/// Complementary slackness on the support of `a` plus dual feasibility of
/// `d` over the family. Never throws on numerically bad candidates.
CertificateReport check_condition_2(const GeneralizedProblem& p, const AliceMeasure& a,
                                    const DualPoint& d, double tol);
CertificateReport check_condition_2(const GeneralizedProblem& p, const AliceMeasure& a,
                                    const DualPoint& d);

/// Reconstructs X = sum_k sigma_{omega_k}(lambda) A_k, reports its
/// anti-Hermitian residual, then checks dominance of its Hermitian part
/// over the family and lambda-slackness.
CertificateReport check_condition_3(const GeneralizedProblem& p, const AliceMeasure& a,
                                    const std::vector<double>& lambda, double tol);
CertificateReport check_condition_3(const GeneralizedProblem& p, const AliceMeasure& a,
                                    const std::vector<double>& lambda);

struct GapReport {
  double gap = 0.0;
  double dual_value = 0.0;
  double primal_value = 0.0;
  bool primal_feasible = false;  // constraints and normalization within tol
  bool dual_feasible = false;    // margin over the family and lambda >= -tol
};

GapReport duality_gap(const GeneralizedProblem& p, const AliceMeasure& a, const DualPoint& d,
                      double tol);
GapReport duality_gap(const GeneralizedProblem& p, const AliceMeasure& a, const DualPoint& d);

/// |support| <= (J + 1) d_A^2, with J counting expanded inequality rows.
bool check_outcome_bound(const AliceMeasure& a, const GeneralizedProblem& p);

}  // namespace seqdisc

#endif  // SEQDISC_CERTIFICATE_HPP
