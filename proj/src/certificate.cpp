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

#include "seqdisc/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seqdisc {

namespace {

void require_structure(const GeneralizedProblem& p, const AliceMeasure& a,
                       const std::vector<double>& lambda) {
  if (static_cast<int>(lambda.size()) != p.J()) {
    throw std::invalid_argument("lambda has the wrong length");
  }
  for (const AliceAtom& atom : a.support) {
    if (atom.omega < 0 || atom.omega >= p.family().size()) {
      throw std::invalid_argument("Alice measure refers to an unknown omega");
    }
    if (atom.weight.dim() != p.dim_a()) throw std::invalid_argument("Alice weight dimension");
  }
}

// Fills the primal-side fields shared by both conditions.
void primal_side(const GeneralizedProblem& p, const AliceMeasure& a,
                 const std::vector<double>& lambda, double tol, CertificateReport& r) {
  const AliceReport ar = validate_alice(a, p.dim_a(), p.family(), tol);
  r.normalization_residual = std::max(ar.max_psd_violation, ar.normalization_residual);
  const std::vector<double> eta = constraint_values(p, a);
  r.max_constraint = eta.empty() ? 0.0 : *std::max_element(eta.begin(), eta.end());
  r.min_lambda = lambda.empty() ? 0.0 : *std::min_element(lambda.begin(), lambda.end());
  r.slackness_residual = 0.0;
  for (size_t j = 0; j < eta.size(); ++j) {
    r.slackness_residual = std::max(r.slackness_residual, std::abs(lambda[j] * eta[j]));
  }
  r.primal_feasible = ar.passes && r.max_constraint <= tol;
  r.slackness_pass = r.slackness_residual <= tol && r.min_lambda >= -tol;
}

void dual_side(const GeneralizedProblem& p, const DualPoint& d, double tol,
               CertificateReport& r) {
  const MarginResult m = feasibility_margin(p, d);
  r.dominance_margin = m.margin;
  r.worst_omega = m.worst_omega;
  r.dominance_pass = m.margin >= -tol;
  r.x = d.x;
}

double kernel_residual(const GeneralizedProblem& p, const AliceMeasure& a, const DualPoint& d) {
  double worst = 0.0;
  for (const AliceAtom& atom : a.support) {
    const Matrix slack = d.x.matrix() - p.sigma(atom.omega, d.lambda);
    worst = std::max(worst, (slack * atom.weight.matrix()).norm());
  }
  return worst;
}

}  // namespace

double default_certificate_tol(const GeneralizedProblem& p) {
  return 1e-7 * p.objective_scale();
}

CertificateReport check_condition_2(const GeneralizedProblem& p, const AliceMeasure& a,
                                    const DualPoint& d, double tol) {
  require_structure(p, a, d.lambda);
  if (d.x.dim() != p.dim_a()) throw std::invalid_argument("X dimension does not match dim_a");
  CertificateReport r;
  primal_side(p, a, d.lambda, tol, r);
  dual_side(p, d, tol, r);
  r.kernel_residual = kernel_residual(p, a, d);
  r.kernel_pass = r.kernel_residual <= tol;
  r.gap = dual_objective(p, d) - objective(p, a);
  r.pass = r.kernel_pass && r.slackness_pass && r.dominance_pass && r.primal_feasible;
  return r;
}

CertificateReport check_condition_2(const GeneralizedProblem& p, const AliceMeasure& a,
                                    const DualPoint& d) {
  return check_condition_2(p, a, d, default_certificate_tol(p));
}

CertificateReport check_condition_3(const GeneralizedProblem& p, const AliceMeasure& a,
                                    const std::vector<double>& lambda, double tol) {
  require_structure(p, a, lambda);
  Matrix rebuilt = Matrix::Zero(p.dim_a(), p.dim_a());
  for (const AliceAtom& atom : a.support) {
    rebuilt += p.sigma(atom.omega, lambda) * atom.weight.matrix();
  }
  CertificateReport r;
  r.antihermitian_residual = antihermitian_residual(rebuilt);
  const DualPoint d{Operator::hermitian_part(rebuilt), lambda};
  primal_side(p, a, lambda, tol, r);
  dual_side(p, d, tol, r);
  // Informational only: dominance by the rebuilt X implies the kernel
  // condition for it.
  r.kernel_residual = kernel_residual(p, a, d);
  r.kernel_pass = r.kernel_residual <= tol;
  r.hermitian_pass = r.antihermitian_residual <= tol;
  r.gap = dual_objective(p, d) - objective(p, a);
  r.pass = r.hermitian_pass && r.slackness_pass && r.dominance_pass && r.primal_feasible;
  return r;
}

CertificateReport check_condition_3(const GeneralizedProblem& p, const AliceMeasure& a,
                                    const std::vector<double>& lambda) {
  return check_condition_3(p, a, lambda, default_certificate_tol(p));
}

GapReport duality_gap(const GeneralizedProblem& p, const AliceMeasure& a, const DualPoint& d,
                      double tol) {
  require_structure(p, a, d.lambda);
  GapReport g;
  g.dual_value = dual_objective(p, d);
  g.primal_value = objective(p, a);
  g.gap = g.dual_value - g.primal_value;
  const AliceReport ar = validate_alice(a, p.dim_a(), p.family(), tol);
  g.primal_feasible = ar.passes && is_primal_feasible(p, a, tol);
  const double min_lambda =
      d.lambda.empty() ? 0.0 : *std::min_element(d.lambda.begin(), d.lambda.end());
  g.dual_feasible = feasibility_margin(p, d).margin >= -tol && min_lambda >= -tol;
  return g;
}

GapReport duality_gap(const GeneralizedProblem& p, const AliceMeasure& a, const DualPoint& d) {
  return duality_gap(p, a, d, default_certificate_tol(p));
}

bool check_outcome_bound(const AliceMeasure& a, const GeneralizedProblem& p) {
  return a.size() <= (p.J() + 1) * p.dim_a() * p.dim_a();
}

}  // namespace seqdisc
