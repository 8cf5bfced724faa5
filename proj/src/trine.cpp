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

#include "seqdisc/trine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace seqdisc::trine {

namespace {

constexpr double kPi = std::numbers::pi;

void check_range(double p_i) {
  if (!(p_i >= 0.0 && p_i <= 0.5)) {
    throw std::invalid_argument("p_I must lie in [0, 1/2]");
  }
}

}  // namespace

Vector phi(int m) {
  Vector v(2);
  v << std::cos(2 * kPi * m / 3), std::sin(2 * kPi * m / 3);
  return v;
}

Vector phi_perp(int m) {
  Vector v(2);
  v << -std::sin(2 * kPi * m / 3), std::cos(2 * kPi * m / 3);
  return v;
}

Matrix v_rot() { return rotation(2 * kPi / 3); }

States trine_states() {
  States s;
  for (int m = 0; m < 3; ++m) {
    s.phi.push_back(phi(m));
    s.phi_perp.push_back(phi_perp(m));
    s.psi.push_back(kron(s.phi.back(), s.phi.back()));
    s.rho.push_back(Operator::projector(s.psi.back()) * (1.0 / 3.0));
  }
  return s;
}

Dual dual_solution(double p_i) {
  check_range(p_i);
  const double t = std::sqrt(3.0 - 4.0 * p_i);
  Dual d;
  d.lambda_star = 0.5 + 1.0 / (2.0 * t);
  d.trace_x_star = 0.5 + (3.0 - 2.0 * p_i) / (4.0 * t);
  d.x_star = Operator::identity(2) * (d.trace_x_star / 2.0);
  return d;
}

double success_probability(double p_i) {
  check_range(p_i);
  return 0.5 * (1.0 - p_i) + 0.25 * std::sqrt(3.0 - 4.0 * p_i);
}

double branch_point() { return 0.5 + 1.0 / (2.0 * std::sqrt(3.0)); }

double alpha_of_lambda(double lambda) {
  if (lambda <= branch_point()) return 0.0;
  const double u = 2.0 * lambda - 1.0;
  return std::min(1.0, 2.0 * (6.0 * lambda * lambda - 6.0 * lambda + 1.0) / (3.0 * u * u));
}

Povm bob_template(double alpha) { return rotation_template(3, alpha, true); }

OptimalMeasurement optimal_measurement(double p_i) {
  check_range(p_i);
  const double alpha = 4.0 * p_i / 3.0;
  const Povm base = bob_template(alpha);
  std::vector<Povm> members;
  AliceMeasure alice;
  for (int k = 0; k < 3; ++k) {
    const Matrix u = rotation(2 * kPi * k / 3);
    Povm member;
    for (int m = 0; m < 3; ++m) {
      member.elements.push_back(conjugate(u, base.elements[static_cast<size_t>((m - k + 3) % 3)], false));
    }
    member.elements.push_back(conjugate(u, base.elements[3], false));
    members.push_back(std::move(member));
    alice.support.push_back({k, Operator::projector(phi_perp(k)) * (2.0 / 3.0)});
  }
  BobFamily family = BobFamily::explicit_list(std::move(members));
  SequentialMeasurement joint = assemble_sequential(alice, family);
  return {std::move(alice), std::move(family), std::move(joint)};
}

Matrix sigma(double lambda, const Povm& bob) {
  if (bob.size() != 4 || bob.dim() != 2) throw std::invalid_argument("need a 4-outcome qubit POVM");
  Matrix out = Matrix::Zero(2, 2);
  for (int m = 0; m < 3; ++m) {
    const Vector f = phi(m);
    const Matrix local = bob.elements[static_cast<size_t>(m)].matrix() + lambda * bob.elements[3].matrix();
    const double l = (f.adjoint() * local * f)(0, 0).real() / 3.0;
    out += l * (f * f.adjoint());
  }
  return out;
}

double v_plus(double theta, double lambda, const Povm& bob) {
  if (bob.size() != 4 || bob.dim() != 2) throw std::invalid_argument("need a 4-outcome qubit POVM");
  double v = 0.0;
  for (int m = 0; m < 3; ++m) {
    const Vector f = phi(m);
    const Matrix local = bob.elements[static_cast<size_t>(m)].matrix() + lambda * bob.elements[3].matrix();
    const double l = (f.adjoint() * local * f)(0, 0).real() / 3.0;
    // |<t|phi_m>|^2 = sin^2(theta - 2 pi m/3) = (1 - cos(2 theta - 4 pi m/3))/2.
    v += 0.5 * (1.0 - std::cos(2.0 * theta - 4.0 * kPi * m / 3.0)) * l;
  }
  return v;
}

double eigen_angle(const Matrix& s) {
  // Top eigenvector (-sin theta, cos theta) of [[a, b], [b, d]].
  const double a = s(0, 0).real();
  const double d = s(1, 1).real();
  const double b = 0.5 * (s(0, 1).real() + s(1, 0).real());
  return 0.5 * std::atan2(-2.0 * b, d - a);
}

double p0_star(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (lambda <= branch_point()) return (2.0 + std::sqrt(3.0)) / (4.0 * (lambda + 1.0));
  return lambda * (3.0 * lambda - 1.0) / (2.0 * (lambda + 1.0) * (2.0 * lambda - 1.0));
}

double v_bound(double lambda) { return 0.5 * (lambda + 1.0) * p0_star(lambda); }

GeneralizedProblem inconclusive_problem(double p_i, int theta_steps, int alpha_steps) {
  const States s = trine_states();
  std::vector<Operator> states;
  for (const Vector& v : s.psi) states.push_back(Operator::projector(v));
  return build_inconclusive(states, {1.0 / 3, 1.0 / 3, 1.0 / 3}, p_i,
                            BobFamily::qubit_rotation_grid(3, theta_steps, alpha_steps, true),
                            {2, 2});
}

GeneralizedProblem min_error_problem(int theta_steps) {
  const States s = trine_states();
  std::vector<Operator> states;
  for (const Vector& v : s.psi) states.push_back(Operator::projector(v));
  return build_min_error(states, {1.0 / 3, 1.0 / 3, 1.0 / 3},
                         BobFamily::qubit_rotation_grid(3, theta_steps, 1, false), {2, 2});
}

AnalyticInstance analytic_instance(double p_i, int theta_steps, int alpha_steps) {
  const OptimalMeasurement opt = optimal_measurement(p_i);
  const GeneralizedProblem grid = inconclusive_problem(p_i, theta_steps, alpha_steps);
  BobFamily family = grid.family();
  AliceMeasure alice;
  for (int k = 0; k < 3; ++k) {
    // Member k is the template rotated by 2 pi k/3 with outcomes shifted by k.
    family = family.with_member(opt.family.member(k), {2 * kPi * k / 3, 4.0 * p_i / 3.0,
                                                       static_cast<double>(k)});
    alice.support.push_back({family.size() - 1, opt.alice.support[static_cast<size_t>(k)].weight});
  }
  const Dual d = dual_solution(p_i);
  return {grid.with_family(std::move(family)), std::move(alice), DualPoint{d.x_star, {d.lambda_star}}};
}

}  // namespace seqdisc::trine
