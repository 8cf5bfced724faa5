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

#ifndef SEQDISC_TRINE_HPP
#define SEQDISC_TRINE_HPP

// Closed forms for the double trine |psi_m> = |phi_m> (x) |phi_m>,
// |phi_m> = cos(2 pi m/3)|0> + sin(2 pi m/3)|1>, with equal priors and a
// fixed inconclusive probability p_i in [0, 1/2].

#include <vector>

#include "seqdisc/dual_solver.hpp"
#include "seqdisc/measurement.hpp"
#include "seqdisc/operator.hpp"
#include "seqdisc/problem.hpp"

namespace seqdisc::trine {

Vector phi(int m);
Vector phi_perp(int m);
/// Rotation by 2 pi/3; maps phi_m to phi_{m+1}.
Matrix v_rot();

struct States {
  std::vector<Operator> rho;  // (1/3)|psi_m><psi_m|
  std::vector<Vector> psi;
  std::vector<Vector> phi;
  std::vector<Vector> phi_perp;
};
States trine_states();

struct Dual {
  double lambda_star = 0.0;
  double trace_x_star = 0.0;
  Operator x_star;  // (trace_x_star / 2) * I
};
/// Throws std::invalid_argument outside [0, 1/2].
Dual dual_solution(double p_i);
double success_probability(double p_i);

/// Template alpha at multiplier lambda, clamped at 0 below the branch point.
double alpha_of_lambda(double lambda);
/// 1/2 + 1/(2 sqrt 3).
double branch_point();

/// Four-outcome template {0, |B1><B1|, |B2><B2|, alpha|1><1|}.
Povm bob_template(double alpha);

struct OptimalMeasurement {
  AliceMeasure alice;  // A(omega_k) = (2/3)|phi_k^perp><phi_k^perp|
  BobFamily family;    // the three rotated templates omega_0..omega_2
  SequentialMeasurement joint;
};
OptimalMeasurement optimal_measurement(double p_i);

/// <t|sigma|t> for t = U_theta|1> = (-sin theta, cos theta), with sigma the
/// member's reduced operator at lambda. Equals the top eigenvalue of sigma
/// when theta is the rotation angle that diagonalizes it.
double v_plus(double theta, double lambda, const Povm& bob);
/// Rotation angle theta with U_theta|1> the top eigenvector of a real
/// symmetric 2x2 operator.
double eigen_angle(const Matrix& sigma);
/// sigma_omega(lambda) for the double trine inconclusive data (d_A = 2).
Matrix sigma(double lambda, const Povm& bob);

/// Piecewise optimum of the four-state success probability at theta = 0.
double p0_star(double lambda);
/// (lambda + 1)/2 * p0_star(lambda).
double v_bound(double lambda);

/// Inconclusive problem on the qubit-rotation grid.
GeneralizedProblem inconclusive_problem(double p_i, int theta_steps = 720,
                                         int alpha_steps = 101);
/// Equal-prior minimum-error problem on the three-outcome rotation grid.
GeneralizedProblem min_error_problem(int theta_steps = 720);

/// Closed-form optimum on the rotation grid: the three optimal Bob members
/// are appended to the grid and the Alice measure refers to them.
struct AnalyticInstance {
  GeneralizedProblem problem;
  AliceMeasure alice;
  DualPoint dual;
};
AnalyticInstance analytic_instance(double p_i, int theta_steps = 720, int alpha_steps = 101);

}  // namespace seqdisc::trine

#endif  // SEQDISC_TRINE_HPP
