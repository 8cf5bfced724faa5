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

#include <cmath>

#include <gtest/gtest.h>

#include "seqdisc/certificate.hpp"
#include "seqdisc/dual_solver.hpp"
#include "seqdisc/trine.hpp"
#include "support.hpp"

namespace seqdisc {
namespace {

using testing::Rng;

// Analytic trine optimum with member `k` of the Alice support replaced by
// its Bob POVM rotated by `angle`.
trine::AnalyticInstance rotated_member(double p_i, int k, double angle) {
  trine::AnalyticInstance inst = trine::analytic_instance(p_i, 72, 11);
  const Matrix u = rotation(angle);
  Povm turned;
  for (const Operator& e : inst.problem.family().member(inst.alice.support[static_cast<size_t>(k)].omega).elements) {
    turned.elements.push_back(conjugate(u, e, false));
  }
  const BobFamily family = inst.problem.family().with_member(turned);
  inst.alice.support[static_cast<size_t>(k)].omega = family.size() - 1;
  inst.problem = inst.problem.with_family(family);
  return inst;
}

TEST(ConditionTwo, AnalyticTrineTriplePasses) {
  const trine::AnalyticInstance inst = trine::analytic_instance(0.25);
  const CertificateReport r = check_condition_2(inst.problem, inst.alice, inst.dual, 1e-8);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.kernel_residual, 1e-8);
  EXPECT_LE(r.slackness_residual, 1e-8);
  EXPECT_GE(r.dominance_margin, -1e-8);
}

TEST(ConditionTwo, RotatedBobMemberBreaksKernelAlignment) {
  const trine::AnalyticInstance inst = rotated_member(0.25, 0, 0.1);
  const CertificateReport r = check_condition_2(inst.problem, inst.alice, inst.dual, 1e-8);
  EXPECT_GT(r.kernel_residual, 1e-3);
  EXPECT_FALSE(r.pass);
}

TEST(ConditionTwo, ResidualGrowsWithPerturbation) {
  double previous = -1.0;
  for (double angle : {0.0, 0.01, 0.03, 0.1, 0.3}) {
    const trine::AnalyticInstance inst = rotated_member(0.25, 1, angle);
    const double res = check_condition_2(inst.problem, inst.alice, inst.dual, 1e-8).kernel_residual;
    EXPECT_GT(res, previous);
    previous = res;
  }
}

TEST(ConditionTwo, NoConstraintsMeansVacuousSlackness) {
  Rng rng(51);
  const GeneralizedProblem p = testing::random_problem(rng, {2, 2}, 2, 4, 0);
  const DualSolution sol = solve_dual(p);
  const CertificateReport r = check_condition_2(sol.problem, sol.primal, sol.dual);
  EXPECT_EQ(r.slackness_residual, 0.0);
  EXPECT_TRUE(r.slackness_pass);
  EXPECT_TRUE(r.pass);
}

TEST(ConditionTwo, RejectsStructuralMismatch) {
  const trine::AnalyticInstance inst = trine::analytic_instance(0.25, 12, 3);
  EXPECT_THROW(check_condition_2(inst.problem, inst.alice, DualPoint{Operator::identity(3), {1.0}}),
               std::invalid_argument);
  EXPECT_THROW(check_condition_2(inst.problem, inst.alice, DualPoint{inst.dual.x, {}}), std::invalid_argument);
}

TEST(ConditionThree, AnalyticTrineRebuildsScalarDual) {
  const trine::AnalyticInstance inst = trine::analytic_instance(0.25);
  const CertificateReport r = check_condition_3(inst.problem, inst.alice, inst.dual.lambda, 1e-8);
  EXPECT_TRUE(r.pass);
  const double half_trace = trine::dual_solution(0.25).trace_x_star / 2.0;
  EXPECT_MATRIX_NEAR(r.x.matrix(), half_trace * Matrix::Identity(2, 2), 1e-12);
  EXPECT_LE(r.antihermitian_residual, 1e-12);
}

TEST(ConditionThree, ZeroMultiplierFailsWhileConstraintIsActive) {
  const trine::AnalyticInstance inst = trine::analytic_instance(0.25, 72, 11);
  EXPECT_FALSE(check_condition_3(inst.problem, inst.alice, {0.0}).pass);
}

TEST(ConditionThree, EqualObjectivesMakeEveryMeasureOptimal) {
  Rng rng(52);
  const Operator common = testing::random_density(rng, 4) * 0.5;
  std::vector<Povm> members;
  for (int w = 0; w < 4; ++w) members.push_back(testing::random_povm(rng, 2, 2));
  const GeneralizedProblem p({2, 2}, {common, common}, {}, {}, BobFamily::explicit_list(members));
  AliceMeasure uniform;
  for (int w = 0; w < 4; ++w) uniform.support.push_back({w, Operator::identity(2) * 0.25});
  const CertificateReport r = check_condition_3(p, uniform, {});
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(check_condition_2(p, uniform, DualPoint{r.x, {}}).pass);
}

TEST(DualityGap, Examples) {
  const trine::AnalyticInstance inst = trine::analytic_instance(0.0);
  EXPECT_LE(std::abs(duality_gap(inst.problem, inst.alice, inst.dual).gap), 1e-9);
  const DualPoint raised{inst.dual.x + Operator::identity(2) * 0.5, inst.dual.lambda};
  const GapReport g = duality_gap(inst.problem, inst.alice, raised);
  EXPECT_NEAR(g.gap, 1.0, 1e-9);
  EXPECT_TRUE(g.primal_feasible);
  EXPECT_TRUE(g.dual_feasible);
}

TEST(DualityGap, RandomFeasibleMeasuresNeverBeatTheDual) {
  Rng rng(53);
  const GeneralizedProblem p = testing::random_problem(rng, {2, 2}, 3, 5, 0);
  const DualSolution sol = solve_dual(p);
  for (int trial = 0; trial < 50; ++trial) {
    const AliceMeasure a = testing::random_alice(rng, 2, {0, 1, 2, 3, 4});
    const GapReport g = duality_gap(sol.problem, a, sol.dual);
    EXPECT_GE(g.gap, -1e-9);
  }
}

TEST(DualityGap, FlagsInfeasibleInputs) {
  const trine::AnalyticInstance inst = trine::analytic_instance(0.25, 36, 5);
  const DualPoint low{inst.dual.x * 0.5, inst.dual.lambda};
  EXPECT_FALSE(duality_gap(inst.problem, inst.alice, low).dual_feasible);
  AliceMeasure scaled = inst.alice;
  for (AliceAtom& atom : scaled.support) atom.weight = atom.weight * 0.9;
  EXPECT_FALSE(duality_gap(inst.problem, scaled, inst.dual).primal_feasible);
}

TEST(OutcomeBound, Examples) {
  const trine::AnalyticInstance inst = trine::analytic_instance(0.25, 12, 3);
  EXPECT_TRUE(check_outcome_bound(inst.alice, inst.problem));
  AliceMeasure nine;
  for (int w = 0; w < 9; ++w) nine.support.push_back({w, Operator::identity(2) * (1.0 / 9)});
  EXPECT_FALSE(check_outcome_bound(nine, inst.problem));
  Rng rng(54);
  const GeneralizedProblem free = testing::random_problem(rng, {2, 2}, 2, 4, 0);
  EXPECT_TRUE(check_outcome_bound(testing::random_alice(rng, 2, {0, 1, 2, 3}), free));
}

TEST(Equivalence, SolvedPairsPassAndPerturbedPairsFailTogether) {
  Rng rng(55);
  for (int trial = 0; trial < 6; ++trial) {
    const GeneralizedProblem p = testing::random_problem(rng, {2, 2}, 3, 5, trial % 2);
    const DualSolution sol = solve_dual(p);
    const double tol = 1e-6;
    const CertificateReport c2 = check_condition_2(sol.problem, sol.primal, sol.dual, tol);
    const CertificateReport c3 = check_condition_3(sol.problem, sol.primal, sol.dual.lambda, tol);
    const GapReport g = duality_gap(sol.problem, sol.primal, sol.dual, tol);
    EXPECT_TRUE(c2.pass);
    EXPECT_TRUE(c3.pass);
    EXPECT_LE(g.gap, tol);

    // Moving weight toward the identity leaves the kernel structure.
    AliceMeasure bent = sol.primal;
    const double n = static_cast<double>(bent.size());
    for (AliceAtom& atom : bent.support) atom.weight = atom.weight * 0.7 + Operator::identity(2) * (0.3 / n);
    const CertificateReport b2 = check_condition_2(sol.problem, bent, sol.dual, tol);
    const CertificateReport b3 = check_condition_3(sol.problem, bent, sol.dual.lambda, tol);
    const GapReport bg = duality_gap(sol.problem, bent, sol.dual, tol);
    if (bent.size() > 1 && bg.gap > tol) {
      EXPECT_FALSE(b2.pass);
      EXPECT_FALSE(b3.pass);
    } else {
      EXPECT_EQ(b2.pass, b3.pass);
    }
  }
}

}  // namespace
}  // namespace seqdisc
