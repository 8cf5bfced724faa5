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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "seqdisc/minimax.hpp"
#include "seqdisc/trine.hpp"
#include "support.hpp"

namespace seqdisc {
namespace {

using testing::Rng;

constexpr double kTrineOptimum = 0.9330127018922193;  // 1/2 + sqrt(3)/4

// F*(mu) from one inner solve (dual bound plus offset).
double optimal_mixed(const MinimaxProblem& mp, const SimplexPoint& mu) {
  return solve_dual(reduce_to_p(mp, mu)).report.dual_value + mixed_offset(mp, mu);
}

SimplexPoint random_simplex_point(Rng& rng, int k) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> mu(static_cast<size_t>(k));
  for (double& x : mu) x = e(rng);
  const double s = std::accumulate(mu.begin(), mu.end(), 0.0);
  for (double& x : mu) x /= s;
  return {mu};
}

// Per-state objectives on the analytic inconclusive instance; the extra
// inconclusive outcome earns nothing.
MinimaxProblem per_state_on_analytic(double p_i) {
  const trine::AnalyticInstance inst = trine::analytic_instance(p_i, 12, 3);
  const trine::States s = trine::trine_states();
  std::vector<std::vector<Operator>> c(3, std::vector<Operator>(4, Operator::zero(4)));
  for (int k = 0; k < 3; ++k) c[static_cast<size_t>(k)][static_cast<size_t>(k)] = s.rho[static_cast<size_t>(k)] * 3.0;
  return MinimaxProblem(inst.problem, c, {0.0, 0.0, 0.0});
}

TEST(Simplex, CheckedRejectsInvalidPoints) {
  EXPECT_NO_THROW(SimplexPoint::checked({0.25, 0.75}));
  EXPECT_THROW(SimplexPoint::checked({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(SimplexPoint::checked({1.5, -0.5}), std::invalid_argument);
  const SimplexPoint u = SimplexPoint::uniform(4);
  for (double x : u.mu) EXPECT_DOUBLE_EQ(x, 0.25);
}

TEST(Simplex, ProjectionIsTheEuclideanNearestPoint) {
  const std::vector<double> a = project_to_simplex({0.2, 0.3, 0.5});
  EXPECT_NEAR(a[0], 0.2, 1e-15);
  EXPECT_NEAR(a[2], 0.5, 1e-15);
  const std::vector<double> b = project_to_simplex({2.0, 0.0, 0.0});
  EXPECT_NEAR(b[0], 1.0, 1e-15);
  EXPECT_NEAR(b[1], 0.0, 1e-15);
  const std::vector<double> c = project_to_simplex({1.0, 1.0, -3.0});
  EXPECT_NEAR(c[0], 0.5, 1e-15);
  EXPECT_NEAR(c[2], 0.0, 1e-15);
  // Projection residual is orthogonal to the simplex at the support.
  Rng rng(71);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(5);
    for (double& x : v) x = n(rng);
    const std::vector<double> p = project_to_simplex(v);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    double shift = 0.0;
    int support = -1;
    for (int i = 0; i < 5; ++i) {
      EXPECT_GE(p[static_cast<size_t>(i)], 0.0);
      if (p[static_cast<size_t>(i)] > 0.0) {
        support = i;
        shift = v[static_cast<size_t>(i)] - p[static_cast<size_t>(i)];
      }
    }
    ASSERT_GE(support, 0);
    for (int i = 0; i < 5; ++i) {
      if (p[static_cast<size_t>(i)] > 0.0) EXPECT_NEAR(v[static_cast<size_t>(i)] - p[static_cast<size_t>(i)], shift, 1e-12);
      else EXPECT_LE(v[static_cast<size_t>(i)], shift + 1e-12);
    }
  }
}

TEST(MinimaxProblem, RejectsInconsistentSizes) {
  const MinimaxProblem mp = trine::minimax_problem(72);
  EXPECT_THROW(MinimaxProblem(mp.base(), mp.c(), {0.0}), std::invalid_argument);
  std::vector<std::vector<Operator>> short_row = mp.c();
  short_row[1].pop_back();
  EXPECT_THROW(MinimaxProblem(mp.base(), short_row, mp.d()), std::invalid_argument);
  std::vector<std::vector<Operator>> wrong_dim = mp.c();
  wrong_dim[0][0] = Operator::zero(2);
  EXPECT_THROW(MinimaxProblem(mp.base(), wrong_dim, mp.d()), std::invalid_argument);
}

TEST(MixedObjective, Examples) {
  Rng rng(72);
  const GeneralizedProblem base = testing::random_problem(rng, {2, 2}, 2, 4, 1);
  const AliceMeasure a = testing::random_alice(rng, 2, {0, 2});
  const MinimaxProblem single(base, {base.c()}, {0.3});
  EXPECT_NEAR(mixed_objective(single, SimplexPoint::uniform(1), a), objective(base, a) + 0.3, 1e-14);
  const MinimaxProblem twins(base, {base.c(), base.c()}, {0.0, 0.0});
  EXPECT_NEAR(mixed_objective(twins, SimplexPoint::checked({0.3, 0.7}), a), objective(base, a), 1e-14);

  const trine::AnalyticInstance inst = trine::analytic_instance(0.0, 12, 3);
  const MinimaxProblem per_state = per_state_on_analytic(0.0);
  EXPECT_NEAR(mixed_objective(per_state, SimplexPoint::uniform(3), inst.alice), kTrineOptimum, 1e-12);
}

TEST(ReduceToP, Examples) {
  const MinimaxProblem mp = trine::minimax_problem(72);
  const GeneralizedProblem uniform = reduce_to_p(mp, SimplexPoint::uniform(3));
  const trine::States s = trine::trine_states();
  for (int m = 0; m < 3; ++m) {
    EXPECT_MATRIX_NEAR(uniform.c(m).matrix(), s.rho[static_cast<size_t>(m)].matrix(), 1e-14);
  }
  const GeneralizedProblem vertex = reduce_to_p(mp, SimplexPoint::checked({0.0, 1.0, 0.0}));
  for (int m = 0; m < 3; ++m) EXPECT_MATRIX_NEAR(vertex.c(m).matrix(), mp.c()[1][static_cast<size_t>(m)].matrix(), 1e-15);
  EXPECT_DOUBLE_EQ(mixed_offset(mp, SimplexPoint::uniform(3)), 0.0);

  Rng rng(73);
  const GeneralizedProblem base = testing::random_problem(rng, {2, 2}, 2, 4, 1);
  const GeneralizedProblem same = reduce_to_p(MinimaxProblem(base, {base.c()}, {0.0}), SimplexPoint::uniform(1));
  for (int m = 0; m < base.M(); ++m) EXPECT_MATRIX_NEAR(same.c(m).matrix(), base.c(m).matrix(), 1e-15);
  EXPECT_EQ(same.b(), base.b());
}

TEST(SolveMinimax, SinglePriorIsOneProblemSolve) {
  Rng rng(74);
  const GeneralizedProblem base = testing::random_problem(rng, {2, 2}, 2, 5, 1);
  const MinimaxSolution sol = solve_minimax(MinimaxProblem(base, {base.c()}, {0.0}));
  const DualSolution direct = solve_dual(base);
  EXPECT_NEAR(sol.value, direct.report.dual_value, 1e-4);
  const SaddleReport r = check_saddle(sol.problem, sol.mu, sol.alice, 1e-3);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.support_spread, 0.0);
  EXPECT_NEAR(r.worst_shortfall, r.value_gap, 1e-15);
}

TEST(SolveMinimax, TrinePerStateIsUniformAtTheMinErrorValue) {
  const MinimaxProblem mp = trine::minimax_problem();
  const MinimaxSolution sol = solve_minimax(mp);
  for (double x : sol.mu.mu) EXPECT_NEAR(x, 1.0 / 3.0, 1e-3);
  EXPECT_NEAR(sol.value, kTrineOptimum, 1e-3);
  EXPECT_TRUE(check_saddle(sol.problem, sol.mu, sol.alice, 1e-3).pass);
}

TEST(SolveMinimax, IdenticalObjectivesRestOnTheSaddleCheck) {
  Rng rng(75);
  const GeneralizedProblem base = testing::random_problem(rng, {2, 2}, 2, 4, 0);
  const MinimaxProblem mp(base, {base.c(), base.c()}, {0.0, 0.0});
  const MinimaxSolution sol = solve_minimax(mp);
  EXPECT_TRUE(check_saddle(sol.problem, sol.mu, sol.alice, 1e-3).pass);
  EXPECT_NEAR(sol.value, solve_dual(base).report.dual_value, 1e-4);
}

TEST(SolveMinimax, AsymmetricObjectivesBalanceTheActiveStates) {
  Rng rng(76);
  const GeneralizedProblem base = testing::random_problem(rng, {2, 2}, 2, 5, 0);
  std::vector<Operator> other = base.c();
  std::swap(other[0], other[1]);
  const MinimaxProblem mp(base, {base.c(), other}, {0.0, 0.05});
  const MinimaxSolution sol = solve_minimax(mp);
  const SaddleReport r = check_saddle(sol.problem, sol.mu, sol.alice, 1e-3);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(sol.lower_bound, sol.upper_bound + 1e-9);
}

TEST(CheckSaddle, WorstCaseFailsForAVertexPrior) {
  const MinimaxProblem mp = trine::minimax_problem(72);
  const MinimaxSolution sol = solve_minimax(mp);
  const SaddleReport r = check_saddle(sol.problem, SimplexPoint::checked({1.0, 0.0, 0.0}), sol.alice, 1e-3);
  EXPECT_NEAR(r.optimal_value, 1.0, 1e-4);
  EXPECT_FALSE(r.worst_case_pass);
  EXPECT_FALSE(r.pass);

  AliceMeasure single;
  single.support.push_back({0, Operator::identity(2)});
  const SaddleReport s = check_saddle(mp, SimplexPoint::uniform(3), single, 1e-3);
  EXPECT_TRUE(s.primal_feasible);
  EXPECT_FALSE(s.value_pass);
  EXPECT_FALSE(s.pass);
}

TEST(SymmetrizeMinimax, AveragesPriorsOverOrbits) {
  const MinimaxProblem mp = trine::minimax_problem(72);
  const GroupAction gr = trine::symmetry_group(false);
  const MinimaxSolution sol = solve_minimax(mp);
  const MinimaxSolution sym = symmetrize_minimax(gr, sol);
  for (double x : sym.mu.mu) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
  EXPECT_LE(covariance_residual(gr, sym.problem.family(), sym.alice), 1e-10);
  EXPECT_TRUE(check_saddle(sym.problem, sym.mu, sym.alice, 1e-3).pass);

  MinimaxSolution vertex = sol;
  vertex.mu = SimplexPoint::checked({1.0, 0.0, 0.0});
  for (double x : symmetrize_minimax(gr, vertex).mu.mu) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
}

TEST(SymmetrizeMinimax, RepairsAnAsymmetricPair) {
  const MinimaxProblem mp = trine::minimax_problem(72);
  const GroupAction gr = trine::symmetry_group(false);
  MinimaxSolution sol = solve_minimax(mp);
  // Mix in a lopsided perturbation that keeps the measure valid.
  for (AliceAtom& atom : sol.alice.support) atom.weight = atom.weight * 0.9;
  sol.alice.support.push_back({7, Operator::identity(2) * 0.1});
  sol.mu = SimplexPoint::checked({0.5, 0.3, 0.2});
  EXPECT_GT(covariance_residual(gr, sol.problem.family(), sol.alice), 1e-3);
  const MinimaxSolution sym = symmetrize_minimax(gr, sol);
  EXPECT_LE(covariance_residual(gr, sym.problem.family(), sym.alice), 1e-10);
  const std::vector<double> f = objective_values(sym.problem, sym.alice);
  EXPECT_NEAR(*std::max_element(f.begin(), f.end()), *std::min_element(f.begin(), f.end()), 1e-10);
}

TEST(SymmetrizeMinimax, RejectsAsymmetricObjectives) {
  const MinimaxProblem mp = trine::minimax_problem(72);
  std::vector<double> d = mp.d();
  d[0] = 0.1;
  const MinimaxProblem shifted(mp.base(), mp.c(), d);
  MinimaxSolution sol = solve_minimax(mp);
  sol.problem = shifted;
  EXPECT_THROW(symmetrize_minimax(trine::symmetry_group(false), sol), std::invalid_argument);
}

TEST(MinimaxProperties, OptimalMixedValueIsConvex) {
  Rng rng(77);
  const MinimaxProblem mp = trine::minimax_problem(72);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const SimplexPoint a = random_simplex_point(rng, 3);
    const SimplexPoint b = random_simplex_point(rng, 3);
    const double t = u(rng);
    SimplexPoint mid;
    for (int k = 0; k < 3; ++k) mid.mu.push_back(t * a.mu[static_cast<size_t>(k)] + (1 - t) * b.mu[static_cast<size_t>(k)]);
    EXPECT_LE(optimal_mixed(mp, mid), t * optimal_mixed(mp, a) + (1 - t) * optimal_mixed(mp, b) + 1e-3);
  }
}

TEST(MinimaxProperties, SandwichCollapsesAtTheSolution) {
  Rng rng(78);
  const MinimaxProblem mp = trine::minimax_problem(72);
  const MinimaxSolution sol = solve_minimax(mp);
  EXPECT_NEAR(optimal_mixed(mp, sol.mu), sol.value, 1e-3);
  for (int trial = 0; trial < 5; ++trial) {
    EXPECT_GE(optimal_mixed(mp, random_simplex_point(rng, 3)), sol.value - 1e-3);
  }
}

TEST(MinimaxProperties, SolutionMaximizesTheWorstCase) {
  const MinimaxProblem mp = trine::minimax_problem(72);
  const GroupAction gr = trine::symmetry_group(false);
  const MinimaxSolution sol = solve_minimax(mp);
  const std::vector<double> f = objective_values(sol.problem, sol.alice);
  const double best = *std::min_element(f.begin(), f.end());
  const BobFamily& family = mp.family();
  // Symmetrized one- and two-member candidates over the grid.
  double searched = 0.0;
  for (int w = 0; w < family.size(); w += 3) {
    for (int v = w; v < family.size(); v += 9) {
      AliceMeasure phi;
      if (v == w) {
        phi.support.push_back({w, Operator::identity(2)});
      } else {
        phi.support.push_back({w, Operator::identity(2) * 0.5});
        phi.support.push_back({v, Operator::identity(2) * 0.5});
      }
      const std::vector<double> g = objective_values(mp, symmetrize_alice(gr, family, phi));
      searched = std::max(searched, *std::min_element(g.begin(), g.end()));
    }
  }
  EXPECT_GE(best, searched - 1e-3);
  EXPECT_NEAR(best, kTrineOptimum, 1e-3);
}

}  // namespace
}  // namespace seqdisc
