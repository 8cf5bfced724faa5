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
#include <numbers>

#include <gtest/gtest.h>

#include "seqdisc/measurement.hpp"
#include "seqdisc/trine.hpp"
#include "support.hpp"

namespace seqdisc {
namespace {

using testing::Rng;

Povm z_basis() { return Povm{{Operator::diagonal({1, 0}), Operator::diagonal({0, 1})}}; }

TEST(Assemble, SingleOutcomeAliceGivesIdentityTensorBob) {
  Rng rng(21);
  const Povm bob = testing::random_povm(rng, 2, 3);
  const BobFamily family = BobFamily::explicit_list({bob});
  AliceMeasure a;
  a.support.push_back({0, Operator::identity(2)});
  const SequentialMeasurement m = assemble_sequential(a, family);
  for (int k = 0; k < 3; ++k) {
    EXPECT_MATRIX_NEAR(m.joint.elements[static_cast<size_t>(k)].matrix(),
                       tensor(Operator::identity(2), bob.elements[static_cast<size_t>(k)]).matrix(), 1e-15);
  }
}

TEST(Assemble, SplitWeightsOnOneMemberMatchSingleOutcome) {
  Rng rng(22);
  const BobFamily family = BobFamily::explicit_list({testing::random_povm(rng, 2, 2)});
  AliceMeasure whole, halves;
  whole.support.push_back({0, Operator::identity(2)});
  halves.support.push_back({0, Operator::identity(2) * 0.5});
  halves.support.push_back({0, Operator::identity(2) * 0.5});
  const SequentialMeasurement a = assemble_sequential(whole, family), b = assemble_sequential(halves, family);
  for (int k = 0; k < 2; ++k) {
    EXPECT_MATRIX_NEAR(a.joint.elements[static_cast<size_t>(k)].matrix(),
                       b.joint.elements[static_cast<size_t>(k)].matrix(), 1e-15);
  }
  // Repeated members are reported but not merged.
  EXPECT_FALSE(validate_alice(halves, 2, family, 1e-9).warnings.empty());
}

TEST(Assemble, TrineOptimumMatchesClosedFormJointPovm) {
  for (double p_i : {0.0, 0.25, 0.5}) {
    const trine::OptimalMeasurement opt = trine::optimal_measurement(p_i);
    const Povm tmpl = trine::bob_template(4.0 * p_i / 3.0);
    const Matrix v = trine::v_rot();
    for (int m = 0; m < 4; ++m) {
      Matrix expected = Matrix::Zero(4, 4);
      for (int k = 0; k < 3; ++k) {
        const Matrix perp = Operator::projector(trine::phi_perp(k)).matrix();
        if (m == 3) {
          expected += (8.0 / 9.0) * p_i * kron(perp, perp);
        } else if (k != m) {
          Matrix vk = Matrix::Identity(2, 2);
          for (int i = 0; i < k; ++i) vk = v * vk;
          const Matrix bob = vk * tmpl.elements[static_cast<size_t>(((m - k) % 3 + 3) % 3)].matrix() * vk.adjoint();
          expected += (2.0 / 3.0) * kron(perp, bob);
        }
      }
      EXPECT_MATRIX_NEAR(opt.joint.joint.elements[static_cast<size_t>(m)].matrix(), expected, 1e-12)
          << "p_I=" << p_i << " m=" << m;
    }
  }
}

TEST(Assemble, RejectsUnresolvedMemberAndBrokenNormalization) {
  const BobFamily family = BobFamily::explicit_list({z_basis()});
  AliceMeasure a;
  a.support.push_back({3, Operator::identity(2)});
  EXPECT_ANY_THROW(assemble_sequential(a, family));
  a.support[0] = {0, Operator::identity(2) * 0.9};
  EXPECT_THROW(assemble_sequential(a, family), std::invalid_argument);
}

TEST(Assemble, RandomMeasuresAreJointPovms) {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Povm> members;
    for (int w = 0; w < 4; ++w) members.push_back(testing::random_povm(rng, 2, 3));
    const BobFamily family = BobFamily::explicit_list(members);
    const AliceMeasure a = testing::random_alice(rng, 3, {0, 1, 2, 3});
    const SequentialMeasurement m = assemble_sequential(a, family);
    const PovmReport r = validate_povm(m.joint, 1e-9);
    EXPECT_TRUE(r.passes) << r.completeness_residual << " " << r.max_psd_violation;
  }
}

TEST(Assemble, LinearInAliceWeights) {
  Rng rng(24);
  std::vector<Povm> members;
  for (int w = 0; w < 3; ++w) members.push_back(testing::random_povm(rng, 2, 2));
  const BobFamily family = BobFamily::explicit_list(members);
  const AliceMeasure a1 = testing::random_alice(rng, 2, {0, 1, 2});
  const AliceMeasure a2 = testing::random_alice(rng, 2, {0, 1, 2});
  const double t = 0.37;
  AliceMeasure mix;
  for (int k = 0; k < 3; ++k) {
    mix.support.push_back({k, a1.support[static_cast<size_t>(k)].weight * t +
                                  a2.support[static_cast<size_t>(k)].weight * (1 - t)});
  }
  const SequentialMeasurement m1 = assemble_sequential(a1, family), m2 = assemble_sequential(a2, family),
                              mm = assemble_sequential(mix, family);
  for (int k = 0; k < 2; ++k) {
    const size_t i = static_cast<size_t>(k);
    EXPECT_MATRIX_NEAR(mm.joint.elements[i].matrix(),
                       t * m1.joint.elements[i].matrix() + (1 - t) * m2.joint.elements[i].matrix(), 1e-12);
  }
}

TEST(OutcomeProbabilities, OrthogonalStatesOwnProjectors) {
  const BobFamily family = BobFamily::explicit_list({z_basis()});
  AliceMeasure a;
  a.support.push_back({0, Operator::diagonal({1, 0})});
  a.support.push_back({0, Operator::diagonal({0, 1})});
  // Bob's Z outcome alone identifies |00> versus |01>.
  const SequentialMeasurement m = assemble_sequential(a, family);
  Vector s0 = Vector::Zero(4), s1 = Vector::Zero(4);
  s0(0) = 1;
  s1(1) = 1;
  const Eigen::MatrixXd p = outcome_probabilities(m, {Operator::projector(s0), Operator::projector(s1)});
  EXPECT_LE((p - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(OutcomeProbabilities, TrineAtQuarterInconclusive) {
  const trine::OptimalMeasurement opt = trine::optimal_measurement(0.25);
  const Eigen::MatrixXd p = outcome_probabilities(opt.joint, trine::trine_states().rho);
  double success = 0.0, inconclusive = 0.0;
  for (int r = 0; r < 3; ++r) {
    success += p(r, r);
    inconclusive += p(r, 3);
  }
  EXPECT_NEAR(success, 0.5 * 0.75 + 0.25 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(success, 0.728553, 1e-6);
  EXPECT_NEAR(inconclusive, 0.25, 1e-12);
}

TEST(OutcomeProbabilities, ZeroElementGivesZeroColumnAndRowsSumToTrace) {
  Rng rng(25);
  Povm bob{{Operator::identity(2), Operator::zero(2)}};
  const BobFamily family = BobFamily::explicit_list({bob, testing::random_povm(rng, 2, 2)});
  const AliceMeasure a = testing::random_alice(rng, 2, {0, 1});
  AliceMeasure only_first;
  only_first.support.push_back({0, Operator::identity(2)});
  const std::vector<Operator> states{testing::random_psd(rng, 4) * 0.3, testing::random_density(rng, 4)};
  const Eigen::MatrixXd p0 = outcome_probabilities(assemble_sequential(only_first, family), states);
  EXPECT_NEAR(p0.col(1).cwiseAbs().maxCoeff(), 0.0, 1e-15);
  const Eigen::MatrixXd p = outcome_probabilities(assemble_sequential(a, family), states);
  for (int r = 0; r < 2; ++r) EXPECT_NEAR(p.row(r).sum(), states[static_cast<size_t>(r)].trace(), 1e-9);
}

TEST(OutcomeProbabilities, RejectsDimensionMismatch) {
  const BobFamily family = BobFamily::explicit_list({z_basis()});
  AliceMeasure a;
  a.support.push_back({0, Operator::identity(2)});
  EXPECT_THROW(outcome_probabilities(assemble_sequential(a, family), {Operator::identity(3)}),
               std::invalid_argument);
}

TEST(ValidatePovm, TrineTemplateAtHalfPasses) {
  const PovmReport r = validate_povm(trine::bob_template(0.5), 1e-9);
  EXPECT_TRUE(r.passes);
  EXPECT_LE(r.completeness_residual, 1e-15);
}

TEST(ValidatePovm, ScaledElementsFailCompleteness) {
  Povm p = trine::bob_template(0.5);
  for (Operator& e : p.elements) e = e * 1.01;
  const PovmReport r = validate_povm(p, 1e-9);
  EXPECT_FALSE(r.passes);
  EXPECT_NEAR(r.completeness_residual, 0.01 * std::sqrt(2.0), 1e-12);
}

TEST(ValidatePovm, SmallNegativeEigenvalueFailsPsd) {
  const Povm p{{Operator::diagonal({1, 1 + 1e-6}), Operator::diagonal({0, -1e-6})}};
  const PovmReport r = validate_povm(p, 1e-9);
  EXPECT_FALSE(r.passes);
  EXPECT_NEAR(r.max_psd_violation, 1e-6, 1e-15);
}

TEST(BobFamily, RotationGridMembersArePovmsWithFixedOutcomeCount) {
  const BobFamily f = BobFamily::qubit_rotation_grid(3, 24, 5, true);
  EXPECT_EQ(f.outcomes(), 4);
  for (int w = 0; w < f.size(); ++w) {
    const Povm p = f.member(w);
    EXPECT_EQ(p.size(), 4);
    EXPECT_TRUE(validate_povm(p, 1e-9).passes);
  }
}

TEST(BobFamily, FindIsPeriodicAndAppendsExtras) {
  const BobFamily f = BobFamily::qubit_rotation_grid(3, 12, 3, true);
  const int w = 5;
  std::vector<double> params = f.parameters(w);
  EXPECT_EQ(f.find(params), w);
  params.front() += 2.0 * std::numbers::pi;
  EXPECT_EQ(f.find(params), w);
  params.front() += 1e-3;
  EXPECT_EQ(f.find(params), -1);
  const BobFamily g = f.with_member(f.generate(params), params);
  EXPECT_EQ(g.find(params), f.size());
  EXPECT_TRUE(g.same_grid(f));
}

TEST(BobFamily, ExplicitListRejectsInconsistentMembers) {
  EXPECT_THROW(BobFamily::explicit_list({z_basis(), Povm{{Operator::identity(2)}}}), std::invalid_argument);
  EXPECT_THROW(BobFamily::explicit_list({Povm{{Operator::diagonal({1, 0}), Operator::diagonal({0, 0.5})}}}),
               std::invalid_argument);
}

}  // namespace
}  // namespace seqdisc
