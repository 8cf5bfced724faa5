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

#ifndef SEQDISC_TESTS_SUPPORT_HPP
#define SEQDISC_TESTS_SUPPORT_HPP

// Random instances and independent oracles shared by the unit tests. The
// eigen-decompositions here use Eigen's solver, never the library's own.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "seqdisc/measurement.hpp"
#include "seqdisc/operator.hpp"
#include "seqdisc/problem.hpp"

namespace seqdisc::testing {

using Rng = std::mt19937_64;

inline Matrix random_matrix(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(n(rng), n(rng));
  }
  return m;
}

inline Operator random_hermitian(Rng& rng, int dim) {
  const Matrix g = random_matrix(rng, dim, dim);
  return Operator::hermitian_part(g + g.adjoint());
}

inline Operator random_psd(Rng& rng, int dim, int rank = -1) {
  const Matrix g = random_matrix(rng, dim, rank < 0 ? dim : rank);
  return Operator::hermitian_part(g * g.adjoint());
}

inline Operator random_density(Rng& rng, int dim, int rank = -1) {
  const Operator q = random_psd(rng, dim, rank);
  return q * (1.0 / q.trace());
}

inline Matrix random_unitary(Rng& rng, int dim) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, dim, dim));
  return qr.householderQ();
}

/// (sum G)^(-1/2) G_i (sum G)^(-1/2) for random PSD G_i.
inline Povm random_povm(Rng& rng, int dim, int outcomes) {
  std::vector<Matrix> g;
  Matrix s = Matrix::Zero(dim, dim);
  for (int i = 0; i < outcomes; ++i) {
    g.push_back(random_psd(rng, dim).matrix());
    s += g.back();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  const Matrix root = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                      es.eigenvectors().adjoint();
  Povm p;
  for (const Matrix& gi : g) p.elements.push_back(Operator::hermitian_part(root * gi * root));
  return p;
}

/// Alice measure on `omegas` with random PSD weights summing to I.
inline AliceMeasure random_alice(Rng& rng, int dim_a, const std::vector<int>& omegas) {
  const Povm weights = random_povm(rng, dim_a, static_cast<int>(omegas.size()));
  AliceMeasure a;
  for (size_t k = 0; k < omegas.size(); ++k) a.support.push_back({omegas[k], weights.elements[k]});
  return a;
}

inline double oracle_min_eig(const Matrix& q) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(q, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double oracle_max_eig(const Matrix& q) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(q, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Random d_A x d_B problem with an explicit Bob family, J random
/// inequality rows, and objectives weighted by random states. The rows
/// are scaled so that the measurement A = I (x) on member 0 is strictly
/// feasible, which keeps the primal feasible set nonempty.
inline GeneralizedProblem random_problem(Rng& rng, BipartiteShape shape, int outcomes, int members,
                                         int constraints) {
  std::vector<Povm> family;
  for (int w = 0; w < members; ++w) family.push_back(random_povm(rng, shape.dim_b, outcomes));
  std::vector<Operator> c;
  for (int m = 0; m < outcomes; ++m) c.push_back(random_density(rng, shape.joint()) * (1.0 / outcomes));
  std::vector<std::vector<Operator>> a(static_cast<size_t>(constraints));
  std::vector<double> b;
  const BobFamily fam = BobFamily::explicit_list(family);
  GeneralizedProblem probe(shape, c, {}, {}, fam);
  for (int j = 0; j < constraints; ++j) {
    for (int m = 0; m < outcomes; ++m) a[static_cast<size_t>(j)].push_back(random_hermitian(rng, shape.joint()) * 0.2);
    GeneralizedProblem one(shape, c, {a[static_cast<size_t>(j)]}, {0.0}, fam);
    AliceMeasure trivial;
    trivial.support.push_back({0, Operator::identity(shape.dim_a)});
    b.push_back(constraint_values(one, trivial)[0] + 0.05);
  }
  return GeneralizedProblem(shape, c, a, b, fam);
}

}  // namespace seqdisc::testing

// Expands at the use site, which must include gtest.
#define EXPECT_MATRIX_NEAR(a, b, tol) EXPECT_LE(::seqdisc::testing::max_abs_diff((a), (b)), (tol))

#endif  // SEQDISC_TESTS_SUPPORT_HPP
