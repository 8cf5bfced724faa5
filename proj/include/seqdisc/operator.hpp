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

#ifndef SEQDISC_OPERATOR_HPP
#define SEQDISC_OPERATOR_HPP

// Dense Hermitian operators on small (bipartite) Hilbert spaces.
//
// All values are immutable once constructed. Hermiticity is enforced at
// construction: inputs whose anti-Hermitian residual is within the tolerance
// are symmetrized as (q + q^dagger)/2, anything else is rejected.

#include <complex>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace seqdisc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dimensions (d_A, d_B) of a composite space H = H_A (x) H_B.
struct BipartiteShape {
  int dim_a = 1;
  int dim_b = 1;

  int joint() const { return dim_a * dim_b; }
  bool operator==(const BipartiteShape&) const = default;
};

class Operator {
 public:
  static constexpr double kDefaultHermitianTol = 1e-10;

  /// 1x1 zero operator.
  Operator();

  /// Throws std::invalid_argument when `entries` is not square or its
  /// self-adjointness residual max|q_ij - conj(q_ji)| exceeds `hermitian_tol`.
  explicit Operator(const Matrix& entries,
                    double hermitian_tol = kDefaultHermitianTol);

  static Operator zero(int dim);
  static Operator identity(int dim);
  static Operator diagonal(std::initializer_list<double> values);
  /// |v><v| (v is not normalized).
  static Operator projector(const Vector& v);
  /// Symmetrizes unconditionally; for internal results known to be Hermitian
  /// up to rounding.
  static Operator hermitian_part(const Matrix& entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(int i, int j) const { return entries_(i, j); }
  double hermitian_tol() const { return hermitian_tol_; }

  double trace() const { return entries_.trace().real(); }
  double frobenius_norm() const { return entries_.norm(); }

  Operator operator+(const Operator& other) const;
  Operator operator-(const Operator& other) const;
  Operator operator-() const;
  Operator operator*(double s) const;
  friend Operator operator*(double s, const Operator& q) { return q * s; }

 private:
  struct Trusted {};
  Operator(Trusted, Matrix entries, double tol);

  Matrix entries_;
  double hermitian_tol_ = kDefaultHermitianTol;
};

/// Kronecker product, index convention (A-major, B-minor): row (i, j) of the
/// result is i * dim_b + j.
Operator tensor(const Operator& a, const Operator& b);
Matrix kron(const Matrix& a, const Matrix& b);

/// (Tr_B q)(i, i') = sum_j q((i, j), (i', j)).
Operator partial_trace_b(const Operator& q, BipartiteShape shape);
Matrix partial_trace_b(const Matrix& q, BipartiteShape shape);

struct EigenPair {
  double value;
  Vector vector;
};

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Eigenvalues ascending, eigenvectors are the matching columns.
struct HermitianEigen {
  Eigen::VectorXd values;
  Matrix vectors;
};
HermitianEigen jacobi_eigen(const Matrix& q);

std::vector<EigenPair> eig_hermitian(const Operator& q);

/// Smallest eigenvalue; closed form for 2x2, Jacobi otherwise.
double min_eigenvalue(const Matrix& q);
double max_eigenvalue(const Matrix& q);

bool is_psd(const Operator& q, double tol);

/// u q u^dagger, or u conj(q) u^dagger for the anti-unitary u K (K = entrywise
/// complex conjugation in the computational basis). Throws when u is not
/// unitary within 1e-10.
Operator conjugate(const Matrix& u, const Operator& q, bool antiunitary);

/// Re Tr(a b).
double trace_product(const Operator& a, const Operator& b);
double trace_product(const Matrix& a, const Matrix& b);

/// max_ij |q_ij - conj(q_ji)|.
double antihermitian_residual(const Matrix& q);

}  // namespace seqdisc

#endif  // SEQDISC_OPERATOR_HPP
