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

#include "seqdisc/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace seqdisc {

namespace {

void require_square(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("operator must be a non-empty square matrix");
  }
}

}  // namespace

double antihermitian_residual(const Matrix& q) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    for (Eigen::Index j = i; j < q.cols(); ++j) {
      worst = std::max(worst, std::abs(q(i, j) - std::conj(q(j, i))));
    }
  }
  return worst;
}

Operator::Operator() : entries_(Matrix::Zero(1, 1)) {}

Operator::Operator(const Matrix& entries, double hermitian_tol)
    : hermitian_tol_(hermitian_tol) {
  require_square(entries);
  const double residual = antihermitian_residual(entries);
  if (!(residual <= hermitian_tol)) {
    throw std::invalid_argument("operator is not Hermitian (residual " +
                                std::to_string(residual) + ")");
  }
  entries_ = 0.5 * (entries + entries.adjoint());
}

Operator::Operator(Trusted, Matrix entries, double tol)
    : entries_(std::move(entries)), hermitian_tol_(tol) {}

Operator Operator::zero(int dim) {
  return Operator(Trusted{}, Matrix::Zero(dim, dim), kDefaultHermitianTol);
}

Operator Operator::identity(int dim) {
  return Operator(Trusted{}, Matrix::Identity(dim, dim), kDefaultHermitianTol);
}

Operator Operator::diagonal(std::initializer_list<double> values) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()),
                          static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) {
    m(i, i) = v;
    ++i;
  }
  return Operator(Trusted{}, std::move(m), kDefaultHermitianTol);
}

Operator Operator::projector(const Vector& v) {
  Matrix m = v * v.adjoint();
  return hermitian_part(m);
}

Operator Operator::hermitian_part(const Matrix& entries) {
  require_square(entries);
  return Operator(Trusted{}, 0.5 * (entries + entries.adjoint()),
                  kDefaultHermitianTol);
}

Operator Operator::operator+(const Operator& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("dimension mismatch");
  return Operator(Trusted{}, entries_ + other.entries_, hermitian_tol_);
}

Operator Operator::operator-(const Operator& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("dimension mismatch");
  return Operator(Trusted{}, entries_ - other.entries_, hermitian_tol_);
}

Operator Operator::operator-() const {
  return Operator(Trusted{}, -entries_, hermitian_tol_);
}

Operator Operator::operator*(double s) const {
  return Operator(Trusted{}, entries_ * s, hermitian_tol_);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Operator tensor(const Operator& a, const Operator& b) {
  return Operator::hermitian_part(kron(a.matrix(), b.matrix()));
}

Matrix partial_trace_b(const Matrix& q, BipartiteShape shape) {
  if (q.rows() != shape.joint() || q.cols() != shape.joint()) {
    throw std::invalid_argument("partial_trace_b: dimension mismatch");
  }
  const int da = shape.dim_a;
  const int db = shape.dim_b;
  Matrix out = Matrix::Zero(da, da);
  for (int i = 0; i < da; ++i) {
    for (int k = 0; k < da; ++k) {
      Complex acc = 0.0;
      for (int j = 0; j < db; ++j) acc += q(i * db + j, k * db + j);
      out(i, k) = acc;
    }
  }
  return out;
}

Operator partial_trace_b(const Operator& q, BipartiteShape shape) {
  return Operator::hermitian_part(partial_trace_b(q.matrix(), shape));
}

HermitianEigen jacobi_eigen(const Matrix& q) {
  require_square(q);
  const Eigen::Index n = q.rows();
  Matrix a = 0.5 * (q + q.adjoint());
  Matrix v = Matrix::Identity(n, n);

  const double scale = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) off += std::norm(a(p, r));
    }
    if (std::sqrt(off) <= 1e-17 * scale) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) {
        const double abs_b = std::abs(a(p, r));
        if (abs_b <= 1e-300) continue;
        const Complex phase = a(p, r) / abs_b;  // e^{i phi}
        const double app = a(p, p).real();
        const double arr = a(r, r).real();
        const double theta = (arr - app) / (2.0 * abs_b);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = diag(1, e^{-i phi}) [[c, s], [-s, c]] acting on (p, r).
        const Complex gpp = c;
        const Complex gpr = s;
        const Complex grp = -s * std::conj(phase);
        const Complex grr = c * std::conj(phase);

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akr = a(k, r);
          a(k, p) = akp * gpp + akr * grp;
          a(k, r) = akp * gpr + akr * grr;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex ark = a(r, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(grp) * ark;
          a(r, k) = std::conj(gpr) * apk + std::conj(grr) * ark;
        }
        a(p, r) = 0.0;
        a(r, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(r, r) = a(r, r).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkr = v(k, r);
          v(k, p) = vkp * gpp + vkr * grp;
          v(k, r) = vkp * gpr + vkr * grr;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() < a(y, y).real();
  });
  HermitianEigen out{Eigen::VectorXd(n), Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = a(order[static_cast<size_t>(i)], order[static_cast<size_t>(i)]).real();
    out.vectors.col(i) = v.col(order[static_cast<size_t>(i)]);
  }
  return out;
}

std::vector<EigenPair> eig_hermitian(const Operator& q) {
  const HermitianEigen e = jacobi_eigen(q.matrix());
  std::vector<EigenPair> out;
  out.reserve(static_cast<size_t>(e.values.size()));
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    out.push_back({e.values(i), e.vectors.col(i)});
  }
  return out;
}

namespace {

std::pair<double, double> eig2(const Matrix& q) {
  const double a = q(0, 0).real();
  const double d = q(1, 1).real();
  const Complex b = 0.5 * (q(0, 1) + std::conj(q(1, 0)));
  const double mean = 0.5 * (a + d);
  const double half = 0.5 * (a - d);
  const double rad = std::sqrt(half * half + std::norm(b));
  return {mean - rad, mean + rad};
}

}  // namespace

double min_eigenvalue(const Matrix& q) {
  if (q.rows() == 1) return q(0, 0).real();
  if (q.rows() == 2) return eig2(q).first;
  return jacobi_eigen(q).values(0);
}

double max_eigenvalue(const Matrix& q) {
  if (q.rows() == 1) return q(0, 0).real();
  if (q.rows() == 2) return eig2(q).second;
  const HermitianEigen e = jacobi_eigen(q);
  return e.values(e.values.size() - 1);
}

bool is_psd(const Operator& q, double tol) {
  return min_eigenvalue(q.matrix()) >= -tol;
}

Operator conjugate(const Matrix& u, const Operator& q, bool antiunitary) {
  if (u.rows() != q.dim() || u.cols() != q.dim()) {
    throw std::invalid_argument("conjugate: dimension mismatch");
  }
  const double unitarity =
      (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (unitarity > 1e-10) {
    throw std::invalid_argument("conjugate: matrix is not unitary");
  }
  const Matrix base = antiunitary ? Matrix(q.matrix().conjugate()) : q.matrix();
  return Operator::hermitian_part(u * base * u.adjoint());
}

double trace_product(const Matrix& a, const Matrix& b) {
  // Re Tr(ab) = Re sum_ij a_ij b_ji
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      acc += (a(i, j) * b(j, i)).real();
    }
  }
  return acc;
}

double trace_product(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  return trace_product(a.matrix(), b.matrix());
}

}  // namespace seqdisc
