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

#include "barrier.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace seqdisc::detail {

namespace {

Matrix slack(const LmiBlock& block, const Eigen::VectorXd& y) {
  Matrix s = block.constant;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) != 0.0) s += y(i) * block.coefficients[static_cast<size_t>(i)];
  }
  return 0.5 * (s + s.adjoint());
}

// log det of a positive definite matrix, or NaN when not positive definite.
double log_det_pd(const Matrix& s) {
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::quiet_NaN();
  double acc = 0.0;
  const Matrix& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const double d = l(i, i).real();
    if (!(d > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    acc += std::log(d);
  }
  return 2.0 * acc;
}

// Barrier objective t cost.y - sum log det S_k - sum log s_r, NaN outside the
// interior.
double barrier_value(const LmiProgram& prog, const Eigen::VectorXd& y, double t) {
  double phi = t * prog.cost.dot(y);
  for (const LmiBlock& b : prog.blocks) {
    const double ld = log_det_pd(slack(b, y));
    if (std::isnan(ld)) return ld;
    phi -= ld;
  }
  for (const LinearRow& r : prog.rows) {
    const double s = r.constant + r.coefficients.dot(y);
    if (!(s > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    phi -= std::log(s);
  }
  return phi;
}

double re_trace_product(const Matrix& a, const Matrix& b) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) acc += (a(i, j) * b(j, i)).real();
  }
  return acc;
}

struct Derivatives {
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

Derivatives derivatives(const LmiProgram& prog, const Eigen::VectorXd& y, double t) {
  const int n = prog.variables();
  Derivatives d{t * prog.cost, Eigen::MatrixXd::Zero(n, n)};
  std::vector<Matrix> w(static_cast<size_t>(n));
  for (const LmiBlock& b : prog.blocks) {
    const Matrix s = slack(b, y);
    const Matrix inv = s.llt().solve(Matrix::Identity(s.rows(), s.cols()));
    for (int i = 0; i < n; ++i) {
      w[static_cast<size_t>(i)] = inv * b.coefficients[static_cast<size_t>(i)];
      d.gradient(i) -= w[static_cast<size_t>(i)].trace().real();
    }
    for (int i = 0; i < n; ++i) {
      for (int l = i; l < n; ++l) {
        const double h = re_trace_product(w[static_cast<size_t>(i)], w[static_cast<size_t>(l)]);
        d.hessian(i, l) += h;
        if (l != i) d.hessian(l, i) += h;
      }
    }
  }
  for (const LinearRow& r : prog.rows) {
    const double s = r.constant + r.coefficients.dot(y);
    d.gradient -= r.coefficients / s;
    d.hessian += r.coefficients * r.coefficients.transpose() / (s * s);
  }
  return d;
}

Eigen::VectorXd newton_direction(const Derivatives& d) {
  const Eigen::Index n = d.gradient.size();
  Eigen::VectorXd scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = d.hessian(i, i);
    scale(i) = h > 0.0 ? 1.0 / std::sqrt(h) : 1.0;
  }
  Eigen::MatrixXd h = scale.asDiagonal() * d.hessian * scale.asDiagonal();
  const Eigen::VectorXd rhs = -(scale.asDiagonal() * d.gradient);
  for (double reg : {0.0, 1e-14, 1e-12, 1e-10, 1e-8}) {
    Eigen::MatrixXd hr = h;
    hr.diagonal().array() += reg;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hr);
    if (ldlt.info() != Eigen::Success) continue;
    Eigen::VectorXd z = ldlt.solve(rhs);
    if (z.allFinite()) return scale.asDiagonal() * z;
  }
  return Eigen::VectorXd::Zero(n);
}

}  // namespace

std::vector<Matrix> block_slacks(const LmiProgram& prog, const Eigen::VectorXd& y) {
  std::vector<Matrix> out;
  out.reserve(prog.blocks.size());
  for (const LmiBlock& b : prog.blocks) out.push_back(slack(b, y));
  return out;
}

bool strictly_feasible(const LmiProgram& prog, const Eigen::VectorXd& y) {
  return !std::isnan(barrier_value(prog, y, 0.0));
}

LmiResult solve_lmi(const LmiProgram& prog, const Eigen::VectorXd& start,
                    const LmiOptions& options) {
  if (start.size() != prog.variables()) throw std::invalid_argument("start has wrong size");
  for (const LmiBlock& b : prog.blocks) {
    if (static_cast<int>(b.coefficients.size()) != prog.variables()) {
      throw std::invalid_argument("block coefficient count mismatch");
    }
  }
  if (!strictly_feasible(prog, start)) {
    throw std::invalid_argument("barrier start is not strictly feasible");
  }
  double degree = static_cast<double>(prog.rows.size());
  for (const LmiBlock& b : prog.blocks) degree += static_cast<double>(b.constant.rows());

  LmiResult result;
  Eigen::VectorXd y = start;
  double t = degree / std::max(1.0, std::abs(prog.cost.dot(y)));
  while (true) {
    // Centering.
    for (int inner = 0; inner < 100 && result.newton_steps < options.max_newton; ++inner) {
      const Derivatives d = derivatives(prog, y, t);
      const Eigen::VectorXd dy = newton_direction(d);
      const double decrement = -d.gradient.dot(dy);
      if (!(decrement > 1e-14)) break;
      ++result.newton_steps;
      const double phi = barrier_value(prog, y, t);
      double step = 1.0;
      Eigen::VectorXd next = y;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
        next = y + step * dy;
        const double phi_next = barrier_value(prog, next, t);
        if (std::isnan(phi_next)) continue;
        if (decrement < 1e-6 ||
            phi_next <= phi - 0.25 * step * decrement + 1e-13 * std::abs(phi)) {
          moved = true;
          break;
        }
      }
      if (!moved) break;
      y = next;
      if (decrement < 1e-10) break;
    }
    if (degree / t <= options.gap_tol) {
      result.converged = true;
      break;
    }
    if (result.newton_steps >= options.max_newton) break;
    t *= options.growth;
  }

  result.y = y;
  result.value = prog.cost.dot(y);
  result.gap_bound = degree / t;
  for (const LmiBlock& b : prog.blocks) {
    const Matrix s = slack(b, y);
    Matrix inv = s.llt().solve(Matrix::Identity(s.rows(), s.cols())) / t;
    result.block_duals.push_back(0.5 * (inv + inv.adjoint()));
  }
  result.row_duals.resize(static_cast<Eigen::Index>(prog.rows.size()));
  for (size_t r = 0; r < prog.rows.size(); ++r) {
    const double s = prog.rows[r].constant + prog.rows[r].coefficients.dot(y);
    result.row_duals(static_cast<Eigen::Index>(r)) = 1.0 / (t * s);
  }
  return result;
}

}  // namespace seqdisc::detail
