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

#include "seqdisc/problem.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace seqdisc {

struct GeneralizedProblem::Cache {
  std::once_flag once;
  std::vector<Complex> grid;
};

GeneralizedProblem::GeneralizedProblem(BipartiteShape shape, std::vector<Operator> c,
                                       std::vector<std::vector<Operator>> a,
                                       std::vector<double> b, BobFamily family,
                                       std::vector<ConstraintKind> kinds)
    : shape_(shape), c_(std::move(c)), family_(std::move(family)) {
  if (shape_.dim_a < 1 || shape_.dim_b < 1) throw std::invalid_argument("invalid shape");
  if (family_.dim_b() != shape_.dim_b) {
    throw std::invalid_argument("Bob family dimension does not match dim_b");
  }
  if (static_cast<int>(c_.size()) != family_.outcomes()) {
    throw std::invalid_argument("objective has " + std::to_string(c_.size()) +
                                " operators but the family has " +
                                std::to_string(family_.outcomes()) + " outcomes");
  }
  for (const Operator& q : c_) {
    if (q.dim() != shape_.joint()) throw std::invalid_argument("objective operator dimension");
  }
  if (a.size() != b.size()) throw std::invalid_argument("constraint count mismatch");
  if (!kinds.empty() && kinds.size() != b.size()) {
    throw std::invalid_argument("constraint kind count mismatch");
  }
  for (size_t j = 0; j < a.size(); ++j) {
    if (a[j].size() != c_.size()) throw std::invalid_argument("constraint row length");
    for (const Operator& q : a[j]) {
      if (q.dim() != shape_.joint()) throw std::invalid_argument("constraint operator dimension");
    }
    if (!std::isfinite(b[j])) throw std::invalid_argument("constraint bound not finite");
    a_.push_back(a[j]);
    b_.push_back(b[j]);
    source_row_.push_back(static_cast<int>(j));
    source_negated_.push_back(0);
    if (!kinds.empty() && kinds[j] == ConstraintKind::kEquality) {
      std::vector<Operator> negated;
      for (const Operator& q : a[j]) negated.push_back(-q);
      a_.push_back(std::move(negated));
      b_.push_back(-b[j]);
      source_row_.push_back(static_cast<int>(j));
      source_negated_.push_back(1);
    }
  }
  cache_ = std::make_shared<Cache>();
  for (int k = family_.grid_size(); k < family_.size(); ++k) {
    extras_reduced_.resize(extras_reduced_.size() + static_cast<size_t>(block_stride()));
    reduce_into(family_.member(k),
                extras_reduced_.data() + extras_reduced_.size() - block_stride());
  }
}

double GeneralizedProblem::objective_scale() const {
  double s = 1e-300;
  for (const Operator& q : c_) s = std::max(s, q.frobenius_norm());
  return s;
}

GeneralizedProblem GeneralizedProblem::with_family(BobFamily family) const {
  GeneralizedProblem out = *this;
  const bool share = family_.same_grid(family);
  out.family_ = std::move(family);
  if (out.family_.outcomes() != M() || out.family_.dim_b() != shape_.dim_b) {
    throw std::invalid_argument("replacement family has a different shape");
  }
  if (!share) out.cache_ = std::make_shared<Cache>();
  out.extras_reduced_.clear();
  for (int k = out.family_.grid_size(); k < out.family_.size(); ++k) {
    out.extras_reduced_.resize(out.extras_reduced_.size() +
                               static_cast<size_t>(block_stride()));
    out.reduce_into(out.family_.member(k), out.extras_reduced_.data() +
                                               out.extras_reduced_.size() -
                                               block_stride());
  }
  return out;
}

GeneralizedProblem GeneralizedProblem::with_objective(std::vector<Operator> c) const {
  // Rows are already expanded; rebuild them as plain inequalities.
  GeneralizedProblem out(shape_, std::move(c), a_, b_, family_);
  out.source_row_ = source_row_;
  out.source_negated_ = source_negated_;
  return out;
}

void GeneralizedProblem::reduce_into(const Povm& bob, Complex* out) const {
  const int da = shape_.dim_a;
  const int db = shape_.dim_b;
  const int block = da * da;
  auto reduce_one = [&](const std::vector<Operator>& q, Complex* dst) {
    for (int e = 0; e < block; ++e) dst[e] = 0.0;
    for (size_t m = 0; m < q.size(); ++m) {
      const Matrix& qm = q[m].matrix();
      const Matrix& bm = bob.elements[m].matrix();
      for (int i = 0; i < da; ++i) {
        for (int ip = 0; ip < da; ++ip) {
          Complex acc = 0.0;
          for (int j = 0; j < db; ++j) {
            for (int jp = 0; jp < db; ++jp) {
              acc += qm(i * db + j, ip * db + jp) * bm(jp, j);
            }
          }
          dst[i + ip * da] += acc;  // column-major
        }
      }
    }
  };
  reduce_one(c_, out);
  for (int j = 0; j < J(); ++j) reduce_one(a_[static_cast<size_t>(j)], out + (j + 1) * block);
}

void GeneralizedProblem::warm_cache() const {
  std::call_once(cache_->once, [this] {
    const int n = family_.grid_size();
    const int stride = block_stride();
    cache_->grid.assign(static_cast<size_t>(n) * static_cast<size_t>(stride), 0.0);
    detail::parallel_for(static_cast<size_t>(n), [&](size_t begin, size_t end) {
      for (size_t k = begin; k < end; ++k) {
        reduce_into(family_.member(static_cast<int>(k)),
                    cache_->grid.data() + k * static_cast<size_t>(stride));
      }
    });
  });
}

const Complex* GeneralizedProblem::reduced_block(int omega) const {
  if (omega < 0 || omega >= family_.size()) {
    throw std::out_of_range("omega id " + std::to_string(omega) +
                            " does not resolve in the Bob family");
  }
  const int grid = family_.grid_size();
  if (omega >= grid) {
    return extras_reduced_.data() +
           static_cast<size_t>(omega - grid) * static_cast<size_t>(block_stride());
  }
  warm_cache();
  return cache_->grid.data() + static_cast<size_t>(omega) * static_cast<size_t>(block_stride());
}

Matrix GeneralizedProblem::reduced_objective(int omega) const {
  const int da = shape_.dim_a;
  return Eigen::Map<const Matrix>(reduced_block(omega), da, da);
}

Matrix GeneralizedProblem::reduced_constraint(int j, int omega) const {
  if (j < 0 || j >= J()) throw std::out_of_range("constraint index");
  const int da = shape_.dim_a;
  return Eigen::Map<const Matrix>(reduced_block(omega) + (j + 1) * da * da, da, da);
}

Matrix GeneralizedProblem::sigma(int omega, const std::vector<double>& lambda) const {
  if (static_cast<int>(lambda.size()) != J()) {
    throw std::invalid_argument("lambda has length " + std::to_string(lambda.size()) +
                                ", expected " + std::to_string(J()));
  }
  const int da = shape_.dim_a;
  const Complex* block = reduced_block(omega);
  Matrix out = Eigen::Map<const Matrix>(block, da, da);
  for (int j = 0; j < J(); ++j) {
    out -= lambda[static_cast<size_t>(j)] *
           Eigen::Map<const Matrix>(block + (j + 1) * da * da, da, da);
  }
  return out;
}

Matrix GeneralizedProblem::sigma_of(const Povm& bob, const std::vector<double>& lambda) const {
  if (static_cast<int>(lambda.size()) != J()) throw std::invalid_argument("lambda length");
  if (bob.size() != M() || bob.dim() != shape_.dim_b) {
    throw std::invalid_argument("POVM shape does not match the problem");
  }
  const int da = shape_.dim_a;
  std::vector<Complex> block(static_cast<size_t>(block_stride()));
  reduce_into(bob, block.data());
  Matrix out = Eigen::Map<const Matrix>(block.data(), da, da);
  for (int j = 0; j < J(); ++j) {
    out -= lambda[static_cast<size_t>(j)] *
           Eigen::Map<const Matrix>(block.data() + (j + 1) * da * da, da, da);
  }
  return out;
}

std::vector<Matrix> GeneralizedProblem::reduced_of(const Povm& bob) const {
  if (bob.size() != M() || bob.dim() != shape_.dim_b) {
    throw std::invalid_argument("POVM shape does not match the problem");
  }
  const int da = shape_.dim_a;
  std::vector<Complex> block(static_cast<size_t>(block_stride()));
  reduce_into(bob, block.data());
  std::vector<Matrix> out;
  for (int j = 0; j <= J(); ++j) {
    out.push_back(Eigen::Map<const Matrix>(block.data() + j * da * da, da, da));
  }
  return out;
}

Matrix reduce_against(const std::vector<Operator>& q, const Povm& bob,
                      BipartiteShape shape) {
  if (q.size() != bob.elements.size()) throw std::invalid_argument("outcome count mismatch");
  Matrix out = Matrix::Zero(shape.dim_a, shape.dim_a);
  for (size_t m = 0; m < q.size(); ++m) {
    const Matrix lifted =
        q[m].matrix() * kron(Matrix::Identity(shape.dim_a, shape.dim_a),
                             bob.elements[m].matrix());
    out += partial_trace_b(lifted, shape);
  }
  return out;
}

namespace {

void check_measure(const GeneralizedProblem& p, const AliceMeasure& a) {
  for (const AliceAtom& atom : a.support) {
    if (atom.weight.dim() != p.dim_a()) {
      throw std::invalid_argument("Alice weight dimension does not match dim_a");
    }
    if (atom.omega < 0 || atom.omega >= p.family().size()) {
      throw std::invalid_argument("omega id " + std::to_string(atom.omega) +
                                  " does not resolve in the Bob family");
    }
  }
}

}  // namespace

double objective(const GeneralizedProblem& p, const AliceMeasure& a) {
  check_measure(p, a);
  double f = 0.0;
  for (const AliceAtom& atom : a.support) {
    f += trace_product(atom.weight.matrix(), p.reduced_objective(atom.omega));
  }
  return f;
}

std::vector<double> constraint_values(const GeneralizedProblem& p,
                                      const AliceMeasure& a) {
  check_measure(p, a);
  std::vector<double> eta(static_cast<size_t>(p.J()));
  for (int j = 0; j < p.J(); ++j) {
    double v = -p.b()[static_cast<size_t>(j)];
    for (const AliceAtom& atom : a.support) {
      v += trace_product(atom.weight.matrix(), p.reduced_constraint(j, atom.omega));
    }
    eta[static_cast<size_t>(j)] = v;
  }
  return eta;
}

bool is_primal_feasible(const GeneralizedProblem& p, const AliceMeasure& a, double tol) {
  for (double eta : constraint_values(p, a)) {
    if (eta > tol) return false;
  }
  return true;
}

namespace {

std::vector<Operator> weighted_states(const std::vector<Operator>& states,
                                      const std::vector<double>& priors,
                                      BipartiteShape shape) {
  if (states.empty() || states.size() != priors.size()) {
    throw std::invalid_argument("states and priors must be non-empty and equal in length");
  }
  double total = 0.0;
  for (double xi : priors) {
    if (!(xi >= 0.0)) throw std::invalid_argument("priors must be nonnegative");
    total += xi;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("priors must sum to 1");
  std::vector<Operator> out;
  for (size_t r = 0; r < states.size(); ++r) {
    const Operator& rho = states[r];
    if (rho.dim() != shape.joint()) throw std::invalid_argument("state dimension");
    if (std::abs(rho.trace() - 1.0) > 1e-9 || !is_psd(rho, 1e-9)) {
      throw std::invalid_argument("state " + std::to_string(r) +
                                  " is not a unit-trace PSD operator");
    }
    out.push_back(priors[r] * rho);
  }
  return out;
}

}  // namespace

GeneralizedProblem build_min_error(const std::vector<Operator>& states,
                                   const std::vector<double>& priors,
                                   BobFamily family, BipartiteShape shape) {
  return GeneralizedProblem(shape, weighted_states(states, priors, shape), {}, {},
                            std::move(family));
}

GeneralizedProblem build_inconclusive(const std::vector<Operator>& states,
                                      const std::vector<double>& priors,
                                      double p_i, BobFamily family,
                                      BipartiteShape shape) {
  if (!(p_i >= 0.0 && p_i <= 1.0)) throw std::invalid_argument("p_I must lie in [0, 1]");
  if (states.size() < 2) throw std::invalid_argument("inconclusive problem needs R >= 2");
  std::vector<Operator> c = weighted_states(states, priors, shape);
  Operator total = Operator::zero(shape.joint());
  for (const Operator& rho : c) total = total + rho;
  c.push_back(Operator::zero(shape.joint()));
  std::vector<Operator> row(c.size(), Operator::zero(shape.joint()));
  row.back() = -total;
  return GeneralizedProblem(shape, std::move(c), {row}, {-p_i}, std::move(family));
}

std::vector<Operator> z_operators(const GeneralizedProblem& p,
                                  const std::vector<double>& lambda) {
  if (static_cast<int>(lambda.size()) != p.J()) {
    throw std::invalid_argument("lambda length does not match J");
  }
  std::vector<Operator> z = p.c();
  for (int j = 0; j < p.J(); ++j) {
    for (int m = 0; m < p.M(); ++m) {
      z[static_cast<size_t>(m)] =
          z[static_cast<size_t>(m)] - lambda[static_cast<size_t>(j)] * p.a(j, m);
    }
  }
  return z;
}

Operator sigma_omega(const GeneralizedProblem& p, const std::vector<double>& lambda,
                     int omega) {
  return Operator::hermitian_part(p.sigma(omega, lambda));
}

}  // namespace seqdisc
