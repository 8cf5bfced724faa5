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

#include "seqdisc/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace seqdisc {

namespace {

bool is_permutation_of(const std::vector<int>& perm, int n) {
  if (static_cast<int>(perm.size()) != n) return false;
  std::vector<char> seen(static_cast<size_t>(n), 0);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[static_cast<size_t>(v)]) return false;
    seen[static_cast<size_t>(v)] = 1;
  }
  return true;
}

void require_permutations(const std::vector<std::vector<int>>& perms, int group_size,
                          const char* what) {
  if (static_cast<int>(perms.size()) != group_size) {
    throw std::invalid_argument(std::string(what) + ": one permutation per element required");
  }
  const int n = static_cast<int>(perms.front().size());
  for (const auto& p : perms) {
    if (!is_permutation_of(p, n)) throw std::invalid_argument(std::string(what) + ": not a permutation");
  }
}

Matrix apply(const Conjugation& c, const Matrix& q) {
  const Matrix src = c.antiunitary ? Matrix(q.conjugate()) : q;
  return c.u * src * c.u.adjoint();
}

// g o B(omega) with outcomes relabelled: element g o m of the image is
// g o B_m.
Povm image_povm(const GroupAction& gr, int g, const Povm& bob) {
  Povm out;
  out.elements.resize(static_cast<size_t>(bob.size()));
  for (int m = 0; m < bob.size(); ++m) {
    out.elements[static_cast<size_t>(gr.act_m(g, m))] =
        Operator::hermitian_part(apply(gr.rep_b(g), bob.elements[static_cast<size_t>(m)].matrix()));
  }
  return out;
}

double povm_distance(const Povm& a, const Povm& b) {
  double worst = 0.0;
  for (int m = 0; m < a.size(); ++m) {
    worst = std::max(worst, (a.elements[static_cast<size_t>(m)].matrix() -
                             b.elements[static_cast<size_t>(m)].matrix()).norm());
  }
  return worst;
}

double rep_defect(const GroupAction& gr, int g, int h, bool side_a) {
  const Conjugation& cg = side_a ? gr.rep_a(g) : gr.rep_b(g);
  const Conjugation& ch = side_a ? gr.rep_a(h) : gr.rep_b(h);
  const Conjugation& cgh = side_a ? gr.rep_a(gr.compose(g, h)) : gr.rep_b(gr.compose(g, h));
  const double dim = static_cast<double>(cg.u.rows());
  // (V_g K^a)(V_h K^b) = V_g conj^a(V_h) K^(a xor b).
  if (cgh.antiunitary != (cg.antiunitary != ch.antiunitary)) return dim;
  const Matrix prod = cg.u * (cg.antiunitary ? Matrix(ch.u.conjugate()) : ch.u);
  return dim - std::abs((cgh.u.adjoint() * prod).trace());
}

double max_entry(const Matrix& q) { return q.size() == 0 ? 0.0 : q.cwiseAbs().maxCoeff(); }

}  // namespace

GroupAction::GroupAction(std::vector<std::vector<int>> table, std::vector<std::vector<int>> perm_m,
                         std::vector<std::vector<int>> perm_j, std::vector<Conjugation> rep_a,
                         std::vector<Conjugation> rep_b)
    : table_(std::move(table)),
      perm_m_(std::move(perm_m)),
      perm_j_(std::move(perm_j)),
      rep_a_(std::move(rep_a)),
      rep_b_(std::move(rep_b)) {
  const int n = static_cast<int>(table_.size());
  if (n < 1) throw std::invalid_argument("group table is empty");
  for (const auto& row : table_) {
    if (!is_permutation_of(row, n)) throw std::invalid_argument("group table row is not a permutation");
  }
  identity_ = -1;
  for (int e = 0; e < n && identity_ < 0; ++e) {
    bool ok = true;
    for (int g = 0; g < n && ok; ++g) ok = compose(e, g) == g && compose(g, e) == g;
    if (ok) identity_ = e;
  }
  if (identity_ < 0) throw std::invalid_argument("group table has no identity");
  inverse_.assign(static_cast<size_t>(n), -1);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      if (compose(g, h) == identity_ && compose(h, g) == identity_) inverse_[static_cast<size_t>(g)] = h;
    }
    if (inverse_[static_cast<size_t>(g)] < 0) throw std::invalid_argument("group element without inverse");
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (compose(compose(a, b), c) != compose(a, compose(b, c))) {
          throw std::invalid_argument("group table is not associative");
        }
      }
    }
  }
  require_permutations(perm_m_, n, "outcome action");
  if (perm_j_.empty()) perm_j_.assign(static_cast<size_t>(n), {});
  require_permutations(perm_j_, n, "constraint action");
  if (static_cast<int>(rep_a_.size()) != n || static_cast<int>(rep_b_.size()) != n) {
    throw std::invalid_argument("one representation matrix per element required");
  }
  for (const auto* reps : {&rep_a_, &rep_b_}) {
    const Eigen::Index dim = reps->front().u.rows();
    for (const Conjugation& c : *reps) {
      if (c.u.rows() != dim || c.u.cols() != dim) throw std::invalid_argument("representation dimension");
      if ((c.u.adjoint() * c.u - Matrix::Identity(dim, dim)).norm() > 1e-10) {
        throw std::invalid_argument("representation matrix is not unitary");
      }
    }
  }
}

GroupAction& GroupAction::with_prior_permutation(std::vector<std::vector<int>> perm_k) {
  require_permutations(perm_k, size(), "prior action");
  perm_k_ = std::move(perm_k);
  return *this;
}

GroupAction& GroupAction::with_param_action(ParamAction action) {
  param_action_ = std::move(action);
  return *this;
}

GroupAction& GroupAction::with_omega_permutation(std::vector<std::vector<int>> perm) {
  require_permutations(perm, size(), "omega action");
  omega_perm_ = std::move(perm);
  return *this;
}

int GroupAction::act_k(int g, int k) const {
  if (perm_k_.empty()) throw std::logic_error("group has no prior action");
  return perm_k_[static_cast<size_t>(g)][static_cast<size_t>(k)];
}

std::vector<double> GroupAction::image_params(int g, const std::vector<double>& params) const {
  if (!param_action_) throw std::logic_error("group has no parameter action");
  return param_action_(g, params);
}

int GroupAction::act_omega(int g, int omega, const BobFamily& family, double tol) const {
  if (omega < 0 || omega >= family.size()) throw std::out_of_range("omega out of range");
  if (g == identity_) return omega;
  if (family.parametric()) {
    if (!param_action_) return -1;
    return family.find(param_action_(g, family.parameters(omega)), tol);
  }
  if (!omega_perm_.empty() && omega < family.grid_size() &&
      static_cast<int>(omega_perm_.front().size()) == family.grid_size()) {
    return omega_perm_[static_cast<size_t>(g)][static_cast<size_t>(omega)];
  }
  // Explicit families are small: match the image POVM directly.
  const Povm target = image_povm(*this, g, family.member(omega));
  for (int w = 0; w < family.size(); ++w) {
    if (povm_distance(target, family.member(w)) <= 1e-8) return w;
  }
  return -1;
}

Operator act(const GroupAction& gr, int g, const Operator& q, Subsystem which) {
  if (g < 0 || g >= gr.size()) throw std::out_of_range("group element out of range");
  const Conjugation& va = gr.rep_a(g);
  const Conjugation& wb = gr.rep_b(g);
  switch (which) {
    case Subsystem::kA:
      if (q.dim() != va.u.rows()) throw std::invalid_argument("operator is not on H_A");
      return Operator::hermitian_part(apply(va, q.matrix()));
    case Subsystem::kB:
      if (q.dim() != wb.u.rows()) throw std::invalid_argument("operator is not on H_B");
      return Operator::hermitian_part(apply(wb, q.matrix()));
    case Subsystem::kJoint:
      if (q.dim() != va.u.rows() * wb.u.rows()) throw std::invalid_argument("operator is not on H_A (x) H_B");
      if (va.antiunitary != wb.antiunitary) {
        throw std::invalid_argument("joint action needs matching antiunitary flags");
      }
      return Operator::hermitian_part(apply({kron(va.u, wb.u), va.antiunitary}, q.matrix()));
  }
  throw std::invalid_argument("unknown subsystem");
}

GroupReport validate_group(const GroupAction& gr, const BobFamily& family, double tol, int samples) {
  GroupReport r;
  const int n = gr.size();
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      r.rep_a_defect = std::max(r.rep_a_defect, rep_defect(gr, g, h, true));
      r.rep_b_defect = std::max(r.rep_b_defect, rep_defect(gr, g, h, false));
    }
  }
  const int e = gr.identity();
  for (const Conjugation* c : {&gr.rep_a(e), &gr.rep_b(e)}) {
    const Eigen::Index d = c->u.rows();
    r.identity_defect = std::max(r.identity_defect, (c->u - Matrix::Identity(d, d)).norm());
    if (c->antiunitary) r.identity_defect = std::max(r.identity_defect, 1.0);
  }
  for (int m = 0; m < gr.outcome_count(); ++m) {
    if (gr.act_m(e, m) != m) r.identity_defect = std::max(r.identity_defect, 1.0);
  }
  if (r.rep_a_defect > tol) r.errors.push_back("H_A representation is not a projective representation");
  if (r.rep_b_defect > tol) r.errors.push_back("H_B representation is not a projective representation");
  if (r.identity_defect > tol) r.errors.push_back("identity element does not act trivially");

  if (family.outcomes() != gr.outcome_count()) {
    r.errors.push_back("outcome action does not match the family");
  } else {
    std::vector<int> sample;
    const int grid = family.grid_size();
    const int stride = std::max(1, grid / std::max(1, samples));
    for (int w = 0; w < grid; w += stride) sample.push_back(w);
    for (int w = grid; w < family.size(); ++w) sample.push_back(w);
    for (int w : sample) {
      const Povm bob = family.member(w);
      for (int g = 0; g < n; ++g) {
        const int image = gr.act_omega(g, w, family);
        if (image < 0) {
          ++r.missing_images;
          continue;
        }
        r.omega_defect = std::max(r.omega_defect, povm_distance(image_povm(gr, g, bob), family.member(image)));
      }
    }
    if (r.missing_images > 0) r.errors.push_back("family not closed under group");
    if (r.omega_defect > tol) r.errors.push_back("omega action incompatible with Bob POVMs");
  }
  r.passes = r.errors.empty();
  return r;
}

bool check_problem_symmetry(const GroupAction& gr, const GeneralizedProblem& p, double tol) {
  if (gr.outcome_count() != p.M() || gr.constraint_count() != p.J()) return false;
  for (int g = 0; g < gr.size(); ++g) {
    for (int m = 0; m < p.M(); ++m) {
      const int gm = gr.act_m(g, m);
      if (max_entry(act(gr, g, p.c(m), Subsystem::kJoint).matrix() - p.c(gm).matrix()) > tol) return false;
      for (int j = 0; j < p.J(); ++j) {
        const int gj = gr.act_j(g, j);
        if (max_entry(act(gr, g, p.a(j, m), Subsystem::kJoint).matrix() - p.a(gj, gm).matrix()) > tol) {
          return false;
        }
      }
    }
    for (int j = 0; j < p.J(); ++j) {
      if (std::abs(p.b()[static_cast<size_t>(j)] - p.b()[static_cast<size_t>(gr.act_j(g, j))]) > tol) {
        return false;
      }
    }
  }
  return true;
}

bool check_objective_symmetry(const GroupAction& gr, const std::vector<std::vector<Operator>>& c,
                              double tol) {
  if (static_cast<int>(c.size()) != gr.prior_count()) return false;
  for (int g = 0; g < gr.size(); ++g) {
    for (int k = 0; k < static_cast<int>(c.size()); ++k) {
      const int gk = gr.act_k(g, k);
      if (static_cast<int>(c[static_cast<size_t>(k)].size()) != gr.outcome_count()) return false;
      for (int m = 0; m < gr.outcome_count(); ++m) {
        const Matrix img = act(gr, g, c[static_cast<size_t>(k)][static_cast<size_t>(m)], Subsystem::kJoint).matrix();
        const Matrix& want = c[static_cast<size_t>(gk)][static_cast<size_t>(gr.act_m(g, m))].matrix();
        if (max_entry(img - want) > tol) return false;
      }
    }
  }
  return true;
}

AliceMeasure symmetrize_alice(const GroupAction& gr, const BobFamily& family, const AliceMeasure& phi) {
  const double inv = 1.0 / gr.size();
  std::vector<int> order;
  std::map<int, Matrix> merged;
  for (int g = 0; g < gr.size(); ++g) {
    const int ginv = gr.inverse(g);
    for (const AliceAtom& atom : phi.support) {
      // Preimage of omega_k under g, i.e. the atom lands at g^-1 o omega_k.
      const int w = gr.act_omega(ginv, atom.omega, family);
      if (w < 0) throw std::invalid_argument("family not closed under group");
      if (povm_distance(image_povm(gr, ginv, family.member(atom.omega)), family.member(w)) > 1e-8) {
        throw std::invalid_argument("omega action incompatible with Bob POVMs");
      }
      const Matrix weight = inv * apply(gr.rep_a(ginv), atom.weight.matrix());
      auto it = merged.find(w);
      if (it == merged.end()) {
        merged.emplace(w, weight);
        order.push_back(w);
      } else {
        it->second += weight;
      }
    }
  }
  AliceMeasure out;
  for (int w : order) out.support.push_back({w, Operator::hermitian_part(merged.at(w))});
  return out;
}

DualPoint symmetrize_dual(const GroupAction& gr, const DualPoint& y) {
  if (static_cast<int>(y.lambda.size()) != gr.constraint_count()) {
    throw std::invalid_argument("lambda length does not match the constraint action");
  }
  const double inv = 1.0 / gr.size();
  Matrix x = Matrix::Zero(y.x.dim(), y.x.dim());
  std::vector<double> lambda(y.lambda.size(), 0.0);
  for (int g = 0; g < gr.size(); ++g) {
    x += inv * act(gr, g, y.x, Subsystem::kA).matrix();
    const int ginv = gr.inverse(g);
    for (size_t j = 0; j < lambda.size(); ++j) {
      lambda[j] += inv * y.lambda[static_cast<size_t>(gr.act_j(ginv, static_cast<int>(j)))];
    }
  }
  return {Operator::hermitian_part(x), std::move(lambda)};
}

BobFamily close_under(const GroupAction& gr, const BobFamily& family, const std::vector<int>& omegas) {
  BobFamily out = family;
  for (int w : omegas) {
    for (int g = 0; g < gr.size(); ++g) {
      if (gr.act_omega(g, w, out) >= 0) continue;
      if (out.parametric()) {
        if (!gr.has_param_action()) throw std::invalid_argument("family not closed under group");
        const std::vector<double> img = gr.image_params(g, out.parameters(w));
        out = out.with_member(out.generate(img), img);
      } else {
        out = out.with_member(image_povm(gr, g, out.member(w)));
      }
    }
  }
  return out;
}

bool certify_scalar_x(const GroupAction& gr) {
  const int dim = static_cast<int>(gr.rep_a(0).u.rows());
  const std::vector<Matrix> basis = hermitian_basis(dim);
  const int n = static_cast<int>(basis.size());
  // Columns: basis elements; rows: coordinates of g o E - E for every g.
  Eigen::MatrixXd system(gr.size() * n, n);
  for (int k = 0; k < n; ++k) {
    for (int g = 0; g < gr.size(); ++g) {
      const Matrix diff = apply(gr.rep_a(g), basis[static_cast<size_t>(k)]) - basis[static_cast<size_t>(k)];
      for (int i = 0; i < n; ++i) system(g * n + i, k) = trace_product(basis[static_cast<size_t>(i)], diff);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(system);
  const Eigen::VectorXd s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > 1e-9) ++rank;
  }
  return n - rank == 1;
}

double covariance_residual(const GroupAction& gr, const BobFamily& family, const AliceMeasure& a) {
  std::map<int, Matrix> by_omega;
  for (const AliceAtom& atom : a.support) {
    auto it = by_omega.find(atom.omega);
    if (it == by_omega.end()) {
      by_omega.emplace(atom.omega, atom.weight.matrix());
    } else {
      it->second += atom.weight.matrix();
    }
  }
  double worst = 0.0;
  for (int g = 0; g < gr.size(); ++g) {
    for (const auto& [w, weight] : by_omega) {
      const int image = gr.act_omega(g, w, family);
      if (image < 0) return std::numeric_limits<double>::infinity();
      const Matrix img = apply(gr.rep_a(g), weight);
      auto it = by_omega.find(image);
      const Matrix diff = it == by_omega.end() ? img : Matrix(img - it->second);
      worst = std::max(worst, diff.norm());
    }
  }
  return worst;
}

double joint_covariance_residual(const GroupAction& gr, const SequentialMeasurement& m) {
  if (m.joint.size() != gr.outcome_count()) throw std::invalid_argument("outcome count mismatch");
  double worst = 0.0;
  for (int g = 0; g < gr.size(); ++g) {
    for (int k = 0; k < m.joint.size(); ++k) {
      const Operator img = act(gr, g, m.joint.elements[static_cast<size_t>(k)], Subsystem::kJoint);
      worst = std::max(worst, (img.matrix() - m.joint.elements[static_cast<size_t>(gr.act_m(g, k))].matrix()).norm());
    }
  }
  return worst;
}

namespace trine {

GroupAction symmetry_group(bool inconclusive) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const int n = 6;
  auto rot = [](int g) { return g % 3; };
  auto flip = [](int g) { return g / 3; };
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      table[static_cast<size_t>(g)][static_cast<size_t>(h)] = (rot(g) + rot(h)) % 3 + 3 * (flip(g) ^ flip(h));
    }
  }
  const int outcomes = inconclusive ? 4 : 3;
  std::vector<std::vector<int>> perm_m(n), perm_j(n), perm_k(n);
  std::vector<Conjugation> rep;
  for (int g = 0; g < n; ++g) {
    for (int m = 0; m < outcomes; ++m) perm_m[static_cast<size_t>(g)].push_back(m < 3 ? (m + rot(g)) % 3 : m);
    if (inconclusive) perm_j[static_cast<size_t>(g)] = {0};
    for (int k = 0; k < 3; ++k) perm_k[static_cast<size_t>(g)].push_back((k + rot(g)) % 3);
    rep.push_back({rotation(kTwoPi * rot(g) / 3), flip(g) == 1});
  }
  GroupAction gr(std::move(table), std::move(perm_m), std::move(perm_j), rep, rep);
  gr.with_prior_permutation(std::move(perm_k));
  // Conjugation fixes every (real) rotation-grid member.
  gr.with_param_action([rot, kTwoPi](int g, const std::vector<double>& params) {
    std::vector<double> out = params;
    if (out.empty()) return out;
    out.front() += kTwoPi * rot(g) / 3;
    double& shift = out.back();
    shift = static_cast<double>((static_cast<int>(std::lround(shift)) + rot(g)) % 3);
    return out;
  });
  return gr;
}

}  // namespace trine

}  // namespace seqdisc
