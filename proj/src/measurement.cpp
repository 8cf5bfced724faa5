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

#include "seqdisc/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

namespace seqdisc {

PovmReport validate_povm(const Povm& p, double tol) {
  PovmReport report;
  if (p.elements.empty()) {
    report.completeness_residual = INFINITY;
    return report;
  }
  const int dim = p.dim();
  Matrix total = Matrix::Zero(dim, dim);
  for (const Operator& e : p.elements) {
    if (e.dim() != dim) {
      report.completeness_residual = INFINITY;
      return report;
    }
    report.max_psd_violation =
        std::max(report.max_psd_violation, -min_eigenvalue(e.matrix()));
    total += e.matrix();
  }
  report.completeness_residual = (total - Matrix::Identity(dim, dim)).norm();
  report.passes = report.max_psd_violation <= tol &&
                  report.completeness_residual <= tol;
  return report;
}

double ParamAxis::value(int i) const {
  if (periodic) return lo + (hi - lo) * i / steps;
  if (steps <= 1) return lo;
  return lo + (hi - lo) * i / (steps - 1);
}

Matrix rotation(double theta) {
  Matrix u(2, 2);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  u << c, -s, s, c;
  return u;
}

Povm rotation_template(int rounds, double alpha, bool inconclusive) {
  if (rounds < 2) throw std::invalid_argument("rotation template needs >= 2 rounds");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  Povm p;
  for (int m = 0; m < rounds; ++m) p.elements.push_back(Operator::zero(2));
  const double lower = std::sqrt((1.0 - alpha) / 2.0);
  Vector b1(2), b2(2);
  b1 << std::sqrt(0.5), -lower;
  b2 << std::sqrt(0.5), lower;
  p.elements[static_cast<size_t>(rounds - 2)] = Operator::projector(b1);
  p.elements[static_cast<size_t>(rounds - 1)] = Operator::projector(b2);
  if (inconclusive) p.elements.push_back(Operator::diagonal({0.0, alpha}));
  return p;
}

BobFamily BobFamily::explicit_list(std::vector<Povm> members, double tol) {
  if (members.empty()) throw std::invalid_argument("Bob family is empty");
  BobFamily f;
  f.mode_ = FamilyMode::kExplicitList;
  f.dim_b_ = members.front().dim();
  f.outcomes_ = members.front().size();
  for (size_t i = 0; i < members.size(); ++i) {
    const Povm& p = members[i];
    if (p.size() != f.outcomes_ || p.dim() != f.dim_b_) {
      throw std::invalid_argument("Bob member " + std::to_string(i) +
                                  " has inconsistent shape");
    }
    if (!validate_povm(p, tol).passes) {
      throw std::invalid_argument("Bob member " + std::to_string(i) +
                                  " is not a POVM");
    }
  }
  f.listed_ = std::make_shared<const std::vector<Povm>>(std::move(members));
  return f;
}

BobFamily BobFamily::qubit_rotation_grid(int rounds, int theta_steps,
                                         int alpha_steps, bool inconclusive) {
  if (rounds < 2 || theta_steps < 1 || alpha_steps < 1) {
    throw std::invalid_argument("qubit-rotation-grid: invalid sizes");
  }
  std::vector<ParamAxis> axes;
  axes.push_back({"theta", 0.0, 2.0 * std::numbers::pi, theta_steps, true, false});
  if (inconclusive) axes.push_back({"alpha", 0.0, 1.0, alpha_steps, false, false});
  axes.push_back({"shift", 0.0, static_cast<double>(rounds - 1), rounds, false, true});
  Generator gen = [rounds, inconclusive](const std::vector<double>& params) {
    const double theta = params.at(0);
    const double alpha = inconclusive ? std::clamp(params.at(1), 0.0, 1.0) : 0.0;
    const int shift =
        static_cast<int>(std::lround(params.back())) % rounds;
    const Povm base = rotation_template(rounds, alpha, inconclusive);
    const Matrix u = rotation(theta);
    Povm out;
    out.elements.resize(base.elements.size());
    for (int m = 0; m < rounds; ++m) {
      const int src = ((m - shift) % rounds + rounds) % rounds;
      out.elements[static_cast<size_t>(m)] =
          conjugate(u, base.elements[static_cast<size_t>(src)], false);
    }
    if (inconclusive) {
      out.elements.back() = conjugate(u, base.elements.back(), false);
    }
    return out;
  };
  BobFamily f = custom(2, rounds + (inconclusive ? 1 : 0), std::move(axes), gen);
  f.mode_ = FamilyMode::kQubitRotationGrid;
  f.rounds_ = rounds;
  f.inconclusive_ = inconclusive;
  return f;
}

BobFamily BobFamily::custom(int dim_b, int outcomes, std::vector<ParamAxis> axes,
                            Generator generator) {
  if (dim_b < 1 || outcomes < 1 || axes.empty() || !generator) {
    throw std::invalid_argument("custom family: invalid definition");
  }
  for (const ParamAxis& a : axes) {
    if (a.steps < 1) throw std::invalid_argument("axis needs >= 1 step");
  }
  BobFamily f;
  f.mode_ = FamilyMode::kCustomParametric;
  f.dim_b_ = dim_b;
  f.outcomes_ = outcomes;
  f.axes_ = std::move(axes);
  f.generator_ = std::make_shared<const Generator>(std::move(generator));
  return f;
}

int BobFamily::grid_size() const {
  if (mode_ == FamilyMode::kExplicitList) return static_cast<int>(listed_->size());
  int n = 1;
  for (const ParamAxis& a : axes_) n *= a.steps;
  return n;
}

std::vector<int> BobFamily::grid_coordinates(int index) const {
  if (!parametric() || index < 0 || index >= grid_size()) {
    throw std::out_of_range("grid_coordinates: not a grid member");
  }
  std::vector<int> coords(axes_.size());
  for (size_t a = 0; a < axes_.size(); ++a) {
    coords[a] = index % axes_[a].steps;
    index /= axes_[a].steps;
  }
  return coords;
}

int BobFamily::grid_index(const std::vector<int>& coordinates) const {
  if (coordinates.size() != axes_.size()) {
    throw std::invalid_argument("grid_index: wrong rank");
  }
  int index = 0;
  for (size_t a = axes_.size(); a-- > 0;) {
    const int steps = axes_[a].steps;
    int c = coordinates[a];
    if (axes_[a].periodic) c = ((c % steps) + steps) % steps;
    if (c < 0 || c >= steps) throw std::out_of_range("grid_index: out of range");
    index = index * steps + c;
  }
  return index;
}

std::vector<double> BobFamily::parameters(int index) const {
  if (index < 0 || index >= size()) throw std::out_of_range("omega out of range");
  if (index >= grid_size()) {
    return extras_[static_cast<size_t>(index - grid_size())].params;
  }
  if (!parametric()) return {};
  const std::vector<int> coords = grid_coordinates(index);
  std::vector<double> params(axes_.size());
  for (size_t a = 0; a < axes_.size(); ++a) params[a] = axes_[a].value(coords[a]);
  return params;
}

namespace {

double axis_distance(const ParamAxis& ax, double a, double b) {
  double d = std::abs(a - b);
  if (ax.periodic) {
    const double period = ax.hi - ax.lo;
    d = std::fmod(d, period);
    d = std::min(d, period - d);
  }
  return d;
}

}  // namespace

int BobFamily::find(const std::vector<double>& params, double tol) const {
  if (!parametric() || params.size() != axes_.size()) return -1;
  std::vector<int> coords(axes_.size());
  bool on_grid = true;
  for (size_t a = 0; a < axes_.size() && on_grid; ++a) {
    const ParamAxis& ax = axes_[a];
    double v = params[a];
    if (ax.periodic) {
      const double period = ax.hi - ax.lo;
      v = ax.lo + std::fmod(std::fmod(v - ax.lo, period) + period, period);
    }
    const double step = ax.periodic ? (ax.hi - ax.lo) / ax.steps
                        : ax.steps > 1 ? (ax.hi - ax.lo) / (ax.steps - 1)
                                       : 1.0;
    int i = static_cast<int>(std::lround((v - ax.lo) / step));
    if (ax.periodic) i %= ax.steps;
    if (i < 0 || i >= ax.steps || axis_distance(ax, ax.value(i), v) > tol) on_grid = false;
    coords[a] = i;
  }
  if (on_grid) return grid_index(coords);
  for (size_t e = 0; e < extras_.size(); ++e) {
    const std::vector<double>& q = extras_[e].params;
    if (q.size() != params.size()) continue;
    bool same = true;
    for (size_t a = 0; a < q.size() && same; ++a) same = axis_distance(axes_[a], q[a], params[a]) <= tol;
    if (same) return grid_size() + static_cast<int>(e);
  }
  return -1;
}

std::vector<int> BobFamily::grid_neighbors(int index) const {
  std::vector<int> out;
  if (!parametric() || index < 0 || index >= grid_size()) return out;
  const std::vector<int> coords = grid_coordinates(index);
  for (size_t a = 0; a < axes_.size(); ++a) {
    if (axes_[a].discrete || axes_[a].steps < 2) continue;
    for (int delta : {-1, 1}) {
      std::vector<int> c = coords;
      c[a] += delta;
      if (!axes_[a].periodic && (c[a] < 0 || c[a] >= axes_[a].steps)) continue;
      const int n = grid_index(c);
      if (n != index) out.push_back(n);
    }
  }
  return out;
}

Povm BobFamily::member(int index) const {
  if (index < 0 || index >= size()) {
    throw std::out_of_range("omega id " + std::to_string(index) +
                            " does not resolve in the Bob family");
  }
  if (index >= grid_size()) return extras_[static_cast<size_t>(index - grid_size())].povm;
  if (!parametric()) return (*listed_)[static_cast<size_t>(index)];
  return (*generator_)(parameters(index));
}

Povm BobFamily::generate(const std::vector<double>& params) const {
  if (!parametric()) throw std::logic_error("explicit family has no generator");
  if (params.size() != axes_.size()) throw std::invalid_argument("parameter rank");
  return (*generator_)(params);
}

BobFamily BobFamily::with_member(Povm extra, std::vector<double> params) const {
  if (extra.size() != outcomes_ || extra.dim() != dim_b_) {
    throw std::invalid_argument("appended member has inconsistent shape");
  }
  BobFamily f = *this;
  f.extras_.push_back({std::move(extra), std::move(params)});
  return f;
}

bool BobFamily::same_grid(const BobFamily& other) const {
  if (mode_ != other.mode_ || dim_b_ != other.dim_b_ || outcomes_ != other.outcomes_) {
    return false;
  }
  if (!parametric()) return listed_ == other.listed_;
  if (generator_ != other.generator_ || axes_.size() != other.axes_.size()) return false;
  for (size_t a = 0; a < axes_.size(); ++a) {
    if (axes_[a].steps != other.axes_[a].steps) return false;
  }
  return true;
}

AliceReport validate_alice(const AliceMeasure& a, int dim_a,
                           const BobFamily& family, double tol) {
  AliceReport report;
  Matrix total = Matrix::Zero(dim_a, dim_a);
  std::set<int> seen;
  bool structural = !a.support.empty();
  for (const AliceAtom& atom : a.support) {
    if (atom.omega < 0 || atom.omega >= family.size() ||
        atom.weight.dim() != dim_a) {
      structural = false;
      continue;
    }
    if (!seen.insert(atom.omega).second) {
      report.warnings.push_back("omega " + std::to_string(atom.omega) +
                                " appears more than once");
    }
    report.max_psd_violation =
        std::max(report.max_psd_violation, -min_eigenvalue(atom.weight.matrix()));
    total += atom.weight.matrix();
  }
  report.normalization_residual = (total - Matrix::Identity(dim_a, dim_a)).norm();
  report.passes = structural && report.max_psd_violation <= tol &&
                  report.normalization_residual <= tol;
  return report;
}

SequentialMeasurement assemble_sequential(const AliceMeasure& a,
                                          const BobFamily& family) {
  if (a.support.empty()) throw std::invalid_argument("Alice measure is empty");
  const int dim_a = a.support.front().weight.dim();
  const BipartiteShape shape{dim_a, family.dim_b()};
  std::vector<Matrix> joint(static_cast<size_t>(family.outcomes()),
                            Matrix::Zero(shape.joint(), shape.joint()));
  for (const AliceAtom& atom : a.support) {
    if (atom.weight.dim() != dim_a) {
      throw std::invalid_argument("Alice weights have inconsistent dimensions");
    }
    const Povm bob = family.member(atom.omega);
    for (int m = 0; m < family.outcomes(); ++m) {
      joint[static_cast<size_t>(m)] +=
          kron(atom.weight.matrix(), bob.elements[static_cast<size_t>(m)].matrix());
    }
  }
  SequentialMeasurement out;
  out.shape = shape;
  for (const Matrix& m : joint) out.joint.elements.push_back(Operator::hermitian_part(m));
  const PovmReport report = validate_povm(out.joint, 1e-9);
  if (!report.passes) {
    throw std::invalid_argument(
        "assembled measurement is not a POVM (completeness residual " +
        std::to_string(report.completeness_residual) + ", PSD violation " +
        std::to_string(report.max_psd_violation) + ")");
  }
  return out;
}

Eigen::MatrixXd outcome_probabilities(const SequentialMeasurement& m,
                                      const std::vector<Operator>& states) {
  Eigen::MatrixXd probs(static_cast<Eigen::Index>(states.size()), m.joint.size());
  for (size_t r = 0; r < states.size(); ++r) {
    if (states[r].dim() != m.shape.joint()) {
      throw std::invalid_argument("state dimension does not match measurement");
    }
    for (int k = 0; k < m.joint.size(); ++k) {
      probs(static_cast<Eigen::Index>(r), k) =
          trace_product(states[r], m.joint.elements[static_cast<size_t>(k)]);
    }
  }
  return probs;
}

}  // namespace seqdisc
