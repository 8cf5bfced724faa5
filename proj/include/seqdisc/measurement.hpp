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

#ifndef SEQDISC_MEASUREMENT_HPP
#define SEQDISC_MEASUREMENT_HPP

// Bob POVMs, families of them indexed by omega, finite-support Alice
// measures, and the sequential joint measurement they assemble into.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "seqdisc/operator.hpp"

namespace seqdisc {

/// A list of PSD operators on one space. Completeness is checked by
/// validate_povm, not by construction, so broken candidates can be
/// represented and reported.
struct Povm {
  std::vector<Operator> elements;

  int size() const { return static_cast<int>(elements.size()); }
  int dim() const { return elements.empty() ? 0 : elements.front().dim(); }
};

struct PovmReport {
  double max_psd_violation = 0.0;      // max(0, -min eigenvalue) over elements
  double completeness_residual = 0.0;  // ||sum - I||_F
  bool passes = false;
};

PovmReport validate_povm(const Povm& p, double tol);

enum class FamilyMode { kExplicitList, kQubitRotationGrid, kCustomParametric };

/// One grid axis. Periodic axes exclude the upper end point.
struct ParamAxis {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;
  bool periodic = false;
  bool discrete = false;  // integer-valued; never polished

  double value(int i) const;
};

/// Indexed set of Bob POVMs, all with the same dimension and outcome count.
///
/// Parametric families enumerate a Cartesian grid (first axis fastest) and
/// may carry extra off-grid members appended after the grid. Copies share
/// the generator, so appending is cheap and leaves the original untouched.
class BobFamily {
 public:
  using Generator = std::function<Povm(const std::vector<double>&)>;

  static BobFamily explicit_list(std::vector<Povm> members, double tol = 1e-9);

  /// Qubit family for `rounds` states: members are U_theta-rotations of a
  /// template with two rank-one elements at outcomes rounds-2, rounds-1
  /// (cyclically shifted by `shift`) plus, when `inconclusive`, an extra
  /// outcome alpha|1><1| rotated the same way. Without the inconclusive
  /// outcome alpha is pinned to 0 and the alpha axis is dropped.
  static BobFamily qubit_rotation_grid(int rounds, int theta_steps,
                                       int alpha_steps, bool inconclusive);

  static BobFamily custom(int dim_b, int outcomes, std::vector<ParamAxis> axes,
                          Generator generator);

  FamilyMode mode() const { return mode_; }
  int dim_b() const { return dim_b_; }
  int outcomes() const { return outcomes_; }
  int size() const { return grid_size() + static_cast<int>(extras_.size()); }
  int grid_size() const;
  bool parametric() const { return mode_ != FamilyMode::kExplicitList; }

  const std::vector<ParamAxis>& axes() const { return axes_; }
  /// Axis indices of a grid member (index < grid_size()).
  std::vector<int> grid_coordinates(int index) const;
  int grid_index(const std::vector<int>& coordinates) const;
  /// Parameter values of a member, empty for explicit members.
  std::vector<double> parameters(int index) const;
  /// Grid indices adjacent along each non-discrete axis.
  std::vector<int> grid_neighbors(int index) const;

  /// Index of the member with these parameters (grid first, then extras),
  /// comparing periodic axes modulo their period; -1 when absent.
  int find(const std::vector<double>& params, double tol = 1e-9) const;

  Povm member(int index) const;
  Povm generate(const std::vector<double>& params) const;

  /// New family with `extra` appended at index size(). `params` may be empty
  /// for non-parametric extras.
  BobFamily with_member(Povm extra, std::vector<double> params = {}) const;

  /// qubit_rotation_grid construction arguments, when applicable.
  int rounds() const { return rounds_; }
  /// True when both families enumerate the same grid (extras may differ).
  bool same_grid(const BobFamily& other) const;
  bool inconclusive() const { return inconclusive_; }

 private:
  struct Extra {
    Povm povm;
    std::vector<double> params;
  };

  FamilyMode mode_ = FamilyMode::kExplicitList;
  int dim_b_ = 1;
  int outcomes_ = 0;
  std::vector<ParamAxis> axes_;
  std::shared_ptr<const Generator> generator_;
  std::shared_ptr<const std::vector<Povm>> listed_;
  std::vector<Extra> extras_;
  int rounds_ = 0;
  bool inconclusive_ = false;
};

/// Rotation U_theta = cos(theta) I + sin(theta)(|1><0| - |0><1|).
Matrix rotation(double theta);

/// The rank-one qubit template used by qubit_rotation_grid, before rotation
/// and shifting: `rounds` (+1 when inconclusive) elements.
Povm rotation_template(int rounds, double alpha, bool inconclusive);

struct AliceAtom {
  int omega = 0;
  Operator weight;
};

struct AliceMeasure {
  std::vector<AliceAtom> support;

  int size() const { return static_cast<int>(support.size()); }
};

struct AliceReport {
  double max_psd_violation = 0.0;
  double normalization_residual = 0.0;  // ||sum - I||_F
  std::vector<std::string> warnings;    // e.g. repeated omega ids
  bool passes = false;
};

/// Checks weights against dim_a, omega ids against the family, PSD and
/// normalization to `tol`, and warns (without failing) on repeated omegas.
AliceReport validate_alice(const AliceMeasure& a, int dim_a,
                           const BobFamily& family, double tol);

struct SequentialMeasurement {
  Povm joint;
  BipartiteShape shape;
};

/// Pi_m = sum_k A_k (x) B_m(omega_k). Throws std::invalid_argument on an
/// unresolved omega or when the result is not a POVM within 1e-9. Repeated
/// omegas are not merged.
SequentialMeasurement assemble_sequential(const AliceMeasure& a,
                                          const BobFamily& family);

/// P(r, m) = Tr(rho_r Pi_m).
Eigen::MatrixXd outcome_probabilities(const SequentialMeasurement& m,
                                      const std::vector<Operator>& states);

}  // namespace seqdisc

#endif  // SEQDISC_MEASUREMENT_HPP
