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

#ifndef SEQDISC_SRC_BARRIER_HPP
#define SEQDISC_SRC_BARRIER_HPP

// Log-barrier Newton method for small linear matrix inequality programs:
//
//   minimize cost . y  subject to  S_k(y) = F0_k + sum_i y_i F_ik >= 0,
//                                  g0_r + g_r . y >= 0.
//
// Blocks are Hermitian. The starting point must be strictly feasible.

#include <vector>

#include <Eigen/Dense>

#include "seqdisc/operator.hpp"

namespace seqdisc::detail {

struct LmiBlock {
  Matrix constant;
  std::vector<Matrix> coefficients;  // one per variable
};

struct LinearRow {
  double constant = 0.0;
  Eigen::VectorXd coefficients;
};

struct LmiProgram {
  Eigen::VectorXd cost;
  std::vector<LmiBlock> blocks;
  std::vector<LinearRow> rows;

  int variables() const { return static_cast<int>(cost.size()); }
};

struct LmiOptions {
  double gap_tol = 1e-10;  // absolute bound on (barrier value - optimum)
  double growth = 8.0;
  int max_newton = 400;
};

struct LmiResult {
  Eigen::VectorXd y;
  double value = 0.0;
  std::vector<Matrix> block_duals;  // S_k^{-1}/t, PSD
  Eigen::VectorXd row_duals;        // 1/(t s_r)
  double gap_bound = 0.0;           // (total barrier degree)/t
  int newton_steps = 0;
  bool converged = false;
};

/// Slack matrices S_k(y), in block order.
std::vector<Matrix> block_slacks(const LmiProgram& prog, const Eigen::VectorXd& y);

/// True when every block is positive definite and every row positive.
bool strictly_feasible(const LmiProgram& prog, const Eigen::VectorXd& y);

LmiResult solve_lmi(const LmiProgram& prog, const Eigen::VectorXd& start,
                    const LmiOptions& options);

}  // namespace seqdisc::detail

#endif  // SEQDISC_SRC_BARRIER_HPP
