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

#ifndef SEQDISC_SWEEP_HPP
#define SEQDISC_SWEEP_HPP

// Success-probability sweep over the inconclusive rate for the double
// trine: closed form, sequential optimum on the rotation grid, and the
// global (joint POVM) optimum.

#include <string>
#include <vector>

#include "seqdisc/dual_solver.hpp"

namespace seqdisc {

struct SweepOptions {
  SolverConfig solver;
  int theta_steps = 720;
  int alpha_steps = 101;
  bool scalar_x = true;  // the trine symmetry licenses a scalar X
};

struct SweepRow {
  double p_i = 0.0;
  double analytic = 0.0;
  double sequential = 0.0;  // certified dual value
  double global = 0.0;
  double lambda_star = 0.0;
  double gap_sequential = 0.0;
};

/// `steps` equally spaced points from p_min to p_max inclusive (one point
/// at p_min when steps == 1). Throws std::invalid_argument unless
/// 0 <= p_min <= p_max <= 1/2 and steps >= 1. Rows are in input order.
std::vector<SweepRow> trine_sweep(double p_min, double p_max, int steps,
                                  const SweepOptions& options = {});

/// Header plus one line per row; comma separated, 9 significant digits,
/// independent of the locale.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace seqdisc

#endif  // SEQDISC_SWEEP_HPP
