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

#ifndef SEQDISC_PROBLEM_IO_HPP
#define SEQDISC_PROBLEM_IO_HPP

// JSON problem and solution documents. Matrices are row-major lists of
// [real, imag] pairs; doubles are written with 17 significant digits so a
// write/read round trip is exact.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqdisc/dual_solver.hpp"
#include "seqdisc/measurement.hpp"
#include "seqdisc/minimax.hpp"
#include "seqdisc/problem.hpp"
#include "seqdisc/symmetry.hpp"

namespace seqdisc {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid sizes that replace those in a qubit_rotation_grid section (0 keeps
/// the file's value).
struct GridOverride {
  int theta_steps = 0;
  int alpha_steps = 0;
};

struct ProblemDocument {
  GeneralizedProblem problem;
  std::optional<GroupAction> symmetry;
  std::optional<MinimaxProblem> minimax;
};

/// Throws ParseError on malformed text, wrong sizes, non-Hermitian matrices
/// or explicit Bob members that are not POVMs.
ProblemDocument parse_problem(const std::string& text, const GridOverride& grid = {});
ProblemDocument read_problem_file(const std::string& path, const GridOverride& grid = {});

/// Description of the family used when writing; explicit families are
/// written member by member, rotation grids by their construction
/// arguments. Symmetry and minimax sections are optional.
struct ProblemWriteOptions {
  const GroupAction* symmetry = nullptr;
  /// Per-element additive parameter offsets written for the symmetry's
  /// omega action (rotation grids).
  std::vector<std::vector<double>> param_offsets;
  const MinimaxProblem* minimax = nullptr;
};
std::string write_problem(const GeneralizedProblem& p, const ProblemWriteOptions& options = {});

/// One Alice outcome with the Bob POVM it triggers.
struct SolutionAtom {
  Operator weight;
  Povm bob;
  std::vector<double> params;  // empty for explicit members
};

struct SolutionDocument {
  std::vector<SolutionAtom> atoms;
  std::optional<DualPoint> dual;
};

std::string write_solution(const GeneralizedProblem& p, const AliceMeasure& a, const DualPoint* dual);
SolutionDocument parse_solution(const std::string& text);
std::string read_text_file(const std::string& path);

/// Appends the solution's Bob POVMs to the problem's family (reusing grid
/// members whose parameters match) and returns the problem on that family
/// together with the Alice measure. Throws ParseError on dimension
/// mismatches.
std::pair<GeneralizedProblem, AliceMeasure> attach_solution(const GeneralizedProblem& p,
                                                            const SolutionDocument& s);

}  // namespace seqdisc

#endif  // SEQDISC_PROBLEM_IO_HPP
