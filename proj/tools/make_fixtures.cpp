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

// Regenerates the problem and solution documents under tests/data.
// Usage: make_fixtures <output-dir>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "seqdisc/minimax.hpp"
#include "seqdisc/problem_io.hpp"
#include "seqdisc/symmetry.hpp"
#include "seqdisc/trine.hpp"

using namespace seqdisc;

namespace {

std::string g_dir;

void emit(const std::string& name, const std::string& text) {
  std::ofstream out(g_dir + "/" + name, std::ios::binary);
  out << text;
  std::printf("wrote %s\n", name.c_str());
}

// 2 pi k/3 on theta and k on the outcome shift; every other axis is fixed.
std::vector<std::vector<double>> rotation_offsets(const BobFamily& family) {
  std::vector<std::vector<double>> rows;
  for (int g = 0; g < 6; ++g) {
    const int k = g % 3;
    std::vector<double> row(family.axes().size(), 0.0);
    row.front() = 2.0 * std::numbers::pi * k / 3.0;
    row.back() = k;
    rows.push_back(row);
  }
  return rows;
}

std::vector<Operator> trine_density() {
  const trine::States s = trine::trine_states();
  std::vector<Operator> rho;
  for (const Vector& v : s.psi) rho.push_back(Operator::projector(v));
  return rho;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <output-dir>\n", argv[0]);
    return 2;
  }
  g_dir = argv[1];
  const GroupAction inconclusive_group = trine::symmetry_group(true);
  const GroupAction min_error_group = trine::symmetry_group(false);

  for (double p_i : {0.25, 0.5}) {
    const GeneralizedProblem p = trine::inconclusive_problem(p_i);
    ProblemWriteOptions w;
    w.symmetry = &inconclusive_group;
    w.param_offsets = rotation_offsets(p.family());
    const std::string tag = p_i == 0.25 ? "025" : "050";
    emit("trine_inconclusive_" + tag + ".json", write_problem(p, w));
  }

  // Analytic optimum at p_I = 1/4 (with its dual) and a perturbed copy.
  {
    const trine::AnalyticInstance inst = trine::analytic_instance(0.25);
    emit("trine_analytic_solution_025.json", write_solution(inst.problem, inst.alice, &inst.dual));
    AliceMeasure bent = inst.alice;
    bent.support[0].weight = bent.support[0].weight * 0.9 + Operator::identity(2) * (0.1 / 3.0);
    emit("trine_perturbed_solution_025.json", write_solution(inst.problem, bent, &inst.dual));
  }

  // Demanding an inconclusive rate of 2 cannot be met by any measurement.
  {
    const GeneralizedProblem base = build_inconclusive(
        trine_density(), {1.0 / 3, 1.0 / 3, 1.0 / 3}, 0.25, BobFamily::qubit_rotation_grid(3, 72, 11, true), {2, 2});
    emit("infeasible.json",
         write_problem(GeneralizedProblem(base.shape(), base.c(), base.a(), {-2.0}, base.family())));
  }

  // One state, one outcome: the only measurement succeeds with certainty.
  {
    Vector v = Vector::Zero(4);
    v(0) = 1.0;
    const GeneralizedProblem p({2, 2}, {Operator::projector(v)}, {}, {},
                               BobFamily::explicit_list({Povm{{Operator::identity(2)}}}));
    emit("single_state.json", write_problem(p));
  }

  // Dimension mismatch: a qutrit-Alice solution document.
  {
    Vector v = Vector::Zero(6);
    v(0) = 1.0;
    const GeneralizedProblem p({3, 2}, {Operator::projector(v)}, {}, {},
                               BobFamily::explicit_list({Povm{{Operator::identity(2)}}}));
    AliceMeasure a;
    a.support.push_back({0, Operator::identity(3)});
    const DualPoint d{Operator::identity(3), {}};
    emit("qutrit_solution.json", write_solution(p, a, &d));
  }

  {
    const MinimaxProblem mp = trine::minimax_problem();
    ProblemWriteOptions w;
    w.symmetry = &min_error_group;
    w.param_offsets = rotation_offsets(mp.base().family());
    w.minimax = &mp;
    emit("trine_minimax.json", write_problem(trine::min_error_problem(), w));

    // K = 1 reduces to the equal-prior min-error problem.
    const GeneralizedProblem base = trine::min_error_problem();
    const MinimaxProblem single(base, {base.c()}, {0.0});
    ProblemWriteOptions ws;
    ws.minimax = &single;
    emit("single_prior_minimax.json", write_problem(base, ws));
  }
  return 0;
}
