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

#include "seqdisc/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "barrier.hpp"
#include "seqdisc/trine.hpp"

namespace seqdisc {

MinimaxProblem::MinimaxProblem(GeneralizedProblem base, std::vector<std::vector<Operator>> c,
                               std::vector<double> d)
    : base_(std::move(base)), c_(std::move(c)), d_(std::move(d)) {
  if (c_.empty()) throw std::invalid_argument("minimax problem needs at least one objective");
  if (d_.size() != c_.size()) throw std::invalid_argument("offset count does not match objectives");
  for (const auto& row : c_) {
    if (static_cast<int>(row.size()) != base_.M()) throw std::invalid_argument("objective row length");
    for (const Operator& q : row) {
      if (q.dim() != base_.shape().joint()) throw std::invalid_argument("objective operator dimension");
    }
  }
}

MinimaxProblem MinimaxProblem::with_family(BobFamily family) const {
  return MinimaxProblem(base_.with_family(std::move(family)), c_, d_);
}

SimplexPoint SimplexPoint::checked(std::vector<double> mu) {
  if (mu.empty()) throw std::invalid_argument("empty simplex point");
  double total = 0.0;
  for (double v : mu) {
    if (!(v >= 0.0)) throw std::invalid_argument("simplex point has a negative entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("simplex point does not sum to 1");
  return {std::move(mu)};
}

SimplexPoint SimplexPoint::uniform(int k) {
  if (k < 1) throw std::invalid_argument("simplex dimension must be positive");
  return {std::vector<double>(static_cast<size_t>(k), 1.0 / k)};
}

std::vector<double> project_to_simplex(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("empty vector");
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) shift = candidate;
  }
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i] - shift);
  return out;
}

std::vector<double> objective_values(const MinimaxProblem& mp, const AliceMeasure& a) {
  std::vector<double> f(mp.d());
  for (const AliceAtom& atom : a.support) {
    const Povm bob = mp.family().member(atom.omega);
    for (int k = 0; k < mp.K(); ++k) {
      const Matrix reduced = reduce_against(mp.c()[static_cast<size_t>(k)], bob, mp.base().shape());
      f[static_cast<size_t>(k)] += trace_product(atom.weight.matrix(), reduced);
    }
  }
  return f;
}

double mixed_objective(const MinimaxProblem& mp, const SimplexPoint& mu, const AliceMeasure& a) {
  if (static_cast<int>(mu.mu.size()) != mp.K()) throw std::invalid_argument("mu has the wrong length");
  const std::vector<double> f = objective_values(mp, a);
  return std::inner_product(f.begin(), f.end(), mu.mu.begin(), 0.0);
}

GeneralizedProblem reduce_to_p(const MinimaxProblem& mp, const SimplexPoint& mu) {
  if (static_cast<int>(mu.mu.size()) != mp.K()) throw std::invalid_argument("mu has the wrong length");
  const int dim = mp.base().shape().joint();
  std::vector<Operator> mixed;
  for (int m = 0; m < mp.base().M(); ++m) {
    Matrix sum = Matrix::Zero(dim, dim);
    for (int k = 0; k < mp.K(); ++k) {
      sum += mu.mu[static_cast<size_t>(k)] * mp.c()[static_cast<size_t>(k)][static_cast<size_t>(m)].matrix();
    }
    mixed.push_back(Operator::hermitian_part(sum));
  }
  return mp.base().with_objective(std::move(mixed));
}

double mixed_offset(const MinimaxProblem& mp, const SimplexPoint& mu) {
  return std::inner_product(mp.d().begin(), mp.d().end(), mu.mu.begin(), 0.0);
}

namespace {

bool is_uniform(const SimplexPoint& mu) {
  const double u = 1.0 / static_cast<double>(mu.mu.size());
  return std::all_of(mu.mu.begin(), mu.mu.end(), [u](double v) { return std::abs(v - u) <= 1e-12; });
}

std::string describe(const SimplexPoint& mu) {
  std::ostringstream s;
  s.precision(17);
  s << "mu = (";
  for (size_t k = 0; k < mu.mu.size(); ++k) s << (k ? ", " : "") << mu.mu[k];
  s << ")";
  return s.str();
}

DualSolution inner_solve(const MinimaxProblem& mp, const SimplexPoint& mu, SolverConfig cfg,
                         bool scalar_at_uniform) {
  if (scalar_at_uniform && is_uniform(mu)) cfg.scalar_x_fast_path = true;
  try {
    return solve_dual(reduce_to_p(mp, mu), cfg);
  } catch (const SolverError& e) {
    throw SolverError(e.status(), std::string(e.what()) + " at " + describe(mu));
  }
}

// Index of member `omega` of `src` in `master`, appending it when absent.
int adopt(BobFamily& master, const BobFamily& src, int omega) {
  if (omega < src.grid_size()) return omega;
  const std::vector<double> params = src.parameters(omega);
  const Povm bob = src.member(omega);
  if (!params.empty()) {
    const int found = master.find(params, 1e-12);
    if (found >= 0) return found;
  } else {
    for (int w = master.grid_size(); w < master.size(); ++w) {
      const Povm other = master.member(w);
      double d = 0.0;
      for (int m = 0; m < bob.size(); ++m) {
        d = std::max(d, (bob.elements[static_cast<size_t>(m)].matrix() -
                         other.elements[static_cast<size_t>(m)].matrix()).norm());
      }
      if (d <= 1e-12) return w;
    }
  }
  master = master.with_member(bob, params);
  return master.size() - 1;
}

struct Model {
  SimplexPoint mu;
  double value = 0.0;
  std::vector<double> weights;  // one per cut, summing to 1
};

// min_{mu in simplex} max_i sum_k mu_k f_ik, with mu_{K-1} eliminated.
Model minimize_model(const std::vector<std::vector<double>>& cuts, int K, double scale) {
  const int vars = K;  // K - 1 free weights plus the epigraph variable
  detail::LmiProgram prog;
  prog.cost = Eigen::VectorXd::Zero(vars);
  prog.cost(vars - 1) = 1.0;
  for (int k = 0; k + 1 < K; ++k) {
    detail::LinearRow r;
    r.coefficients = Eigen::VectorXd::Zero(vars);
    r.coefficients(k) = 1.0;
    prog.rows.push_back(r);
  }
  {
    detail::LinearRow r;
    r.constant = 1.0;
    r.coefficients = Eigen::VectorXd::Zero(vars);
    for (int k = 0; k + 1 < K; ++k) r.coefficients(k) = -1.0;
    prog.rows.push_back(r);
  }
  const int first_cut = static_cast<int>(prog.rows.size());
  double start_t = 0.0;
  for (const std::vector<double>& f : cuts) {
    detail::LinearRow r;
    const double last = f[static_cast<size_t>(K - 1)];
    r.constant = -last;
    r.coefficients = Eigen::VectorXd::Zero(vars);
    for (int k = 0; k + 1 < K; ++k) r.coefficients(k) = -(f[static_cast<size_t>(k)] - last);
    r.coefficients(vars - 1) = 1.0;
    prog.rows.push_back(r);
    start_t = std::max(start_t, std::accumulate(f.begin(), f.end(), 0.0) / K);
  }
  Eigen::VectorXd start = Eigen::VectorXd::Constant(vars, 1.0 / K);
  start(vars - 1) = start_t + scale;
  detail::LmiOptions opt;
  opt.gap_tol = 1e-13 * scale;
  const detail::LmiResult res = detail::solve_lmi(prog, start, opt);

  Model m;
  std::vector<double> mu(static_cast<size_t>(K));
  double rest = 1.0;
  for (int k = 0; k + 1 < K; ++k) {
    mu[static_cast<size_t>(k)] = std::max(0.0, res.y(k));
    rest -= res.y(k);
  }
  mu[static_cast<size_t>(K - 1)] = std::max(0.0, rest);
  const double total = std::accumulate(mu.begin(), mu.end(), 0.0);
  for (double& v : mu) v /= total;
  m.mu = {std::move(mu)};
  double wsum = 0.0;
  for (size_t i = 0; i < cuts.size(); ++i) {
    m.weights.push_back(res.row_duals(first_cut + static_cast<int>(i)));
    wsum += m.weights.back();
  }
  for (double& w : m.weights) w /= wsum;
  // Model value at the rounded mu; the epigraph variable is only approximate.
  m.value = -1e300;
  for (const std::vector<double>& f : cuts) {
    m.value = std::max(m.value, std::inner_product(f.begin(), f.end(), m.mu.mu.begin(), 0.0));
  }
  return m;
}

AliceMeasure mix(const std::vector<AliceMeasure>& measures, const std::vector<double>& weights,
                 int dim) {
  std::vector<int> order;
  std::map<int, Matrix> merged;
  for (size_t i = 0; i < measures.size(); ++i) {
    if (!(weights[i] > 1e-12)) continue;
    for (const AliceAtom& atom : measures[i].support) {
      auto it = merged.find(atom.omega);
      if (it == merged.end()) {
        it = merged.emplace(atom.omega, Matrix::Zero(dim, dim)).first;
        order.push_back(atom.omega);
      }
      it->second += weights[i] * atom.weight.matrix();
    }
  }
  Matrix total = Matrix::Zero(dim, dim);
  for (const auto& [w, q] : merged) total += q;
  // Renormalize away the dropped weight so the result sums to I.
  Eigen::SelfAdjointEigenSolver<Matrix> es(total);
  const Matrix inv_sqrt = es.operatorInverseSqrt();
  AliceMeasure out;
  for (int w : order) out.support.push_back({w, Operator::hermitian_part(inv_sqrt * merged.at(w) * inv_sqrt)});
  return out;
}

}  // namespace

MinimaxSolution solve_minimax(const MinimaxProblem& mp, const MinimaxConfig& cfg) {
  const int K = mp.K();
  const int dim = mp.base().dim_a();
  BobFamily master = mp.family();
  double scale = 0.0;
  for (const auto& row : mp.c()) {
    for (const Operator& q : row) scale = std::max(scale, q.frobenius_norm());
  }
  scale = std::max(scale, 1e-300);

  std::vector<std::vector<double>> cuts;
  std::vector<AliceMeasure> measures;
  SimplexPoint mu = SimplexPoint::uniform(K);
  double best_upper = 1e300;
  SimplexPoint best_mu = mu;
  Model model;
  bool have_model = false;
  for (int iter = 0; iter < std::max(1, cfg.max_iters); ++iter) {
    const DualSolution sol = inner_solve(mp, mu, cfg.inner, cfg.scalar_x_at_uniform);
    const double upper = sol.report.dual_value + mixed_offset(mp, mu);
    if (upper < best_upper) {
      best_upper = upper;
      best_mu = mu;
    }
    AliceMeasure a;
    for (const AliceAtom& atom : sol.primal.support) {
      a.support.push_back({adopt(master, sol.problem.family(), atom.omega), atom.weight});
    }
    const MinimaxProblem on_master = mp.with_family(master);

    if (K == 1 || (have_model && upper - model.value <= cfg.tol)) {
      // best_mu is within tol of the model bound, and the mixed measure
      // attains that bound on every k, so the pair is a tol-saddle.
      MinimaxSolution out{best_mu, K == 1 ? a : mix(measures, model.weights, dim), 0.0,
                          K == 1 ? upper : model.value, best_upper, iter + 1, on_master};
      out.value = mixed_objective(on_master, out.mu, out.alice);
      if (K == 1) out.lower_bound = out.value;
      return out;
    }
    cuts.push_back(objective_values(on_master, a));
    measures.push_back(std::move(a));
    model = minimize_model(cuts, K, scale);
    have_model = true;
    mu = model.mu;
  }
  throw SolverError(SolverStatus::kNonconvergence, "minimax cutting planes did not converge within max_iters");
}

SaddleReport check_saddle(const MinimaxProblem& mp, const SimplexPoint& mu, const AliceMeasure& a,
                          double tol, const SolverConfig& inner) {
  SaddleReport r;
  const DualSolution sol = inner_solve(mp, mu, inner, false);
  r.optimal_value = sol.report.dual_value + mixed_offset(mp, mu);
  r.f = objective_values(mp, a);
  r.value = std::inner_product(r.f.begin(), r.f.end(), mu.mu.begin(), 0.0);
  r.value_gap = r.optimal_value - r.value;
  const double f_min = *std::min_element(r.f.begin(), r.f.end());
  r.worst_shortfall = r.optimal_value - f_min;
  r.support_spread = 0.0;
  for (size_t k = 0; k < r.f.size(); ++k) {
    if (mu.mu[k] > tol) r.support_spread = std::max(r.support_spread, r.f[k] - f_min);
  }
  const AliceReport ar = validate_alice(a, mp.base().dim_a(), mp.family(), 1e-8);
  r.primal_feasible = ar.passes && is_primal_feasible(mp.base(), a);
  r.value_pass = r.value_gap <= tol;
  r.worst_case_pass = r.worst_shortfall <= tol;
  r.support_pass = r.support_spread <= tol;
  r.pass = r.value_pass && r.worst_case_pass && r.support_pass && r.primal_feasible;
  return r;
}

MinimaxSolution symmetrize_minimax(const GroupAction& gr, const MinimaxSolution& sol) {
  const MinimaxProblem& mp = sol.problem;
  if (!check_objective_symmetry(gr, mp.c(), 1e-9)) {
    throw std::invalid_argument("objectives are not symmetric under the group");
  }
  for (int g = 0; g < gr.size(); ++g) {
    for (int k = 0; k < mp.K(); ++k) {
      if (std::abs(mp.d()[static_cast<size_t>(k)] - mp.d()[static_cast<size_t>(gr.act_k(g, k))]) > 1e-9) {
        throw std::invalid_argument("offsets are not symmetric under the group");
      }
    }
  }
  if (!check_problem_symmetry(gr, reduce_to_p(mp, SimplexPoint::uniform(mp.K())), 1e-9)) {
    throw std::invalid_argument("constraints are not symmetric under the group");
  }
  std::vector<int> omegas;
  for (const AliceAtom& atom : sol.alice.support) omegas.push_back(atom.omega);
  const MinimaxProblem closed = mp.with_family(close_under(gr, mp.family(), omegas));
  MinimaxSolution out = sol;
  out.problem = closed;
  out.alice = symmetrize_alice(gr, closed.family(), sol.alice);
  std::vector<double> mu(sol.mu.mu.size(), 0.0);
  for (int g = 0; g < gr.size(); ++g) {
    for (int k = 0; k < closed.K(); ++k) {
      mu[static_cast<size_t>(k)] += sol.mu.mu[static_cast<size_t>(gr.act_k(g, k))] / gr.size();
    }
  }
  out.mu = {std::move(mu)};
  out.value = mixed_objective(closed, out.mu, out.alice);
  return out;
}

namespace trine {

MinimaxProblem minimax_problem(int theta_steps) {
  GeneralizedProblem base = min_error_problem(theta_steps);
  const States s = trine_states();
  const int dim = base.shape().joint();
  std::vector<std::vector<Operator>> c(3, std::vector<Operator>(3, Operator::zero(dim)));
  for (int k = 0; k < 3; ++k) c[static_cast<size_t>(k)][static_cast<size_t>(k)] = Operator::projector(s.psi[static_cast<size_t>(k)]);
  return MinimaxProblem(std::move(base), std::move(c), {0.0, 0.0, 0.0});
}

}  // namespace trine

}  // namespace seqdisc
