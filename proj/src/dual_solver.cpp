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

#include "seqdisc/dual_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <utility>

#include "barrier.hpp"
#include "nnls.hpp"
#include "parallel.hpp"

namespace seqdisc {

namespace {

constexpr double kFitTolerance = 1e-6;
constexpr double kNegligibleMass = 1e-5;  // trace weight of a droppable outcome
constexpr double kActiveLambda = 1e-6;
constexpr int kMaxCandidates = 256;

int square(int d) { return d * d; }

Eigen::VectorXd hermitian_coords(const Matrix& q, const std::vector<Matrix>& basis) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(basis.size()));
  for (size_t i = 0; i < basis.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = trace_product(basis[i], q);
  }
  return out;
}

Matrix from_coords(const Eigen::VectorXd& y, const std::vector<Matrix>& basis) {
  const Eigen::Index d = basis.front().rows();
  Matrix out = Matrix::Zero(d, d);
  for (size_t i = 0; i < basis.size(); ++i) out += y(static_cast<Eigen::Index>(i)) * basis[i];
  return out;
}

Matrix inverse_sqrt_psd(const Matrix& s) {
  const HermitianEigen e = jacobi_eigen(s);
  Eigen::VectorXd inv(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    inv(i) = e.values(i) > 1e-300 ? 1.0 / std::sqrt(e.values(i)) : 0.0;
  }
  return e.vectors * inv.asDiagonal() * e.vectors.adjoint();
}

// lambda_min(x - sigma_omega(lambda)) (sign = 1) or lambda_max(sigma) (sign
// = -1, x ignored) for every member.
std::vector<double> scan(const GeneralizedProblem& p, const Matrix& x,
                         const std::vector<double>& lambda, int sign) {
  p.warm_cache();
  const int d = p.dim_a();
  const int J = p.J();
  std::vector<double> out(static_cast<size_t>(p.family().size()));
  detail::parallel_for(out.size(), [&](size_t begin, size_t end) {
    if (d == 2) {
      for (size_t k = begin; k < end; ++k) {
        const Complex* blk = p.reduced_data(static_cast<int>(k));
        Complex s[4] = {blk[0], blk[1], blk[2], blk[3]};
        for (int j = 0; j < J; ++j) {
          const double l = lambda[static_cast<size_t>(j)];
          for (int e = 0; e < 4; ++e) s[e] -= l * blk[4 * (j + 1) + e];
        }
        double a, dd;
        Complex b;
        if (sign > 0) {
          a = x(0, 0).real() - s[0].real();
          dd = x(1, 1).real() - s[3].real();
          b = 0.5 * ((x(0, 1) - s[2]) + std::conj(x(1, 0) - s[1]));
        } else {
          a = s[0].real();
          dd = s[3].real();
          b = 0.5 * (s[2] + std::conj(s[1]));
        }
        const double mean = 0.5 * (a + dd);
        const double half = 0.5 * (a - dd);
        const double rad = std::sqrt(half * half + std::norm(b));
        out[k] = mean - sign * rad;
      }
      return;
    }
    for (size_t k = begin; k < end; ++k) {
      const Matrix s = p.sigma(static_cast<int>(k), lambda);
      out[k] = sign > 0 ? min_eigenvalue(x - s) : max_eigenvalue(s);
    }
  });
  return out;
}

std::vector<double> scan_margins(const GeneralizedProblem& p, const Matrix& x,
                                 const std::vector<double>& lambda) {
  return scan(p, x, lambda, 1);
}

std::vector<double> scan_top(const GeneralizedProblem& p, const std::vector<double>& lambda) {
  return scan(p, Matrix(), lambda, -1);
}

// Members with value below `threshold`, lowest first, preferring grid local
// minima so one basin does not absorb every cut. Excluded ids are skipped.
std::vector<int> lowest_members(const BobFamily& family, const std::vector<double>& value,
                                double threshold, int count,
                                const std::set<int>& excluded) {
  const int grid = family.grid_size();
  const std::vector<ParamAxis>& axes = family.axes();
  std::vector<int> strides(axes.size(), 1);
  for (size_t a = 1; a < axes.size(); ++a) strides[a] = strides[a - 1] * axes[a - 1].steps;
  auto below = [&](int n, int k) {
    const double vn = value[static_cast<size_t>(n)];
    const double vk = value[static_cast<size_t>(k)];
    return vn < vk || (vn == vk && n < k);
  };
  auto is_local = [&](int k) {
    if (k >= grid || !family.parametric()) return true;
    for (size_t a = 0; a < axes.size(); ++a) {
      if (axes[a].discrete || axes[a].steps < 2) continue;
      const int c = (k / strides[a]) % axes[a].steps;
      for (int delta : {-1, 1}) {
        int cn = c + delta;
        if (axes[a].periodic) {
          cn = (cn + axes[a].steps) % axes[a].steps;
        } else if (cn < 0 || cn >= axes[a].steps) {
          continue;
        }
        const int n = k + (cn - c) * strides[a];
        if (n != k && below(n, k)) return false;
      }
    }
    return true;
  };
  std::vector<int> all;
  std::vector<int> local;
  for (int k = 0; k < static_cast<int>(value.size()); ++k) {
    if (!(value[static_cast<size_t>(k)] < threshold) || excluded.count(k)) continue;
    if (is_local(k)) {
      local.push_back(k);
    } else if (local.empty()) {
      all.push_back(k);
    }
  }
  std::vector<int>& pick = local.empty() ? all : local;
  auto by_value = [&](int a, int b) {
    const double va = value[static_cast<size_t>(a)];
    const double vb = value[static_cast<size_t>(b)];
    return va < vb || (va == vb && a < b);
  };
  const size_t n = std::min(pick.size(), static_cast<size_t>(std::max(0, count)));
  std::partial_sort(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n), pick.end(),
                    by_value);
  pick.resize(n);
  return pick;
}

double axis_spacing(const ParamAxis& a) {
  if (a.periodic) return (a.hi - a.lo) / a.steps;
  if (a.steps <= 1) return (a.hi - a.lo) > 0 ? (a.hi - a.lo) : 0.0;
  return (a.hi - a.lo) / (a.steps - 1);
}

void wrap_param(const ParamAxis& a, double& v) {
  if (a.periodic) {
    const double span = a.hi - a.lo;
    v = a.lo + std::fmod(std::fmod(v - a.lo, span) + span, span);
  } else {
    v = std::clamp(v, a.lo, a.hi);
  }
}

struct Polished {
  std::vector<double> params;
  double value = 0.0;
};

// Pattern search minimizing `eval` over the continuous axes.
template <typename Eval>
Polished pattern_search(const BobFamily& family, std::vector<double> params, Eval eval) {
  const std::vector<ParamAxis>& axes = family.axes();
  std::vector<double> step(axes.size(), 0.0);
  for (size_t a = 0; a < axes.size(); ++a) {
    if (!axes[a].discrete) step[a] = axis_spacing(axes[a]);
  }
  const std::vector<double> initial = step;
  double best = eval(params);
  for (int round = 0; round < 2000; ++round) {
    double largest = 0.0;
    for (double st : step) largest = std::max(largest, st);
    if (largest < 1e-11) break;
    for (size_t a = 0; a < axes.size(); ++a) {
      if (step[a] < 1e-11) continue;
      bool moved = false;
      for (double dir : {1.0, -1.0}) {
        std::vector<double> trial = params;
        trial[a] += dir * step[a];
        wrap_param(axes[a], trial[a]);
        const double v = eval(trial);
        if (v < best) {
          best = v;
          params = std::move(trial);
          moved = true;
          break;
        }
      }
      step[a] = moved ? std::min(initial[a], 2.0 * step[a]) : 0.5 * step[a];
    }
  }
  return {params, best};
}

detail::LmiProgram restricted_program(const GeneralizedProblem& p, const std::vector<int>& active,
                                      const std::vector<Matrix>& basis, double cap) {
  const int d2 = static_cast<int>(basis.size());
  const int n = d2 + p.J();
  detail::LmiProgram prog;
  prog.cost = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < d2; ++i) prog.cost(i) = basis[static_cast<size_t>(i)].trace().real();
  for (int j = 0; j < p.J(); ++j) prog.cost(d2 + j) = p.b()[static_cast<size_t>(j)];
  for (int omega : active) {
    detail::LmiBlock block;
    block.constant = -p.reduced_objective(omega);
    block.coefficients = basis;
    for (int j = 0; j < p.J(); ++j) block.coefficients.push_back(p.reduced_constraint(j, omega));
    prog.blocks.push_back(std::move(block));
  }
  for (int j = 0; j < p.J(); ++j) {
    detail::LinearRow lo{0.0, Eigen::VectorXd::Unit(n, d2 + j)};
    detail::LinearRow hi{cap, -Eigen::VectorXd::Unit(n, d2 + j)};
    prog.rows.push_back(lo);
    prog.rows.push_back(hi);
  }
  return prog;
}

std::vector<double> interior_lambda(const std::vector<double>& lambda, double cap) {
  std::vector<double> out = lambda;
  const double lo = std::min(1e-3, 0.25 * cap);
  for (double& v : out) v = std::clamp(v, lo, 0.5 * cap);
  return out;
}

double scale_of(const GeneralizedProblem& p) { return std::max(1.0, p.objective_scale()); }

struct RestrictedSolve {
  Matrix x;
  std::vector<double> lambda;
  double value = 0.0;
  AliceMeasure multiplier_primal;
};

RestrictedSolve solve_restricted(const GeneralizedProblem& p, const std::vector<int>& active,
                                 const std::vector<double>& lambda_hint,
                                 const SolverConfig& cfg) {
  const int d = p.dim_a();
  const std::vector<Matrix> basis = hermitian_basis(d);
  const int d2 = square(d);
  const detail::LmiProgram prog = restricted_program(p, active, basis, cfg.lambda_cap);

  const std::vector<double> lam0 = interior_lambda(lambda_hint, cfg.lambda_cap);
  double top = 0.0;
  for (int omega : active) top = std::max(top, max_eigenvalue(p.sigma(omega, lam0)));
  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(d2 + p.J());
  y0.head(d2) = hermitian_coords((top + scale_of(p)) * Matrix::Identity(d, d), basis);
  for (int j = 0; j < p.J(); ++j) y0(d2 + j) = lam0[static_cast<size_t>(j)];

  detail::LmiOptions options;
  options.gap_tol = 1e-10 * scale_of(p);
  options.growth = std::max(2.0, cfg.penalty_growth);
  const detail::LmiResult r = detail::solve_lmi(prog, y0, options);

  RestrictedSolve out;
  out.x = from_coords(r.y.head(d2), basis);
  out.x = 0.5 * (out.x + out.x.adjoint());
  out.lambda.resize(static_cast<size_t>(p.J()));
  for (int j = 0; j < p.J(); ++j) out.lambda[static_cast<size_t>(j)] = std::max(0.0, r.y(d2 + j));
  out.value = out.x.trace().real();
  for (int j = 0; j < p.J(); ++j) {
    out.value += out.lambda[static_cast<size_t>(j)] * p.b()[static_cast<size_t>(j)];
  }

  Matrix total = Matrix::Zero(d, d);
  for (const Matrix& z : r.block_duals) total += z;
  const Matrix norm = inverse_sqrt_psd(total);
  for (size_t k = 0; k < active.size(); ++k) {
    const Matrix w = norm * r.block_duals[k] * norm;
    if (w.trace().real() <= 1e-14) continue;
    out.multiplier_primal.support.push_back({active[k], Operator::hermitian_part(w)});
  }
  return out;
}

bool measure_feasible(const GeneralizedProblem& p, const AliceMeasure& a) {
  if (a.support.empty()) return false;
  for (double eta : constraint_values(p, a)) {
    if (eta > 0.0) return false;
  }
  return true;
}

void fill_primal_report(const GeneralizedProblem& p, const DualPoint& d,
                        const AliceMeasure& a, SolveReport& report) {
  report.dual_value = dual_objective(p, d);
  report.primal_value = objective(p, a);
  report.gap = report.dual_value - report.primal_value;
  report.outcome_count = a.size();
  report.constraint_values = constraint_values(p, a);
}

// A multiplier pinned at the cap means either an unbounded dual (primal
// infeasible) or a dual objective that is flat in that direction. Callers
// tell the two apart by re-solving with a smaller cap.
class CapReached : public SolverError {
 public:
  explicit CapReached(double value)
      : SolverError(SolverStatus::kPrimalInfeasible,
                    "primal infeasible: dual objective decreases without bound"),
        value_(value) {}
  double value() const { return value_; }

 private:
  double value_;
};

constexpr double kCapRetryShrink = 8.0;

[[noreturn]] void throw_unbounded() {
  throw SolverError(SolverStatus::kPrimalInfeasible,
                    "primal infeasible: dual objective decreases without bound");
}

bool at_cap(const std::vector<double>& lambda, const SolverConfig& cfg) {
  for (double v : lambda) {
    if (v >= 0.5 * cfg.lambda_cap) return true;
  }
  return false;
}

void check_infeasible(const GeneralizedProblem& p, const DualPoint& d, const SolverConfig& cfg,
                      bool accept_cap) {
  if (!accept_cap && at_cap(d.lambda, cfg)) throw CapReached(dual_objective(p, d));
  if (dual_objective(p, d) < cfg.infeasible_floor) {
    throw SolverError(SolverStatus::kPrimalInfeasible,
                      "primal infeasible: dual objective below the configured floor");
  }
}

}  // namespace

std::vector<Matrix> hermitian_basis(int dim) {
  std::vector<Matrix> out;
  const double r = std::sqrt(0.5);
  for (int i = 0; i < dim; ++i) {
    Matrix e = Matrix::Zero(dim, dim);
    e(i, i) = 1.0;
    out.push_back(e);
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      Matrix s = Matrix::Zero(dim, dim);
      s(i, j) = r;
      s(j, i) = r;
      out.push_back(s);
      Matrix a = Matrix::Zero(dim, dim);
      a(i, j) = Complex(0.0, r);
      a(j, i) = Complex(0.0, -r);
      out.push_back(a);
    }
  }
  return out;
}

double dual_objective(const GeneralizedProblem& p, const DualPoint& d) {
  if (static_cast<int>(d.lambda.size()) != p.J()) {
    throw std::invalid_argument("lambda length does not match J");
  }
  double s = d.x.trace();
  for (int j = 0; j < p.J(); ++j) s += d.lambda[static_cast<size_t>(j)] * p.b()[static_cast<size_t>(j)];
  return s;
}

MarginResult feasibility_margin(const GeneralizedProblem& p, const DualPoint& d,
                                const std::vector<int>& omegas) {
  if (omegas.empty()) throw std::invalid_argument("feasibility_margin: empty omega set");
  if (d.x.dim() != p.dim_a()) throw std::invalid_argument("X dimension does not match dim_a");
  MarginResult best;
  best.margin = std::numeric_limits<double>::infinity();
  for (int omega : omegas) {
    const double m = min_eigenvalue(d.x.matrix() - p.sigma(omega, d.lambda));
    if (m < best.margin || (m == best.margin && omega < best.worst_omega)) {
      best.margin = m;
      best.worst_omega = omega;
    }
  }
  const HermitianEigen e = jacobi_eigen(d.x.matrix() - p.sigma(best.worst_omega, d.lambda));
  best.worst_vector = e.vectors.col(0);
  return best;
}

MarginResult feasibility_margin(const GeneralizedProblem& p, const DualPoint& d) {
  if (d.x.dim() != p.dim_a()) throw std::invalid_argument("X dimension does not match dim_a");
  const std::vector<double> margins = scan_margins(p, d.x.matrix(), d.lambda);
  int worst = 0;
  for (int k = 1; k < static_cast<int>(margins.size()); ++k) {
    if (margins[static_cast<size_t>(k)] < margins[static_cast<size_t>(worst)]) worst = k;
  }
  MarginResult out;
  out.margin = margins[static_cast<size_t>(worst)];
  out.worst_omega = worst;
  out.worst_vector = jacobi_eigen(d.x.matrix() - p.sigma(worst, d.lambda)).vectors.col(0);
  return out;
}

AliceMeasure extract_primal(const GeneralizedProblem& p, const DualPoint& d,
                            const SolverConfig& cfg) {
  const int dim = p.dim_a();
  const int d2 = square(dim);
  const int J = p.J();
  const std::vector<Matrix> basis = hermitian_basis(dim);
  const std::vector<double> margins = scan_margins(p, d.x.matrix(), d.lambda);

  std::vector<int> candidates;
  for (int k = 0; k < static_cast<int>(margins.size()); ++k) {
    if (margins[static_cast<size_t>(k)] <= cfg.kernel_tol) candidates.push_back(k);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    return margins[static_cast<size_t>(a)] < margins[static_cast<size_t>(b)];
  });
  if (candidates.size() > static_cast<size_t>(kMaxCandidates)) candidates.resize(kMaxCandidates);
  if (candidates.empty()) {
    throw SolverError(SolverStatus::kExtractionFailed,
                      "primal extraction failed; refine grid (no kernel members)");
  }

  struct Atom {
    int omega;
    Vector v;
  };
  std::vector<Atom> atoms;
  for (int omega : candidates) {
    const HermitianEigen e = jacobi_eigen(d.x.matrix() - p.sigma(omega, d.lambda));
    std::vector<Vector> kernel;
    for (Eigen::Index i = 0; i < e.values.size(); ++i) {
      if (i == 0 || e.values(i) <= cfg.kernel_tol) kernel.push_back(e.vectors.col(i));
    }
    for (const Vector& v : kernel) atoms.push_back({omega, v});
    const double r = std::sqrt(0.5);
    for (size_t i = 0; i < kernel.size(); ++i) {
      for (size_t j = i + 1; j < kernel.size(); ++j) {
        atoms.push_back({omega, r * (kernel[i] + kernel[j])});
        atoms.push_back({omega, r * (kernel[i] - kernel[j])});
        atoms.push_back({omega, r * (kernel[i] + Complex(0, 1) * kernel[j])});
        atoms.push_back({omega, r * (kernel[i] - Complex(0, 1) * kernel[j])});
      }
    }
  }

  std::vector<int> inactive;
  for (int j = 0; j < J; ++j) {
    if (!(d.lambda[static_cast<size_t>(j)] > kActiveLambda)) inactive.push_back(j);
  }
  const int n_atoms = static_cast<int>(atoms.size());
  const int n_cols = n_atoms + static_cast<int>(inactive.size());
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(d2 + J, n_cols);
  Eigen::VectorXd target(d2 + J);
  target.head(d2) = hermitian_coords(Matrix::Identity(dim, dim), basis);
  for (int j = 0; j < J; ++j) target(d2 + j) = p.b()[static_cast<size_t>(j)];
  for (int k = 0; k < n_atoms; ++k) {
    const Matrix dyad = atoms[static_cast<size_t>(k)].v * atoms[static_cast<size_t>(k)].v.adjoint();
    system.block(0, k, d2, 1) = hermitian_coords(dyad, basis);
    for (int j = 0; j < J; ++j) {
      system(d2 + j, k) = trace_product(dyad, p.reduced_constraint(j, atoms[static_cast<size_t>(k)].omega));
    }
  }
  for (size_t s = 0; s < inactive.size(); ++s) {
    system(d2 + inactive[s], n_atoms + static_cast<int>(s)) = 1.0;
  }

  // Fit with a column mask; masked-out omegas are dropped from the support.
  std::set<int> removed;
  auto fit = [&](const std::set<int>& drop, Eigen::VectorXd& w) {
    Eigen::MatrixXd masked = system;
    for (int k = 0; k < n_atoms; ++k) {
      if (drop.count(atoms[static_cast<size_t>(k)].omega)) masked.col(k).setZero();
    }
    w = detail::nnls(masked, target);
    return (masked * w - target).norm();
  };
  Eigen::VectorXd weights;
  double residual = fit(removed, weights);
  if (!(residual <= kFitTolerance)) {
    throw SolverError(SolverStatus::kExtractionFailed,
                      "primal extraction failed; refine grid (fit residual " +
                          std::to_string(residual) + ")");
  }

  auto support_of = [&](const Eigen::VectorXd& w) {
    std::set<int> s;
    for (int k = 0; k < n_atoms; ++k) {
      if (w(k) > 1e-12) s.insert(atoms[static_cast<size_t>(k)].omega);
    }
    return s;
  };
  auto mass_of = [&](const Eigen::VectorXd& w, int omega) {
    double m = 0.0;
    for (int k = 0; k < n_atoms; ++k) {
      if (atoms[static_cast<size_t>(k)].omega == omega) m += w(k) * atoms[static_cast<size_t>(k)].v.squaredNorm();
    }
    return m;
  };
  const int bound = (J + 1) * d2;
  // Greedy pruning, largest margin first: tight acceptance always; relaxed
  // acceptance for negligible outcomes or while the outcome bound is violated.
  for (int pass = 0, sweeps = 0; pass < 2; ++sweeps) {
    const std::set<int> before = support_of(weights);
    const std::set<int> current = before;
    std::vector<int> support(current.begin(), current.end());
    std::stable_sort(support.begin(), support.end(), [&](int a, int b) {
      return margins[static_cast<size_t>(a)] > margins[static_cast<size_t>(b)];
    });
    for (int omega : support) {
      if (!support_of(weights).count(omega)) continue;
      if (pass == 1 && static_cast<int>(support_of(weights).size()) <= bound &&
          mass_of(weights, omega) > kNegligibleMass) {
        continue;
      }
      std::set<int> trial = removed;
      trial.insert(omega);
      Eigen::VectorXd w;
      const double r = fit(trial, w);
      const double accept = pass == 0 ? std::max(1e-10, residual) : kFitTolerance;
      if (r <= accept) {
        removed = std::move(trial);
        weights = w;
        residual = std::min(residual, r);
      }
    }
    if (support_of(weights) == before || sweeps >= 8) {
      ++pass;
      sweeps = -1;
    }
  }
  if (static_cast<int>(support_of(weights).size()) > bound) {
    throw SolverError(SolverStatus::kExtractionFailed,
                      "primal extraction failed; refine grid (outcome bound exceeded)");
  }

  std::vector<int> order;
  std::vector<Matrix> grouped;
  for (int k = 0; k < n_atoms; ++k) {
    if (!(weights(k) > 1e-12)) continue;
    const int omega = atoms[static_cast<size_t>(k)].omega;
    auto it = std::find(order.begin(), order.end(), omega);
    if (it == order.end()) {
      order.push_back(omega);
      grouped.push_back(Matrix::Zero(dim, dim));
      it = order.end() - 1;
    }
    const Vector& v = atoms[static_cast<size_t>(k)].v;
    grouped[static_cast<size_t>(it - order.begin())] += weights(k) * (v * v.adjoint());
  }
  Matrix total = Matrix::Zero(dim, dim);
  for (const Matrix& g : grouped) total += g;
  const Matrix norm = inverse_sqrt_psd(total);
  AliceMeasure out;
  for (size_t i = 0; i < order.size(); ++i) {
    out.support.push_back({order[i], Operator::hermitian_part(norm * grouped[i] * norm)});
  }
  return out;
}

namespace {

DualSolution finish(const GeneralizedProblem& problem, DualPoint dual, SolveReport report,
                    const std::vector<std::pair<Matrix, std::vector<double>>>& history,
                    const SolverConfig& cfg, bool accept_cap) {
  const MarginResult margin = feasibility_margin(problem, dual);
  if (margin.margin < 0.0) {
    dual.x = Operator::hermitian_part(dual.x.matrix() -
                                      margin.margin * Matrix::Identity(problem.dim_a(), problem.dim_a()));
  }
  report.feasibility_margin = std::max(0.0, margin.margin);
  check_infeasible(problem, dual, cfg, accept_cap);

  for (size_t i = 0; i < history.size() && i < report.trajectory.size(); ++i) {
    const std::vector<double> m = scan_margins(problem, history[i].first, history[i].second);
    const double worst = *std::min_element(m.begin(), m.end());
    double lifted = report.trajectory[i].dual_value;
    if (worst < 0.0) lifted -= worst * problem.dim_a();
    report.trajectory[i].lifted_dual_value = lifted;
  }

  AliceMeasure primal = extract_primal(problem, dual, cfg);
  fill_primal_report(problem, dual, primal, report);
  report.active_omegas.clear();
  for (const AliceAtom& atom : primal.support) report.active_omegas.push_back(atom.omega);
  report.trajectory.push_back({report.dual_value, report.dual_value, report.primal_value,
                               measure_feasible(problem, primal)});
  return DualSolution{std::move(dual), std::move(primal), std::move(report), problem};
}

// Re-solves once with a smaller cap when a multiplier reached the cap: an
// unchanged value means the objective is flat there and the smaller-cap
// solution stands; a larger value means it keeps decreasing.
template <class Impl>
DualSolution with_cap_retry(const GeneralizedProblem& p, const SolverConfig& cfg, Impl impl) {
  try {
    return impl(p, cfg, false);
  } catch (const CapReached& high) {
    SolverConfig low = cfg;
    low.lambda_cap = cfg.lambda_cap / kCapRetryShrink;
    std::optional<DualSolution> s;
    try {
      s = impl(p, low, true);
    } catch (const SolverError&) {
      throw_unbounded();
    }
    if (s->report.dual_value > high.value() + 1e-6 * scale_of(p)) throw_unbounded();
    return std::move(*s);
  }
}

DualSolution solve_dual_exchange(const GeneralizedProblem& p, const SolverConfig& cfg,
                                 bool accept_cap) {
  if (p.family().size() < 1) throw std::invalid_argument("Bob family is empty");
  const int dim = p.dim_a();
  GeneralizedProblem problem = p;
  problem.warm_cache();
  BobFamily family = p.family();
  std::mt19937_64 rng(cfg.seed);

  std::vector<double> lambda(static_cast<size_t>(p.J()), 0.0);
  std::set<int> active_set;
  {
    std::vector<double> top = scan_top(problem, lambda);
    for (double& v : top) v = -v;
    for (int k : lowest_members(family, top, std::numeric_limits<double>::infinity(),
                                std::max(1, cfg.cuts_per_round), {})) {
      active_set.insert(k);
    }
  }

  SolveReport report;
  std::vector<std::pair<Matrix, std::vector<double>>> history;
  RestrictedSolve sub;
  bool converged = false;
  const int polish_count = 3;
  for (int iter = 0; iter < std::max(1, cfg.max_iters); ++iter) {
    report.iterations = iter + 1;
    const std::vector<int> active(active_set.begin(), active_set.end());
    sub = solve_restricted(problem, active, lambda, cfg);
    lambda = sub.lambda;
    history.emplace_back(sub.x, sub.lambda);
    TrajectoryPoint tp;
    tp.dual_value = sub.value;
    tp.primal_feasible = measure_feasible(problem, sub.multiplier_primal);
    tp.primal_value = objective(problem, sub.multiplier_primal);
    report.trajectory.push_back(tp);

    const std::vector<double> margins = scan_margins(problem, sub.x, lambda);
    std::vector<int> cuts = lowest_members(family, margins, -cfg.eps_feas,
                                           cfg.cuts_per_round, active_set);
    int appended = 0;
    if (cfg.refine_local && family.parametric()) {
      const std::vector<int> starts = lowest_members(
          family, margins, std::numeric_limits<double>::infinity(), polish_count, {});
      for (int start : starts) {
        std::vector<double> params = family.parameters(start);
        if (params.empty()) continue;
        if (iter > 0 && start < family.grid_size()) {
          // Jittered restart keeps repeated polishes of one basin from
          // stalling on the same grid point.
          std::uniform_real_distribution<double> jitter(-0.25, 0.25);
          for (size_t a = 0; a < params.size(); ++a) {
            const ParamAxis& ax = family.axes()[a];
            if (ax.discrete) continue;
            params[a] += jitter(rng) * axis_spacing(ax);
            wrap_param(ax, params[a]);
          }
        }
        const Polished best = pattern_search(family, params, [&](const std::vector<double>& q) {
          return min_eigenvalue(sub.x - problem.sigma_of(family.generate(q), lambda));
        });
        if (best.value < -cfg.eps_feas && best.value < margins[static_cast<size_t>(start)]) {
          family = family.with_member(family.generate(best.params), best.params);
          ++appended;
        }
      }
    }
    if (appended > 0) {
      problem = p.with_family(family);
      for (int k = family.size() - appended; k < family.size(); ++k) cuts.push_back(k);
      report.appended_members += appended;
    }
    if (cuts.empty()) {
      converged = true;
      break;
    }
    for (int k : cuts) active_set.insert(k);
  }
  if (!converged) {
    throw SolverError(SolverStatus::kNonconvergence,
                      "exchange method did not converge within max_iters");
  }
  DualPoint dual{Operator::hermitian_part(sub.x), lambda};
  (void)dim;
  return finish(problem, std::move(dual), std::move(report), history, cfg, accept_cap);
}

struct ScalarEval {
  double v = 0.0;
  std::vector<double> slope;         // d v / d lambda_j at the best maximizer
  std::vector<Polished> maximizers;  // polished, value stored as +lambda_max
};

// Danskin slope of lambda_max(sigma(lambda)) for one member's reduced data.
std::vector<double> top_slope(const std::vector<Matrix>& reduced, const std::vector<double>& lambda) {
  Matrix s = reduced.front();
  for (size_t j = 0; j < lambda.size(); ++j) s -= lambda[j] * reduced[j + 1];
  const HermitianEigen e = jacobi_eigen(s);
  const Vector t = e.vectors.col(e.values.size() - 1);
  std::vector<double> out(lambda.size());
  for (size_t j = 0; j < lambda.size(); ++j) {
    out[j] = -(t.adjoint() * reduced[j + 1] * t)(0, 0).real();
  }
  return out;
}

ScalarEval scalar_value(const GeneralizedProblem& p, const std::vector<double>& lambda,
                        const SolverConfig& cfg, int polish_count) {
  const BobFamily& family = p.family();
  std::vector<double> top = scan_top(p, lambda);
  ScalarEval out;
  int best = 0;
  for (int k = 1; k < static_cast<int>(top.size()); ++k) {
    if (top[static_cast<size_t>(k)] > top[static_cast<size_t>(best)]) best = k;
  }
  out.v = top[static_cast<size_t>(best)];
  std::vector<Matrix> best_reduced{p.reduced_objective(best)};
  for (int j = 0; j < p.J(); ++j) best_reduced.push_back(p.reduced_constraint(j, best));
  if (cfg.refine_local && family.parametric()) {
    for (double& t : top) t = -t;
    for (int start : lowest_members(family, top, std::numeric_limits<double>::infinity(),
                                    polish_count, {})) {
      std::vector<double> params = family.parameters(start);
      if (params.empty()) continue;
      Polished m = pattern_search(family, params, [&](const std::vector<double>& q) {
        return -max_eigenvalue(p.sigma_of(family.generate(q), lambda));
      });
      m.value = -m.value;
      if (m.value > out.v) {
        out.v = m.value;
        best_reduced = p.reduced_of(family.generate(m.params));
      }
      out.maximizers.push_back(std::move(m));
    }
  }
  out.slope = top_slope(best_reduced, lambda);
  return out;
}

DualSolution solve_scalar(const GeneralizedProblem& p, const SolverConfig& cfg, bool accept_cap) {
  if (p.family().size() < 1) throw std::invalid_argument("Bob family is empty");
  GeneralizedProblem problem = p;
  problem.warm_cache();
  const int dim = p.dim_a();
  const int J = p.J();
  SolveReport report;
  const int search_polish = 2;
  const double slope_tol = 1e-12 * scale_of(p);

  // s(lambda) = dim * v(lambda) + lambda . b is convex; along coordinate j
  // locate the largest point where its slope is still <= 0 by bisection.
  auto slope_of = [&](const std::vector<double>& lambda, int j) {
    const ScalarEval e = scalar_value(problem, lambda, cfg, search_polish);
    return dim * e.slope[static_cast<size_t>(j)] + p.b()[static_cast<size_t>(j)];
  };
  auto line_min = [&](std::vector<double> lambda, int j) {
    auto slope_at = [&](double v) {
      lambda[static_cast<size_t>(j)] = v;
      return slope_of(lambda, j);
    };
    if (slope_at(0.0) > slope_tol) {
      lambda[static_cast<size_t>(j)] = 0.0;
      return lambda;
    }
    double lo = 0.0;
    double hi = std::min(1.0, cfg.lambda_cap);
    while (slope_at(hi) <= slope_tol) {
      lo = hi;
      if (hi >= cfg.lambda_cap) {
        lambda[static_cast<size_t>(j)] = cfg.lambda_cap;
        return lambda;
      }
      hi = std::min(cfg.lambda_cap, 2.0 * hi);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (slope_at(mid) <= slope_tol) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    lambda[static_cast<size_t>(j)] = 0.5 * (lo + hi);
    return lambda;
  };

  auto s_of = [&](const std::vector<double>& lambda) {
    double s = dim * scalar_value(problem, lambda, cfg, search_polish).v;
    for (int j = 0; j < J; ++j) s += lambda[static_cast<size_t>(j)] * p.b()[static_cast<size_t>(j)];
    return s;
  };

  std::vector<double> lambda(static_cast<size_t>(J), 0.0);
  if (J == 1) {
    lambda = line_min(lambda, 0);
    report.iterations = 1;
  } else if (J > 1) {
    double prev = s_of(lambda);
    for (int sweep = 0; sweep < std::max(1, cfg.max_iters); ++sweep) {
      for (int j = 0; j < J; ++j) lambda = line_min(lambda, j);
      const double now = s_of(lambda);
      report.iterations = sweep + 1;
      if (prev - now <= 1e-12 * scale_of(p)) break;
      prev = now;
    }
  }

  // Final value with more polish starts; append maximizers as members so
  // the kernel structure is visible to extraction.
  const ScalarEval final_eval = scalar_value(problem, lambda, cfg, 8);
  BobFamily family = problem.family();
  int appended = 0;
  for (const Polished& m : final_eval.maximizers) {
    if (m.value >= final_eval.v - 0.1 * cfg.kernel_tol) {
      family = family.with_member(family.generate(m.params), m.params);
      ++appended;
    }
  }
  if (appended > 0) problem = p.with_family(family);
  report.appended_members = appended;
  DualPoint dual{Operator::identity(dim) * final_eval.v, lambda};
  report.trajectory.push_back({dual_objective(problem, dual), 0.0, 0.0, false});
  std::vector<std::pair<Matrix, std::vector<double>>> history{{dual.x.matrix(), lambda}};
  return finish(problem, std::move(dual), std::move(report), history, cfg, accept_cap);
}

}  // namespace

DualSolution solve_dual(const GeneralizedProblem& p, const SolverConfig& cfg) {
  if (cfg.scalar_x_fast_path) return solve_dual_scalar_x(p, cfg);
  return with_cap_retry(p, cfg, solve_dual_exchange);
}

DualSolution solve_dual_scalar_x(const GeneralizedProblem& p, const SolverConfig& cfg) {
  return with_cap_retry(p, cfg, solve_scalar);
}

namespace {

GlobalDualResult global_dual_at(const std::vector<Operator>& c,
                                const std::vector<std::vector<Operator>>& a,
                                const std::vector<double>& b, const SolverConfig& cfg,
                                bool accept_cap) {
  if (c.empty()) throw std::invalid_argument("global dual needs at least one outcome");
  const int dim = c.front().dim();
  const int J = static_cast<int>(b.size());
  if (static_cast<int>(a.size()) != J) throw std::invalid_argument("constraint count mismatch");
  for (const auto& row : a) {
    if (row.size() != c.size()) throw std::invalid_argument("constraint row length");
  }
  const std::vector<Matrix> basis = hermitian_basis(dim);
  const int d2 = square(dim);
  double scale = 1.0;
  for (const Operator& q : c) scale = std::max(scale, q.frobenius_norm());

  detail::LmiProgram prog;
  prog.cost = Eigen::VectorXd::Zero(d2 + J);
  for (int i = 0; i < d2; ++i) prog.cost(i) = basis[static_cast<size_t>(i)].trace().real();
  for (int j = 0; j < J; ++j) prog.cost(d2 + j) = b[static_cast<size_t>(j)];
  for (size_t m = 0; m < c.size(); ++m) {
    detail::LmiBlock block;
    block.constant = -c[m].matrix();
    block.coefficients = basis;
    for (int j = 0; j < J; ++j) block.coefficients.push_back(a[static_cast<size_t>(j)][m].matrix());
    prog.blocks.push_back(std::move(block));
  }
  for (int j = 0; j < J; ++j) {
    prog.rows.push_back({0.0, Eigen::VectorXd::Unit(d2 + J, d2 + j)});
    prog.rows.push_back({cfg.lambda_cap, -Eigen::VectorXd::Unit(d2 + J, d2 + j)});
  }
  const std::vector<double> lam0 =
      interior_lambda(std::vector<double>(static_cast<size_t>(J), 0.0), cfg.lambda_cap);
  double top = 0.0;
  for (size_t m = 0; m < c.size(); ++m) {
    Matrix z = c[m].matrix();
    for (int j = 0; j < J; ++j) z -= lam0[static_cast<size_t>(j)] * a[static_cast<size_t>(j)][m].matrix();
    top = std::max(top, max_eigenvalue(z));
  }
  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(d2 + J);
  y0.head(d2) = hermitian_coords((top + scale) * Matrix::Identity(dim, dim), basis);
  for (int j = 0; j < J; ++j) y0(d2 + j) = lam0[static_cast<size_t>(j)];

  detail::LmiOptions options;
  options.gap_tol = 1e-10 * scale;
  options.growth = std::max(2.0, cfg.penalty_growth);
  const detail::LmiResult r = detail::solve_lmi(prog, y0, options);

  GlobalDualResult out;
  out.x = Operator::hermitian_part(from_coords(r.y.head(d2), basis));
  for (int j = 0; j < J; ++j) out.lambda.push_back(std::max(0.0, r.y(d2 + j)));
  out.value = out.x.trace();
  for (int j = 0; j < J; ++j) out.value += out.lambda[static_cast<size_t>(j)] * b[static_cast<size_t>(j)];
  if (!accept_cap && at_cap(out.lambda, cfg)) throw CapReached(out.value);
  if (!r.converged) {
    throw SolverError(SolverStatus::kNonconvergence, "global dual did not converge");
  }
  Matrix total = Matrix::Zero(dim, dim);
  for (const Matrix& z : r.block_duals) total += z;
  const Matrix norm = inverse_sqrt_psd(total);
  for (size_t m = 0; m < c.size(); ++m) {
    out.measurement.elements.push_back(Operator::hermitian_part(norm * r.block_duals[m] * norm));
    out.primal_value += trace_product(c[m], out.measurement.elements.back());
  }
  return out;
}

}  // namespace

GlobalDualResult solve_global_dual(const std::vector<Operator>& c,
                                   const std::vector<std::vector<Operator>>& a,
                                   const std::vector<double>& b, const SolverConfig& cfg) {
  try {
    return global_dual_at(c, a, b, cfg, false);
  } catch (const CapReached& high) {
    SolverConfig low = cfg;
    low.lambda_cap = cfg.lambda_cap / kCapRetryShrink;
    std::optional<GlobalDualResult> r;
    try {
      r = global_dual_at(c, a, b, low, true);
    } catch (const SolverError&) {
      throw_unbounded();
    }
    double scale = 1.0;
    for (const Operator& q : c) scale = std::max(scale, q.frobenius_norm());
    if (r->value > high.value() + 1e-6 * scale) throw_unbounded();
    return *r;
  }
}

}  // namespace seqdisc
