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

#include "seqdisc/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace seqdisc {

using nlohmann::json;

namespace {

constexpr double kLoadHermitianTol = 1e-9;
constexpr double kLoadPovmTol = 1e-9;

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where + ": missing \"" + key + "\"");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where + ": expected an integer");
  return j.get<int>();
}

std::vector<int> int_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where + ": expected a list");
  std::vector<int> out;
  for (const json& v : j) out.push_back(integer(v, where));
  return out;
}

std::vector<double> real_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where + ": expected a list");
  std::vector<double> out;
  for (const json& v : j) out.push_back(number(v, where));
  return out;
}

Matrix matrix_of(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where + ": expected a non-empty list of [re, im] pairs");
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(j.size()))));
  if (n * n != static_cast<Eigen::Index>(j.size())) fail(where + ": entry count is not a square");
  Matrix q(n, n);
  for (Eigen::Index k = 0; k < n * n; ++k) {
    const json& e = j[static_cast<size_t>(k)];
    if (!e.is_array() || e.size() != 2) fail(where + ": entries must be [re, im] pairs");
    q(k / n, k % n) = Complex(number(e[0], where), number(e[1], where));
  }
  return q;
}

Operator operator_of(const json& j, int dim, const std::string& where) {
  const Matrix q = matrix_of(j, where);
  if (q.rows() != dim) {
    fail(where + ": dimension " + std::to_string(q.rows()) + " (expected " + std::to_string(dim) + ")");
  }
  try {
    return Operator(q, kLoadHermitianTol);
  } catch (const std::invalid_argument&) {
    fail(where + ": matrix is not Hermitian");
  }
}

json matrix_json(const Matrix& q) {
  json out = json::array();
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    for (Eigen::Index k = 0; k < q.cols(); ++k) out.push_back({q(i, k).real(), q(i, k).imag()});
  }
  return out;
}

Povm povm_of(const json& j, int dim, int outcomes, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != outcomes) {
    fail(where + ": expected " + std::to_string(outcomes) + " POVM elements");
  }
  Povm p;
  for (size_t m = 0; m < j.size(); ++m) p.elements.push_back(operator_of(j[m], dim, where));
  const PovmReport r = validate_povm(p, kLoadPovmTol);
  if (!r.passes) fail(where + ": not a POVM");
  return p;
}

json povm_json(const Povm& p) {
  json out = json::array();
  for (const Operator& e : p.elements) out.push_back(matrix_json(e.matrix()));
  return out;
}

BobFamily family_of(const json& j, int dim_b, int outcomes, const GridOverride& grid) {
  const std::string mode = field(j, "mode", "bob_family").is_string()
                               ? j.at("mode").get<std::string>()
                               : std::string();
  BobFamily family;
  if (mode == "qubit_rotation_grid") {
    const int rounds = integer(field(j, "rounds", "bob_family"), "bob_family.rounds");
    const bool inconclusive = j.value("inconclusive", false);
    int theta = integer(field(j, "theta_steps", "bob_family"), "bob_family.theta_steps");
    int alpha = inconclusive ? integer(field(j, "alpha_steps", "bob_family"), "bob_family.alpha_steps") : 1;
    if (grid.theta_steps > 0) theta = grid.theta_steps;
    if (grid.alpha_steps > 0 && inconclusive) alpha = grid.alpha_steps;
    if (dim_b != 2) fail("bob_family: qubit_rotation_grid needs dim_b = 2");
    try {
      family = BobFamily::qubit_rotation_grid(rounds, theta, alpha, inconclusive);
    } catch (const std::invalid_argument& e) {
      fail(std::string("bob_family: ") + e.what());
    }
  } else if (mode == "explicit") {
    const json& members = field(j, "members", "bob_family");
    if (!members.is_array() || members.empty()) fail("bob_family.members: expected a non-empty list");
    std::vector<Povm> list;
    for (size_t k = 0; k < members.size(); ++k) {
      list.push_back(povm_of(members[k], dim_b, outcomes, "bob_family.members[" + std::to_string(k) + "]"));
    }
    family = BobFamily::explicit_list(std::move(list), kLoadPovmTol);
  } else {
    fail("bob_family.mode must be \"qubit_rotation_grid\" or \"explicit\"");
  }
  if (family.outcomes() != outcomes) {
    fail("bob_family has " + std::to_string(family.outcomes()) + " outcomes but the problem declares " +
         std::to_string(outcomes));
  }
  if (j.contains("extra_members")) {
    const json& extras = j.at("extra_members");
    if (!extras.is_array()) fail("bob_family.extra_members: expected a list");
    for (size_t k = 0; k < extras.size(); ++k) {
      const std::string where = "bob_family.extra_members[" + std::to_string(k) + "]";
      Povm p = povm_of(field(extras[k], "povm", where), dim_b, outcomes, where);
      std::vector<double> params;
      if (extras[k].contains("params")) params = real_list(extras[k].at("params"), where + ".params");
      family = family.with_member(std::move(p), std::move(params));
    }
  }
  return family;
}

json family_json(const BobFamily& f) {
  json out;
  if (f.mode() == FamilyMode::kQubitRotationGrid) {
    out["mode"] = "qubit_rotation_grid";
    out["rounds"] = f.rounds();
    out["inconclusive"] = f.inconclusive();
    out["theta_steps"] = f.axes().front().steps;
    if (f.inconclusive()) out["alpha_steps"] = f.axes()[1].steps;
  } else if (f.mode() == FamilyMode::kExplicitList) {
    out["mode"] = "explicit";
    json members = json::array();
    for (int w = 0; w < f.grid_size(); ++w) members.push_back(povm_json(f.member(w)));
    out["members"] = members;
  } else {
    throw std::invalid_argument("custom parametric families cannot be written");
  }
  if (f.size() > f.grid_size()) {
    json extras = json::array();
    for (int w = f.grid_size(); w < f.size(); ++w) {
      extras.push_back({{"povm", povm_json(f.member(w))}, {"params", f.parameters(w)}});
    }
    out["extra_members"] = extras;
  }
  return out;
}

std::vector<Conjugation> reps_of(const json& j, int dim, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) fail(where + ": one entry per group element");
  std::vector<Conjugation> out;
  for (size_t g = 0; g < j.size(); ++g) {
    const std::string w = where + "[" + std::to_string(g) + "]";
    Matrix u = matrix_of(field(j[g], "u", w), w + ".u");
    if (u.rows() != dim) fail(w + ".u: wrong dimension");
    out.push_back({std::move(u), j[g].value("antiunitary", false)});
  }
  return out;
}

std::vector<std::vector<int>> perms_of(const json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) fail(where + ": one permutation per group element");
  std::vector<std::vector<int>> out;
  for (const json& row : j) out.push_back(int_list(row, where));
  return out;
}

GroupAction group_of(const json& j, const GeneralizedProblem& p, int input_rows) {
  const json& table_json = field(j, "table", "symmetry");
  if (!table_json.is_array() || table_json.empty()) fail("symmetry.table: expected a non-empty list");
  const int n = static_cast<int>(table_json.size());
  std::vector<std::vector<int>> table = perms_of(table_json, n, "symmetry.table");
  std::vector<std::vector<int>> perm_m = perms_of(field(j, "perm_m", "symmetry"), n, "symmetry.perm_m");
  // Input-row permutations act on expanded rows with the same negation.
  std::vector<std::vector<int>> perm_j(static_cast<size_t>(n));
  if (input_rows > 0) {
    const std::vector<std::vector<int>> rows = perms_of(field(j, "perm_j", "symmetry"), n, "symmetry.perm_j");
    for (int g = 0; g < n; ++g) {
      if (static_cast<int>(rows[static_cast<size_t>(g)].size()) != input_rows) fail("symmetry.perm_j: wrong length");
      for (int e = 0; e < p.J(); ++e) {
        const int target = rows[static_cast<size_t>(g)][static_cast<size_t>(p.source_row(e))];
        int image = -1;
        for (int f = 0; f < p.J(); ++f) {
          if (p.source_row(f) == target && p.source_negated(f) == p.source_negated(e)) image = f;
        }
        if (image < 0) fail("symmetry.perm_j: row kinds are not preserved");
        perm_j[static_cast<size_t>(g)].push_back(image);
      }
    }
  }
  std::vector<Conjugation> rep_a = reps_of(field(j, "rep_a", "symmetry"), p.dim_a(), n, "symmetry.rep_a");
  std::vector<Conjugation> rep_b = reps_of(field(j, "rep_b", "symmetry"), p.shape().dim_b, n, "symmetry.rep_b");
  try {
    GroupAction gr(std::move(table), std::move(perm_m), std::move(perm_j), std::move(rep_a), std::move(rep_b));
    if (j.contains("perm_k")) gr.with_prior_permutation(perms_of(j.at("perm_k"), n, "symmetry.perm_k"));
    if (j.contains("omega_permutation")) {
      gr.with_omega_permutation(perms_of(j.at("omega_permutation"), n, "symmetry.omega_permutation"));
    }
    if (j.contains("param_offsets")) {
      const json& offs = j.at("param_offsets");
      if (!offs.is_array() || static_cast<int>(offs.size()) != n) fail("symmetry.param_offsets: one list per element");
      std::vector<std::vector<double>> offsets;
      for (const json& row : offs) offsets.push_back(real_list(row, "symmetry.param_offsets"));
      const std::vector<ParamAxis> axes = p.family().axes();
      for (const auto& row : offsets) {
        if (row.size() != axes.size()) fail("symmetry.param_offsets: one offset per family axis");
      }
      gr.with_param_action([offsets, axes](int g, const std::vector<double>& params) {
        std::vector<double> out = params;
        for (size_t a = 0; a < out.size() && a < axes.size(); ++a) {
          out[a] += offsets[static_cast<size_t>(g)][a];
          if (axes[a].discrete) {
            const int steps = axes[a].steps;
            const int i = static_cast<int>(std::lround(out[a] - axes[a].lo));
            out[a] = axes[a].lo + ((i % steps) + steps) % steps;
          }
        }
        return out;
      });
    }
    return gr;
  } catch (const std::invalid_argument& e) {
    fail(std::string("symmetry: ") + e.what());
  } catch (const std::logic_error& e) {
    fail(std::string("symmetry: ") + e.what());
  }
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ProblemDocument parse_problem(const std::string& text, const GridOverride& grid) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  const json& shape_json = field(root, "shape", "problem");
  const BipartiteShape shape{integer(field(shape_json, "dim_a", "shape"), "shape.dim_a"),
                             integer(field(shape_json, "dim_b", "shape"), "shape.dim_b")};
  if (shape.dim_a < 1 || shape.dim_b < 1) fail("shape: dimensions must be positive");
  const int outcomes = integer(field(root, "outcomes", "problem"), "outcomes");
  if (outcomes < 1) fail("outcomes must be positive");
  const int joint = shape.joint();

  std::vector<Operator> c;
  const json& obj = field(root, "objective", "problem");
  if (!obj.is_array() || static_cast<int>(obj.size()) != outcomes) fail("objective: expected one matrix per outcome");
  for (size_t m = 0; m < obj.size(); ++m) c.push_back(operator_of(obj[m], joint, "objective[" + std::to_string(m) + "]"));

  std::vector<std::vector<Operator>> a;
  std::vector<double> b;
  std::vector<ConstraintKind> kinds;
  if (root.contains("constraints")) {
    const json& cons = root.at("constraints");
    if (!cons.is_array()) fail("constraints: expected a list");
    for (size_t j = 0; j < cons.size(); ++j) {
      const std::string where = "constraints[" + std::to_string(j) + "]";
      const json& row = field(cons[j], "a", where);
      if (!row.is_array() || static_cast<int>(row.size()) != outcomes) fail(where + ".a: one matrix per outcome");
      std::vector<Operator> ops;
      for (size_t m = 0; m < row.size(); ++m) ops.push_back(operator_of(row[m], joint, where + ".a"));
      a.push_back(std::move(ops));
      b.push_back(number(field(cons[j], "b", where), where + ".b"));
      const std::string kind = cons[j].value("kind", std::string("inequality"));
      if (kind == "inequality") {
        kinds.push_back(ConstraintKind::kInequality);
      } else if (kind == "equality") {
        kinds.push_back(ConstraintKind::kEquality);
      } else {
        fail(where + ".kind must be \"inequality\" or \"equality\"");
      }
    }
  }
  const int input_rows = static_cast<int>(b.size());
  BobFamily family = family_of(field(root, "bob_family", "problem"), shape.dim_b, outcomes, grid);
  std::optional<GeneralizedProblem> problem;
  try {
    problem.emplace(shape, std::move(c), std::move(a), std::move(b), std::move(family), std::move(kinds));
  } catch (const std::invalid_argument& e) {
    fail(std::string("problem: ") + e.what());
  }
  ProblemDocument doc{*problem, std::nullopt, std::nullopt};
  if (root.contains("symmetry")) doc.symmetry.emplace(group_of(root.at("symmetry"), *problem, input_rows));
  if (root.contains("minimax")) {
    const json& mm = root.at("minimax");
    const json& ck = field(mm, "c", "minimax");
    if (!ck.is_array() || ck.empty()) fail("minimax.c: expected a non-empty list of objective rows");
    std::vector<std::vector<Operator>> rows;
    for (size_t k = 0; k < ck.size(); ++k) {
      if (!ck[k].is_array() || static_cast<int>(ck[k].size()) != outcomes) fail("minimax.c: one matrix per outcome");
      std::vector<Operator> row;
      for (const json& q : ck[k]) row.push_back(operator_of(q, joint, "minimax.c[" + std::to_string(k) + "]"));
      rows.push_back(std::move(row));
    }
    std::vector<double> d = mm.contains("d") ? real_list(mm.at("d"), "minimax.d")
                                             : std::vector<double>(rows.size(), 0.0);
    try {
      doc.minimax.emplace(*problem, std::move(rows), std::move(d));
    } catch (const std::invalid_argument& e) {
      fail(std::string("minimax: ") + e.what());
    }
    if (doc.symmetry && doc.symmetry->prior_count() != 0 && doc.symmetry->prior_count() != doc.minimax->K()) {
      fail("symmetry.perm_k: wrong length");
    }
  }
  return doc;
}

ProblemDocument read_problem_file(const std::string& path, const GridOverride& grid) {
  return parse_problem(read_text_file(path), grid);
}

std::string write_problem(const GeneralizedProblem& p, const ProblemWriteOptions& options) {
  json root;
  root["shape"] = {{"dim_a", p.dim_a()}, {"dim_b", p.shape().dim_b}};
  root["outcomes"] = p.M();
  json obj = json::array();
  for (const Operator& q : p.c()) obj.push_back(matrix_json(q.matrix()));
  root["objective"] = obj;
  json cons = json::array();
  std::vector<int> input_index(static_cast<size_t>(p.J()), -1);
  for (int j = 0; j < p.J(); ++j) {
    if (p.source_negated(j)) continue;
    bool equality = false;
    for (int f = 0; f < p.J(); ++f) equality |= p.source_negated(f) && p.source_row(f) == p.source_row(j);
    json row = json::array();
    for (int m = 0; m < p.M(); ++m) row.push_back(matrix_json(p.a(j, m).matrix()));
    input_index[static_cast<size_t>(j)] = static_cast<int>(cons.size());
    cons.push_back({{"a", row}, {"b", p.b()[static_cast<size_t>(j)]}, {"kind", equality ? "equality" : "inequality"}});
  }
  root["constraints"] = cons;
  root["bob_family"] = family_json(p.family());
  if (options.symmetry) {
    const GroupAction& gr = *options.symmetry;
    json s;
    json table = json::array(), pm = json::array(), pj = json::array(), pk = json::array();
    json ra = json::array(), rb = json::array();
    for (int g = 0; g < gr.size(); ++g) {
      json row = json::array();
      for (int h = 0; h < gr.size(); ++h) row.push_back(gr.compose(g, h));
      table.push_back(row);
      json m = json::array();
      for (int k = 0; k < gr.outcome_count(); ++k) m.push_back(gr.act_m(g, k));
      pm.push_back(m);
      json jr = json::array();
      for (int j = 0; j < p.J(); ++j) {
        if (input_index[static_cast<size_t>(j)] >= 0) jr.push_back(input_index[static_cast<size_t>(gr.act_j(g, j))]);
      }
      pj.push_back(jr);
      if (gr.prior_count() > 0) {
        json kr = json::array();
        for (int k = 0; k < gr.prior_count(); ++k) kr.push_back(gr.act_k(g, k));
        pk.push_back(kr);
      }
      ra.push_back({{"u", matrix_json(gr.rep_a(g).u)}, {"antiunitary", gr.rep_a(g).antiunitary}});
      rb.push_back({{"u", matrix_json(gr.rep_b(g).u)}, {"antiunitary", gr.rep_b(g).antiunitary}});
    }
    s["table"] = table;
    s["perm_m"] = pm;
    s["perm_j"] = pj;
    if (gr.prior_count() > 0) s["perm_k"] = pk;
    s["rep_a"] = ra;
    s["rep_b"] = rb;
    if (!options.param_offsets.empty()) s["param_offsets"] = options.param_offsets;
    root["symmetry"] = s;
  }
  if (options.minimax) {
    json ck = json::array();
    for (const auto& row : options.minimax->c()) {
      json r = json::array();
      for (const Operator& q : row) r.push_back(matrix_json(q.matrix()));
      ck.push_back(r);
    }
    root["minimax"] = {{"c", ck}, {"d", options.minimax->d()}};
  }
  return root.dump(1) + "\n";
}

std::string write_solution(const GeneralizedProblem& p, const AliceMeasure& a, const DualPoint* dual) {
  json root;
  json atoms = json::array();
  for (const AliceAtom& atom : a.support) {
    atoms.push_back({{"weight", matrix_json(atom.weight.matrix())},
                     {"bob", povm_json(p.family().member(atom.omega))},
                     {"params", p.family().parameters(atom.omega)}});
  }
  root["alice"] = atoms;
  if (dual) root["dual"] = {{"x", matrix_json(dual->x.matrix())}, {"lambda", dual->lambda}};
  return root.dump(1) + "\n";
}

SolutionDocument parse_solution(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) fail("solution: expected an object");
  SolutionDocument doc;
  if (root.contains("alice")) {
    const json& atoms = root.at("alice");
    if (!atoms.is_array()) fail("alice: expected a list");
    for (size_t k = 0; k < atoms.size(); ++k) {
      const std::string where = "alice[" + std::to_string(k) + "]";
      const Matrix w = matrix_of(field(atoms[k], "weight", where), where + ".weight");
      SolutionAtom atom{operator_of(field(atoms[k], "weight", where), static_cast<int>(w.rows()), where + ".weight"),
                        {}, {}};
      const json& bob = field(atoms[k], "bob", where);
      if (!bob.is_array() || bob.empty()) fail(where + ".bob: expected a list of matrices");
      const int dim_b = static_cast<int>(matrix_of(bob[0], where + ".bob").rows());
      atom.bob = povm_of(bob, dim_b, static_cast<int>(bob.size()), where + ".bob");
      if (atoms[k].contains("params")) atom.params = real_list(atoms[k].at("params"), where + ".params");
      doc.atoms.push_back(std::move(atom));
    }
  }
  if (root.contains("dual")) {
    const json& d = root.at("dual");
    const Matrix x = matrix_of(field(d, "x", "dual"), "dual.x");
    doc.dual = DualPoint{operator_of(d.at("x"), static_cast<int>(x.rows()), "dual.x"),
                         real_list(field(d, "lambda", "dual"), "dual.lambda")};
  }
  return doc;
}

std::pair<GeneralizedProblem, AliceMeasure> attach_solution(const GeneralizedProblem& p,
                                                            const SolutionDocument& s) {
  BobFamily family = p.family();
  AliceMeasure a;
  for (size_t k = 0; k < s.atoms.size(); ++k) {
    const SolutionAtom& atom = s.atoms[k];
    const std::string where = "alice[" + std::to_string(k) + "]";
    if (atom.weight.dim() != p.dim_a()) fail(where + ": weight dimension does not match dim_a");
    if (atom.bob.size() != p.M() || atom.bob.dim() != p.shape().dim_b) {
      fail(where + ": Bob POVM shape does not match the problem");
    }
    // Reuse a grid member only when it is the same POVM; certificates are
    // evaluated on the operators actually supplied.
    int omega = atom.params.empty() ? -1 : family.find(atom.params, 1e-12);
    if (omega >= 0) {
      const Povm existing = family.member(omega);
      for (int m = 0; m < p.M() && omega >= 0; ++m) {
        if ((existing.elements[static_cast<size_t>(m)].matrix() - atom.bob.elements[static_cast<size_t>(m)].matrix())
                .norm() > 1e-12) {
          omega = -1;
        }
      }
    }
    if (omega < 0) {
      family = family.with_member(atom.bob, family.parametric() ? atom.params : std::vector<double>{});
      omega = family.size() - 1;
    }
    a.support.push_back({omega, atom.weight});
  }
  return {p.with_family(std::move(family)), std::move(a)};
}

}  // namespace seqdisc
