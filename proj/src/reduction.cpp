#include "cartan/reduction.hpp"

#include <algorithm>

namespace cartan {

namespace {

std::string pair_label(const Stage& s, std::size_t i, std::size_t a, std::size_t b) {
  return "[" + covector_name(s.coframe[i]) + "; " + covector_name(s.coframe[a]) + ", " + covector_name(s.coframe[b]) +
         "]";
}

std::string weighted_sum(const std::vector<SymScalar>& weights, const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k].is_zero()) continue;
    std::string w = to_string(weights[k]);
    std::string term;
    if (w == "1") term = labels[k];
    else if (w == "-1") term = "-" + labels[k];
    else term = "(" + w + ")*" + labels[k];
    if (out.empty()) out = term;
    else if (term.front() == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  return out.empty() ? "0" : out;
}

// d(s) using rules whose values are rewritten by subs first.
Form differential(const SymScalar& s, const DerivationRules& rules) { return exterior_derivative(s, rules); }

void require_no_free(const AbsorptionResult& a, const char* what) {
  if (!a.solution.free.empty()) {
    std::string names;
    for (SymbolId u : a.solution.free) names += (names.empty() ? "" : ", ") + symbol_name(u);
    throw PipelineError(std::string(what) + " needs a fully determined absorption; free unknowns: " + names);
  }
}

}  // namespace

std::string unknown_name(const std::string& mc, const std::string& coframe) { return "Y[" + mc + ";" + coframe + "]"; }

SymScalar AbsorptionResult::shift(std::size_t m, std::size_t b) const {
  const SymbolId u = unknowns.at(m).at(b);
  auto it = solution.solution.find(u);
  return it == solution.solution.end() ? SymScalar::symbol(u) : it->second;
}

bool equivalent_relations(const SymScalar& a, const SymScalar& b, const SymbolTable& table) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  if ((a / b).is_constant()) return true;
  return (a / conjugate(b, table)).is_constant();
}

AbsorptionResult absorb(const Stage& s, const std::vector<SymScalar>& extra) {
  AbsorptionResult out;
  out.stage = s.name;
  const std::size_t n = s.coframe.size(), nm = s.mc.size();
  std::map<SymbolId, std::size_t> column;
  for (std::size_t m = 0; m < nm; ++m) {
    std::vector<SymbolId> row;
    for (std::size_t b = 0; b < n; ++b) {
      const SymbolId u = intern_symbol(unknown_name(covector_name(s.mc[m]), covector_name(s.coframe[b])));
      column.emplace(u, out.system.unknowns.size());
      out.system.unknowns.push_back(u);
      row.push_back(u);
    }
    out.unknowns.push_back(std::move(row));
  }
  const std::size_t nu = out.system.unknowns.size();
  const TorsionTable table = torsion_table(s);
  std::vector<std::string> labels;

  for (std::size_t i = 0; i < n; ++i) {
    // K[m][b]: coefficient of mu_m ^ omega_b in d(omega_i).
    std::map<std::pair<std::size_t, std::size_t>, SymScalar> K;
    for (const MCTerm& t : table.rows[i].mc_part) K[{t.mc, t.covector}] = t.coef;
    std::map<std::pair<std::size_t, std::size_t>, SymScalar> T;
    for (const PairCoefficient& pc : table.rows[i].torsion) T[{pc.first, pc.second}] = pc.value;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        LinearEquation eq;
        eq.coefficients.assign(nu, SymScalar());
        bool any = false;
        for (std::size_t m = 0; m < nm; ++m) {
          if (auto it = K.find({m, a}); it != K.end()) {
            eq.coefficients[column.at(out.unknowns[m][b])] += it->second;
            any = true;
          }
          if (auto it = K.find({m, b}); it != K.end()) {
            eq.coefficients[column.at(out.unknowns[m][a])] -= it->second;
            any = true;
          }
        }
        auto tt = T.find({a, b});
        eq.rhs = tt == T.end() ? SymScalar() : tt->second;
        if (!any && eq.rhs.is_zero()) continue;
        out.system.equations.push_back(std::move(eq));
        labels.push_back(pair_label(s, i, a, b));
      }
  }
  Bindings zero;
  for (SymbolId u : out.system.unknowns) zero.emplace(u, SymScalar());
  for (std::size_t k = 0; k < extra.size(); ++k) {
    LinearEquation eq;
    for (SymbolId u : out.system.unknowns) {
      const SymScalar c = extra[k].derivative(u);
      for (SymbolId v : c.symbols())
        if (column.count(v)) throw PipelineError("extra absorption condition is not linear in the unknowns");
      eq.coefficients.push_back(c);
    }
    eq.rhs = -substitute(extra[k], zero);
    out.system.equations.push_back(std::move(eq));
    labels.push_back("[extra " + std::to_string(k + 1) + "]");
  }

  out.solution = solve_linear(out.system);
  for (const LinearConstraint& c : out.solution.constraints) {
    Relation r{c.value, weighted_sum(c.combination, labels)};
    if (r.value.is_zero()) out.identities.push_back(std::move(r));
    else if (r.value.is_constant()) out.invariants.push_back(std::move(r));
    else {
      bool seen = false;
      for (const Relation& e : out.essential)
        if (equivalent_relations(e.value, r.value, s.table)) seen = true;
      if (!seen) out.essential.push_back(std::move(r));
    }
  }

  std::map<CovectorId, Form> sub;
  for (std::size_t m = 0; m < nm; ++m) {
    Form f = Form::covector(s.mc[m]);
    for (std::size_t b = 0; b < n; ++b) f += Form::covector(s.coframe[b], out.shift(m, b));
    sub.emplace(s.mc[m], std::move(f));
  }
  for (const Form& eq : s.equations) out.absorbed.push_back(rewrite(eq, sub));
  return out;
}

std::vector<Relation> check_identities(const AbsorptionResult& a) {
  std::vector<Relation> out;
  for (const Relation& r : a.identities) {
    if (!simplify(r.value).is_zero()) throw std::logic_error("internal: identity does not simplify to zero");
    out.push_back(r);
  }
  return out;
}

// ------------------------------------------------------------- normalize

ParamGroup normalize(const ParamGroup& g, const NormalizationStep& step, const AbsorptionResult& last,
                     NormalizationRecord* record) {
  ParamGroup out = g;
  Bindings b;
  NormalizationRecord rec;
  rec.dimension_before = g.dimension();
  auto live = [&](SymbolId p) { return std::find(out.parameters.begin(), out.parameters.end(), p) != out.parameters.end(); };
  auto drop = [&](SymbolId p) { out.parameters.erase(std::remove(out.parameters.begin(), out.parameters.end(), p), out.parameters.end()); };

  if (step.make_real) {
    const SymbolId p = *step.make_real;
    if (!live(p)) throw PipelineError("'" + symbol_name(p) + "' is not a live group parameter");
    if (g.table.is_real(p)) throw PipelineError("'" + symbol_name(p) + "' is already real");
    const SymbolId q = g.table.partner(p);
    b.emplace(q, SymScalar::symbol(p));
    out.table.make_real(p);
    drop(q);
    rec.made_real = p;
    rec.description = symbol_name(p) + " real";
  }
  for (const auto& [p, v] : step.values) {
    if (!live(p)) throw PipelineError("'" + symbol_name(p) + "' is not a live group parameter");
    const bool complex = !g.table.is_real(p);
    const SymbolId q = g.table.partner(p);
    for (SymbolId s : v.symbols()) {
      if (s == p || s == q) throw PipelineError("value of '" + symbol_name(p) + "' refers to itself");
      const bool coordinate = g.table.contains(s) && g.table.at(s).kind == SymbolKind::coordinate;
      if (!coordinate && !live(s)) throw PipelineError("value of '" + symbol_name(p) + "' uses '" + symbol_name(s) + "', which is not live");
    }
    if (g.table.at(p).nonvanishing && !is_unit(v, g.table, g.unit_factors))
      throw PipelineError("'" + symbol_name(p) + "' is nonvanishing but its value " + to_string(v) + " is not a unit");
    b.emplace(p, v);
    if (complex) b.emplace(q, conjugate(v, g.table));
    rec.eliminated.emplace_back(p, v);
    rec.description += (rec.description.empty() ? "" : ", ") + symbol_name(p) + " = " + to_string(v);
  }
  for (const auto& [p, _] : step.values) {
    const SymbolId q = g.table.partner(p);
    drop(p);
    drop(q);
    out.table.retire(p);
  }

  for (const Relation& r : last.essential) {
    const SymScalar after = substitute(r.value, b);
    if (after.is_constant()) rec.justification.emplace_back(r.value, after);
  }
  if (rec.justification.empty())
    throw PipelineError("normalization " + rec.description + " is not justified: no essential relation of stage " +
                        last.stage + " becomes constant");

  for (Eigen::Index i = 0; i < out.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < out.matrix.cols(); ++j) out.matrix(i, j) = substitute(out.matrix(i, j), b);
  if (determinant(out.matrix).is_zero()) throw PipelineError("normalized group matrix is singular");
  for (auto& [_, v] : out.applied) v = substitute(v, b);
  for (const auto& [p, v] : b) out.applied[p] = v;
  rec.dimension_after = out.dimension();
  if (record) *record = std::move(rec);
  return out;
}

// -------------------------------------------------------------- prolong

Stage prolong(const Stage& s, const AbsorptionResult& a, const ProlongationSpec& spec) {
  require_no_free(a, "prolongation");
  const std::size_t n = s.coframe.size();
  std::map<CovectorId, Form> sub;
  std::map<CovectorId, CovectorId> adjoined;  // mc -> new
  std::vector<CovectorId> new_ids;
  for (const auto& [new_name, mc_name] : spec.adjoin) {
    auto mc_id = find_covector(mc_name);
    auto m = mc_id ? s.mc.position(*mc_id) : std::nullopt;
    if (!m) throw PipelineError("'" + mc_name + "' is not a Maurer-Cartan form of stage " + s.name);
    const CovectorId pid = intern_covector(new_name);
    Form f = Form::covector(pid);
    for (std::size_t b = 0; b < n; ++b) f += Form::covector(s.coframe[b], a.shift(*m, b));
    sub.emplace(*mc_id, std::move(f));
    adjoined.emplace(*mc_id, pid);
    new_ids.push_back(pid);
  }
  if (adjoined.size() != s.mc.size()) throw PipelineError("prolongation must adjoin every Maurer-Cartan form");

  Stage p;
  p.name = spec.stage;
  p.table = s.table;
  p.coordinates = s.coordinates;
  p.parameters = s.parameters;
  p.parameters.push_back(spec.parameter);
  p.unit_factors = s.unit_factors;
  std::vector<CovectorId> coframe = s.coframe.ids();
  coframe.insert(coframe.end(), new_ids.begin(), new_ids.end());
  p.coframe = CovectorBasis(coframe);
  const CovectorId lambda = intern_covector(spec.parameter_form);
  p.mc = CovectorBasis({lambda});

  for (const auto& [sym, rule] : s.rules.scalar) p.rules.scalar.emplace(sym, rewrite(rule, sub));
  p.rules.scalar[spec.parameter] = Form::covector(lambda);

  std::vector<Form> dw;
  for (const Form& eq : s.equations) dw.push_back(rewrite(eq, sub));
  for (std::size_t i = 0; i < n; ++i) p.equations.push_back(dw[i]);
  for (const auto& [new_name, mc_name] : spec.adjoin) {
    const CovectorId mc_id = *find_covector(mc_name);
    const std::size_t m = *s.mc.position(mc_id);
    Form eq = rewrite(s.rules.covector.at(mc_id), sub);
    for (std::size_t b = 0; b < n; ++b) {
      const SymScalar y = a.shift(m, b);
      if (y.is_zero()) continue;
      eq -= wedge(differential(y, p.rules), Form::covector(s.coframe[b]));
      eq -= dw[b] * y;
    }
    p.equations.push_back(std::move(eq));
  }
  const CovectorBasis full = p.full_basis();
  for (std::size_t i = 0; i < p.equations.size(); ++i)
    for (CovectorId id : p.equations[i].covectors())
      if (!full.contains(id))
        throw std::logic_error("internal: residual covector '" + covector_name(id) + "' after prolongation");

  for (std::size_t i = 0; i < n; ++i) p.conjugation.pair(s.coframe[i], *s.conjugation.partner(s.coframe[i]));
  for (const auto& [mc_id, pid] : adjoined) {
    const CovectorId partner = *s.conjugation.partner(mc_id);
    p.conjugation.pair(pid, adjoined.at(partner));
  }
  p.conjugation.self(lambda);
  for (std::size_t i = 0; i < p.coframe.size(); ++i) p.rules.covector.emplace(p.coframe[i], p.equations[i]);
  p.rules.covector.emplace(lambda, Form(2));
  return p;
}

// ---------------------------------------------------------------- close

LieAlgebraResult close(const Stage& s, const AbsorptionResult& a) {
  require_no_free(a, "closing");
  const std::size_t n = s.coframe.size();
  std::map<CovectorId, Form> sub;
  for (std::size_t m = 0; m < s.mc.size(); ++m) {
    Form f = Form::covector(s.mc[m]);
    for (std::size_t b = 0; b < n; ++b) f += Form::covector(s.coframe[b], a.shift(m, b));
    sub.emplace(s.mc[m], std::move(f));
  }
  DerivationRules rules;
  for (const auto& [sym, rule] : s.rules.scalar) rules.scalar.emplace(sym, rewrite(rule, sub));

  LieAlgebraResult out;
  out.basis = s.full_basis();
  out.dimension = out.basis.size();
  out.coframe_size = n;
  std::vector<Form> dw;
  for (const Form& eq : s.equations) dw.push_back(rewrite(eq, sub));
  for (std::size_t i = 0; i < n; ++i) out.equations.push_back(dw[i]);
  for (std::size_t m = 0; m < s.mc.size(); ++m) {
    Form eq = rewrite(s.rules.covector.at(s.mc[m]), sub);
    for (std::size_t b = 0; b < n; ++b) {
      const SymScalar y = a.shift(m, b);
      if (y.is_zero()) continue;
      eq -= wedge(differential(y, rules), Form::covector(s.coframe[b]));
      eq -= dw[b] * y;
    }
    out.equations.push_back(std::move(eq));
  }
  for (std::size_t i = 0; i < out.equations.size(); ++i)
    for (const auto& [w, c] : out.equations[i].terms())
      if (!c.is_constant())
        throw PipelineError("d" + covector_name(out.basis[i]) + " has the nonconstant coefficient " + to_string(c) +
                            "; the structure does not close");
  return out;
}

ClosureReport verify_closure(const LieAlgebraResult& r) {
  ClosureReport rep;
  rep.dimension = r.dimension;
  DerivationRules rules;
  for (std::size_t i = 0; i < r.basis.size(); ++i) rules.covector.emplace(r.basis[i], r.equations.at(i));
  for (std::size_t i = 0; i < r.basis.size(); ++i) {
    for (const auto& [w, c] : r.equations[i].terms())
      if (!c.is_constant()) {
        rep.passed = false;
        rep.failures.push_back("d" + covector_name(r.basis[i]) + ": nonconstant coefficient " + to_string(c));
      }
    if (!rep.passed) continue;
    const Form dd = exterior_derivative(r.equations[i], rules);
    if (!dd.is_zero()) {
      rep.passed = false;
      rep.failures.push_back("d(d" + covector_name(r.basis[i]) + ") = " + to_string(dd, r.basis));
    }
  }
  return rep;
}

// ------------------------------------------------------------- pipeline

const StageRecord* Transcript::find_stage(const std::string& name) const {
  for (const StageRecord& s : stages)
    if (s.stage.name == name) return &s;
  return nullptr;
}

Transcript run_pipeline(const PipelineInput& in, const std::string& stop_after) {
  Transcript tr;
  int line = 0;
  try {
    tr.frame = build_frame(in.model);
    tr.base = dualize(tr.frame, in.model.coframe_names);
    tr.base_equations = base_structure_equations(tr.base);
    tr.initial_base = tr.base;
    tr.initial_base_equations = tr.base_equations;
    tr.log.push_back("frame " + std::to_string(tr.frame.fields.size()) + " fields, base coframe dualized");
    ParamGroup g = in.group;
    StageRecord* current = nullptr;
    auto need_stage = [&]() -> StageRecord& {
      if (!current) throw PipelineError("no lifted stage yet");
      return *current;
    };
    auto need_absorption = [&]() -> const AbsorptionResult& {
      StageRecord& r = need_stage();
      if (!r.absorption) throw PipelineError("stage " + r.stage.name + " has not been absorbed");
      return *r.absorption;
    };
    for (const ScriptStep& step : in.script) {
      line = step.line;
      switch (step.kind) {
        case ScriptStep::Kind::lift: {
          StageRecord rec;
          const MCForms mc = maurer_cartan(g, tr.base.coordinates, step.mc_forms);
          rec.mc_identity_defects = maurer_cartan_identity_defects(g, tr.base.coordinates);
          if (!rec.mc_identity_defects.empty())
            throw PipelineError("Maurer-Cartan identity fails for stage " + step.name + ": " + rec.mc_identity_defects[0]);
          rec.stage = lift_structure_equations(step.name, g, mc, tr.base, tr.base_equations, in.lifted);
          const auto direct = direct_structure_equations(g, mc, tr.base, in.lifted);
          for (std::size_t i = 0; i < direct.size(); ++i)
            if (!(direct[i] == rec.stage.equations[i])) rec.direct_oracle_agrees = false;
          if (!rec.direct_oracle_agrees) throw PipelineError("lifted structure equations disagree with the direct computation");
          rec.table = torsion_table(rec.stage);
          rec.group_dimension = g.dimension();
          tr.stages.push_back(std::move(rec));
          current = &tr.stages.back();
          tr.log.push_back("lift " + step.name + ": group dimension " + std::to_string(g.dimension()));
          break;
        }
        case ScriptStep::Kind::absorb: {
          StageRecord& r = need_stage();
          r.absorption = absorb(r.stage, step.extra);
          tr.log.push_back("absorb " + r.stage.name + ": " + std::to_string(r.absorption->essential.size()) +
                           " essential, " + std::to_string(r.absorption->identities.size()) + " identities, " +
                           std::to_string(r.absorption->solution.free.size()) + " free");
          if (!stop_after.empty() && stop_after == r.stage.name) return tr;
          break;
        }
        case ScriptStep::Kind::normalize: {
          NormalizationRecord rec;
          g = normalize(g, step.normalization, need_absorption(), &rec);
          tr.log.push_back("normalize " + rec.description + ": dimension " + std::to_string(rec.dimension_before) +
                           " -> " + std::to_string(rec.dimension_after));
          tr.normalizations.push_back(std::move(rec));
          break;
        }
        case ScriptStep::Kind::rebase: {
          auto old_id = find_covector(step.old_name);
          auto pos = old_id ? tr.base.basis.position(*old_id) : std::nullopt;
          if (!pos) throw PipelineError("'" + step.old_name + "' is not a base coframe element");
          const auto n = static_cast<Eigen::Index>(tr.base.basis.size());
          SymMatrix change = identity_matrix<SymScalar>(n);
          const auto row = collect_linear(step.new_form, tr.base.basis);
          for (Eigen::Index k = 0; k < n; ++k) change(static_cast<Eigen::Index>(*pos), k) = row[static_cast<std::size_t>(k)];
          std::vector<std::string> names;
          for (CovectorId id : tr.base.basis.ids()) names.push_back(covector_name(id));
          names[*pos] = step.new_name;
          tr.base = rebase(tr.base, change, names);
          tr.base_equations = base_structure_equations(tr.base);
          g.matrix = multiply(g.matrix, inverse(change));
          tr.log.push_back("rebase " + step.old_name + " -> " + step.new_name);
          break;
        }
        case ScriptStep::Kind::prolong: {
          const AbsorptionResult& a = need_absorption();
          StageRecord rec;
          rec.stage = prolong(need_stage().stage, a, step.prolongation);
          rec.table = torsion_table(rec.stage);
          rec.group_dimension = rec.stage.parameters.size();
          tr.stages.push_back(std::move(rec));
          current = &tr.stages.back();
          tr.log.push_back("prolong " + step.prolongation.stage + ": coframe " +
                           std::to_string(current->stage.coframe.size()));
          break;
        }
        case ScriptStep::Kind::close: {
          tr.result = close(need_stage().stage, need_absorption());
          tr.closure = verify_closure(*tr.result);
          tr.log.push_back("close: dimension " + std::to_string(tr.result->dimension) +
                           (tr.closure->passed ? ", d^2 = 0" : ", closure FAILED"));
          if (!tr.closure->passed) throw PipelineError("closure verification failed: " + tr.closure->failures[0]);
          break;
        }
      }
    }
  } catch (const std::exception& e) {
    tr.error = e.what();
    tr.failed_line = line;
  }
  return tr;
}

}  // namespace cartan
