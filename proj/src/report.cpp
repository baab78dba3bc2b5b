#include "cartan/report.hpp"

#include <cctype>
#include <json.hpp>
#include <sstream>

#include "cartan/errors.hpp"

namespace cartan {

std::size_t Report::count(Verdict v) const {
  std::size_t n = 0;
  for (const FixtureResult& f : fixtures) n += f.verdict == v;
  return n;
}

std::size_t Report::exact_matches() const {
  std::size_t n = 0;
  for (const FixtureResult& f : fixtures) n += f.exact;
  return n;
}

std::string format_equation(const std::string& name, const Form& f, const CovectorBasis& coframe,
                            const CovectorBasis& mc) {
  return "d " + name + " = " + to_string(f, mc.concat(coframe));
}

namespace {

CovectorBasis coframe_part(const LieAlgebraResult& r) {
  std::vector<CovectorId> ids(r.basis.ids().begin(), r.basis.ids().begin() + static_cast<long>(r.coframe_size));
  return CovectorBasis(ids);
}

CovectorBasis mc_part(const LieAlgebraResult& r) {
  std::vector<CovectorId> ids(r.basis.ids().begin() + static_cast<long>(r.coframe_size), r.basis.ids().end());
  return CovectorBasis(ids);
}

std::string field_string(const VectorField& v) { return to_string(v); }

void compare_scalar(FixtureResult& out, const SymScalar& expected, const SymScalar& computed) {
  out.expected = to_string(expected);
  out.computed = to_string(computed);
  out.exact = expected == computed;
}

void compare_form(FixtureResult& out, const Form& expected, const Form& computed, const CovectorBasis& order) {
  out.expected = to_string(expected, order);
  out.computed = to_string(computed, order);
  out.exact = expected == computed;
}

void evaluate(const Fixture& fx, const Transcript& t, FixtureResult& out) {
  switch (fx.kind) {
    case Fixture::Kind::field: {
      auto it = t.frame.defined.find(fx.target);
      if (it == t.frame.defined.end()) throw PipelineError("field '" + fx.target + "' was not computed");
      out.expected = field_string(fx.field);
      out.computed = field_string(it->second);
      out.exact = fx.field == it->second;
      return;
    }
    case Fixture::Kind::scalar: {
      if (!t.frame.levi) throw PipelineError("the model has no Levi kernel");
      compare_scalar(out, fx.scalar, t.frame.levi->k);
      return;
    }
    case Fixture::Kind::base_equation: {
      const auto id = find_covector(fx.target);
      const auto pos = id ? t.initial_base.basis.position(*id) : std::nullopt;
      if (!pos || *pos >= t.initial_base_equations.size()) throw PipelineError("base equations were not computed");
      compare_form(out, fx.form, t.initial_base_equations[*pos], t.initial_base.basis);
      return;
    }
    case Fixture::Kind::coefficient: {
      const StageRecord* s = t.find_stage(fx.section);
      if (!s) throw PipelineError("stage " + fx.section + " was not reached");
      compare_scalar(out, fx.scalar, torsion_lookup(s->table, fx.target, fx.first, fx.second));
      return;
    }
    case Fixture::Kind::final_equation: {
      if (!t.result) throw PipelineError("no final structure equations");
      const auto id = find_covector(fx.target);
      const auto pos = id ? t.result->basis.position(*id) : std::nullopt;
      if (!pos) throw PipelineError("'" + fx.target + "' is not in the final basis");
      const CovectorBasis order = mc_part(*t.result).concat(coframe_part(*t.result));
      compare_form(out, fx.form, t.result->equations[*pos], order);
      return;
    }
    case Fixture::Kind::dimension: {
      if (!t.result) throw PipelineError("no final structure equations");
      out.expected = std::to_string(fx.dimension);
      out.computed = std::to_string(t.result->dimension);
      out.exact = fx.dimension == t.result->dimension;
      return;
    }
  }
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::vector<FixtureResult> check_fixtures(const ModelFile& m, const Transcript& t) {
  std::vector<FixtureResult> out;
  for (const Fixture& fx : m.fixtures) {
    FixtureResult r;
    r.fixture = fx;
    switch (fx.kind) {
      case Fixture::Kind::field: r.expected = field_string(fx.field); break;
      case Fixture::Kind::scalar:
      case Fixture::Kind::coefficient: r.expected = to_string(fx.scalar); break;
      case Fixture::Kind::base_equation:
      case Fixture::Kind::final_equation: r.expected = to_string(fx.form); break;
      case Fixture::Kind::dimension: r.expected = std::to_string(fx.dimension); break;
    }
    try {
      evaluate(fx, t, r);
    } catch (const std::exception& e) {
      r.message = e.what();
      r.exact = false;
    }
    if (fx.inconclusive) r.verdict = Verdict::inconclusive;
    else r.verdict = r.exact ? Verdict::pass : Verdict::fail;
    out.push_back(std::move(r));
  }
  return out;
}

Report make_report(const ModelFile& m, Transcript t, bool check) {
  Report r;
  r.model = m.input.model.name;
  if (check) {
    r.fixtures = check_fixtures(m, t);
    r.fixtures_checked = true;
  }
  r.transcript = std::move(t);
  return r;
}

Format parse_format(const std::string& name) {
  if (name == "text") return Format::text;
  if (name == "machine") return Format::machine;
  if (name == "latex") return Format::latex;
  throw ConfigError("unknown emission format '" + name + "' (expected text, machine or latex)");
}

std::string emit(const Report& r, Format f) {
  switch (f) {
    case Format::text: return emit_text(r);
    case Format::machine: return emit_machine(r);
    case Format::latex: return emit_latex(r);
  }
  return {};
}

// ------------------------------------------------------------------- text

std::string emit_text(const Report& r) {
  if (!r.transcript) return {};
  const Transcript& t = *r.transcript;
  std::ostringstream out;
  out << "model " << r.model << "\n";

  out << "\nframe\n";
  for (std::size_t i = 0; i < t.frame.names.size(); ++i)
    out << "  " << t.frame.names[i] << " = " << to_string(t.frame.fields[i]) << "\n";
  if (t.frame.levi) out << "  k = " << to_string(t.frame.levi->k) << "\n";

  out << "\nbase structure equations\n";
  for (std::size_t i = 0; i < t.initial_base_equations.size(); ++i)
    out << "  d " << covector_name(t.initial_base.basis[i]) << " = "
        << to_string(t.initial_base_equations[i], t.initial_base.basis) << "\n";

  std::size_t norm = 0;
  for (const StageRecord& s : t.stages) {
    out << "\nstage " << s.stage.name << " (group dimension " << s.group_dimension << ")\n";
    for (std::size_t i = 0; i < s.stage.coframe.size(); ++i)
      out << "  " << format_equation(covector_name(s.stage.coframe[i]), s.stage.equations[i], s.stage.coframe, s.stage.mc)
          << "\n";
    if (s.absorption) {
      const AbsorptionResult& a = *s.absorption;
      out << "  absorption: " << a.system.unknowns.size() << " unknowns, " << a.solution.free.size() << " free, "
          << a.identities.size() << " identities\n";
      for (const Relation& rel : a.invariants) out << "    invariant " << to_string(rel.value) << " = " << rel.combination << "\n";
      for (const Relation& rel : a.essential) out << "    essential " << to_string(rel.value) << " = " << rel.combination << "\n";
    }
    // Normalizations follow the absorption of the stage they reduce.
    if (norm < t.normalizations.size() && s.absorption && &s != &t.stages.back()) {
      const NormalizationRecord& n = t.normalizations[norm++];
      out << "  normalize " << n.description << ": dimension " << n.dimension_before << " -> " << n.dimension_after << "\n";
      for (const auto& [rel, value] : n.justification)
        out << "    because " << to_string(rel) << " becomes " << to_string(value) << "\n";
    }
  }
  if (t.result) {
    out << "\nLie algebra of dimension " << t.result->dimension << "\n";
    const CovectorBasis cf = coframe_part(*t.result), mc = mc_part(*t.result);
    for (std::size_t i = 0; i < t.result->basis.size(); ++i)
      out << "  " << format_equation(covector_name(t.result->basis[i]), t.result->equations[i], cf, mc) << "\n";
    if (t.closure) out << "  closure: " << (t.closure->passed ? "d^2 = 0" : "FAILED") << "\n";
  }
  if (!t.error.empty()) out << "\nerror (script line " << t.failed_line << "): " << t.error << "\n";

  if (r.fixtures_checked) {
    out << "\nfixtures\n";
    for (const FixtureResult& f : r.fixtures) {
      out << "  " << upper(verdict_name(f.verdict)) << " [" << f.fixture.section << "] " << f.fixture.label;
      if (f.fixture.inconclusive && !f.fixture.note.empty()) out << "  (" << f.fixture.note << ")";
      out << "\n";
      if (!f.exact) {
        out << "      expected: " << f.expected << "\n";
        out << "      computed: " << (f.message.empty() ? f.computed : "<" + f.message + ">") << "\n";
      }
    }
    out << "  " << r.count(Verdict::pass) << " pass, " << r.count(Verdict::fail) << " fail, "
        << r.count(Verdict::inconclusive) << " inconclusive; " << r.exact_matches() << "/" << r.fixtures.size()
        << " exact\n";
  }
  return out.str();
}

// ---------------------------------------------------------------- machine

namespace {

using ojson = nlohmann::ordered_json;

std::string word_key(const CovectorBasis& b, std::size_t i, std::size_t j) {
  return covector_name(b[i]) + "^" + covector_name(b[j]);
}

ojson form_map(const Form& f, const CovectorBasis& order) {
  ojson m = ojson::object();
  if (f.is_zero()) return m;
  // Reuse the canonical printer's ordering by splitting on basis words.
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (f.degree() == 1) {
      Word w{order[i]};
      const SymScalar c = f.coefficient(w);
      if (!c.is_zero()) m[covector_name(order[i])] = to_string(c);
      continue;
    }
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      Word w{order[i], order[j]};
      if (order[i] > order[j]) std::swap(w[0], w[1]);
      SymScalar c = f.coefficient(w);
      if (c.is_zero()) continue;
      if (order[i] > order[j]) c = -c;
      m[word_key(order, i, j)] = to_string(c);
    }
  }
  return m;
}

}  // namespace

std::string emit_machine(const Report& r) {
  if (!r.transcript) return {};
  const Transcript& t = *r.transcript;
  ojson doc;
  doc["model"] = r.model;

  ojson frame = ojson::object();
  for (std::size_t i = 0; i < t.frame.names.size(); ++i) {
    ojson comps = ojson::object();
    for (const auto& [x, c] : t.frame.fields[i].components()) comps[symbol_name(x)] = to_string(c);
    frame[t.frame.names[i]] = comps;
  }
  doc["frame"] = frame;
  if (t.frame.levi) doc["k"] = to_string(t.frame.levi->k);

  ojson base = ojson::object();
  for (std::size_t i = 0; i < t.initial_base_equations.size(); ++i)
    base[covector_name(t.initial_base.basis[i])] = form_map(t.initial_base_equations[i], t.initial_base.basis);
  doc["base_equations"] = base;

  ojson stages = ojson::array();
  for (const StageRecord& s : t.stages) {
    ojson st;
    st["name"] = s.stage.name;
    st["group_dimension"] = s.group_dimension;
    ojson cf = ojson::array(), mc = ojson::array();
    for (CovectorId id : s.stage.coframe.ids()) cf.push_back(covector_name(id));
    for (CovectorId id : s.stage.mc.ids()) mc.push_back(covector_name(id));
    st["coframe"] = cf;
    st["mc"] = mc;
    ojson torsion = ojson::object(), group = ojson::object();
    for (std::size_t i = 0; i < s.table.rows.size(); ++i) {
      const TableRow& row = s.table.rows[i];
      ojson tm = ojson::object(), gm = ojson::object();
      for (const PairCoefficient& p : row.torsion) tm[word_key(s.table.coframe, p.first, p.second)] = to_string(p.value);
      for (const MCTerm& m : row.mc_part)
        gm[covector_name(s.table.mc[m.mc]) + "^" + covector_name(s.table.coframe[m.covector])] = to_string(m.coef);
      torsion[covector_name(s.table.coframe[i])] = tm;
      group[covector_name(s.table.coframe[i])] = gm;
    }
    st["group_part"] = group;
    st["torsion"] = torsion;
    if (s.absorption) {
      const AbsorptionResult& a = *s.absorption;
      ojson ab;
      ab["unknowns"] = a.system.unknowns.size();
      ojson free = ojson::array();
      for (SymbolId id : a.solution.free) free.push_back(symbol_name(id));
      ab["free"] = free;
      ab["identities"] = a.identities.size();
      ojson inv = ojson::array(), ess = ojson::array();
      for (const Relation& rel : a.invariants) inv.push_back({{"value", to_string(rel.value)}, {"combination", rel.combination}});
      for (const Relation& rel : a.essential) ess.push_back({{"value", to_string(rel.value)}, {"combination", rel.combination}});
      ab["invariants"] = inv;
      ab["essential"] = ess;
      st["absorption"] = ab;
    }
    stages.push_back(st);
  }
  doc["stages"] = stages;

  ojson norms = ojson::array();
  for (const NormalizationRecord& n : t.normalizations) {
    ojson j;
    j["description"] = n.description;
    j["dimension_before"] = n.dimension_before;
    j["dimension_after"] = n.dimension_after;
    ojson elim = ojson::object();
    for (const auto& [id, v] : n.eliminated) elim[symbol_name(id)] = to_string(v);
    j["eliminated"] = elim;
    if (n.made_real) j["made_real"] = symbol_name(*n.made_real);
    ojson just = ojson::array();
    for (const auto& [rel, v] : n.justification) just.push_back({{"relation", to_string(rel)}, {"value", to_string(v)}});
    j["justification"] = just;
    norms.push_back(j);
  }
  doc["normalizations"] = norms;

  if (t.result) {
    ojson res;
    res["dimension"] = t.result->dimension;
    ojson basis = ojson::array();
    for (CovectorId id : t.result->basis.ids()) basis.push_back(covector_name(id));
    res["basis"] = basis;
    const CovectorBasis order = mc_part(*t.result).concat(coframe_part(*t.result));
    ojson eqs = ojson::object();
    for (std::size_t i = 0; i < t.result->basis.size(); ++i)
      eqs[covector_name(t.result->basis[i])] = form_map(t.result->equations[i], order);
    res["equations"] = eqs;
    if (t.closure) res["closure"] = t.closure->passed;
    doc["result"] = res;
  }
  if (!t.error.empty()) doc["error"] = {{"line", t.failed_line}, {"message", t.error}};

  if (r.fixtures_checked) {
    ojson fx = ojson::array();
    for (const FixtureResult& f : r.fixtures) {
      ojson j;
      j["section"] = f.fixture.section;
      j["label"] = f.fixture.label;
      j["verdict"] = verdict_name(f.verdict);
      j["exact"] = f.exact;
      j["expected"] = f.expected;
      j["computed"] = f.message.empty() ? f.computed : "";
      if (!f.message.empty()) j["message"] = f.message;
      fx.push_back(j);
    }
    doc["fixtures"] = fx;
  }
  return doc.dump(2) + "\n";
}

// ------------------------------------------------------------------ latex

namespace {

std::string latex_name(const std::string& raw) {
  static const std::vector<std::string> greek{"alpha", "beta",  "gamma", "delta", "zeta", "kappa", "rho",
                                              "sigma", "tau",   "pi",    "Lambda", "omega", "mu"};
  std::string s = raw;
  bool bar = false;
  if (s.size() > 3 && s.compare(s.size() - 3, 3, "bar") == 0) {
    bar = true;
    s = s.substr(0, s.size() - 3);
  }
  std::size_t digits = s.size();
  while (digits > 0 && std::isdigit(static_cast<unsigned char>(s[digits - 1]))) --digits;
  std::string stem = s.substr(0, digits), index = s.substr(digits);
  for (const std::string& g : greek)
    if (stem == g) stem = "\\" + g;
  std::string out = stem;
  if (!index.empty()) out += (index == "0" ? "_{" : "^{") + index + "}";
  return bar ? "\\overline{" + out + "}" : out;
}

std::string latex_expr(const std::string& text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      const std::string w = text.substr(i, j - i);
      out += w == "I" ? "i" : latex_name(w);
      i = j;
    } else if (c == '*') {
      out += " ";
      ++i;
    } else if (c == '^' && i + 1 < text.size() && std::isalpha(static_cast<unsigned char>(text[i + 1]))) {
      out += " \\wedge ";
      ++i;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

}  // namespace

std::string emit_latex(const Report& r) {
  if (!r.transcript) return {};
  const Transcript& t = *r.transcript;
  std::ostringstream out;
  out << "% model " << r.model << "\n";
  out << "\\begin{align*}\n";
  for (std::size_t i = 0; i < t.initial_base_equations.size(); ++i)
    out << "d " << latex_name(covector_name(t.initial_base.basis[i])) << " &= "
        << latex_expr(to_string(t.initial_base_equations[i], t.initial_base.basis)) << " \\\\\n";
  out << "\\end{align*}\n";
  if (t.result) {
    const CovectorBasis order = mc_part(*t.result).concat(coframe_part(*t.result));
    out << "\\begin{align*}\n";
    for (std::size_t i = 0; i < t.result->basis.size(); ++i)
      out << "d " << latex_name(covector_name(t.result->basis[i])) << " &= "
          << latex_expr(to_string(t.result->equations[i], order)) << (i + 1 < t.result->basis.size() ? " \\\\" : "")
          << "\n";
    out << "\\end{align*}\n";
  }
  return out.str();
}

}  // namespace cartan
