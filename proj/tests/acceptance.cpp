// Acceptance driver: one PASS/FAIL line per criterion, details indented above it.
// Expected values are transcribed here by hand and never read back from the engine.

#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cartan/frame.hpp"
#include "cartan/linear.hpp"
#include "cartan/model_file.hpp"
#include "cartan/reduction.hpp"
#include "cartan/report.hpp"
#include "random_exprs.hpp"

using namespace cartan;

namespace {

// Pinned thresholds.
constexpr double kMinExactFraction = 0.95;
constexpr int kRandomScalars = 500;
constexpr int kRandomForms = 60;
constexpr int kRandomFields = 25;
constexpr int kLinearTrials = 10;

const std::string kModelsDir = CARTAN_MODELS_DIR;

struct Run {
  ModelFile file;
  Transcript transcript;
  Report report;
};

Run run_model(const std::string& name) {
  ModelFile f = load_model(kModelsDir + "/" + name + ".model");
  Transcript t = run_pipeline(f.input);
  Report r = make_report(f, t, true);
  return {std::move(f), std::move(t), std::move(r)};
}

void detail(const std::string& s) { std::cout << "    " << s << "\n"; }

void verdict(int n, bool ok, const std::string& summary) {
  std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << "  " << summary << "\n" << std::flush;
}

// ------------------------------------------------------------ transcription

struct Term {
  const char* coef;
  const char* a;
  const char* b;
};

using Display = std::vector<std::pair<const char*, std::vector<Term>>>;

Form two_form(const std::vector<Term>& terms, const SymbolTable& table) {
  Form f(2);
  for (const Term& t : terms)
    f += Form::monomial({intern_covector(t.a), intern_covector(t.b)}, parse_scalar(t.coef, table));
  return f;
}

// Compares a display with computed equations looked up by name; order is irrelevant.
bool compare_display(const std::string& label, const Display& d, const CovectorBasis& basis,
                     const std::vector<Form>& eqs, const SymbolTable& table) {
  bool ok = d.size() == basis.size();
  if (!ok) detail(label + ": " + std::to_string(d.size()) + " displayed equations, " + std::to_string(basis.size()) + " computed");
  for (const auto& [name, terms] : d) {
    const auto pos = basis.position(intern_covector(name));
    if (!pos) {
      detail(label + ": no computed equation for " + name);
      ok = false;
      continue;
    }
    const Form expected = two_form(terms, table);
    if (!(expected == eqs[*pos])) {
      detail(label + ": d " + name + " differs");
      detail("  expected: " + to_string(expected, basis));
      detail("  computed: " + to_string(eqs[*pos], basis));
      ok = false;
    }
  }
  return ok;
}

// d^2 of a constant-coefficient system, by the Leibniz rule on each monomial.
std::vector<std::string> d_squared_defects(const CovectorBasis& basis, const std::vector<Form>& eqs) {
  std::map<CovectorId, Form> d;
  for (std::size_t i = 0; i < basis.size(); ++i) d[basis[i]] = eqs[i];
  std::vector<std::string> out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Form dd(3);
    for (const auto& [w, c] : eqs[i].terms()) {
      const Form a = Form::covector(w[0]), b = Form::covector(w[1]);
      dd += (wedge(d.at(w[0]), b) - wedge(a, d.at(w[1]))) * c;
    }
    if (!dd.is_zero()) out.push_back("d(d " + covector_name(basis[i]) + ") = " + to_string(dd, basis));
  }
  return out;
}

const Display kBaseB{
    {"sigma0", {{"1", "rho0", "zeta0"}, {"1", "rho0", "zeta0bar"}}},
    {"rho0", {{"I", "zeta0", "zeta0bar"}}},
    {"zeta0", {}},
    {"zeta0bar", {}},
};

const Display kBaseN{
    {"tau0", {{"1", "sigma0", "zeta0"}, {"1", "sigma0", "zeta0bar"}}},
    {"sigma0", {{"1", "rho0", "zeta0"}, {"1", "rho0", "zeta0bar"}}},
    {"rho0", {{"I", "zeta0", "zeta0bar"}}},
    {"zeta0", {}},
    {"zeta0bar", {}},
};

const Display kBaseLC{
    {"rho0",
     {{"z2bar/(1 - z2*z2bar)", "rho0", "zeta0"},
      {"z2/(1 - z2*z2bar)", "rho0", "zeta0bar"},
      {"I", "kappa0", "kappa0bar"}}},
    {"kappa0", {{"z2bar/(1 - z2*z2bar)", "kappa0", "zeta0"}, {"-1/(1 - z2*z2bar)", "zeta0", "kappa0bar"}}},
    {"zeta0", {}},
    {"kappa0bar", {{"1/(1 - z2*z2bar)", "kappa0", "zeta0bar"}, {"z2/(1 - z2*z2bar)", "kappa0bar", "zeta0bar"}}},
    {"zeta0bar", {}},
};

const Display kFinalB{
    {"sigma", {{"3", "alpha", "sigma"}, {"1", "rho", "zeta"}, {"1", "rho", "zetabar"}}},
    {"rho", {{"2", "alpha", "rho"}, {"I", "zeta", "zetabar"}}},
    {"zeta", {{"1", "alpha", "zeta"}}},
    {"zetabar", {{"1", "alpha", "zetabar"}}},
    {"alpha", {}},
};

const Display kFinalN{
    {"tau", {{"4", "alpha", "tau"}, {"1", "sigma", "zeta"}, {"1", "sigma", "zetabar"}}},
    {"sigma", {{"3", "alpha", "sigma"}, {"1", "rho", "zeta"}, {"1", "rho", "zetabar"}}},
    {"rho", {{"2", "alpha", "rho"}, {"I", "zeta", "zetabar"}}},
    {"zeta", {{"1", "alpha", "zeta"}}},
    {"zetabar", {{"1", "alpha", "zetabar"}}},
    {"alpha", {}},
};

// The last line as printed, with conj(Lambda) = Lambda since Lambda is real.
const Display kFinalLC{
    {"rho", {{"1", "pi1", "rho"}, {"1", "pi1bar", "rho"}, {"I", "kappa", "kappabar"}}},
    {"kappa", {{"1", "pi1", "kappa"}, {"1", "pi2", "rho"}, {"1", "zeta", "kappabar"}}},
    {"zeta", {{"I", "pi2", "kappa"}, {"1", "pi1", "zeta"}, {"-1", "pi1bar", "zeta"}}},
    {"kappabar", {{"1", "pi1bar", "kappabar"}, {"1", "pi2bar", "rho"}, {"-1", "kappa", "zetabar"}}},
    {"zetabar", {{"-I", "pi2bar", "kappabar"}, {"1", "pi1bar", "zetabar"}, {"-1", "pi1", "zetabar"}}},
    {"pi1", {{"1", "Lambda", "rho"}, {"I", "kappa", "pi2bar"}, {"1", "zeta", "zetabar"}}},
    {"pi2", {{"1", "Lambda", "kappa"}, {"1", "zeta", "pi2bar"}, {"1", "pi2", "pi1bar"}}},
    {"pi1bar", {{"1", "Lambda", "rho"}, {"-I", "kappabar", "pi2"}, {"-1", "zeta", "zetabar"}}},
    {"pi2bar", {{"1", "Lambda", "kappabar"}, {"1", "zetabar", "pi2"}, {"-1", "pi1", "pi2bar"}}},
    {"Lambda", {{"-1", "pi1", "Lambda"}, {"I", "pi2", "pi2bar"}, {"-1", "pi1", "Lambda"}}},
};

// ------------------------------------------------------------ criterion 1

bool criterion1(const std::map<std::string, Run>& runs) {
  bool ok = true;
  const std::vector<std::pair<std::string, const Display*>> cases{{"B", &kBaseB}, {"N", &kBaseN}, {"LC", &kBaseLC}};
  for (const auto& [name, display] : cases) {
    const Transcript& t = runs.at(name).transcript;
    const bool one = compare_display(name + " base", *display, t.initial_base.basis, t.initial_base_equations,
                                     runs.at(name).file.input.model.table);
    detail(name + " base equations: " + (one ? "exact" : "differ"));
    ok = ok && one;
  }
  verdict(1, ok, "base structure equations of B, N and LC");
  return ok;
}

// ------------------------------------------------------------ criterion 2

VectorField field(const std::vector<std::pair<const char*, const char*>>& comps, const SymbolTable& table) {
  VectorField v;
  for (const auto& [coef, x] : comps) v += VectorField::partial(*table.lookup(x)) * parse_scalar(coef, table);
  return v;
}

bool check_field(const std::string& label, const Frame& f, const std::string& name, const VectorField& expected) {
  auto it = f.defined.find(name);
  const bool ok = it != f.defined.end() && it->second == expected;
  detail(label + " " + name + ": " + (ok ? "exact" : "differs"));
  if (!ok && it != f.defined.end()) {
    detail("  expected: " + to_string(expected));
    detail("  computed: " + to_string(it->second));
  }
  return ok;
}

bool criterion2(const std::map<std::string, Run>& runs) {
  bool ok = true;
  {
    const Run& r = runs.at("B");
    const SymbolTable& t = r.file.input.model.table;
    ok &= check_field("B", r.transcript.frame, "T", field({{"2", "u1"}, {"4*z + 4*zbar", "u2"}}, t));
    ok &= check_field("B", r.transcript.frame, "S", field({{"4", "u2"}}, t));
  }
  {
    const Run& r = runs.at("N");
    const SymbolTable& t = r.file.input.model.table;
    ok &= check_field("N", r.transcript.frame, "T",
                      field({{"2", "u1"}, {"4*z + 4*zbar", "u2"}, {"6*z^2 + 12*z*zbar + 6*zbar^2", "u3"}}, t));
    ok &= check_field("N", r.transcript.frame, "S", field({{"4", "u2"}, {"12*z + 12*zbar", "u3"}}, t));
    ok &= check_field("N", r.transcript.frame, "R", field({{"12", "u3"}}, t));
  }
  {
    const Run& r = runs.at("LC");
    const SymbolTable& t = r.file.input.model.table;
    const Frame& f = r.transcript.frame;
    if (!f.levi) {
      detail("LC: no Levi kernel computed");
      ok = false;
    } else {
      const SymScalar k = parse_scalar("-(z1bar + z1*z2bar)/(1 - z2*z2bar)", t);
      const bool k_ok = f.levi->k == k;
      detail(std::string("LC k: ") + (k_ok ? "exact" : "differs, computed " + to_string(f.levi->k)));
      // sigma(i [K, conj L1]) recomputed from the fields themselves.
      const VectorField br = lie_bracket(f.levi->K, conjugate(f.levi->L1, t)) * SymScalar::i();
      const SymScalar s = pairing(f.levi->sigma, br);
      detail("LC sigma(i[K, L1bar]) = " + to_string(s) + ", engine residual " + to_string(f.levi->kernel_residual));
      ok = ok && k_ok && s.is_zero() && f.levi->kernel_residual.is_zero();
    }
  }
  verdict(2, ok, "frame recipes T,S (B), T,S,R (N), LC kernel coefficient k and sigma(i[K, L1bar]) = 0");
  return ok;
}

// ------------------------------------------------------------ criterion 3

// Printed coefficient tables: the whole G2 section for B and N, all four LC lifts.
const std::vector<std::pair<std::string, std::vector<std::string>>> kPrintedTables{
    {"B", {"G2"}}, {"N", {"G2"}}, {"LC", {"G1", "G2", "G3", "P"}}};

// Lines registered in advance as inconclusive: the first LC lift table, where
// several printed entries are known to be unreliable.
bool preregistered(const std::string& model, const FixtureResult& f) {
  return model == "LC" && f.fixture.section == "G1" && f.fixture.inconclusive;
}

bool criterion3(const std::map<std::string, Run>& runs) {
  std::size_t total = 0, exact = 0, excused = 0, unexcused = 0;
  for (const auto& [model, sections] : kPrintedTables) {
    std::size_t m_total = 0, m_exact = 0;
    for (const FixtureResult& f : runs.at(model).report.fixtures) {
      if (f.fixture.kind != Fixture::Kind::coefficient) continue;
      if (std::find(sections.begin(), sections.end(), f.fixture.section) == sections.end()) continue;
      ++m_total;
      if (f.exact) {
        ++m_exact;
        continue;
      }
      const bool pre = preregistered(model, f);
      pre ? ++excused : ++unexcused;
      detail(model + " " + f.fixture.section + " " + f.fixture.label + (pre ? " [pre-registered]" : " [mismatch]"));
      detail("  printed:  " + f.expected);
      detail("  computed: " + (f.message.empty() ? f.computed : "(" + f.message + ")"));
    }
    detail(model + ": " + std::to_string(m_exact) + "/" + std::to_string(m_total) + " exact");
    total += m_total;
    exact += m_exact;
  }
  const double frac = total ? static_cast<double>(exact) / static_cast<double>(total) : 0.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu/%zu printed lines exact (%.1f%%, need %.0f%%); %zu pre-registered, %zu other mismatches",
                exact, total, 100.0 * frac, 100.0 * kMinExactFraction, excused, unexcused);
  const bool ok = unexcused == 0 && frac >= kMinExactFraction;
  verdict(3, ok, buf);
  return ok;
}

// ------------------------------------------------------------ criterion 4

struct ExpectedNormalization {
  const char* made_real;  // nullptr when none
  std::vector<std::pair<const char*, const char*>> values;
};

const std::map<std::string, std::vector<ExpectedNormalization>> kChains{
    {"B", {{"a", {}}, {nullptr, {{"b", "0"}, {"c", "0"}}}, {nullptr, {{"d", "0"}, {"e", "0"}}}}},
    {"N",
     {{"a", {}},
      {nullptr, {{"b", "0"}, {"c", "0"}, {"f", "0"}}},
      {nullptr, {{"d", "0"}, {"e", "0"}, {"g", "0"}}},
      {nullptr, {{"h", "0"}, {"k", "0"}}}}},
    {"LC",
     {{nullptr, {{"f", "-(c/cbar)/(1 - z2*z2bar)"}}},
      {nullptr, {{"b", "-I*cbar*e"}}},
      {nullptr, {{"d", "-I/2*e^2*cbar/c"}}}}},
};

bool criterion4(const std::map<std::string, Run>& runs) {
  bool ok = true;
  for (const auto& [model, chain] : kChains) {
    const Transcript& t = runs.at(model).transcript;
    if (t.normalizations.size() != chain.size()) {
      detail(model + ": " + std::to_string(t.normalizations.size()) + " normalizations, expected " +
             std::to_string(chain.size()));
      ok = false;
      continue;
    }
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const NormalizationRecord& rec = t.normalizations[k];
      const ExpectedNormalization& exp = chain[k];
      const StageRecord& stage = t.stages.at(k);
      const SymbolTable& table = stage.stage.table;
      bool step = true;
      if (exp.made_real) step &= rec.made_real && symbol_name(*rec.made_real) == exp.made_real;
      for (const auto& [name, value] : exp.values) {
        bool found = false;
        for (const auto& [id, v] : rec.eliminated)
          if (symbol_name(id) == name && v == parse_scalar(value, table)) found = true;
        step &= found;
      }
      // Each justification must be one of the essential relations the absorption
      // of the preceding stage produced, nonconstant before and constant after.
      bool justified = !rec.justification.empty() && stage.absorption.has_value();
      for (const auto& [rel, after] : rec.justification) {
        bool essential = false;
        if (stage.absorption)
          for (const Relation& e : stage.absorption->essential)
            if (equivalent_relations(rel, e.value, table)) essential = true;
        justified &= essential && !rel.is_constant() && after.is_constant();
      }
      detail(model + " " + stage.stage.name + ": " + rec.description + (step ? "" : " [unexpected]") +
             (justified ? "" : " [unjustified]"));
      for (const auto& [rel, after] : rec.justification)
        detail("  because " + to_string(rel) + " becomes " + to_string(after));
      ok = ok && step && justified;
    }
  }
  verdict(4, ok, "normalization chains, each justified by an engine-computed essential relation");
  return ok;
}

// ------------------------------------------------------------ criterion 5

bool criterion5(const std::map<std::string, Run>& runs) {
  bool ok = true;
  const std::vector<std::tuple<std::string, const Display*, std::size_t>> cases{
      {"B", &kFinalB, 5}, {"N", &kFinalN, 6}, {"LC", &kFinalLC, 10}};
  for (const auto& [name, display, dim] : cases) {
    const Transcript& t = runs.at(name).transcript;
    const SymbolTable& table = runs.at(name).file.input.model.table;
    if (!t.result) {
      detail(name + ": no Lie algebra produced (" + t.error + ")");
      ok = false;
      continue;
    }
    const bool dim_ok = t.result->dimension == dim;
    const bool eq_ok = compare_display(name, *display, t.result->basis, t.result->equations, table);
    const ClosureReport c1 = verify_closure(*t.result), c2 = verify_closure(*t.result);
    const bool closed = c1.passed && c2.passed && c1.failures == c2.failures;
    detail(name + ": dimension " + std::to_string(t.result->dimension) + (dim_ok ? "" : " (expected " + std::to_string(dim) + ")") +
           ", equations " + (eq_ok ? "exact" : "differ") + ", verify_closure " + (closed ? "passes" : "fails"));
    // Independent d^2 check of the displayed system itself.
    std::vector<Form> shown;
    CovectorBasis shown_basis;
    {
      std::vector<std::string> names;
      for (const auto& [n, terms] : *display) {
        names.push_back(n);
        shown.push_back(two_form(terms, table));
      }
      shown_basis = CovectorBasis::from_names(names);
    }
    const auto defects = d_squared_defects(shown_basis, shown);
    detail(name + ": displayed system " + (defects.empty() ? "satisfies d^2 = 0" : "violates d^2 = 0"));
    for (const std::string& d : defects) detail("  " + d);
    if (name == "LC" && !eq_ok) {
      // The reading with the overline on the first factor of the last term.
      Display alt = *display;
      alt.back().second = {{"-1", "pi1", "Lambda"}, {"I", "pi2", "pi2bar"}, {"-1", "pi1bar", "Lambda"}};
      const bool alt_ok = compare_display("LC alt", alt, t.result->basis, t.result->equations, table);
      std::vector<Form> alt_forms = shown;
      alt_forms.back() = two_form(alt.back().second, table);
      detail(std::string("LC: with -pi1bar^Lambda as the last term the equations ") + (alt_ok ? "match" : "still differ") +
             " and the system " + (d_squared_defects(shown_basis, alt_forms).empty() ? "closes" : "does not close"));
    }
    ok = ok && dim_ok && eq_ok && closed;
  }
  verdict(5, ok, "dimensions 5, 6, 10; structure equations as displayed; verify_closure");
  return ok;
}

// ------------------------------------------------------------ criterion 6

bool scalar_properties() {
  SymbolTable table;
  const SymbolId a = table.declare_complex("pa", SymbolKind::parameter, true);
  const SymbolId b = table.declare_complex("pb", SymbolKind::parameter);
  const SymbolId x = table.declare_real("px", SymbolKind::coordinate);
  testing::RandomScalars gen(table, {a, table.partner(a), b, table.partner(b), x}, 91u);
  for (int k = 0; k < kRandomScalars; ++k) {
    const SymScalar e1 = gen.scalar(), e2 = gen.scalar(), e3 = gen.scalar();
    if (!((e1 + e2) + e3 == e1 + (e2 + e3))) return false;
    if (!(e1 + e2 == e2 + e1) || !(e1 * e2 == e2 * e1)) return false;
    if (!((e1 * e2) * e3 == e1 * (e2 * e3))) return false;
    if (!(e1 * (e2 + e3) == e1 * e2 + e1 * e3)) return false;
    if (!(e1 * SymScalar(1) == e1) || !(e1 - e1).is_zero()) return false;
    if (!(conjugate(conjugate(e1, table), table) == e1)) return false;
    if (!(conjugate(e1 + e2, table) == conjugate(e1, table) + conjugate(e2, table))) return false;
    if (!(conjugate(e1 * e2, table) == conjugate(e1, table) * conjugate(e2, table))) return false;
    if (!e2.is_zero() && !((e1 / e2) * e2 == e1)) return false;
  }
  return true;
}

bool wedge_properties() {
  SymbolTable table;
  const SymbolId x = table.declare_complex("wx", SymbolKind::coordinate);
  testing::RandomScalars gen(table, {x, table.partner(x)}, 17u);
  const std::vector<CovectorId> basis{intern_covector("w1"), intern_covector("w2"), intern_covector("w3"),
                                      intern_covector("w4"), intern_covector("w5")};
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  auto random_form = [&](int degree) {
    Form f(degree);
    for (int t = 0; t < 3; ++t) {
      std::vector<CovectorId> word;
      for (int k = 0; k < degree; ++k) word.push_back(basis[pick(gen.engine())]);
      f += Form::monomial(word, gen.scalar());
    }
    return f;
  };
  for (int k = 0; k < kRandomForms; ++k) {
    const Form p = random_form(1), q = random_form(1), r = random_form(2);
    if (!(wedge(p, q) == -wedge(q, p)) || !wedge(p, p).is_zero()) return false;
    if (!(wedge(p, r) == wedge(r, p))) return false;
    if (!(wedge(wedge(p, q), r) == wedge(p, wedge(q, r)))) return false;
  }
  return true;
}

bool jacobi_property() {
  SymbolTable table;
  const SymbolId x = table.declare_complex("jx", SymbolKind::coordinate), y = table.declare_real("jy", SymbolKind::coordinate);
  const std::vector<SymbolId> coords{x, table.partner(x), y};
  testing::RandomScalars gen(table, coords, 5u);
  auto random_field = [&] {
    VectorField v;
    for (SymbolId c : coords) v += VectorField::partial(c) * SymScalar(gen.polynomial(2, 2));
    return v;
  };
  for (int k = 0; k < kRandomFields; ++k) {
    const VectorField a = random_field(), b = random_field(), c = random_field();
    const VectorField j = lie_bracket(a, lie_bracket(b, c)) + lie_bracket(b, lie_bracket(c, a)) + lie_bracket(c, lie_bracket(a, b));
    if (!j.is_zero()) return false;
    if (!(lie_bracket(a, b) == lie_bracket(b, a) * SymScalar(-1))) return false;
  }
  return true;
}

bool dual_pairing(const Transcript& t) {
  const BaseCoframe& base = t.initial_base;
  for (std::size_t i = 0; i < base.forms.size(); ++i)
    for (std::size_t j = 0; j < t.frame.fields.size(); ++j)
      if (!(pairing(base.forms[i], t.frame.fields[j]) == SymScalar(i == j ? 1 : 0))) return false;
  return base.forms.size() == t.frame.fields.size();
}

bool linear_residual() {
  SymbolTable table;
  const SymbolId a = table.declare_complex("la", SymbolKind::parameter), x = table.declare_real("lx", SymbolKind::coordinate);
  testing::RandomScalars gen(table, {a, table.partner(a), x}, 303u);
  std::vector<SymbolId> unknowns;
  for (int k = 0; k < 5; ++k) unknowns.push_back(intern_symbol("acc_q" + std::to_string(k)));
  for (int trial = 0; trial < kLinearTrials; ++trial) {
    LinearSystem sys{unknowns, {}};
    for (int r = 0; r < 4; ++r) {
      LinearEquation eq;
      for (int c = 0; c < 5; ++c) eq.coefficients.push_back((r * 2 + c + trial) % 4 == 0 ? SymScalar(0) : SymScalar(gen.polynomial(2, 1)));
      eq.rhs = gen.scalar();
      sys.equations.push_back(eq);
    }
    const LinearSolution sol = solve_linear(sys);
    if (!sol.constraints.empty()) continue;
    for (const LinearEquation& eq : sys.equations) {
      SymScalar lhs;
      for (std::size_t c = 0; c < unknowns.size(); ++c) {
        auto it = sol.solution.find(unknowns[c]);
        lhs += eq.coefficients[c] * (it == sol.solution.end() ? SymScalar::symbol(unknowns[c]) : it->second);
      }
      if (!(lhs - eq.rhs).is_zero()) return false;
    }
  }
  return true;
}

bool criterion6(const std::map<std::string, Run>& runs) {
  bool ok = true;
  auto report = [&](const std::string& what, bool pass) {
    detail(what + ": " + (pass ? "holds" : "FAILS"));
    ok = ok && pass;
  };
  report("ring axioms and involution on " + std::to_string(kRandomScalars) + " random scalars", scalar_properties());
  report("wedge antisymmetry and associativity", wedge_properties());
  report("Jacobi identity", jacobi_property());
  for (const auto& [name, r] : runs) report(name + " dual pairing", dual_pairing(r.transcript));
  for (const auto& [name, r] : runs)
    for (const StageRecord& s : r.transcript.stages) {
      report(name + " " + s.stage.name + " Maurer-Cartan identity", s.mc_identity_defects.empty());
      report(name + " " + s.stage.name + " lifted equations against direct computation", s.direct_oracle_agrees);
    }
  report("solve_linear zero residual", linear_residual());
  verdict(6, ok, "property suites");
  return ok;
}

// ------------------------------------------------------------ criterion 7

bool criterion7(const std::map<std::string, Run>& runs) {
  bool ok = true;
  for (const auto& [name, r] : runs) {
    const std::string first = emit_machine(r.report);
    const Run again = run_model(name);
    const std::string second = emit_machine(again.report);
    const bool stable = first == second && !first.empty();
    // Every coefficient string of every table parses back to the same scalar.
    std::size_t checked = 0, bad = 0;
    const auto doc = nlohmann::ordered_json::parse(first);
    for (std::size_t s = 0; s < r.transcript.stages.size(); ++s) {
      const StageRecord& rec = r.transcript.stages[s];
      const auto& torsion = doc.at("stages").at(s).at("torsion");
      for (std::size_t i = 0; i < rec.table.rows.size(); ++i) {
        const auto& row = torsion.at(covector_name(rec.table.coframe[i]));
        if (row.size() != rec.table.rows[i].torsion.size()) ++bad;
        for (const PairCoefficient& p : rec.table.rows[i].torsion) {
          const std::string key = covector_name(rec.table.coframe[p.first]) + "^" + covector_name(rec.table.coframe[p.second]);
          ++checked;
          if (!row.contains(key) || !(parse_scalar(row.at(key).get<std::string>(), rec.stage.table) == p.value)) {
            ++bad;
            detail(name + " " + rec.stage.name + " " + key + " does not round-trip");
          }
        }
      }
    }
    detail(name + ": emission " + (stable ? "byte-stable" : "differs between runs") + ", " + std::to_string(checked) +
           " coefficients round-tripped, " + std::to_string(bad) + " failures");
    ok = ok && stable && bad == 0;
  }
  verdict(7, ok, "byte-stable machine emission; parse of emitted coefficients is the identity");
  return ok;
}

}  // namespace

int main() {
  std::map<std::string, Run> runs;
  for (const char* name : {"B", "N", "LC"}) {
    runs.emplace(name, run_model(name));
    const Transcript& t = runs.at(name).transcript;
    if (!t.error.empty()) std::cout << "    " << name << ": pipeline stopped at line " << t.failed_line << ": " << t.error << "\n";
  }
  int failed = 0;
  failed += !criterion1(runs);
  failed += !criterion2(runs);
  failed += !criterion3(runs);
  failed += !criterion4(runs);
  failed += !criterion5(runs);
  failed += !criterion6(runs);
  failed += !criterion7(runs);
  std::cout << (7 - failed) << "/7 criteria pass\n";
  return failed == 0 ? 0 : 1;
}
