#include "cartan/gstructure.hpp"

#include <algorithm>

namespace cartan {

namespace {

std::map<CovectorId, Form> parameter_substitution(const std::vector<SymbolId>& params, const MCForms& mc) {
  std::map<CovectorId, Form> out;
  for (std::size_t j = 0; j < params.size(); ++j) {
    Form f(1);
    for (std::size_t m = 0; m < mc.basis.size(); ++m)
      f += Form::covector(mc.basis[m], mc.inverse(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m)));
    out.emplace(differential_of(params[j]), std::move(f));
  }
  return out;
}

CovectorConjugation differential_conjugation(const SymbolTable& table, const std::vector<SymbolId>& symbols) {
  CovectorConjugation c;
  for (SymbolId s : symbols) c.pair(differential_of(s), differential_of(table.partner(s)));
  return c;
}

}  // namespace

DerivationRules naive_rules(const ParamGroup& g, const std::vector<SymbolId>& coordinates) {
  DerivationRules rules = coordinate_rules(coordinates);
  for (SymbolId p : g.parameters) {
    rules.scalar.emplace(p, Form::covector(differential_of(p)));
    rules.covector.emplace(differential_of(p), Form(2));
  }
  return rules;
}

Matrix<Form> dg_ginv(const ParamGroup& g, const std::vector<SymbolId>& coordinates) {
  const DerivationRules rules = naive_rules(g, coordinates);
  const auto n = g.matrix.rows();
  const SymMatrix inv = inverse(g.matrix);
  Matrix<Form> dg(n, n), out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) dg(i, j) = exterior_derivative(g.matrix(i, j), rules);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Form acc(1);
      for (Eigen::Index k = 0; k < n; ++k)
        if (!inv(k, j).is_zero()) acc += dg(i, k) * inv(k, j);
      out(i, j) = std::move(acc);
    }
  return out;
}

MCForms maurer_cartan(const ParamGroup& g, const std::vector<SymbolId>& coordinates,
                      const std::vector<NamedForm>& supplied) {
  MCForms out;
  const std::size_t dim = g.dimension();
  if (supplied.size() != dim)
    throw ModelError(std::to_string(supplied.size()) + " Maurer-Cartan forms supplied for a group of dimension " +
                     std::to_string(dim));
  std::vector<CovectorId> ids;
  for (const auto& nf : supplied) ids.push_back(intern_covector(nf.name));
  out.basis = CovectorBasis(ids);

  std::map<CovectorId, std::size_t> param_index;
  for (std::size_t j = 0; j < dim; ++j) param_index.emplace(differential_of(g.parameters[j]), j);
  const auto n = static_cast<Eigen::Index>(dim);
  out.coefficients = SymMatrix::Constant(n, n, SymScalar());
  for (std::size_t m = 0; m < dim; ++m) {
    const Form& e = supplied[m].expression;
    if (!e.is_zero() && e.degree() != 1) throw ModelError("form '" + supplied[m].name + "' is not a 1-form");
    for (const auto& [w, c] : e.terms()) {
      auto it = param_index.find(w[0]);
      if (it == param_index.end())
        throw ModelError("form '" + supplied[m].name + "' involves '" + covector_name(w[0]) +
                         "', not the differential of a live parameter");
      out.coefficients(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(it->second)) = c;
    }
    out.expressions.push_back(e);
  }
  if (rank(out.coefficients) != n)
    throw ModelError("the supplied Maurer-Cartan forms are linearly dependent");
  out.inverse = inverse(out.coefficients);

  // Every entry of dg g^-1: parameter part must be a constant combination of the supplied forms.
  const Matrix<Form> m = dg_ginv(g, coordinates);
  out.entries = Matrix<Form>(m.rows(), m.cols());
  const auto psub = parameter_substitution(g.parameters, out);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Form entry = rewrite(m(i, j), psub);
      for (const auto& [w, c] : entry.terms())
        if (out.basis.contains(w[0]) && !c.is_constant())
          throw ModelError("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                           ") of dg.g^-1 is not a constant combination of the supplied forms: coefficient " +
                           to_string(c) + " on " + covector_name(w[0]));
      out.entries(i, j) = entry;
    }

  // Structure of the forms themselves.
  const DerivationRules rules = naive_rules(g, coordinates);
  for (const Form& e : out.expressions) out.structure.push_back(rewrite(exterior_derivative(e, rules), psub));

  // Conjugation among the supplied forms.
  const CovectorConjugation dconj = differential_conjugation(g.table, g.parameters);
  for (std::size_t a = 0; a < dim; ++a) {
    const Form c = conjugate(out.expressions[a], g.table, dconj);
    bool found = false;
    for (std::size_t b = 0; b < dim && !found; ++b)
      if (c == out.expressions[b]) {
        out.conjugation.pair(out.basis[a], out.basis[b]);
        found = true;
      }
    if (!found) throw ModelError("the conjugate of '" + covector_name(out.basis[a]) + "' is not among the supplied forms");
  }
  return out;
}

std::vector<std::string> maurer_cartan_identity_defects(const ParamGroup& g, const std::vector<SymbolId>& coordinates) {
  const Matrix<Form> m = dg_ginv(g, coordinates);
  const DerivationRules rules = naive_rules(g, coordinates);
  std::vector<std::string> defects;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      Form rhs(2);
      for (Eigen::Index k = 0; k < m.cols(); ++k) rhs += wedge(m(i, k), m(k, j));
      const Form diff = exterior_derivative(m(i, j), rules) - rhs;
      if (!diff.is_zero())
        defects.push_back("(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): " + to_string(diff));
    }
  return defects;
}

// ------------------------------------------------------------------- lift

namespace {

struct LiftMaps {
  std::map<CovectorId, Form> base_to_lifted;  // omega0 -> g^-1 omega
  std::map<CovectorId, Form> differentials;   // d(x), d(p) -> lifted and MC forms
};

LiftMaps lift_maps(const ParamGroup& g, const MCForms& mc, const BaseCoframe& base, const CovectorBasis& lifted) {
  if (static_cast<std::size_t>(g.matrix.rows()) != base.basis.size() || lifted.size() != base.basis.size())
    throw ModelError("group matrix size does not match the coframe length");
  LiftMaps out;
  const SymMatrix inv = inverse(g.matrix);
  for (std::size_t i = 0; i < base.basis.size(); ++i) {
    Form f(1);
    for (std::size_t j = 0; j < lifted.size(); ++j)
      f += Form::covector(lifted[j], inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    out.base_to_lifted.emplace(base.basis[i], std::move(f));
  }
  for (const auto& [dx, f] : coordinate_differentials(base)) out.differentials.emplace(dx, rewrite(f, out.base_to_lifted));
  for (auto& [dp, f] : parameter_substitution(g.parameters, mc)) out.differentials.emplace(dp, std::move(f));
  return out;
}

void check_support(const Form& f, const CovectorBasis& allowed, const std::string& what) {
  for (CovectorId id : f.covectors())
    if (!allowed.contains(id))
      throw std::logic_error("internal: residual covector '" + covector_name(id) + "' in " + what);
}

}  // namespace

Stage lift_structure_equations(const std::string& name, const ParamGroup& g, const MCForms& mc,
                               const BaseCoframe& base, const std::vector<Form>& base_equations,
                               const CovectorBasis& lifted) {
  const LiftMaps maps = lift_maps(g, mc, base, lifted);
  Stage s;
  s.name = name;
  s.table = g.table;
  s.coordinates = base.coordinates;
  s.parameters = g.parameters;
  s.unit_factors = g.unit_factors;
  s.coframe = lifted;
  s.mc = mc.basis;
  const CovectorBasis full = s.full_basis();

  const auto n = g.matrix.rows();
  std::vector<Form> dw0;
  for (const Form& f : base_equations) dw0.push_back(rewrite(f, maps.base_to_lifted));
  for (Eigen::Index i = 0; i < n; ++i) {
    Form eq(2);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Form entry = rewrite(mc.entries(i, j), maps.differentials);
      eq += wedge(entry, Form::covector(lifted[static_cast<std::size_t>(j)]));
      if (!g.matrix(i, j).is_zero()) eq += dw0[static_cast<std::size_t>(j)] * g.matrix(i, j);
    }
    check_support(eq, full, "d" + covector_name(lifted[static_cast<std::size_t>(i)]));
    for (const auto& [w, c] : eq.terms())
      if (s.mc.contains(w[0]) && s.mc.contains(w[1]))
        throw ModelError("d" + covector_name(lifted[static_cast<std::size_t>(i)]) + " contains a wedge of two Maurer-Cartan forms");
    s.equations.push_back(std::move(eq));
  }

  for (std::size_t i = 0; i < lifted.size(); ++i)
    s.conjugation.pair(lifted[i], lifted[*base.basis.position(*base.conjugation.partner(base.basis[i]))]);
  for (CovectorId id : mc.basis.ids()) s.conjugation.pair(id, *mc.conjugation.partner(id));

  for (SymbolId x : s.coordinates) s.rules.scalar.emplace(x, maps.differentials.at(differential_of(x)));
  for (SymbolId p : s.parameters) s.rules.scalar.emplace(p, maps.differentials.at(differential_of(p)));
  for (std::size_t i = 0; i < lifted.size(); ++i) s.rules.covector.emplace(lifted[i], s.equations[i]);
  for (std::size_t m = 0; m < mc.basis.size(); ++m) s.rules.covector.emplace(mc.basis[m], mc.structure[m]);
  return s;
}

std::vector<Form> direct_structure_equations(const ParamGroup& g, const MCForms& mc, const BaseCoframe& base,
                                             const CovectorBasis& lifted) {
  const LiftMaps maps = lift_maps(g, mc, base, lifted);
  const DerivationRules rules = naive_rules(g, base.coordinates);
  const SymMatrix gc = multiply(g.matrix, base.dual);
  std::vector<Form> out;
  for (Eigen::Index i = 0; i < gc.rows(); ++i) {
    Form w(1);
    for (Eigen::Index k = 0; k < gc.cols(); ++k)
      w += Form::covector(differential_of(base.coordinates[static_cast<std::size_t>(k)]), gc(i, k));
    out.push_back(rewrite(exterior_derivative(w, rules), maps.differentials));
  }
  return out;
}

// ----------------------------------------------------------------- tables

Form TorsionTable::reconstruct(std::size_t i) const {
  const TableRow& row = rows.at(i);
  Form out = cartan::reconstruct(row.torsion, coframe);
  for (const MCTerm& t : row.mc_part) out += Form::monomial({mc[t.mc], coframe[t.covector]}, t.coef);
  return out;
}

TorsionTable torsion_table(const Stage& s) {
  TorsionTable t;
  t.stage = s.name;
  t.coframe = s.coframe;
  t.mc = s.mc;
  const CovectorBasis full = s.full_basis();
  const std::size_t n = s.coframe.size();
  for (const Form& eq : s.equations) {
    TableRow row;
    for (const PairCoefficient& pc : collect(eq, full)) {
      if (pc.second < n) row.torsion.push_back(pc);
      else if (pc.first < n) row.mc_part.push_back({pc.second - n, pc.first, -pc.value});
      else throw ModelError("structure equation contains a wedge of two Maurer-Cartan forms");
    }
    std::sort(row.mc_part.begin(), row.mc_part.end(),
              [](const MCTerm& a, const MCTerm& b) { return std::tie(a.mc, a.covector) < std::tie(b.mc, b.covector); });
    t.rows.push_back(std::move(row));
  }
  return t;
}

SymScalar torsion_lookup(const TorsionTable& t, const std::string& form, const std::string& a, const std::string& b) {
  auto pos = [&](const std::string& name) {
    auto id = find_covector(name);
    auto p = id ? t.coframe.position(*id) : std::nullopt;
    if (!p) throw ConfigError("'" + name + "' is not a coframe element of stage " + t.stage);
    return *p;
  };
  const std::size_t i = pos(form), pa = pos(a), pb = pos(b);
  if (pa == pb) return SymScalar();
  const std::size_t lo = std::min(pa, pb), hi = std::max(pa, pb);
  for (const PairCoefficient& pc : t.rows[i].torsion)
    if (pc.first == lo && pc.second == hi) return pa < pb ? pc.value : -pc.value;
  return SymScalar();
}

}  // namespace cartan
