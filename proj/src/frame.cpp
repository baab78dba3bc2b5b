#include "cartan/frame.hpp"

#include <algorithm>

namespace cartan {

// ----------------------------------------------------------- vector field

VectorField VectorField::partial(SymbolId coordinate) {
  VectorField x;
  x.comp_.emplace(coordinate, SymScalar(1));
  return x;
}

SymScalar VectorField::component(SymbolId x) const {
  auto it = comp_.find(x);
  return it == comp_.end() ? SymScalar() : it->second;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (const auto& [x, c] : o.comp_) {
    auto [it, inserted] = comp_.try_emplace(x, c);
    if (inserted) continue;
    it->second += c;
    if (it->second.is_zero()) comp_.erase(it);
  }
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) { return *this += o * SymScalar(-1); }

VectorField& VectorField::operator*=(const SymScalar& s) {
  if (s.is_zero()) {
    comp_.clear();
    return *this;
  }
  for (auto& [_, c] : comp_) c *= s;
  return *this;
}

SymScalar apply(const VectorField& x, const SymScalar& f) {
  SymScalar out;
  for (const auto& [v, c] : x.components())
    if (f.depends_on(v)) out += c * f.derivative(v);
  return out;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  VectorField out;
  std::vector<SymbolId> coords;
  for (const auto& [v, _] : x.components()) coords.push_back(v);
  for (const auto& [v, _] : y.components()) coords.push_back(v);
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  for (SymbolId v : coords) {
    const SymScalar c = apply(x, y.component(v)) - apply(y, x.component(v));
    if (!c.is_zero()) out += VectorField::partial(v) * c;
  }
  return out;
}

VectorField conjugate(const VectorField& x, const SymbolTable& table) {
  VectorField out;
  for (const auto& [v, c] : x.components()) out += VectorField::partial(table.partner(v)) * conjugate(c, table);
  return out;
}

SymScalar pairing(const Form& omega, const VectorField& x) {
  if (omega.is_zero()) return SymScalar();
  if (omega.degree() != 1) throw std::logic_error("pairing expects a 1-form");
  SymScalar out;
  for (const auto& [w, c] : omega.terms()) {
    auto s = differential_symbol(w[0]);
    if (!s) throw ConfigError("covector '" + covector_name(w[0]) + "' is not a coordinate differential");
    out += c * x.component(*s);
  }
  return out;
}

SymScalar pairing(const Form& omega, const VectorField& x, const VectorField& y) {
  if (omega.is_zero()) return SymScalar();
  if (omega.degree() != 2) throw std::logic_error("pairing expects a 2-form");
  SymScalar out;
  for (const auto& [w, c] : omega.terms()) {
    auto a = differential_symbol(w[0]), b = differential_symbol(w[1]);
    if (!a || !b) throw ConfigError("2-form is not written in coordinate differentials");
    out += c * (x.component(*a) * y.component(*b) - x.component(*b) * y.component(*a));
  }
  return out;
}

std::string to_string(const VectorField& x) {
  if (x.is_zero()) return "0";
  std::vector<std::pair<SymbolId, SymScalar>> items(x.components().begin(), x.components().end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return symbol_precedes(a.first, b.first); });
  Form f(1);
  std::vector<CovectorId> order;
  for (const auto& [v, c] : items) {
    const CovectorId id = intern_covector("D(" + symbol_name(v) + ")");
    order.push_back(id);
    f += Form::covector(id, c);
  }
  return to_string(f, CovectorBasis(order));
}

// ------------------------------------------------------------ levi kernel

LeviKernel levi_kernel(const GraphData& g, const SymbolTable& table) {
  const SymbolId z1 = g.z1, z2 = g.z2, v = g.v;
  const SymbolId z1b = table.partner(z1), z2b = table.partner(z2);
  const SymScalar I = SymScalar::i();
  const SymScalar& F = g.F;
  auto D = [&](const SymScalar& e, SymbolId x) { return e.derivative(x); };
  const SymScalar Fv = D(F, v);

  LeviKernel out;
  out.A1 = -I * D(F, z1) / (SymScalar(1) + I * Fv);
  out.A2 = -I * D(F, z2) / (SymScalar(1) + I * Fv);
  out.L1 = VectorField::partial(z1) + VectorField::partial(v) * out.A1;
  out.L2 = VectorField::partial(z2) + VectorField::partial(v) * out.A2;
  const VectorField L1b = conjugate(out.L1, table), L2b = conjugate(out.L2, table);

  out.sigma = Form::covector(differential_of(v)) - Form::covector(differential_of(z1), out.A1) -
              Form::covector(differential_of(z2), out.A2) -
              Form::covector(differential_of(z1b), conjugate(out.A1, table)) -
              Form::covector(differential_of(z2b), conjugate(out.A2, table));

  auto levi = [&](const VectorField& a, const VectorField& b) { return pairing(out.sigma, lie_bracket(a, b) * I); };
  out.levi_form = SymMatrix(2, 2);
  out.levi_form(0, 0) = levi(out.L1, L1b);
  out.levi_form(0, 1) = levi(out.L2, L1b);
  out.levi_form(1, 0) = levi(out.L1, L2b);
  out.levi_form(1, 1) = levi(out.L2, L2b);
  if (out.levi_form(0, 0).is_zero()) throw ModelError("Levi form entry LF11 vanishes identically");
  const SymScalar det = out.levi_form(0, 0) * out.levi_form(1, 1) - out.levi_form(0, 1) * out.levi_form(1, 0);
  if (!det.is_zero()) throw ModelError("Levi form has rank 2, expected constant rank 1");

  out.k = -out.levi_form(0, 1) / out.levi_form(0, 0);

  const SymScalar Fz1 = D(F, z1), Fz2 = D(F, z2), Fz1b = D(F, z1b);
  const SymScalar num = D(Fz2, z1b) + D(Fz2, z1b) * Fv * Fv - I * Fz1b * D(Fz2, v) - Fz1b * Fv * D(Fz2, v) +
                        I * Fz2 * Fz1b * D(Fv, v) - Fz2 * Fv * D(Fz1b, v);
  const SymScalar den = D(Fz1, z1b) + D(Fz1, z1b) * Fv * Fv - I * Fz1b * D(Fz1, v) - Fz1b * Fv * D(Fz1, v) +
                        I * Fz1 * D(Fz1b, v) + Fz1 * Fz1b * D(Fv, v) - Fz1 * Fv * D(Fz1b, v);
  out.k_formula = -num / den;

  out.K = out.L1 * out.k + out.L2;
  out.kernel_residual = pairing(out.sigma, lie_bracket(out.K, L1b) * I);
  if (!out.kernel_residual.is_zero()) throw ModelError("K does not lie in the kernel of the Levi form");
  return out;
}

// ------------------------------------------------------------------ frame

namespace {

VectorField lookup(const std::map<std::string, VectorField>& defined, const std::string& name) {
  auto it = defined.find(name);
  if (it == defined.end()) throw ConfigError("frame recipe refers to undefined field '" + name + "'");
  return it->second;
}

}  // namespace

Frame build_frame(const Model& m) {
  Frame out;
  out.coordinates = m.coordinates;
  if (m.graph) {
    out.levi = levi_kernel(*m.graph, m.table);
    out.defined["L1"] = out.levi->L1;
    out.defined["L2"] = out.levi->L2;
    out.defined["K"] = out.levi->K;
  }
  for (const FieldDefinition& def : m.definitions) {
    VectorField x;
    for (const FieldTerm& t : def.terms) {
      VectorField atom;
      switch (t.atom.kind) {
        case FieldAtom::Kind::partial: atom = VectorField::partial(t.atom.coordinate); break;
        case FieldAtom::Kind::named: atom = lookup(out.defined, t.atom.first); break;
        case FieldAtom::Kind::bracket:
          atom = lie_bracket(lookup(out.defined, t.atom.first), lookup(out.defined, t.atom.second));
          break;
        case FieldAtom::Kind::conjugate: atom = conjugate(lookup(out.defined, t.atom.first), m.table); break;
      }
      x += atom * t.coef;
    }
    out.defined[def.name] = x;
  }
  const auto n = static_cast<Eigen::Index>(m.coordinates.size());
  if (static_cast<Eigen::Index>(m.frame_order.size()) != n)
    throw ModelError("frame has " + std::to_string(m.frame_order.size()) + " fields on a manifold of dimension " +
                     std::to_string(n));
  out.components = SymMatrix(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string& name = m.frame_order[static_cast<std::size_t>(i)];
    const VectorField x = lookup(out.defined, name);
    for (const auto& [v, _] : x.components())
      if (std::find(m.coordinates.begin(), m.coordinates.end(), v) == m.coordinates.end())
        throw ModelError("field '" + name + "' differentiates along non-coordinate '" + symbol_name(v) + "'");
    for (Eigen::Index k = 0; k < n; ++k) out.components(i, k) = x.component(m.coordinates[static_cast<std::size_t>(k)]);
    out.names.push_back(name);
    out.fields.push_back(x);
  }
  if (determinant(out.components).is_zero()) throw ModelError("frame fields are linearly dependent");
  for (std::size_t i = 0; i < out.fields.size(); ++i) {
    const VectorField c = conjugate(out.fields[i], m.table);
    auto it = std::find(out.fields.begin(), out.fields.end(), c);
    if (it == out.fields.end()) throw ModelError("frame is not closed under conjugation at '" + out.names[i] + "'");
    out.conjugate_index.push_back(static_cast<std::size_t>(it - out.fields.begin()));
  }
  return out;
}

// ---------------------------------------------------------------- coframe

BaseCoframe dualize(const Frame& frame, const std::vector<std::string>& names) {
  if (names.size() != frame.fields.size()) throw ModelError("coframe and frame lengths differ");
  BaseCoframe out;
  out.basis = CovectorBasis::from_names(names);
  out.coordinates = frame.coordinates;
  const auto inv = try_inverse(SymMatrix(frame.components.transpose()));
  if (!inv) throw ModelError("frame component matrix is singular");
  out.dual = *inv;
  for (Eigen::Index i = 0; i < out.dual.rows(); ++i) {
    Form f(1);
    for (Eigen::Index k = 0; k < out.dual.cols(); ++k)
      f += Form::covector(differential_of(out.coordinates[static_cast<std::size_t>(k)]), out.dual(i, k));
    out.forms.push_back(std::move(f));
  }
  for (std::size_t i = 0; i < names.size(); ++i) out.conjugation.pair(out.basis[i], out.basis[frame.conjugate_index[i]]);
  return out;
}

BaseCoframe rebase(const BaseCoframe& base, const SymMatrix& change, const std::vector<std::string>& names) {
  if (names.size() != base.basis.size()) throw ModelError("rebased coframe has the wrong length");
  if (!try_inverse(change)) throw ModelError("rebasing matrix is not invertible");
  BaseCoframe out;
  out.basis = CovectorBasis::from_names(names);
  out.coordinates = base.coordinates;
  out.dual = multiply(change, base.dual);
  for (Eigen::Index i = 0; i < out.dual.rows(); ++i) {
    Form f(1);
    for (Eigen::Index k = 0; k < out.dual.cols(); ++k)
      f += Form::covector(differential_of(out.coordinates[static_cast<std::size_t>(k)]), out.dual(i, k));
    out.forms.push_back(std::move(f));
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::size_t j = *base.basis.position(*base.conjugation.partner(base.basis[i]));
    out.conjugation.pair(out.basis[i], out.basis[j]);
  }
  return out;
}

std::map<CovectorId, Form> coordinate_differentials(const BaseCoframe& base) {
  const SymMatrix inv = inverse(base.dual);
  std::map<CovectorId, Form> out;
  for (std::size_t k = 0; k < base.coordinates.size(); ++k) {
    Form f(1);
    for (std::size_t i = 0; i < base.basis.size(); ++i)
      f += Form::covector(base.basis[i], inv(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)));
    out.emplace(differential_of(base.coordinates[k]), std::move(f));
  }
  return out;
}

DerivationRules coordinate_rules(const std::vector<SymbolId>& coordinates) {
  DerivationRules rules;
  for (SymbolId x : coordinates) {
    const CovectorId dx = differential_of(x);
    rules.scalar.emplace(x, Form::covector(dx));
    rules.covector.emplace(dx, Form(2));
  }
  return rules;
}

std::vector<Form> base_structure_equations(const BaseCoframe& base) {
  const DerivationRules rules = coordinate_rules(base.coordinates);
  const auto dx = coordinate_differentials(base);
  std::vector<Form> out;
  for (const Form& f : base.forms) out.push_back(rewrite(exterior_derivative(f, rules), dx));
  return out;
}

}  // namespace cartan
