#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cartan/exterior.hpp"
#include "cartan/matrix.hpp"
#include "cartan/scalar.hpp"

namespace cartan {

// Derivation sum_k c_k d/dx_k; absent components are zero.
class VectorField {
 public:
  VectorField() = default;
  static VectorField partial(SymbolId coordinate);

  const std::map<SymbolId, SymScalar>& components() const { return comp_; }
  SymScalar component(SymbolId x) const;
  bool is_zero() const { return comp_.empty(); }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(const SymScalar& s);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(VectorField a, const SymScalar& s) { return a *= s; }
  friend VectorField operator*(const SymScalar& s, VectorField a) { return a *= s; }
  friend bool operator==(const VectorField& a, const VectorField& b) { return a.comp_ == b.comp_; }

 private:
  std::map<SymbolId, SymScalar> comp_;
};

SymScalar apply(const VectorField& x, const SymScalar& f);
VectorField lie_bracket(const VectorField& x, const VectorField& y);
VectorField conjugate(const VectorField& x, const SymbolTable& table);
// omega(X) for a 1-form written in coordinate differentials d(x).
SymScalar pairing(const Form& omega, const VectorField& x);
// omega(X, Y) for a 2-form in coordinate differentials.
SymScalar pairing(const Form& omega, const VectorField& x, const VectorField& y);
std::string to_string(const VectorField& x);

// One summand of a field definition: coef * atom.
struct FieldAtom {
  enum class Kind { partial, named, bracket, conjugate };
  Kind kind = Kind::partial;
  SymbolId coordinate = 0;  // partial
  std::string first;        // named, bracket, conjugate
  std::string second;       // bracket
};

struct FieldTerm {
  SymScalar coef;
  FieldAtom atom;
};

struct FieldDefinition {
  std::string name;
  std::vector<FieldTerm> terms;
};

// u = F(z1, z2, conj, v) for a hypersurface of C^3.
struct GraphData {
  SymScalar F;
  SymbolId z1 = 0, z2 = 0, v = 0;
};

struct Model {
  std::string name;
  SymbolTable table;
  std::vector<SymbolId> coordinates;  // conjugates included
  std::optional<GraphData> graph;
  std::vector<FieldDefinition> definitions;
  std::vector<std::string> frame_order;
  std::vector<std::string> coframe_names;  // dual to frame_order
};

struct LeviKernel {
  SymScalar A1, A2;
  VectorField L1, L2, K;
  SymScalar k;              // -LF12 / LF11
  SymScalar k_formula;      // closed formula in the derivatives of F
  Form sigma;               // in coordinate differentials
  SymMatrix levi_form;      // 2x2
  SymScalar kernel_residual;  // sigma(i [K, conj L1])
};

// Requires a Levi form of rank exactly one; throws ModelError otherwise.
LeviKernel levi_kernel(const GraphData& graph, const SymbolTable& table);

struct Frame {
  std::vector<std::string> names;
  std::vector<VectorField> fields;
  std::vector<SymbolId> coordinates;
  SymMatrix components;                         // row i = fields[i]
  std::map<std::string, VectorField> defined;   // every named field of the recipe
  std::vector<std::size_t> conjugate_index;     // conj(fields[i]) = fields[conjugate_index[i]]
  std::optional<LeviKernel> levi;
};

// Runs the recipe and checks independence by a nonzero determinant.
Frame build_frame(const Model& m);

struct BaseCoframe {
  CovectorBasis basis;            // omega0 names
  std::vector<Form> forms;        // in d(x)
  SymMatrix dual;                 // omega_i = sum_k dual(i,k) d(x_k)
  std::vector<SymbolId> coordinates;
  CovectorConjugation conjugation;
};

BaseCoframe dualize(const Frame& frame, const std::vector<std::string>& names);
BaseCoframe rebase(const BaseCoframe& base, const SymMatrix& change, const std::vector<std::string>& names);
// d(x_k) = sum_i inverse(dual)(k, i) omega_i.
std::map<CovectorId, Form> coordinate_differentials(const BaseCoframe& base);
// d(omega0_i) written in the base coframe.
std::vector<Form> base_structure_equations(const BaseCoframe& base);
// Differentiation rules for functions of the coordinates in terms of base covectors.
DerivationRules coordinate_rules(const std::vector<SymbolId>& coordinates);

}  // namespace cartan
