#pragma once

#include <string>
#include <vector>

#include "cartan/exterior.hpp"
#include "cartan/frame.hpp"
#include "cartan/matrix.hpp"
#include "cartan/scalar.hpp"

namespace cartan {

struct ParamGroup {
  SymMatrix matrix;
  SymbolTable table;                 // reality and partners of every live symbol
  std::vector<SymbolId> parameters;  // live parameters, conjugates included
  std::vector<Polynomial> unit_factors;  // polynomials assumed nonvanishing
  Bindings applied;                  // normalizations so far

  std::size_t dimension() const { return parameters.size(); }
};

// A named 1-form supplied by the model, written in d(parameters).
struct NamedForm {
  std::string name;
  Form expression;
};

struct MCForms {
  CovectorBasis basis;
  std::vector<Form> expressions;     // in d(parameters)
  SymMatrix coefficients;            // form x parameter
  SymMatrix inverse;                 // d(p_j) = sum_m inverse(j, m) mu_m
  Matrix<Form> entries;              // dg g^-1 in mu and coordinate differentials
  std::vector<Form> structure;       // d(mu_m) in mu
  CovectorConjugation conjugation;   // among mu
};

// d(p) for every live parameter and d(x) for the coordinates.
DerivationRules naive_rules(const ParamGroup& g, const std::vector<SymbolId>& coordinates);
Matrix<Form> dg_ginv(const ParamGroup& g, const std::vector<SymbolId>& coordinates);
// Checks the supplied forms: count = dimension, independence by rank, every
// parameter part of an entry of dg g^-1 a constant combination, conjugation closure.
MCForms maurer_cartan(const ParamGroup& g, const std::vector<SymbolId>& coordinates,
                      const std::vector<NamedForm>& supplied);
// d(dg g^-1) - (dg g^-1)^(dg g^-1) entrywise; empty when the identity holds.
std::vector<std::string> maurer_cartan_identity_defects(const ParamGroup& g, const std::vector<SymbolId>& coordinates);

// Lifted coframe with Maurer-Cartan forms and everything needed to differentiate further.
struct Stage {
  std::string name;
  SymbolTable table;
  std::vector<SymbolId> coordinates;
  std::vector<SymbolId> parameters;
  std::vector<Polynomial> unit_factors;
  CovectorBasis coframe;
  CovectorBasis mc;
  CovectorConjugation conjugation;  // over coframe and mc
  std::vector<Form> equations;      // d(coframe_i) over coframe and mc
  DerivationRules rules;            // every live scalar and covector

  CovectorBasis full_basis() const { return coframe.concat(mc); }
  std::size_t dimension() const { return coframe.size() + mc.size(); }
};

Stage lift_structure_equations(const std::string& name, const ParamGroup& g, const MCForms& mc,
                               const BaseCoframe& base, const std::vector<Form>& base_equations,
                               const CovectorBasis& lifted);
// Independent computation of d(g omega0) straight from coordinates.
std::vector<Form> direct_structure_equations(const ParamGroup& g, const MCForms& mc, const BaseCoframe& base,
                                             const CovectorBasis& lifted);

struct MCTerm {
  std::size_t mc = 0;        // position in the MC basis
  std::size_t covector = 0;  // position in the coframe
  SymScalar coef;            // coef * mu ^ omega
};

struct TableRow {
  std::vector<MCTerm> mc_part;
  std::vector<PairCoefficient> torsion;  // coframe positions
};

struct TorsionTable {
  std::string stage;
  CovectorBasis coframe;
  CovectorBasis mc;
  std::vector<TableRow> rows;  // one per coframe element

  Form reconstruct(std::size_t i) const;
};

TorsionTable torsion_table(const Stage& s);
// Coefficient of a ^ b in d(form); names in either order; zero if absent.
SymScalar torsion_lookup(const TorsionTable& t, const std::string& form, const std::string& a, const std::string& b);

}  // namespace cartan
