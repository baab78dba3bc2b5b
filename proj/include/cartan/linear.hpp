#pragma once

#include <vector>

#include "cartan/matrix.hpp"
#include "cartan/scalar.hpp"

namespace cartan {

struct LinearEquation {
  std::vector<SymScalar> coefficients;  // one per unknown
  SymScalar rhs;
};

struct LinearSystem {
  std::vector<SymbolId> unknowns;
  std::vector<LinearEquation> equations;
};

struct LinearConstraint {
  std::vector<SymScalar> combination;  // weights on the equations' right-hand sides
  SymScalar value;                     // combination applied to the rhs; must vanish
};

struct LinearSolution {
  Bindings solution;  // pivot unknown -> expression in rhs data and free unknowns
  std::vector<SymbolId> free;
  std::vector<LinearConstraint> constraints;
};

// Gauss-Jordan elimination over the rational function field.
LinearSolution solve_linear(const LinearSystem& sys);

}  // namespace cartan
