#include <doctest.h>

#include "cartan/linear.hpp"
#include "cartan/scalar.hpp"
#include "random_exprs.hpp"

using namespace cartan;

namespace {

struct Fixture {
  SymbolTable table;
  SymScalar a, abar, b, bbar, c, cbar, e, x, y;
  SymbolId ia, ib, ic, ie, ix, iy;

  Fixture() {
    ia = table.declare_complex("a", SymbolKind::parameter, true);
    ib = table.declare_complex("b", SymbolKind::parameter);
    ic = table.declare_complex("c", SymbolKind::parameter, true);
    ie = table.declare_complex("e", SymbolKind::parameter);
    ix = table.declare_complex("x", SymbolKind::coordinate);
    iy = table.declare_real("y", SymbolKind::coordinate);
    a = SymScalar::symbol(ia);
    abar = SymScalar::symbol(table.partner(ia));
    b = SymScalar::symbol(ib);
    bbar = SymScalar::symbol(table.partner(ib));
    c = SymScalar::symbol(ic);
    cbar = SymScalar::symbol(table.partner(ic));
    e = SymScalar::symbol(ie);
    x = SymScalar::symbol(ix);
    y = SymScalar::symbol(iy);
  }
};

}  // namespace

TEST_CASE("cancellation and the imaginary unit") {
  Fixture f;
  CHECK((f.a * f.abar) / f.abar == f.a);
  CHECK(SymScalar::i() * SymScalar::i() == SymScalar(-1));
  const SymScalar half = SymScalar::rational(1, 2);
  const SymScalar lhs = (f.c / f.a.pow(3) - SymScalar::i() * f.b / f.a.pow(2)) * half;
  const SymScalar rhs = half * f.c / f.a.pow(3) - half * SymScalar::i() * f.b / f.a.pow(2);
  CHECK(lhs == rhs);
  CHECK(simplify(lhs) == lhs);
}

TEST_CASE("nontrivial polynomial gcds cancel") {
  Fixture f;
  CHECK((f.x * f.x - f.y * f.y) / (f.x - f.y) == f.x + f.y);
  const SymScalar s = SymScalar(1) / (f.x + f.y) + SymScalar(1) / (f.x - f.y);
  CHECK(s * (f.x - f.y) == SymScalar(2) * f.x / (f.x + f.y));
  const SymScalar p = (f.a * f.x + f.b) * (f.c - f.x * f.y);
  const SymScalar q = (f.a * f.x + f.b) * (f.x + SymScalar::i());
  CHECK(p / q == (f.c - f.x * f.y) / (f.x + SymScalar::i()));
  const SymScalar one_minus = SymScalar(1) - f.x * SymScalar::symbol(f.table.partner(f.ix));
  CHECK((f.x / one_minus.pow(2)) * one_minus == f.x / one_minus);
}

TEST_CASE("conjugation") {
  Fixture f;
  SymbolTable real_a = f.table;
  real_a.make_real(f.ia);
  const SymScalar v = SymScalar::i() * f.b / f.a.pow(2);
  CHECK(conjugate(v, real_a) == -SymScalar::i() * f.bbar / f.a.pow(2));
  CHECK(conjugate(f.y, f.table) == f.y);
  CHECK(conjugate(conjugate(v, f.table), f.table) == v);
}

TEST_CASE("substitution") {
  Fixture f;
  const SymScalar v = -f.e / f.c + SymScalar::i() * f.b / (f.c * f.cbar);
  CHECK(substitute(v, {{f.ib, -SymScalar::i() * f.cbar * f.e}}).is_zero());
  CHECK(substitute(f.e, {}) == f.e);
  CHECK_THROWS_AS(substitute(SymScalar(1) / (f.x - f.y), {{f.ix, f.y}}), DomainError);
  CHECK_THROWS_AS(SymScalar(1) / SymScalar(0), DomainError);
}

TEST_CASE("unit detection under nonvanishing assumptions") {
  Fixture f;
  const SymbolId z2 = f.table.declare_complex("w", SymbolKind::coordinate);
  const SymScalar w = SymScalar::symbol(z2), wbar = SymScalar::symbol(f.table.partner(z2));
  const SymScalar d = SymScalar(1) - w * wbar;
  const std::vector<Polynomial> factors{d.numerator()};
  CHECK(is_unit(SymScalar(3) * f.a * f.c / d.pow(2), f.table, factors));
  CHECK_FALSE(is_unit(f.b, f.table, factors));
  CHECK_FALSE(is_unit(f.a + f.c, f.table, factors));
}

TEST_CASE("solve_linear basics") {
  Fixture f;
  const SymbolId u = intern_symbol("u_unknown"), v = intern_symbol("v_unknown");
  LinearSystem sys{{u, v}, {{{1, 1}, 0}, {{1, -1}, 0}}};
  const auto sol = solve_linear(sys);
  CHECK(sol.free.empty());
  CHECK(sol.constraints.empty());
  CHECK(sol.solution.at(u).is_zero());
  CHECK(sol.solution.at(v).is_zero());

  // Three equations in one unknown: two consistency constraints.
  LinearSystem chain{{u}, {{{3}, f.c}, {{2}, f.b}, {{1}, f.e}}};
  const auto s2 = solve_linear(chain);
  CHECK(s2.constraints.size() == 2);
  for (const auto& k : s2.constraints) CHECK_FALSE(k.value.is_zero());
  CHECK(substitute(s2.constraints[0].value, {{f.ib, SymScalar(2) * f.e}, {f.ic, SymScalar(3) * f.e}}).is_zero());
}

TEST_CASE("property: ring axioms, involution, canonical equality on 500 random scalars") {
  Fixture f;
  std::vector<SymbolId> pool{f.ia, f.table.partner(f.ia), f.ib, f.ix, f.table.partner(f.ix), f.iy};
  testing::RandomScalars gen(f.table, pool, 20240517u);
  for (int k = 0; k < 500; ++k) {
    const SymScalar e1 = gen.scalar(), e2 = gen.scalar(), e3 = gen.scalar();
    REQUIRE((e1 + e2) + e3 == e1 + (e2 + e3));
    REQUIRE(e1 * SymScalar(1) == e1);
    REQUIRE((e1 + (-e1)).is_zero());
    REQUIRE(e1 * (e2 + e3) == e1 * e2 + e1 * e3);
    REQUIRE((e1 * e2) * e3 == e1 * (e2 * e3));
    REQUIRE(conjugate(conjugate(e1, f.table), f.table) == e1);
    REQUIRE(conjugate(e1 * e2, f.table) == conjugate(e1, f.table) * conjugate(e2, f.table));
    REQUIRE(simplify(simplify(e1)) == simplify(e1));
    // Equality completeness against the cross-multiplication oracle.
    const SymScalar lhs = (e1 + e2) * (e1 - e2);
    const SymScalar rhs = e1 * e1 - e2 * e2;
    REQUIRE(equal_by_cross_multiplication(lhs, rhs));
    REQUIRE(lhs == rhs);
    REQUIRE((e1 == e2) == equal_by_cross_multiplication(e1, e2));
    if (!e2.is_zero()) REQUIRE((e1 / e2) * e2 == e1);
  }
}

TEST_CASE("property: solve_linear has zero residual on random 4x6 systems") {
  Fixture f;
  std::vector<SymbolId> pool{f.ia, f.ib, f.ix};
  testing::RandomScalars gen(f.table, pool, 77u);
  std::vector<SymbolId> unknowns;
  for (int k = 0; k < 6; ++k) unknowns.push_back(intern_symbol("q" + std::to_string(k)));
  for (int trial = 0; trial < 8; ++trial) {
    LinearSystem sys{unknowns, {}};
    for (int r = 0; r < 4; ++r) {
      LinearEquation eq;
      for (int c = 0; c < 6; ++c) eq.coefficients.push_back((r + c + trial) % 3 == 0 ? SymScalar(0) : SymScalar(gen.polynomial(2, 1)));
      eq.rhs = gen.scalar();
      sys.equations.push_back(eq);
    }
    const auto sol = solve_linear(sys);
    CHECK(sol.free.size() + sol.solution.size() == 6);
    for (const auto& eq : sys.equations) {
      SymScalar lhs;
      for (std::size_t c = 0; c < 6; ++c) {
        auto it = sol.solution.find(unknowns[c]);
        lhs += eq.coefficients[c] * (it == sol.solution.end() ? SymScalar::symbol(unknowns[c]) : it->second);
      }
      if (sol.constraints.empty()) {
        CHECK(equal_by_cross_multiplication(lhs, eq.rhs));
        CHECK(lhs == eq.rhs);
      }
    }
  }
}
