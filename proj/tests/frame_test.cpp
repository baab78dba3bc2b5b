#include <doctest.h>

#include "cartan/frame.hpp"
#include "model_fixtures.hpp"
#include "random_exprs.hpp"

using namespace cartan;

TEST_CASE("class II frame recipe") {
  const Model m = testing::make_b_model();
  const Frame f = build_frame(m);
  const SymbolId z = *m.table.lookup("z"), zb = *m.table.lookup("zbar"), u1 = *m.table.lookup("u1"),
                 u2 = *m.table.lookup("u2");
  const SymScalar Z = SymScalar::symbol(z), Zb = SymScalar::symbol(zb);
  CHECK(f.defined.at("T") == VectorField::partial(u1) * SymScalar(2) +
                                 VectorField::partial(u2) * (SymScalar(4) * Z + SymScalar(4) * Zb));
  CHECK(f.defined.at("S") == VectorField::partial(u2) * SymScalar(4));
  CHECK(lie_bracket(f.defined.at("T"), f.defined.at("T")).is_zero());

  const BaseCoframe base = dualize(f, m.coframe_names);
  for (std::size_t i = 0; i < base.forms.size(); ++i)
    for (std::size_t j = 0; j < f.fields.size(); ++j) CHECK(pairing(base.forms[i], f.fields[j]) == SymScalar(i == j ? 1 : 0));
  CHECK(base.forms[0].coefficient(Word{differential_of(u2)}) == SymScalar::rational(1, 4));

  const auto eqs = base_structure_equations(base);
  const Form expect_rho = Form::monomial({base.basis[2], base.basis[3]}, SymScalar::i());
  CHECK(eqs[1] == expect_rho);
  CHECK(eqs[2].is_zero());
}

TEST_CASE("coordinate frame dualizes to coordinate differentials") {
  Model m;
  const SymbolId x = m.table.declare_real("xc", SymbolKind::coordinate), y = m.table.declare_real("yc", SymbolKind::coordinate);
  m.coordinates = {x, y};
  m.definitions.push_back({"X", {{1, {FieldAtom::Kind::partial, x, {}, {}}}}});
  m.definitions.push_back({"Y", {{1, {FieldAtom::Kind::partial, y, {}, {}}}}});
  m.frame_order = {"X", "Y"};
  const BaseCoframe base = dualize(build_frame(m), {"ex", "ey"});
  CHECK(base.forms[0] == Form::covector(differential_of(x)));
  CHECK(base.forms[1] == Form::covector(differential_of(y)));
}

TEST_CASE("dependent frame is rejected") {
  Model m;
  const SymbolId x = m.table.declare_real("xd", SymbolKind::coordinate), y = m.table.declare_real("yd", SymbolKind::coordinate);
  m.coordinates = {x, y};
  m.definitions.push_back({"X", {{1, {FieldAtom::Kind::partial, x, {}, {}}}}});
  m.definitions.push_back({"Y", {{SymScalar::symbol(y), {FieldAtom::Kind::named, 0, "X", {}}}}});
  m.frame_order = {"X", "Y"};
  CHECK_THROWS_AS(build_frame(m), ModelError);
}

TEST_CASE("Levi kernel of the quadric") {
  SymbolTable t;
  const SymbolId z1 = t.declare_complex("q1", SymbolKind::coordinate), z2 = t.declare_complex("q2", SymbolKind::coordinate);
  const SymbolId v = t.declare_real("qv", SymbolKind::coordinate);
  GraphData g{SymScalar::symbol(z1) * SymScalar::symbol(t.partner(z1)), z1, z2, v};
  const LeviKernel lk = levi_kernel(g, t);
  CHECK(lk.k.is_zero());
  CHECK(lk.K == lk.L2);
  CHECK(lk.kernel_residual.is_zero());
  GraphData rank2{SymScalar::symbol(z1) * SymScalar::symbol(t.partner(z1)) +
                      SymScalar::symbol(z2) * SymScalar::symbol(t.partner(z2)),
                  z1, z2, v};
  CHECK_THROWS_AS(levi_kernel(rank2, t), ModelError);
}

TEST_CASE("property: Jacobi identity and Cartan formula") {
  SymbolTable t;
  const SymbolId x = t.declare_complex("jx", SymbolKind::coordinate), y = t.declare_real("jy", SymbolKind::coordinate);
  std::vector<SymbolId> coords{x, t.partner(x), y};
  testing::RandomScalars gen(t, coords, 99u);
  auto field = [&] {
    VectorField f;
    for (SymbolId c : coords) f += VectorField::partial(c) * SymScalar(gen.polynomial(3, 2));
    return f;
  };
  for (int k = 0; k < 30; ++k) {
    const VectorField a = field(), b = field(), c = field();
    const VectorField jac = lie_bracket(a, lie_bracket(b, c)) + lie_bracket(b, lie_bracket(c, a)) +
                            lie_bracket(c, lie_bracket(a, b));
    REQUIRE(jac.is_zero());
    REQUIRE(lie_bracket(a, b) == lie_bracket(b, a) * SymScalar(-1));
  }

  const Model m = testing::make_b_model();
  const Frame f = build_frame(m);
  const BaseCoframe base = dualize(f, m.coframe_names);
  const DerivationRules rules = coordinate_rules(base.coordinates);
  for (const Form& w : base.forms) {
    const Form dw = exterior_derivative(w, rules);
    for (const VectorField& X : f.fields)
      for (const VectorField& Y : f.fields)
        CHECK(pairing(dw, X, Y) == apply(X, pairing(w, Y)) - apply(Y, pairing(w, X)) - pairing(w, lie_bracket(X, Y)));
  }
}
