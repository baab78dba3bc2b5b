#include <doctest.h>

#include "cartan/gstructure.hpp"
#include "cartan/reduction.hpp"
#include "model_fixtures.hpp"

using namespace cartan;

TEST_CASE("every lifted stage satisfies the Maurer-Cartan identity and the direct oracle") {
  for (const char* name : {"B", "N", "LC"}) {
    CAPTURE(name);
    const auto run = testing::run_bundled(name);
    REQUIRE(run.transcript.error.empty());
    for (const StageRecord& s : run.transcript.stages) {
      CAPTURE(s.stage.name);
      CHECK(s.mc_identity_defects.empty());
      CHECK(s.direct_oracle_agrees);
    }
  }
}

TEST_CASE("torsion table reconstructs the structure equations") {
  const auto run = testing::run_bundled("N");
  for (const StageRecord& s : run.transcript.stages)
    for (std::size_t i = 0; i < s.stage.coframe.size(); ++i) CHECK(s.table.reconstruct(i) == s.stage.equations[i]);
}

TEST_CASE("frame and base coframe are dual") {
  for (const char* name : {"B", "N", "LC"}) {
    CAPTURE(name);
    const auto run = testing::run_bundled(name, "G1");
    const Transcript& t = run.transcript;
    REQUIRE(t.initial_base.forms.size() == t.frame.fields.size());
    for (std::size_t i = 0; i < t.initial_base.forms.size(); ++i)
      for (std::size_t j = 0; j < t.frame.fields.size(); ++j)
        CHECK(pairing(t.initial_base.forms[i], t.frame.fields[j]) == SymScalar(i == j ? 1 : 0));
  }
}

TEST_CASE("torsion_lookup") {
  const auto run = testing::run_bundled("LC", "G3");
  const StageRecord* g2 = run.transcript.find_stage("G2");
  const StageRecord* g3 = run.transcript.find_stage("G3");
  REQUIRE(g2);
  REQUIRE(g3);
  const SymbolTable& t = g2->stage.table;

  // Order of the pair flips the sign; a repeated name and an absent pair give zero.
  const SymScalar u = torsion_lookup(g2->table, "rho", "rho", "kappa");
  CHECK_FALSE(u.is_zero());
  CHECK(torsion_lookup(g2->table, "rho", "kappa", "rho") == -u);
  CHECK(torsion_lookup(g2->table, "rho", "rho", "rho").is_zero());
  CHECK(torsion_lookup(g2->table, "kappa", "zeta", "zetabar").is_zero());
  CHECK_THROWS_AS(torsion_lookup(g2->table, "omega", "rho", "kappa"), ConfigError);
  CHECK_THROWS_AS(torsion_lookup(g2->table, "rho", "rho", "pi1"), ConfigError);

  // Reality of rho: the kappabar column is the conjugate of the kappa column.
  CHECK(torsion_lookup(g2->table, "rho", "rho", "kappabar") == conjugate(u, t));

  const SymbolTable& t3 = g3->stage.table;
  const SymScalar c = SymScalar::symbol(*t3.lookup("c")), cbar = SymScalar::symbol(*t3.lookup("cbar"));
  const SymScalar z2 = SymScalar::symbol(*t3.lookup("z2"));
  CHECK(torsion_lookup(g3->table, "rho", "rho", "zetabar") == -(c / cbar) * z2);
}

TEST_CASE("the identity group leaves the base structure constants unchanged") {
  const auto run = testing::run_bundled("B", "G1");
  const Transcript& t = run.transcript;
  const std::size_t n = t.initial_base.basis.size();
  ParamGroup g;
  g.matrix = identity_matrix<SymScalar>(static_cast<Eigen::Index>(n));
  g.table = run.file.input.model.table;
  const MCForms mc = maurer_cartan(g, t.initial_base.coordinates, {});
  CHECK(mc.basis.size() == 0);
  const CovectorBasis lifted = CovectorBasis::from_names({"s_id", "r_id", "z_id", "zb_id"});
  const Stage s = lift_structure_equations("G0", g, mc, t.initial_base, t.initial_base_equations, lifted);
  std::map<CovectorId, Form> rename;
  for (std::size_t i = 0; i < n; ++i) rename.emplace(t.initial_base.basis[i], Form::covector(lifted[i]));
  for (std::size_t i = 0; i < n; ++i) CHECK(s.equations[i] == rewrite(t.initial_base_equations[i], rename));
  CHECK(maurer_cartan_identity_defects(g, t.initial_base.coordinates).empty());
}
