#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cartan/exterior.hpp"
#include "cartan/frame.hpp"
#include "cartan/gstructure.hpp"
#include "cartan/linear.hpp"

namespace cartan {

// Consistency condition of an absorption system: value = sum weights * torsion.
struct Relation {
  SymScalar value;
  std::string combination;  // readable weighted sum of torsion coefficients
};

struct AbsorptionResult {
  std::string stage;
  std::vector<std::vector<SymbolId>> unknowns;  // [mc][coframe]: shift of mc by unknown * coframe
  LinearSystem system;
  LinearSolution solution;
  std::vector<Relation> identities;  // identically zero
  std::vector<Relation> invariants;  // nonzero constants
  std::vector<Relation> essential;   // nonconstant, one per class up to unit multiple and conjugation
  std::vector<Form> absorbed;        // d(coframe_i) with the mc names standing for the modified forms

  // Value of the unknown shifting mc[m] by coframe[b]; free unknowns stay symbolic.
  SymScalar shift(std::size_t m, std::size_t b) const;
};

// Name of the absorption unknown for (mc form, coframe element).
std::string unknown_name(const std::string& mc, const std::string& coframe);

// extra: scalars linear in the unknowns that must vanish in addition to the torsion equations.
AbsorptionResult absorb(const Stage& s, const std::vector<SymScalar>& extra = {});
// Identically satisfied relations; each value re-simplified to zero.
std::vector<Relation> check_identities(const AbsorptionResult& a);
// Same class up to a constant multiple and conjugation.
bool equivalent_relations(const SymScalar& a, const SymScalar& b, const SymbolTable& table);

struct NormalizationStep {
  std::optional<SymbolId> make_real;
  std::vector<std::pair<SymbolId, SymScalar>> values;
};

struct NormalizationRecord {
  std::string description;
  std::vector<std::pair<SymbolId, SymScalar>> eliminated;
  std::optional<SymbolId> made_real;
  std::size_t dimension_before = 0, dimension_after = 0;
  std::vector<std::pair<SymScalar, SymScalar>> justification;  // essential relation, constant value after
};

ParamGroup normalize(const ParamGroup& g, const NormalizationStep& step, const AbsorptionResult& last,
                     NormalizationRecord* record = nullptr);

struct ProlongationSpec {
  std::string stage;
  std::vector<std::pair<std::string, std::string>> adjoin;  // new coframe name <- mc name
  SymbolId parameter = 0;
  std::string parameter_form;
};

Stage prolong(const Stage& s, const AbsorptionResult& a, const ProlongationSpec& spec);

struct LieAlgebraResult {
  std::size_t dimension = 0;
  std::size_t coframe_size = 0;  // basis = coframe elements, then group forms
  CovectorBasis basis;
  std::vector<Form> equations;
};

LieAlgebraResult close(const Stage& s, const AbsorptionResult& a);

struct ClosureReport {
  bool passed = true;
  std::size_t dimension = 0;
  std::vector<std::string> failures;
};

ClosureReport verify_closure(const LieAlgebraResult& r);

// ------------------------------------------------------------------ script

struct ScriptStep {
  enum class Kind { lift, absorb, normalize, rebase, prolong, close };
  Kind kind = Kind::lift;
  int line = 0;
  std::string name;                  // lift: stage name
  std::vector<NamedForm> mc_forms;   // lift
  std::vector<SymScalar> extra;      // absorb
  NormalizationStep normalization;   // normalize
  std::string old_name, new_name;    // rebase
  Form new_form;                     // rebase: new covector in the old base coframe
  ProlongationSpec prolongation;     // prolong
};

struct PipelineInput {
  Model model;
  ParamGroup group;        // initial structure group
  CovectorBasis lifted;    // lifted coframe names
  std::vector<ScriptStep> script;
};

struct StageRecord {
  Stage stage;
  TorsionTable table;
  std::optional<AbsorptionResult> absorption;
  std::size_t group_dimension = 0;
  bool direct_oracle_agrees = true;
  std::vector<std::string> mc_identity_defects;
};

struct Transcript {
  Frame frame;
  BaseCoframe base;                  // current base, after any rebase
  std::vector<Form> base_equations;
  BaseCoframe initial_base;          // dual of the model frame
  std::vector<Form> initial_base_equations;
  std::vector<StageRecord> stages;
  std::vector<NormalizationRecord> normalizations;
  std::vector<std::string> log;
  std::optional<LieAlgebraResult> result;
  std::optional<ClosureReport> closure;
  std::string error;  // nonempty when a step failed
  int failed_line = 0;

  const StageRecord* find_stage(const std::string& name) const;
};

// stop_after: stage name after whose absorption the run stops (empty: run everything).
Transcript run_pipeline(const PipelineInput& in, const std::string& stop_after = {});

}  // namespace cartan
