#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cartan/model_file.hpp"
#include "cartan/reduction.hpp"

namespace cartan {

enum class Verdict { pass, fail, inconclusive };

struct FixtureResult {
  Fixture fixture;
  Verdict verdict = Verdict::pass;
  bool exact = false;  // computed value equals the expected one
  std::string expected, computed;
  std::string message;  // why the value could not be computed, if so
};

struct Report {
  std::string model;
  std::optional<Transcript> transcript;
  std::vector<FixtureResult> fixtures;
  bool fixtures_checked = false;

  std::size_t count(Verdict v) const;
  std::size_t exact_matches() const;
};

std::vector<FixtureResult> check_fixtures(const ModelFile& m, const Transcript& t);
Report make_report(const ModelFile& m, Transcript t, bool check);

enum class Format { text, machine, latex };
// Throws ConfigError on an unknown name.
Format parse_format(const std::string& name);

std::string emit(const Report& r, Format f);
std::string emit_text(const Report& r);
std::string emit_machine(const Report& r);
std::string emit_latex(const Report& r);

// Equations print group forms first: "d tau = 4 alpha^tau + sigma^zeta".
std::string format_equation(const std::string& name, const Form& f, const CovectorBasis& coframe,
                            const CovectorBasis& mc);

}  // namespace cartan
