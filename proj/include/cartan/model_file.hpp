#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cartan/frame.hpp"
#include "cartan/reduction.hpp"

namespace cartan {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, const std::string& section, int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& section() const { return section_; }

 private:
  std::string section_;
  int line_, column_;
};

struct Fixture {
  enum class Kind { field, scalar, base_equation, coefficient, final_equation, dimension };
  Kind kind = Kind::coefficient;
  std::string section;  // "frame", "base", a stage name, or "final"
  std::string label;    // as written, e.g. U[sigma; sigma, rho]
  int line = 0;
  bool inconclusive = false;
  std::string note;
  std::string target, first, second;  // field/scalar/form name; coefficient pair
  VectorField field;
  SymScalar scalar;
  Form form;
  std::size_t dimension = 0;
};

struct ModelFile {
  std::string source;
  PipelineInput input;
  std::vector<Fixture> fixtures;
  std::vector<std::string> stage_names;  // lift and prolong stages in script order
};

ModelFile parse_model(const std::string& text, const std::string& source = "<input>");
// Reads the file; a missing file is a ParseError at line 0.
ModelFile load_model(const std::string& path);
// Standalone expression parsing against a symbol table (used for round trips).
SymScalar parse_scalar(const std::string& text, const SymbolTable& table);

}  // namespace cartan
