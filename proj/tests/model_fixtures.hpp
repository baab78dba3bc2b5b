#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "cartan/frame.hpp"
#include "cartan/model_file.hpp"
#include "cartan/reduction.hpp"

namespace cartan::testing {

// The class II model built directly, independent of the model-file parser.
inline Model make_b_model() {
  Model m;
  m.name = "B";
  const SymbolId z = m.table.declare_complex("z", SymbolKind::coordinate);
  const SymbolId u1 = m.table.declare_real("u1", SymbolKind::coordinate);
  const SymbolId u2 = m.table.declare_real("u2", SymbolKind::coordinate);
  const SymbolId zb = m.table.partner(z);
  m.coordinates = {z, zb, u1, u2};
  const SymScalar I = SymScalar::i(), Z = SymScalar::symbol(z), Zb = SymScalar::symbol(zb);
  using K = FieldAtom::Kind;
  m.definitions.push_back({"L1",
                           {{1, {K::partial, z, {}, {}}},
                            {I * Zb, {K::partial, u1, {}, {}}},
                            {I * (SymScalar(2) * Z * Zb + Zb * Zb), {K::partial, u2, {}, {}}}}});
  m.definitions.push_back({"L1bar", {{1, {K::conjugate, 0, "L1", {}}}}});
  m.definitions.push_back({"T", {{I, {K::bracket, 0, "L1", "L1bar"}}}});
  m.definitions.push_back({"S", {{1, {K::bracket, 0, "L1", "T"}}}});
  m.frame_order = {"S", "T", "L1", "L1bar"};
  m.coframe_names = {"sigma0", "rho0", "zeta0", "zeta0bar"};
  return m;
}

struct BundledRun {
  ModelFile file;
  Transcript transcript;
};

inline BundledRun run_bundled(const std::string& name, const std::string& stop_after = {}) {
  ModelFile f = load_model(std::string(CARTAN_MODELS_DIR) + "/" + name + ".model");
  Transcript t = run_pipeline(f.input, stop_after);
  return {std::move(f), std::move(t)};
}

// Bundled model text with one script line replaced.
inline std::string bundled_text_with(const std::string& name, const std::string& from, const std::string& to) {
  std::ifstream in(std::string(CARTAN_MODELS_DIR) + "/" + name + ".model");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  const auto pos = text.find(from);
  if (pos != std::string::npos) text.replace(pos, from.size(), to);
  return text;
}

}  // namespace cartan::testing
