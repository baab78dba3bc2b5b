#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cartan {

using SymbolId = std::uint32_t;

enum class SymbolKind : std::uint8_t { coordinate = 0, parameter = 1, prolongation = 2, auxiliary = 3 };
enum class Reality : std::uint8_t { complex, real };

// Process-wide interning of scalar symbol names. The kind recorded at first
// interning fixes the global order used for canonical printing:
// coordinates < parameters < prolongation parameters < auxiliaries, then by name.
SymbolId intern_symbol(std::string_view name, SymbolKind kind = SymbolKind::auxiliary);
std::optional<SymbolId> find_symbol(std::string_view name);
const std::string& symbol_name(SymbolId id);
SymbolKind symbol_kind(SymbolId id);
bool symbol_precedes(SymbolId a, SymbolId b);

struct Symbol {
  SymbolId id = 0;
  SymbolKind kind = SymbolKind::auxiliary;
  Reality reality = Reality::real;
  SymbolId partner = 0;
  bool nonvanishing = false;

  const std::string& name() const { return symbol_name(id); }
};

// Per-model view of the symbols in play: reality, conjugate partners and
// nonvanishing assumptions. Copy to derive a new stage.
class SymbolTable {
 public:
  SymbolId declare_real(std::string_view name, SymbolKind kind, bool nonvanishing = false);
  // Declares name and its partner (default: name + "bar").
  SymbolId declare_complex(std::string_view name, SymbolKind kind, bool nonvanishing = false,
                           std::string_view partner_name = {});
  // Makes `id` its own partner and retires its former partner.
  void make_real(SymbolId id);
  // Removes a symbol (and its partner when complex).
  void retire(SymbolId id);

  bool contains(SymbolId id) const { return entries_.count(id) != 0; }
  std::optional<SymbolId> lookup(std::string_view name) const;
  const Symbol& at(SymbolId id) const;
  SymbolId partner(SymbolId id) const;
  bool is_real(SymbolId id) const { return partner(id) == id; }

  // Declaration order.
  const std::vector<SymbolId>& order() const { return order_; }
  std::vector<SymbolId> of_kind(SymbolKind kind) const;

 private:
  void add(const Symbol& s);

  std::map<SymbolId, Symbol> entries_;
  std::vector<SymbolId> order_;
};

}  // namespace cartan
