#include "cartan/symbol.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace cartan {

namespace {

struct Registry {
  std::mutex mu;
  std::deque<std::string> names;
  std::deque<SymbolKind> kinds;
  std::unordered_map<std::string, SymbolId> index;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

SymbolId intern_symbol(std::string_view name, SymbolKind kind) {
  Registry& r = registry();
  std::lock_guard lock(r.mu);
  auto it = r.index.find(std::string(name));
  if (it != r.index.end()) return it->second;
  const auto id = static_cast<SymbolId>(r.names.size());
  r.names.emplace_back(name);
  r.kinds.push_back(kind);
  r.index.emplace(std::string(name), id);
  return id;
}

std::optional<SymbolId> find_symbol(std::string_view name) {
  Registry& r = registry();
  std::lock_guard lock(r.mu);
  auto it = r.index.find(std::string(name));
  if (it == r.index.end()) return std::nullopt;
  return it->second;
}

const std::string& symbol_name(SymbolId id) {
  Registry& r = registry();
  std::lock_guard lock(r.mu);
  return r.names.at(id);
}

SymbolKind symbol_kind(SymbolId id) {
  Registry& r = registry();
  std::lock_guard lock(r.mu);
  return r.kinds.at(id);
}

bool symbol_precedes(SymbolId a, SymbolId b) {
  if (a == b) return false;
  Registry& r = registry();
  std::lock_guard lock(r.mu);
  const auto ka = r.kinds.at(a), kb = r.kinds.at(b);
  if (ka != kb) return ka < kb;
  return r.names.at(a) < r.names.at(b);
}

void SymbolTable::add(const Symbol& s) {
  if (!entries_.emplace(s.id, s).second)
    throw std::invalid_argument("symbol '" + symbol_name(s.id) + "' declared twice");
  order_.push_back(s.id);
}

SymbolId SymbolTable::declare_real(std::string_view name, SymbolKind kind, bool nonvanishing) {
  const SymbolId id = intern_symbol(name, kind);
  add({id, kind, Reality::real, id, nonvanishing});
  return id;
}

SymbolId SymbolTable::declare_complex(std::string_view name, SymbolKind kind, bool nonvanishing,
                                      std::string_view partner_name) {
  std::string pname = partner_name.empty() ? std::string(name) + "bar" : std::string(partner_name);
  const SymbolId id = intern_symbol(name, kind);
  const SymbolId pid = intern_symbol(pname, kind);
  add({id, kind, Reality::complex, pid, nonvanishing});
  add({pid, kind, Reality::complex, id, nonvanishing});
  return id;
}

void SymbolTable::make_real(SymbolId id) {
  Symbol& s = entries_.at(id);
  if (s.partner == id) return;
  const SymbolId old = s.partner;
  s.partner = id;
  s.reality = Reality::real;
  entries_.erase(old);
  order_.erase(std::remove(order_.begin(), order_.end(), old), order_.end());
}

void SymbolTable::retire(SymbolId id) {
  auto it = entries_.find(id);
  if (it == entries_.end()) return;
  const SymbolId p = it->second.partner;
  entries_.erase(it);
  entries_.erase(p);
  order_.erase(std::remove_if(order_.begin(), order_.end(),
                              [&](SymbolId s) { return s == id || s == p; }),
               order_.end());
}

std::optional<SymbolId> SymbolTable::lookup(std::string_view name) const {
  auto id = find_symbol(name);
  if (id && contains(*id)) return id;
  return std::nullopt;
}

const Symbol& SymbolTable::at(SymbolId id) const {
  auto it = entries_.find(id);
  if (it == entries_.end())
    throw std::out_of_range("symbol '" + symbol_name(id) + "' is not declared in this context");
  return it->second;
}

SymbolId SymbolTable::partner(SymbolId id) const { return at(id).partner; }

std::vector<SymbolId> SymbolTable::of_kind(SymbolKind kind) const {
  std::vector<SymbolId> out;
  for (SymbolId id : order_)
    if (entries_.at(id).kind == kind) out.push_back(id);
  return out;
}

}  // namespace cartan
