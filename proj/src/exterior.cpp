#include "cartan/exterior.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace cartan {

namespace {

struct CovectorRegistry {
  std::mutex mu;
  std::deque<std::string> names;
  std::unordered_map<std::string, CovectorId> index;
  std::map<CovectorId, SymbolId> differential_source;
};

CovectorRegistry& covectors() {
  static CovectorRegistry r;
  return r;
}

// Sorts w in place; returns the permutation sign, or 0 on a repeated entry.
int sort_word(Word& w) {
  int sign = 1;
  for (std::size_t i = 1; i < w.size(); ++i) {
    for (std::size_t j = i; j > 0 && w[j - 1] > w[j]; --j) {
      std::swap(w[j - 1], w[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == w[i - 1]) return 0;
  return sign;
}

}  // namespace

CovectorId intern_covector(std::string_view name) {
  CovectorRegistry& r = covectors();
  std::lock_guard lock(r.mu);
  auto it = r.index.find(std::string(name));
  if (it != r.index.end()) return it->second;
  const auto id = static_cast<CovectorId>(r.names.size());
  r.names.emplace_back(name);
  r.index.emplace(std::string(name), id);
  return id;
}

std::optional<CovectorId> find_covector(std::string_view name) {
  CovectorRegistry& r = covectors();
  std::lock_guard lock(r.mu);
  auto it = r.index.find(std::string(name));
  if (it == r.index.end()) return std::nullopt;
  return it->second;
}

const std::string& covector_name(CovectorId id) {
  CovectorRegistry& r = covectors();
  std::lock_guard lock(r.mu);
  return r.names.at(id);
}

CovectorId differential_of(SymbolId s) {
  const CovectorId id = intern_covector("d(" + symbol_name(s) + ")");
  CovectorRegistry& r = covectors();
  std::lock_guard lock(r.mu);
  r.differential_source[id] = s;
  return id;
}

std::optional<SymbolId> differential_symbol(CovectorId id) {
  CovectorRegistry& r = covectors();
  std::lock_guard lock(r.mu);
  auto it = r.differential_source.find(id);
  if (it == r.differential_source.end()) return std::nullopt;
  return it->second;
}

// ------------------------------------------------------------------ basis

CovectorBasis::CovectorBasis(std::vector<CovectorId> ids) : ids_(std::move(ids)) {
  for (std::size_t i = 0; i < ids_.size(); ++i)
    if (!index_.emplace(ids_[i], i).second)
      throw ConfigError("covector '" + covector_name(ids_[i]) + "' listed twice in a basis");
}

CovectorBasis CovectorBasis::from_names(const std::vector<std::string>& names) {
  std::vector<CovectorId> ids;
  for (const auto& n : names) ids.push_back(intern_covector(n));
  return CovectorBasis(std::move(ids));
}

std::optional<std::size_t> CovectorBasis::position(CovectorId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CovectorBasis CovectorBasis::concat(const CovectorBasis& other) const {
  std::vector<CovectorId> ids = ids_;
  ids.insert(ids.end(), other.ids_.begin(), other.ids_.end());
  return CovectorBasis(std::move(ids));
}

// ------------------------------------------------------------------- form

Form Form::scalar(const SymScalar& s) {
  Form f(0);
  if (!s.is_zero()) f.terms_.emplace(Word{}, s);
  return f;
}

Form Form::covector(CovectorId id, const SymScalar& coef) {
  Form f(1);
  if (!coef.is_zero()) f.terms_.emplace(Word{id}, coef);
  return f;
}

Form Form::monomial(const std::vector<CovectorId>& word, const SymScalar& coef) {
  Form f(static_cast<int>(word.size()));
  Word w(word.begin(), word.end());
  const int sign = sort_word(w);
  if (sign == 0 || coef.is_zero()) return f;
  f.terms_.emplace(std::move(w), sign > 0 ? coef : -coef);
  return f;
}

SymScalar Form::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? SymScalar() : it->second;
}

SymScalar Form::as_scalar() const {
  if (degree_ != 0) throw std::logic_error("form of degree " + std::to_string(degree_) + " is not a scalar");
  return coefficient(Word{});
}

std::vector<CovectorId> Form::covectors() const {
  std::vector<CovectorId> out;
  for (const auto& [w, _] : terms_) out.insert(out.end(), w.begin(), w.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Form::all_coefficients_constant() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.is_constant(); });
}

void Form::adopt_degree(int d) {
  if (d == degree_) return;
  if (terms_.empty()) {
    degree_ = d;
    return;
  }
  throw std::logic_error("adding forms of degrees " + std::to_string(degree_) + " and " + std::to_string(d));
}

void Form::accumulate(const Word& w, const SymScalar& coef) {
  if (coef.is_zero()) return;
  adopt_degree(static_cast<int>(w.size()));
  auto [it, inserted] = terms_.try_emplace(w, coef);
  if (inserted) return;
  it->second += coef;
  if (it->second.is_zero()) terms_.erase(it);
}

Form& Form::operator+=(const Form& o) {
  if (o.terms_.empty()) return *this;
  adopt_degree(o.degree_);
  for (const auto& [w, c] : o.terms_) accumulate(w, c);
  return *this;
}

Form& Form::operator-=(const Form& o) {
  if (o.terms_.empty()) return *this;
  adopt_degree(o.degree_);
  for (const auto& [w, c] : o.terms_) accumulate(w, -c);
  return *this;
}

Form& Form::operator*=(const SymScalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  if (s.is_one()) return *this;
  for (auto& [_, c] : terms_) c *= s;
  return *this;
}

Form Form::operator-() const {
  Form f = *this;
  for (auto& [_, c] : f.terms_) c = -c;
  return f;
}

bool operator==(const Form& a, const Form& b) {
  if (a.terms_.empty() && b.terms_.empty()) return true;
  return a.degree_ == b.degree_ && a.terms_ == b.terms_;
}

Form wedge(const Form& f, const Form& g) {
  Form out(f.degree() + g.degree());
  for (const auto& [wf, cf] : f.terms()) {
    for (const auto& [wg, cg] : g.terms()) {
      Word w = wf;
      w.insert(w.end(), wg.begin(), wg.end());
      const int sign = sort_word(w);
      if (sign == 0) continue;
      const SymScalar c = cf * cg;
      out.accumulate(w, sign > 0 ? c : -c);
    }
  }
  return out;
}

// ------------------------------------------------------------ conjugation

void CovectorConjugation::pair(CovectorId a, CovectorId b) {
  partner_[a] = b;
  partner_[b] = a;
}

std::optional<CovectorId> CovectorConjugation::partner(CovectorId id) const {
  auto it = partner_.find(id);
  if (it == partner_.end()) return std::nullopt;
  return it->second;
}

Form conjugate(const Form& f, const SymbolTable& table, const CovectorConjugation& conj) {
  Form out(f.degree());
  for (const auto& [w, c] : f.terms()) {
    std::vector<CovectorId> word;
    for (CovectorId id : w) {
      auto p = conj.partner(id);
      if (!p) throw ConfigError("covector '" + covector_name(id) + "' has no conjugate partner");
      word.push_back(*p);
    }
    out += Form::monomial(word, conjugate(c, table));
  }
  return out;
}

Form substitute(const Form& f, const Bindings& bindings) {
  Form out(f.degree());
  for (const auto& [w, c] : f.terms()) out.accumulate(w, substitute(c, bindings));
  return out;
}

Form rewrite(const Form& f, const std::map<CovectorId, Form>& subs) {
  Form out(f.degree());
  for (const auto& [w, c] : f.terms()) {
    bool touched = false;
    for (CovectorId id : w)
      if (subs.count(id)) touched = true;
    if (!touched) {
      out.accumulate(w, c);
      continue;
    }
    Form acc = Form::scalar(c);
    for (CovectorId id : w) {
      auto it = subs.find(id);
      acc = wedge(acc, it == subs.end() ? Form::covector(id) : it->second);
    }
    out += acc;
  }
  return out;
}

Form rewrite_fully(const Form& f, const std::map<CovectorId, Form>& subs, int max_passes) {
  Form cur = f;
  for (int pass = 0; pass < max_passes; ++pass) {
    bool present = false;
    for (CovectorId id : cur.covectors())
      if (subs.count(id)) present = true;
    if (!present) return cur;
    cur = rewrite(cur, subs);
  }
  throw ConfigError("covector rewriting does not terminate");
}

// ------------------------------------------------------------- derivative

Form exterior_derivative(const SymScalar& s, const DerivationRules& rules) {
  Form out(1);
  if (s.is_constant()) return out;
  for (SymbolId v : s.symbols()) {
    auto it = rules.scalar.find(v);
    if (it == rules.scalar.end()) throw ConfigError("no differentiation rule for symbol '" + symbol_name(v) + "'");
    if (it->second.is_zero()) continue;
    out += it->second * s.derivative(v);
  }
  return out;
}

Form exterior_derivative(const Form& f, const DerivationRules& rules) {
  Form out(f.degree() + 1);
  for (const auto& [w, c] : f.terms()) {
    Form word_form(static_cast<int>(w.size()));
    word_form.accumulate(w, SymScalar(1));
    out += wedge(exterior_derivative(c, rules), word_form);
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto it = rules.covector.find(w[i]);
      if (it == rules.covector.end())
        throw ConfigError("no structure equation for covector '" + covector_name(w[i]) + "'");
      if (it->second.is_zero()) continue;
      Form left = Form::scalar(i % 2 == 0 ? c : -c);
      for (std::size_t j = 0; j < i; ++j) left = wedge(left, Form::covector(w[j]));
      Form right = Form::scalar(SymScalar(1));
      for (std::size_t j = i + 1; j < w.size(); ++j) right = wedge(right, Form::covector(w[j]));
      out += wedge(wedge(left, it->second), right);
    }
  }
  return out;
}

// ---------------------------------------------------------------- collect

std::vector<SymScalar> collect_linear(const Form& f, const CovectorBasis& basis) {
  std::vector<SymScalar> out(basis.size());
  if (f.is_zero()) return out;
  if (f.degree() != 1) throw std::logic_error("collect_linear expects a 1-form");
  for (const auto& [w, c] : f.terms()) {
    auto p = basis.position(w[0]);
    if (!p) throw ConfigError("covector '" + covector_name(w[0]) + "' is not in the target basis");
    out[*p] = c;
  }
  return out;
}

std::vector<PairCoefficient> collect(const Form& f, const CovectorBasis& basis) {
  std::vector<PairCoefficient> out;
  if (f.is_zero()) return out;
  if (f.degree() != 2) throw std::logic_error("collect expects a 2-form");
  for (const auto& [w, c] : f.terms()) {
    auto p = basis.position(w[0]), q = basis.position(w[1]);
    if (!p || !q)
      throw ConfigError("residual covector '" + covector_name(p ? w[1] : w[0]) + "' outside the target basis");
    if (*p < *q) out.push_back({*p, *q, c});
    else out.push_back({*q, *p, -c});
  }
  std::sort(out.begin(), out.end(), [](const PairCoefficient& x, const PairCoefficient& y) {
    return std::tie(x.first, x.second) < std::tie(y.first, y.second);
  });
  return out;
}

Form reconstruct(const std::vector<PairCoefficient>& pairs, const CovectorBasis& basis) {
  Form out(2);
  for (const auto& pc : pairs) out += Form::monomial({basis[pc.first], basis[pc.second]}, pc.value);
  return out;
}

Form rewrite_to_coframe(const Form& f, const CovectorBasis& base, const CovectorBasis& lifted, const SymMatrix& change) {
  if (change.rows() != change.cols() || static_cast<std::size_t>(change.rows()) != base.size() ||
      base.size() != lifted.size())
    throw std::invalid_argument("coframe change has the wrong shape");
  const auto inv = try_inverse(change);
  if (!inv) throw ModelError("coframe change matrix is not invertible");
  std::map<CovectorId, Form> subs;
  for (std::size_t i = 0; i < base.size(); ++i) {
    Form row(1);
    for (std::size_t j = 0; j < lifted.size(); ++j)
      row += Form::covector(lifted[j], (*inv)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    subs.emplace(base[i], std::move(row));
  }
  return rewrite(f, subs);
}

// ---------------------------------------------------------------- printing

namespace {

bool is_sum(const std::string& s) {
  int depth = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const char ch = s[i];
    if (ch == '(') ++depth;
    else if (ch == ')') --depth;
    else if (depth == 0 && (ch == '+' || ch == '-') && s[i - 1] == ' ') return true;
  }
  return false;
}

}  // namespace

std::string to_string(const Form& f, const CovectorBasis& basis) {
  if (f.is_zero()) return "0";
  struct Item {
    std::vector<std::size_t> key;
    std::vector<CovectorId> word;
    SymScalar coef;
  };
  std::vector<Item> items;
  for (const auto& [w, c] : f.terms()) {
    Item it;
    bool covered = true;
    for (CovectorId id : w)
      if (!basis.contains(id)) covered = false;
    std::vector<CovectorId> word(w.begin(), w.end());
    SymScalar coef = c;
    if (covered) {
      // Reorder the word by basis position and track the sign.
      std::vector<std::size_t> pos;
      for (CovectorId id : word) pos.push_back(*basis.position(id));
      int sign = 1;
      for (std::size_t i = 1; i < pos.size(); ++i)
        for (std::size_t j = i; j > 0 && pos[j - 1] > pos[j]; --j) {
          std::swap(pos[j - 1], pos[j]);
          std::swap(word[j - 1], word[j]);
          sign = -sign;
        }
      if (sign < 0) coef = -coef;
      it.key = pos;
    } else {
      for (CovectorId id : word) it.key.push_back(basis.size() + id);
    }
    it.word = std::move(word);
    it.coef = std::move(coef);
    items.push_back(std::move(it));
  }
  std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.key < y.key; });
  std::string out;
  for (const Item& it : items) {
    std::string w;
    for (CovectorId id : it.word) w += (w.empty() ? "" : "^") + covector_name(id);
    std::string c = to_string(it.coef);
    bool negative = false;
    if (c.front() == '-' && !is_sum(c)) {
      negative = true;
      c = c.substr(1);
    }
    if (is_sum(c)) c = "(" + c + ")";
    std::string body;
    if (w.empty()) body = c;
    else if (c == "1") body = w;
    else body = c + " " + w;
    if (out.empty()) out = (negative ? "-" : "") + body;
    else out += (negative ? " - " : " + ") + body;
  }
  return out;
}

}  // namespace cartan
