#include "cartan/model_file.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace cartan {

ParseError::ParseError(const std::string& source, const std::string& section, int line, int column,
                       const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         (section.empty() ? "" : " [" + section + "]") + ": " + message),
      section_(section),
      line_(line),
      column_(column) {}

namespace {

// ----------------------------------------------------------------- lexer

struct Token {
  enum class Kind { ident, number, op, end };
  Kind kind = Kind::end;
  std::string text;
  int column = 0;
};

struct Located : std::runtime_error {
  int column;
  Located(int c, const std::string& m) : std::runtime_error(m), column(c) {}
};

std::vector<Token> tokenize(const std::string& s, int base_column) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    const int col = base_column + static_cast<int>(i);
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      if (j < s.size() && s[j] == '[') {
        // Indexed name such as Y[delta1;rho].
        const std::size_t close = s.find(']', j);
        if (close == std::string::npos) throw Located(col, "unterminated index in name");
        std::string name;
        for (std::size_t k = i; k <= close; ++k)
          if (!std::isspace(static_cast<unsigned char>(s[k]))) name += s[k];
        out.push_back({Token::Kind::ident, name, col});
        i = close + 1;
        continue;
      }
      out.push_back({Token::Kind::ident, s.substr(i, j - i), col});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Kind::number, s.substr(i, j - i), col});
      i = j;
      continue;
    }
    if (s.compare(i, 2, "->") == 0 || s.compare(i, 2, "<-") == 0) {
      out.push_back({Token::Kind::op, s.substr(i, 2), col});
      i += 2;
      continue;
    }
    if (std::string("+-*/^()[],~=;:").find(ch) != std::string::npos) {
      out.push_back({Token::Kind::op, std::string(1, ch), col});
      ++i;
      continue;
    }
    throw Located(col, std::string("unexpected character '") + ch + "'");
  }
  out.push_back({Token::Kind::end, "", base_column + static_cast<int>(s.size())});
  return out;
}

// ----------------------------------------------------------------- values

struct Value {
  enum class Kind { scalar, form, field };
  Kind kind = Kind::scalar;
  SymScalar s;
  Form f;
  std::vector<FieldTerm> v;

  static Value scalar(SymScalar x) {
    Value r;
    r.s = std::move(x);
    return r;
  }
  static Value form(Form x) {
    Value r;
    r.kind = Kind::form;
    r.f = std::move(x);
    return r;
  }
  static Value field(std::vector<FieldTerm> x) {
    Value r;
    r.kind = Kind::field;
    r.v = std::move(x);
    return r;
  }
};

const char* kind_name(Value::Kind k) {
  switch (k) {
    case Value::Kind::scalar: return "scalar";
    case Value::Kind::form: return "form";
    case Value::Kind::field: return "vector field";
  }
  return "?";
}

struct Scope {
  const SymbolTable* table = nullptr;
  std::map<std::string, Value> names;
  std::set<std::string> fields;       // names usable in brackets and conj()
  std::set<std::string> covectors;    // names read as basis covectors
  const CovectorConjugation* conj = nullptr;
  bool allow_indexed = false;         // Y[...] unknowns
};

class ExprParser {
 public:
  ExprParser(const std::vector<Token>& toks, const Scope& scope) : t_(toks), scope_(scope) {}

  Value parse_all() {
    Value v = expr();
    if (peek().kind != Token::Kind::end) fail(peek(), "unexpected '" + peek().text + "'");
    return v;
  }

 private:
  const Token& peek() const { return t_[pos_]; }
  const Token& next() { return t_[pos_++]; }
  bool accept(const std::string& op) {
    if (peek().kind == Token::Kind::op && peek().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const std::string& op) {
    if (!accept(op)) fail(peek(), "expected '" + op + "'");
  }
  [[noreturn]] static void fail(const Token& t, const std::string& m) { throw Located(t.column, m); }

  Value expr() {
    Value v = term();
    while (true) {
      const Token& op = peek();
      if (accept("+")) v = add(v, term(), op, 1);
      else if (accept("-")) v = add(v, term(), op, -1);
      else return v;
    }
  }

  Value term() {
    Value v = unary();
    while (true) {
      const Token& op = peek();
      if (accept("*")) v = mul(v, unary(), op);
      else if (accept("/")) {
        Value d = unary();
        if (d.kind != Value::Kind::scalar) fail(op, "division by a " + std::string(kind_name(d.kind)));
        if (d.s.is_zero()) fail(op, "division by zero");
        v = mul(v, Value::scalar(d.s.inverse()), op);
      } else return v;
    }
  }

  Value unary() {
    const Token& op = peek();
    if (accept("-")) return mul(Value::scalar(SymScalar(-1)), unary(), op);
    if (accept("+")) return unary();
    return power();
  }

  Value power() {
    Value base = postfix();
    const Token& op = peek();
    if (!accept("^")) return base;
    Value rhs = unary_power();
    if (base.kind == Value::Kind::form && rhs.kind == Value::Kind::form) return Value::form(wedge(base.f, rhs.f));
    if (base.kind == Value::Kind::scalar && rhs.kind == Value::Kind::scalar && rhs.s.is_constant()) {
      const GaussianRational e = rhs.s.constant_value();
      if (e.imag() != 0 || e.real().get_den() != 1 || !e.real().get_num().fits_sint_p())
        fail(op, "exponent must be an integer");
      const long k = e.real().get_num().get_si();
      if (k < 0 && base.s.is_zero()) fail(op, "negative power of zero");
      return Value::scalar(base.s.pow(static_cast<int>(k)));
    }
    fail(op, "'^' needs two forms (wedge) or a scalar and an integer (power)");
  }

  // Right operand of '^': allows a sign and chains (a^b^c is a^(b^c)).
  Value unary_power() {
    const Token& op = peek();
    if (accept("-")) return mul(Value::scalar(SymScalar(-1)), unary_power(), op);
    return power();
  }

  Value postfix() {
    Value v = primary();
    while (true) {
      const Token& op = peek();
      if (!accept("~")) return v;
      v = conj_value(v, op);
    }
  }

  Value conj_value(const Value& v, const Token& at) {
    switch (v.kind) {
      case Value::Kind::scalar: return Value::scalar(conjugate(v.s, *scope_.table));
      case Value::Kind::form:
        if (!scope_.conj) fail(at, "conjugation of forms is not available here");
        try {
          return Value::form(conjugate(v.f, *scope_.table, *scope_.conj));
        } catch (const ConfigError& e) {
          fail(at, e.what());
        }
      case Value::Kind::field:
        if (v.v.size() == 1 && v.v[0].coef.is_one() && v.v[0].atom.kind == FieldAtom::Kind::named)
          return Value::field({{SymScalar(1), {FieldAtom::Kind::conjugate, 0, v.v[0].atom.first, {}}}});
        fail(at, "conj() of a vector field applies to a named field only");
    }
    fail(at, "cannot conjugate");
  }

  SymbolId symbol_arg(const char* fn) {
    const Token& t = next();
    if (t.kind != Token::Kind::ident) fail(t, std::string(fn) + "() expects a symbol");
    auto id = scope_.table->lookup(t.text);
    if (!id) fail(t, "unknown symbol '" + t.text + "'");
    return *id;
  }

  std::string field_name() {
    const Token& t = next();
    if (t.kind != Token::Kind::ident || !scope_.fields.count(t.text)) fail(t, "expected a named vector field");
    return t.text;
  }

  Value primary() {
    const Token& t = next();
    if (t.kind == Token::Kind::number) {
      mpz_class z(t.text);
      return Value::scalar(SymScalar(GaussianRational(mpq_class(z))));
    }
    if (t.kind == Token::Kind::op && t.text == "(") {
      Value v = expr();
      expect(")");
      return v;
    }
    if (t.kind == Token::Kind::op && t.text == "[") {
      const std::string a = field_name();
      expect(",");
      const std::string b = field_name();
      expect("]");
      return Value::field({{SymScalar(1), {FieldAtom::Kind::bracket, 0, a, b}}});
    }
    if (t.kind != Token::Kind::ident) fail(t, t.kind == Token::Kind::end ? "unexpected end of expression" : "unexpected '" + t.text + "'");
    if (t.text == "I") return Value::scalar(SymScalar::i());
    if ((t.text == "conj" || t.text == "d" || t.text == "D") && peek().text == "(") {
      expect("(");
      Value out;
      if (t.text == "conj") {
        const Value inner = expr();
        out = conj_value(inner, t);
      } else if (t.text == "d") {
        out = Value::form(Form::covector(differential_of(symbol_arg("d"))));
      } else {
        out = Value::field({{SymScalar(1), {FieldAtom::Kind::partial, symbol_arg("D"), {}, {}}}});
      }
      expect(")");
      return out;
    }
    if (auto it = scope_.names.find(t.text); it != scope_.names.end()) return it->second;
    if (scope_.fields.count(t.text)) return Value::field({{SymScalar(1), {FieldAtom::Kind::named, 0, t.text, {}}}});
    if (auto id = scope_.table->lookup(t.text)) return Value::scalar(SymScalar::symbol(*id));
    if (scope_.covectors.count(t.text)) return Value::form(Form::covector(intern_covector(t.text)));
    if (scope_.allow_indexed && t.text.find('[') != std::string::npos)
      return Value::scalar(SymScalar::symbol(intern_symbol(t.text)));
    fail(t, "unknown name '" + t.text + "'");
  }

  Value add(const Value& a, const Value& b, const Token& at, int sign) {
    if (a.kind != b.kind) fail(at, std::string("cannot add a ") + kind_name(a.kind) + " and a " + kind_name(b.kind));
    switch (a.kind) {
      case Value::Kind::scalar: return Value::scalar(sign > 0 ? a.s + b.s : a.s - b.s);
      case Value::Kind::form:
        if (!a.f.is_zero() && !b.f.is_zero() && a.f.degree() != b.f.degree()) fail(at, "adding forms of different degrees");
        return Value::form(sign > 0 ? a.f + b.f : a.f - b.f);
      case Value::Kind::field: {
        Value r = a;
        for (FieldTerm ft : b.v) {
          if (sign < 0) ft.coef = -ft.coef;
          r.v.push_back(std::move(ft));
        }
        return r;
      }
    }
    return a;
  }

  Value mul(const Value& a, const Value& b, const Token& at) {
    if (a.kind == Value::Kind::scalar && b.kind == Value::Kind::scalar) return Value::scalar(a.s * b.s);
    if (a.kind == Value::Kind::scalar || b.kind == Value::Kind::scalar) {
      const Value& s = a.kind == Value::Kind::scalar ? a : b;
      Value o = a.kind == Value::Kind::scalar ? b : a;
      if (o.kind == Value::Kind::form) return Value::form(o.f * s.s);
      for (FieldTerm& ft : o.v) ft.coef = ft.coef * s.s;
      return o;
    }
    fail(at, std::string("cannot multiply a ") + kind_name(a.kind) + " by a " + kind_name(b.kind) + " (use ^ for wedge)");
  }

  const std::vector<Token>& t_;
  const Scope& scope_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- lines

struct Line {
  int number = 0;
  std::string text;     // comment stripped, trimmed
  std::string comment;  // text after '#'
  int indent = 1;       // column of the first character
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

int bracket_depth(const std::string& s) {
  int d = 0;
  for (char c : s) {
    if (c == '(' || c == '[') ++d;
    else if (c == ')' || c == ']') --d;
  }
  return d;
}

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  Line pending;
  bool continuing = false;
  while (std::getline(in, raw)) {
    ++number;
    std::string comment;
    if (auto h = raw.find('#'); h != std::string::npos) {
      comment = trim(raw.substr(h + 1));
      raw = raw.substr(0, h);
    }
    std::string body = trim(raw);
    bool cont = false;
    if (!body.empty() && body.back() == '\\') {
      body = trim(body.substr(0, body.size() - 1));
      cont = true;
    }
    if (continuing) {
      pending.text += " " + body;
      if (!comment.empty()) pending.comment += (pending.comment.empty() ? "" : " ") + comment;
    } else {
      if (body.empty() && !cont) continue;
      pending = Line{number, body, comment, static_cast<int>(raw.find_first_not_of(" \t")) + 1};
    }
    continuing = cont || bracket_depth(pending.text) > 0;
    if (!continuing) out.push_back(pending);
  }
  if (continuing) out.push_back(pending);
  return out;
}

// Splits at top-level occurrences of sep.
std::vector<std::pair<std::string, int>> split_top(const std::string& s, char sep) {
  std::vector<std::pair<std::string, int>> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || (s[i] == sep && depth == 0)) {
      out.emplace_back(s.substr(start, i - start), static_cast<int>(start));
      start = i + 1;
      continue;
    }
    if (s[i] == '(' || s[i] == '[') ++depth;
    else if (s[i] == ')' || s[i] == ']') --depth;
  }
  return out;
}

// ---------------------------------------------------------------- parser

class ModelParser {
 public:
  ModelParser(const std::string& text, std::string source) : source_(std::move(source)), lines_(split_lines(text)) {}

  ModelFile run() {
    if (lines_.empty()) throw ParseError(source_, "", 1, 1, "empty model file");
    for (const Line& l : lines_) {
      line_ = &l;
      if (l.text.front() == '[') {
        open_section(l);
        continue;
      }
      if (section_.empty()) {
        header(l);
        continue;
      }
      dispatch(l);
    }
    finish();
    return std::move(out_);
  }

 private:
  [[noreturn]] void error(int column, const std::string& msg) const {
    throw ParseError(source_, section_, line_ ? line_->number : 0, column, msg);
  }
  [[noreturn]] void error(const std::string& msg) const { error(line_ ? line_->indent : 1, msg); }

  Value eval(const std::string& text, int offset, const Scope& scope) {
    try {
      const auto toks = tokenize(text, line_->indent + offset);
      return ExprParser(toks, scope).parse_all();
    } catch (const Located& e) {
      error(e.column, e.what());
    } catch (const DomainError& e) {
      error(line_->indent + offset, e.what());
    }
  }

  SymScalar eval_scalar(const std::string& text, int offset, const Scope& scope) {
    Value v = eval(text, offset, scope);
    if (v.kind != Value::Kind::scalar) error(line_->indent + offset, std::string("expected a scalar, found a ") + kind_name(v.kind));
    return v.s;
  }

  Form eval_form(const std::string& text, int offset, const Scope& scope) {
    Value v = eval(text, offset, scope);
    if (v.kind == Value::Kind::scalar && v.s.is_zero()) return Form(1);
    if (v.kind != Value::Kind::form) error(line_->indent + offset, std::string("expected a form, found a ") + kind_name(v.kind));
    return v.f;
  }

  // "lhs = rhs" with the offset of rhs inside the line.
  std::pair<std::string, std::pair<std::string, int>> key_value(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) error("expected 'name = value'");
    std::size_t r = eq + 1;
    while (r < text.size() && text[r] == ' ') ++r;
    return {trim(text.substr(0, eq)), {text.substr(r), static_cast<int>(r)}};
  }

  Scope base_scope() const {
    Scope s;
    s.table = &out_.input.group.table;
    s.conj = &conj_;
    return s;
  }

  void header(const Line& l) {
    const auto w = words(l.text);
    if (w.size() != 2 || w[0] != "model") error("expected 'model <name>' before the first section");
    if (!model_name_.empty()) error("model name given twice");
    model_name_ = w[1];
    out_.input.model.name = w[1];
  }

  void open_section(const Line& l) {
    if (l.text.back() != ']') error("unterminated section header");
    const auto w = words(l.text.substr(1, l.text.size() - 2));
    if (w.empty()) error("empty section header");
    static const std::set<std::string> plain{"coordinates", "frame", "parameters", "group", "script"};
    if (model_name_.empty()) error("expected 'model <name>' before the first section");
    if (plain.count(w[0]) && w.size() == 1) {
      if (!seen_.insert(w[0]).second) error("section [" + w[0] + "] appears twice");
      section_ = w[0];
      arg_.clear();
    } else if ((w[0] == "mc" || w[0] == "fixtures") && w.size() == 2) {
      section_ = w[0];
      arg_ = w[1];
      if (w[0] == "mc") {
        if (mc_raw_.count(arg_)) error("[mc " + arg_ + "] appears twice");
        mc_raw_[arg_];
      }
    } else {
      error("unknown section [" + l.text.substr(1, l.text.size() - 2) + "]");
    }
    if (section_ == "script" && !seen_.count("group")) error("[script] must follow [group]");
  }

  void dispatch(const Line& l) {
    if (section_ == "coordinates") coordinates(l);
    else if (section_ == "frame") frame(l);
    else if (section_ == "parameters") parameters(l);
    else if (section_ == "group") group(l);
    else if (section_ == "mc") mc(l);
    else if (section_ == "script") script(l);
    else fixture(l);
  }

  // [coordinates]
  void coordinates(const Line& l) {
    const auto w = words(l.text);
    SymbolTable& t = out_.input.group.table;
    if (w[0] == "complex" || w[0] == "real") {
      if (w.size() < 2) error("expected coordinate names");
      for (std::size_t k = 1; k < w.size(); ++k) {
        if (t.lookup(w[k])) error("'" + w[k] + "' declared twice");
        if (w[0] == "complex") {
          const SymbolId id = t.declare_complex(w[k], SymbolKind::coordinate);
          out_.input.model.coordinates.push_back(id);
          out_.input.model.coordinates.push_back(t.partner(id));
        } else {
          out_.input.model.coordinates.push_back(t.declare_real(w[k], SymbolKind::coordinate));
        }
      }
      for (SymbolId s : out_.input.model.coordinates) conj_.pair(differential_of(s), differential_of(t.partner(s)));
    } else if (w[0] == "nonvanishing") {
      const std::string rest = trim(l.text.substr(12));
      const SymScalar v = eval_scalar(rest, static_cast<int>(l.text.find(rest)), base_scope());
      if (!v.denominator().is_constant()) error("nonvanishing factor must be a polynomial");
      out_.input.group.unit_factors.push_back(v.numerator());
    } else {
      error("unknown key '" + w[0] + "' in [coordinates]");
    }
  }

  // [frame]
  void frame(const Line& l) {
    auto [key, rhs] = key_value(l.text);
    Model& m = out_.input.model;
    if (key == "order") {
      m.frame_order = words(rhs.first);
      for (const auto& n : m.frame_order)
        if (!fields_.count(n)) error(rhs.second, "unknown field '" + n + "' in order");
    } else if (key == "coframe") {
      m.coframe_names = words(rhs.first);
      for (const auto& n : m.coframe_names) base_covectors_.insert(n);
    } else if (key == "graph") {
      const auto over = rhs.first.find(" over ");
      if (over == std::string::npos) error("expected 'graph = <F> over <z1> <z2> <v>'");
      const SymScalar F = eval_scalar(rhs.first.substr(0, over), rhs.second, base_scope());
      const auto names = words(rhs.first.substr(over + 6));
      if (names.size() != 3) error("graph needs three coordinates");
      GraphData g;
      g.F = F;
      const SymbolTable& t = out_.input.group.table;
      SymbolId* slots[3] = {&g.z1, &g.z2, &g.v};
      for (int k = 0; k < 3; ++k) {
        auto id = t.lookup(names[static_cast<std::size_t>(k)]);
        if (!id) error("unknown coordinate '" + names[static_cast<std::size_t>(k)] + "'");
        *slots[k] = *id;
      }
      m.graph = g;
      for (const char* n : {"L1", "L2", "K"}) fields_.insert(n);
    } else {
      if (key.empty() || !std::isalpha(static_cast<unsigned char>(key[0])) || out_.input.group.table.lookup(key))
        error("invalid field name '" + key + "'");
      Scope s = base_scope();
      s.fields = fields_;
      Value v = eval(rhs.first, rhs.second, s);
      if (v.kind != Value::Kind::field) error(rhs.second + l.indent, "field '" + key + "' is not a vector field");
      m.definitions.push_back({key, v.v});
      fields_.insert(key);
    }
  }

  // [parameters]
  void parameters(const Line& l) {
    auto w = words(l.text);
    if (w[0] != "complex" && w[0] != "real") error("unknown key '" + w[0] + "' in [parameters]");
    bool nonzero = false, prolongation = false;
    while (w.size() > 1 && (w.back() == "nonzero" || w.back() == "prolongation")) {
      (w.back() == "nonzero" ? nonzero : prolongation) = true;
      w.pop_back();
    }
    if (w.size() < 2) error("expected parameter names");
    SymbolTable& t = out_.input.group.table;
    const SymbolKind kind = prolongation ? SymbolKind::prolongation : SymbolKind::parameter;
    for (std::size_t k = 1; k < w.size(); ++k) {
      if (t.lookup(w[k])) error("'" + w[k] + "' declared twice");
      SymbolId id;
      if (w[0] == "complex") id = t.declare_complex(w[k], kind, nonzero);
      else id = t.declare_real(w[k], kind, nonzero);
      conj_.pair(differential_of(id), differential_of(t.partner(id)));
      if (!prolongation) {
        out_.input.group.parameters.push_back(id);
        if (w[0] == "complex") out_.input.group.parameters.push_back(t.partner(id));
      }
    }
  }

  // [group]
  void group(const Line& l) {
    auto [key, rhs] = key_value(l.text);
    if (key == "coframe") {
      const auto names = words(rhs.first);
      out_.input.lifted = CovectorBasis::from_names(names);
      for (const auto& n : names) lifted_covectors_.insert(n);
    } else if (key == "row") {
      std::vector<SymScalar> row;
      for (const auto& [piece, off] : split_top(rhs.first, ','))
        row.push_back(eval_scalar(piece, rhs.second + off, base_scope()));
      rows_.push_back(std::move(row));
    } else {
      error("unknown key '" + key + "' in [group]");
    }
  }

  // [mc NAME]: evaluated when the script lifts to the stage, so that
  // conjugates see the reality conditions imposed before it.
  void mc(const Line& l) {
    auto kv = key_value(l.text);
    if (kv.first.empty()) error("missing form name");
    mc_raw_[arg_].push_back(l);
    mc_covectors_.insert(kv.first);
  }

  std::vector<NamedForm> evaluate_mc(const std::string& stage, const SymbolTable& table) {
    std::vector<NamedForm> out;
    std::map<std::string, Value> values;
    const std::string saved = section_;
    section_ = "mc " + stage;
    CovectorConjugation conj;
    for (SymbolId id : table.order()) conj.pair(differential_of(id), differential_of(table.partner(id)));
    for (const Line& l : mc_raw_.at(stage)) {
      line_ = &l;
      auto [key, rhs] = key_value(l.text);
      Scope s;
      s.table = &table;
      s.conj = &conj;
      s.names = values;
      const Form f = eval_form(rhs.first, rhs.second, s);
      if (!f.is_zero() && f.degree() != 1) error("'" + key + "' is not a 1-form");
      if (values.count(key)) error("'" + key + "' defined twice");
      values[key] = Value::form(f);
      out.push_back({key, f});
    }
    section_ = saved;
    return out;
  }

  // [script]
  void script(const Line& l) {
    const auto w = words(l.text);
    ScriptStep step;
    step.line = l.number;
    const std::string& kw = w[0];
    const std::string rest = trim(l.text.substr(kw.size()));
    const int rest_off = static_cast<int>(l.text.find(rest, kw.size()));
    if (kw == "lift") {
      if (w.size() != 2) error("expected 'lift <stage>'");
      if (!mc_raw_.count(w[1])) error("no [mc " + w[1] + "] section for stage '" + w[1] + "'");
      step.kind = ScriptStep::Kind::lift;
      step.name = w[1];
      add_stage(w[1]);
    } else if (kw == "absorb") {
      step.kind = ScriptStep::Kind::absorb;
      if (!rest.empty()) {
        Scope s = base_scope();
        s.allow_indexed = true;
        for (const auto& [piece, off] : split_top(rest, ',')) {
          const auto eq = piece.find('=');
          if (eq == std::string::npos) error(rest_off + off + l.indent, "expected 'lhs = rhs'");
          const SymScalar lhs = eval_scalar(piece.substr(0, eq), rest_off + off, s);
          const SymScalar r = eval_scalar(piece.substr(eq + 1), rest_off + off + static_cast<int>(eq) + 1, s);
          step.extra.push_back(lhs - r);
        }
      }
    } else if (kw == "normalize") {
      step.kind = ScriptStep::Kind::normalize;
      const SymbolTable& t = out_.input.group.table;
      if (w.size() == 3 && w[1] == "real") {
        auto id = t.lookup(w[2]);
        if (!id) error("unknown parameter '" + w[2] + "'");
        step.normalization.make_real = *id;
      } else {
        for (const auto& [piece, off] : split_top(rest, ',')) {
          const auto eq = piece.find('=');
          if (eq == std::string::npos) error(rest_off + off + l.indent, "expected 'parameter = value'");
          const std::string name = trim(piece.substr(0, eq));
          auto id = t.lookup(name);
          if (!id) error(rest_off + off + l.indent, "unknown parameter '" + name + "'");
          step.normalization.values.emplace_back(
              *id, eval_scalar(piece.substr(eq + 1), rest_off + off + static_cast<int>(eq) + 1, base_scope()));
        }
        if (step.normalization.values.empty()) error("normalize needs 'real <p>' or 'p = value'");
      }
    } else if (kw == "rebase") {
      // rebase OLD -> NEW = form
      step.kind = ScriptStep::Kind::rebase;
      const auto arrow = rest.find("->");
      const auto eq = rest.find('=');
      if (arrow == std::string::npos || eq == std::string::npos || eq < arrow) error("expected 'rebase <old> -> <new> = <form>'");
      step.old_name = trim(rest.substr(0, arrow));
      step.new_name = trim(rest.substr(arrow + 2, eq - arrow - 2));
      if (!base_covectors_.count(step.old_name)) error("'" + step.old_name + "' is not a base coframe element");
      Scope s = base_scope();
      s.covectors = base_covectors_;
      step.new_form = eval_form(rest.substr(eq + 1), rest_off + static_cast<int>(eq) + 1, s);
      base_covectors_.insert(step.new_name);
    } else if (kw == "prolong") {
      // prolong NAME: new <- mc, ...; t -> Form
      step.kind = ScriptStep::Kind::prolong;
      const auto colon = rest.find(':');
      const auto semi = rest.find(';');
      if (colon == std::string::npos || semi == std::string::npos || semi < colon)
        error("expected 'prolong <stage>: <new> <- <mc>, ...; <parameter> -> <form>'");
      ProlongationSpec& p = step.prolongation;
      p.stage = trim(rest.substr(0, colon));
      for (const auto& [piece, off] : split_top(rest.substr(colon + 1, semi - colon - 1), ',')) {
        const auto arrow = piece.find("<-");
        if (arrow == std::string::npos) error("expected '<new> <- <mc form>'");
        const std::string nn = trim(piece.substr(0, arrow)), mm = trim(piece.substr(arrow + 2));
        if (!mc_covectors_.count(mm)) error("'" + mm + "' is not a Maurer-Cartan form");
        p.adjoin.emplace_back(nn, mm);
        lifted_covectors_.insert(nn);
      }
      const std::string tail = rest.substr(semi + 1);
      const auto arrow = tail.find("->");
      if (arrow == std::string::npos) error("expected '<parameter> -> <form>'");
      const std::string pname = trim(tail.substr(0, arrow));
      auto id = out_.input.group.table.lookup(pname);
      if (!id || out_.input.group.table.at(*id).kind != SymbolKind::prolongation)
        error("'" + pname + "' is not a declared prolongation parameter");
      p.parameter = *id;
      p.parameter_form = trim(tail.substr(arrow + 2));
      mc_covectors_.insert(p.parameter_form);
      add_stage(p.stage);
    } else if (kw == "close") {
      if (w.size() != 1) error("'close' takes no arguments");
      step.kind = ScriptStep::Kind::close;
    } else {
      error("unknown script step '" + kw + "'");
    }
    out_.input.script.push_back(std::move(step));
  }

  void add_stage(const std::string& name) {
    for (const auto& s : out_.stage_names)
      if (s == name) error("stage '" + name + "' defined twice");
    out_.stage_names.push_back(name);
  }

  // [fixtures X]
  void fixture(const Line& l) {
    Fixture fx;
    fx.section = arg_;
    fx.line = l.number;
    fx.note = l.comment;
    std::string text = l.text;
    int shift = 0;
    if (text.rfind("inconclusive", 0) == 0 && text.size() > 12 && text[12] == ' ') {
      fx.inconclusive = true;
      const std::string rest = trim(text.substr(12));
      shift = static_cast<int>(text.find(rest, 12));
      text = rest;
    }
    auto [key, rhs] = key_value(text);
    rhs.second += shift;
    fx.label = key;
    Scope forms = base_scope();
    forms.covectors = base_covectors_;
    forms.covectors.insert(lifted_covectors_.begin(), lifted_covectors_.end());
    forms.covectors.insert(mc_covectors_.begin(), mc_covectors_.end());

    if (key.rfind("d ", 0) == 0) {
      fx.kind = fx.section == "base" ? Fixture::Kind::base_equation : Fixture::Kind::final_equation;
      if (fx.section != "base" && fx.section != "final") error("equation fixtures belong in [fixtures base] or [fixtures final]");
      fx.target = trim(key.substr(2));
      if (!forms.covectors.count(fx.target)) error("unknown form '" + fx.target + "'");
      fx.form = eval_form(rhs.first, rhs.second, forms);
    } else if (fx.section == "final" && key == "dimension") {
      fx.kind = Fixture::Kind::dimension;
      const SymScalar v = eval_scalar(rhs.first, rhs.second, base_scope());
      if (!v.is_constant()) error("dimension must be an integer");
      fx.dimension = static_cast<std::size_t>(v.constant_value().real().get_num().get_ui());
    } else if (fx.section == "frame") {
      fx.target = key;
      if (key == "k") {
        fx.kind = Fixture::Kind::scalar;
        fx.scalar = eval_scalar(rhs.first, rhs.second, base_scope());
      } else {
        if (!fields_.count(key)) error("unknown field '" + key + "'");
        fx.kind = Fixture::Kind::field;
        Value v = eval(rhs.first, rhs.second, base_scope());
        if (v.kind != Value::Kind::field) error("expected a vector field");
        for (const FieldTerm& t : v.v) {
          if (t.atom.kind != FieldAtom::Kind::partial) error("expected fields are written with D(x) only");
          fx.field += VectorField::partial(t.atom.coordinate) * t.coef;
        }
      }
    } else {
      // LETTER[form; a, b]
      const auto lb = key.find('['), semi = key.find(';'), comma = key.find(',', semi == std::string::npos ? 0 : semi),
                 rb = key.find(']');
      if (lb == std::string::npos || semi == std::string::npos || comma == std::string::npos || rb == std::string::npos ||
          !(lb < semi && semi < comma && comma < rb))
        error("expected a coefficient key such as U[sigma; sigma, rho]");
      fx.kind = Fixture::Kind::coefficient;
      fx.target = trim(key.substr(lb + 1, semi - lb - 1));
      fx.first = trim(key.substr(semi + 1, comma - semi - 1));
      fx.second = trim(key.substr(comma + 1, rb - comma - 1));
      fx.scalar = eval_scalar(rhs.first, rhs.second, base_scope());
    }
    out_.fixtures.push_back(std::move(fx));
  }

  void finish() {
    // Replay reality conditions so each stage's forms are read against its own table.
    SymbolTable replay = out_.input.group.table;
    for (ScriptStep& step : out_.input.script) {
      if (step.kind == ScriptStep::Kind::normalize && step.normalization.make_real) {
        replay.make_real(*step.normalization.make_real);
      } else if (step.kind == ScriptStep::Kind::lift) {
        step.mc_forms = evaluate_mc(step.name, replay);
      }
    }
    line_ = nullptr;
    for (const char* s : {"coordinates", "frame", "parameters", "group", "script"})
      if (!seen_.count(s)) throw ParseError(source_, s, 0, 0, std::string("missing section [") + s + "]");
    Model& m = out_.input.model;
    m.table = out_.input.group.table;
    if (m.frame_order.empty()) throw ParseError(source_, "frame", 0, 0, "missing 'order'");
    if (m.coframe_names.size() != m.frame_order.size())
      throw ParseError(source_, "frame", 0, 0, "coframe and order lengths differ");
    const std::size_t n = m.frame_order.size();
    if (rows_.size() != n) throw ParseError(source_, "group", 0, 0, "group matrix must have " + std::to_string(n) + " rows");
    ParamGroup& g = out_.input.group;
    g.matrix = SymMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (rows_[i].size() != n)
        throw ParseError(source_, "group", 0, 0, "row " + std::to_string(i + 1) + " has " + std::to_string(rows_[i].size()) + " entries");
      for (std::size_t j = 0; j < n; ++j) g.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows_[i][j];
    }
    if (out_.input.lifted.size() != n) throw ParseError(source_, "group", 0, 0, "lifted coframe must have " + std::to_string(n) + " names");
    for (const Fixture& f : out_.fixtures) {
      if (f.section == "frame" || f.section == "base" || f.section == "final") continue;
      bool known = false;
      for (const auto& s : out_.stage_names) known |= s == f.section;
      if (!known) throw ParseError(source_, "fixtures " + f.section, f.line, 1, "fixtures bound to unknown stage '" + f.section + "'");
    }
  }

  std::string source_;
  std::vector<Line> lines_;
  const Line* line_ = nullptr;
  std::string section_, arg_, model_name_;
  std::set<std::string> seen_;
  ModelFile out_;
  CovectorConjugation conj_;
  std::set<std::string> fields_, base_covectors_, lifted_covectors_, mc_covectors_;
  std::map<std::string, std::vector<Line>> mc_raw_;
  std::vector<std::vector<SymScalar>> rows_;
};

}  // namespace

ModelFile parse_model(const std::string& text, const std::string& source) {
  ModelFile m = ModelParser(text, source).run();
  m.source = source;
  return m;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "", 0, 0, "cannot open model file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str(), path);
}

SymScalar parse_scalar(const std::string& text, const SymbolTable& table) {
  Scope s;
  s.table = &table;
  s.allow_indexed = true;
  try {
    const auto toks = tokenize(text, 1);
    Value v = ExprParser(toks, s).parse_all();
    if (v.kind != Value::Kind::scalar) throw ParseError("<expression>", "", 1, 1, "not a scalar");
    return v.s;
  } catch (const Located& e) {
    throw ParseError("<expression>", "", 1, e.column, e.what());
  }
}

}  // namespace cartan
