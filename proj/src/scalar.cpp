#include "cartan/scalar.hpp"

#include <algorithm>

namespace cartan {

namespace {

Polynomial exact_div(const Polynomial& a, const Polynomial& b) {
  if (b.is_constant()) return a * (GaussianRational(1) / b.constant_value());
  auto q = a.divide_exact(b);
  if (!q) throw std::logic_error("internal: inexact division in rational function arithmetic");
  return *q;
}

}  // namespace

SymScalar SymScalar::fraction(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw DomainError("division by the zero polynomial");
  SymScalar s(std::move(num), std::move(den), true);
  s.canonicalize();
  return s;
}

void SymScalar::canonicalize() {
  if (num_.is_zero()) {
    den_ = Polynomial(1);
    return;
  }
  if (!den_.is_constant()) {
    const Polynomial g = gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = exact_div(num_, g);
      den_ = exact_div(den_, g);
    }
  }
  normalize_leading();
}

void SymScalar::normalize_leading() {
  const GaussianRational lc = den_.canonical_leading().coef;
  if (lc.is_one()) return;
  const GaussianRational inv = GaussianRational(1) / lc;
  num_ *= inv;
  den_ *= inv;
}

GaussianRational SymScalar::constant_value() const {
  if (!is_constant()) throw std::logic_error("expression '" + to_string(*this) + "' is not constant");
  return num_.constant_value() / den_.constant_value();
}

std::set<SymbolId> SymScalar::symbols() const {
  std::set<SymbolId> out;
  for (SymbolId v : num_.variables()) out.insert(v);
  for (SymbolId v : den_.variables()) out.insert(v);
  return out;
}

SymScalar& SymScalar::operator+=(const SymScalar& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    if (num_.is_zero()) {
      den_ = Polynomial(1);
      return *this;
    }
    if (!den_.is_constant()) canonicalize();
    return *this;
  }
  const Polynomial g = gcd(den_, o.den_);
  const Polynomial d1 = exact_div(den_, g), d2 = exact_div(o.den_, g);
  num_ = num_ * d2 + o.num_ * d1;
  den_ = den_ * d2;
  canonicalize();
  return *this;
}

SymScalar& SymScalar::operator-=(const SymScalar& o) { return *this += -o; }

SymScalar& SymScalar::operator*=(const SymScalar& o) {
  if (is_zero() || o.is_zero()) return *this = SymScalar();
  if (den_.is_constant() && o.den_.is_constant()) {
    num_ = num_ * o.num_;
    den_ = den_ * o.den_;
    normalize_leading();
    return *this;
  }
  const Polynomial g1 = gcd(num_, o.den_), g2 = gcd(o.num_, den_);
  num_ = exact_div(num_, g1) * exact_div(o.num_, g2);
  den_ = exact_div(den_, g2) * exact_div(o.den_, g1);
  normalize_leading();
  return *this;
}

SymScalar SymScalar::inverse() const {
  if (is_zero()) throw DomainError("division by zero");
  SymScalar s(den_, num_, true);
  s.normalize_leading();
  return s;
}

SymScalar& SymScalar::operator/=(const SymScalar& o) { return *this *= o.inverse(); }

SymScalar SymScalar::operator-() const {
  SymScalar s = *this;
  s.num_ = -s.num_;
  return s;
}

SymScalar SymScalar::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  SymScalar s(num_.pow(static_cast<std::uint32_t>(n)), den_.pow(static_cast<std::uint32_t>(n)), true);
  s.normalize_leading();
  return s;
}

SymScalar SymScalar::derivative(SymbolId v) const {
  const Polynomial dn = num_.derivative(v);
  if (!den_.contains(v)) return fraction(dn, den_);
  const Polynomial dd = den_.derivative(v);
  return fraction(dn * den_ - num_ * dd, den_ * den_);
}

SymScalar simplify(const SymScalar& e) { return SymScalar::fraction(e.numerator(), e.denominator()); }

SymScalar conjugate(const SymScalar& e, const SymbolTable& table) {
  auto f = [&](SymbolId id) { return table.partner(id); };
  return SymScalar::fraction(e.numerator().map_symbols(f, true), e.denominator().map_symbols(f, true));
}

namespace {

SymScalar substitute_poly(const Polynomial& p, const Bindings& bindings,
                          std::map<std::pair<SymbolId, std::uint32_t>, SymScalar>& cache) {
  SymScalar sum;
  // Accumulate the unbound part as a polynomial to avoid needless gcds.
  std::vector<Term> plain;
  for (const Term& t : p.terms()) {
    Monomial free;
    SymScalar factor(t.coef);
    bool bound = false;
    for (const Power& pw : t.mono.powers()) {
      auto it = bindings.find(pw.var);
      if (it == bindings.end()) {
        free = free * Monomial::variable(pw.var, pw.exp);
        continue;
      }
      bound = true;
      auto key = std::make_pair(pw.var, pw.exp);
      auto c = cache.find(key);
      if (c == cache.end()) c = cache.emplace(key, it->second.pow(static_cast<int>(pw.exp))).first;
      factor *= c->second;
    }
    if (!bound) {
      plain.push_back(t);
      continue;
    }
    sum += factor * SymScalar(Polynomial::monomial(free));
  }
  sum += SymScalar(Polynomial::from_terms(std::move(plain)));
  return sum;
}

}  // namespace

Polynomial substitute_numerator_only(const Polynomial& p, const Bindings& bindings) {
  std::map<std::pair<SymbolId, std::uint32_t>, SymScalar> cache;
  const SymScalar s = substitute_poly(p, bindings, cache);
  if (!s.denominator().is_constant()) throw std::logic_error("substitution is not polynomial");
  return s.numerator() * (GaussianRational(1) / s.denominator().constant_value());
}

SymScalar substitute(const SymScalar& e, const Bindings& bindings) {
  if (bindings.empty()) return e;
  bool touches = false;
  for (const auto& [v, _] : bindings)
    if (e.depends_on(v)) {
      touches = true;
      break;
    }
  if (!touches) return e;
  std::map<std::pair<SymbolId, std::uint32_t>, SymScalar> cache;
  const SymScalar den = substitute_poly(e.denominator(), bindings, cache);
  if (den.is_zero())
    throw DomainError("substitution makes the denominator " + to_string(SymScalar(e.denominator())) + " vanish");
  return substitute_poly(e.numerator(), bindings, cache) / den;
}

bool equal_by_cross_multiplication(const SymScalar& a, const SymScalar& b) {
  return (a.numerator() * b.denominator() - b.numerator() * a.denominator()).is_zero();
}

namespace {

bool is_unit_poly(Polynomial p, const SymbolTable& table, const std::vector<Polynomial>& factors) {
  if (p.is_zero()) return false;
  const Monomial m = p.monomial_content();
  for (const Power& pw : m.powers())
    if (!table.contains(pw.var) || !table.at(pw.var).nonvanishing) return false;
  if (!m.is_one()) p = p.divide_by_monomial(m);
  bool progress = true;
  while (!p.is_constant() && progress) {
    progress = false;
    for (const Polynomial& f : factors) {
      if (auto q = p.divide_exact(f)) {
        p = std::move(*q);
        progress = true;
        break;
      }
    }
  }
  return p.is_constant();
}

}  // namespace

bool is_unit(const SymScalar& e, const SymbolTable& table, const std::vector<Polynomial>& factors) {
  return is_unit_poly(e.numerator(), table, factors) && is_unit_poly(e.denominator(), table, factors);
}

// ---------------------------------------------------------------- printing

namespace {

struct CoefParts {
  bool negative = false;
  std::string factor;  // "" for 1
  mpz_class den = 1;
};

CoefParts split_coefficient(const GaussianRational& c) {
  CoefParts out;
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), c.real().get_den_mpz_t(), c.imag().get_den_mpz_t());
  mpz_class p = c.real().get_num() * (l / c.real().get_den());
  mpz_class q = c.imag().get_num() * (l / c.imag().get_den());
  out.den = l;
  if (q == 0) {
    out.negative = p < 0;
    mpz_class mag = abs(p);
    if (mag != 1) out.factor = mag.get_str();
  } else if (p == 0) {
    out.negative = q < 0;
    mpz_class mag = abs(q);
    out.factor = mag == 1 ? "I" : mag.get_str() + "*I";
  } else {
    if (p < 0) {
      out.negative = true;
      p = -p;
      q = -q;
    }
    const mpz_class aq = abs(q);
    std::string qs = aq == 1 ? "I" : aq.get_str() + "*I";
    out.factor = "(" + p.get_str() + (q < 0 ? "-" : "+") + qs + ")";
  }
  return out;
}

std::string format_term(const Term& t, const Monomial& den, bool first) {
  const Monomial g = Monomial::gcd(t.mono, den);
  const Monomial n = t.mono.quotient(g), d = den.quotient(g);
  const CoefParts c = split_coefficient(t.coef);
  std::string num = c.factor;
  if (!n.is_one()) num += (num.empty() ? "" : "*") + to_string(n);
  if (num.empty()) num = "1";
  std::string dstr;
  if (c.den != 1) dstr = c.den.get_str();
  if (!d.is_one()) dstr += (dstr.empty() ? "" : "*") + to_string(d);
  std::string body = num;
  if (!dstr.empty()) {
    const bool wrap = dstr.find('*') != std::string::npos;
    body += "/" + (wrap ? "(" + dstr + ")" : dstr);
  }
  if (first) return (c.negative ? "-" : "") + body;
  return (c.negative ? " - " : " + ") + body;
}

}  // namespace

std::string to_string(const SymScalar& e) {
  const Polynomial& num = e.numerator();
  const Polynomial& den = e.denominator();
  if (num.is_zero()) return "0";
  if (den.is_monomial()) {
    // Denominator leading coefficient is 1, so den is a bare monomial.
    std::vector<const Term*> order;
    for (const Term& t : num.terms()) order.push_back(&t);
    std::sort(order.begin(), order.end(),
              [](const Term* x, const Term* y) { return canonical_compare(x->mono, y->mono) > 0; });
    std::string out;
    for (const Term* t : order) out += format_term(*t, den.leading().mono, out.empty());
    return out;
  }
  std::string n = to_string(num);
  std::string d = to_string(den);
  if (!num.is_monomial()) n = "(" + n + ")";
  else if (n.front() == '-') n = "-(" + n.substr(1) + ")";
  return n + "/(" + d + ")";
}

}  // namespace cartan
