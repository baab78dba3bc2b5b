#include "cartan/polynomial.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>

namespace cartan {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(SymbolId v, std::uint32_t exp) {
  Monomial m;
  if (exp == 0) return m;
  m.powers_.push_back({v, exp});
  m.degree_ = exp;
  return m;
}

std::uint32_t Monomial::exponent(SymbolId v) const {
  for (const Power& p : powers_)
    if (p.var == v) return p.exp;
  return 0;
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  std::size_t j = 0;
  for (const Power& p : powers_) {
    while (j < other.powers_.size() && other.powers_[j].var < p.var) ++j;
    if (j == other.powers_.size() || other.powers_[j].var != p.var || other.powers_[j].exp < p.exp)
      return false;
  }
  return true;
}

Monomial Monomial::quotient(const Monomial& other) const {
  Monomial q;
  std::size_t j = 0;
  for (const Power& p : powers_) {
    std::uint32_t e = p.exp;
    if (j < other.powers_.size() && other.powers_[j].var == p.var) e -= other.powers_[j++].exp;
    if (e > 0) {
      q.powers_.push_back({p.var, e});
      q.degree_ += e;
    }
  }
  return q;
}

Monomial Monomial::without(SymbolId v) const {
  Monomial q;
  for (const Power& p : powers_)
    if (p.var != v) {
      q.powers_.push_back(p);
      q.degree_ += p.exp;
    }
  return q;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial g;
  std::size_t i = 0, j = 0;
  while (i < a.powers_.size() && j < b.powers_.size()) {
    if (a.powers_[i].var == b.powers_[j].var) {
      const std::uint32_t e = std::min(a.powers_[i].exp, b.powers_[j].exp);
      g.powers_.push_back({a.powers_[i].var, e});
      g.degree_ += e;
      ++i;
      ++j;
    } else if (a.powers_[i].var < b.powers_[j].var) {
      ++i;
    } else {
      ++j;
    }
  }
  return g;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.degree_ = a.degree_ + b.degree_;
  std::size_t i = 0, j = 0;
  while (i < a.powers_.size() || j < b.powers_.size()) {
    if (j == b.powers_.size() || (i < a.powers_.size() && a.powers_[i].var < b.powers_[j].var)) {
      m.powers_.push_back(a.powers_[i++]);
    } else if (i == a.powers_.size() || b.powers_[j].var < a.powers_[i].var) {
      m.powers_.push_back(b.powers_[j++]);
    } else {
      m.powers_.push_back({a.powers_[i].var, a.powers_[i].exp + b.powers_[j].exp});
      ++i;
      ++j;
    }
  }
  return m;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
  const std::size_t n = std::min(a.powers_.size(), b.powers_.size());
  for (std::size_t k = 0; k < n; ++k) {
    const Power& p = a.powers_[k];
    const Power& q = b.powers_[k];
    if (p.var != q.var) return p.var < q.var ? std::strong_ordering::greater : std::strong_ordering::less;
    if (p.exp != q.exp) return p.exp <=> q.exp;
  }
  return a.powers_.size() <=> b.powers_.size();
}

std::size_t Monomial::hash() const {
  std::size_t h = degree_;
  for (const Power& p : powers_) h = h * 1000003u ^ (p.var * 131u + p.exp);
  return h;
}

namespace {

std::vector<Power> canonical_powers(const Monomial& m) {
  std::vector<Power> v(m.powers().begin(), m.powers().end());
  std::sort(v.begin(), v.end(), [](const Power& x, const Power& y) { return symbol_precedes(x.var, y.var); });
  return v;
}

}  // namespace

std::strong_ordering canonical_compare(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() <=> b.degree();
  const auto pa = canonical_powers(a), pb = canonical_powers(b);
  const std::size_t n = std::min(pa.size(), pb.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (pa[k].var != pb[k].var)
      return symbol_precedes(pa[k].var, pb[k].var) ? std::strong_ordering::greater : std::strong_ordering::less;
    if (pa[k].exp != pb[k].exp) return pa[k].exp <=> pb[k].exp;
  }
  return pa.size() <=> pb.size();
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(GaussianRational c) {
  if (!c.is_zero()) terms_.push_back({Monomial(), std::move(c)});
}

Polynomial Polynomial::variable(SymbolId v) { return monomial(Monomial::variable(v)); }

Polynomial Polynomial::monomial(Monomial m, GaussianRational c) {
  Polynomial p;
  if (!c.is_zero()) p.terms_.push_back({std::move(m), std::move(c)});
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  Polynomial p;
  p.terms_ = std::move(terms);
  p.normalize_sorted();
  return p;
}

void Polynomial::normalize_sorted() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.mono > y.mono; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (Term& t : terms_) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
  terms_ = std::move(out);
}

GaussianRational Polynomial::constant_value() const {
  if (terms_.empty()) return 0;
  if (!is_constant()) throw std::logic_error("polynomial is not constant");
  return terms_[0].coef;
}

const Term& Polynomial::canonical_leading() const {
  const Term* best = &terms_.front();
  for (const Term& t : terms_)
    if (canonical_compare(t.mono, best->mono) > 0) best = &t;
  return *best;
}

std::uint32_t Polynomial::total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

namespace {

std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    std::strong_ordering c = std::strong_ordering::equal;
    if (i == a.size()) c = std::strong_ordering::less;
    else if (j == b.size()) c = std::strong_ordering::greater;
    else c = a[i].mono <=> b[j].mono;
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back(subtract ? Term{b[j].mono, -b[j].coef} : b[j]);
      ++j;
    } else {
      GaussianRational s = subtract ? a[i].coef - b[j].coef : a[i].coef + b[j].coef;
      if (!s.is_zero()) out.push_back({a[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_, false);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_, true);
  return *this;
}

Polynomial& Polynomial::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  if (c.is_one()) return *this;
  for (Term& t : terms_) t.coef *= c;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (Term& t : p.terms_) t.coef = -t.coef;
  return p;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.terms_.size() == 1) return b.times_monomial(a.terms_[0].mono, a.terms_[0].coef);
  if (b.terms_.size() == 1) return a.times_monomial(b.terms_[0].mono, b.terms_[0].coef);
  std::vector<Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const Term& x : a.terms_)
    for (const Term& y : b.terms_) prod.push_back({x.mono * y.mono, x.coef * y.coef});
  return Polynomial::from_terms(std::move(prod));
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k)
    if (!(a.terms_[k].mono == b.terms_[k].mono) || !(a.terms_[k].coef == b.terms_[k].coef)) return false;
  return true;
}

Polynomial Polynomial::pow(std::uint32_t n) const {
  Polynomial result(1);
  Polynomial base = *this;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::times_monomial(const Monomial& m, const GaussianRational& c) const {
  Polynomial p;
  if (c.is_zero()) return p;
  p.terms_.reserve(terms_.size());
  for (const Term& t : terms_) p.terms_.push_back({t.mono * m, t.coef * c});
  return p;
}

Polynomial Polynomial::divide_by_monomial(const Monomial& m) const {
  Polynomial p;
  p.terms_.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (!m.divides(t.mono)) throw std::logic_error("monomial does not divide polynomial");
    p.terms_.push_back({t.mono.quotient(m), t.coef});
  }
  return p;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& d) const {
  if (d.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (is_zero()) return Polynomial();
  if (d.is_constant()) return *this * (GaussianRational(1) / d.constant_value());
  if (d.total_degree() > total_degree()) return std::nullopt;
  if (d.is_monomial()) {
    const Monomial& m = d.terms_[0].mono;
    for (const Term& t : terms_)
      if (!m.divides(t.mono)) return std::nullopt;
    Polynomial q = divide_by_monomial(m);
    return q * (GaussianRational(1) / d.terms_[0].coef);
  }
  for (SymbolId v : d.variables())
    if (d.degree_in(v) > degree_in(v)) return std::nullopt;
  const Term& lead = d.terms_.front();
  const GaussianRational inv = GaussianRational(1) / lead.coef;
  std::vector<Term> quotient;
  Polynomial r = *this;
  while (!r.is_zero()) {
    const Term& lt = r.terms_.front();
    if (!lead.mono.divides(lt.mono)) return std::nullopt;
    Term q{lt.mono.quotient(lead.mono), lt.coef * inv};
    r -= d.times_monomial(q.mono, q.coef);
    quotient.push_back(std::move(q));
  }
  Polynomial out;
  out.terms_ = std::move(quotient);
  return out;
}

Polynomial Polynomial::derivative(SymbolId v) const {
  std::vector<Term> out;
  for (const Term& t : terms_) {
    const std::uint32_t e = t.mono.exponent(v);
    if (e == 0) continue;
    out.push_back({t.mono.quotient(Monomial::variable(v)), t.coef * GaussianRational(static_cast<long>(e))});
  }
  return from_terms(std::move(out));
}

std::uint32_t Polynomial::degree_in(SymbolId v) const {
  std::uint32_t d = 0;
  for (const Term& t : terms_) d = std::max(d, t.mono.exponent(v));
  return d;
}

std::vector<Polynomial> Polynomial::coefficients_in(SymbolId v) const {
  std::vector<std::vector<Term>> buckets(degree_in(v) + 1);
  for (const Term& t : terms_) buckets[t.mono.exponent(v)].push_back({t.mono.without(v), t.coef});
  std::vector<Polynomial> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) {
    Polynomial p;
    p.terms_ = std::move(b);  // removing v from a sorted list keeps it sorted
    out.push_back(std::move(p));
  }
  return out;
}

Polynomial Polynomial::from_coefficients(SymbolId v, const std::vector<Polynomial>& coeffs) {
  std::vector<Term> terms;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const Monomial vk = Monomial::variable(v, static_cast<std::uint32_t>(k));
    for (const Term& t : coeffs[k].terms_) terms.push_back({t.mono * vk, t.coef});
  }
  return from_terms(std::move(terms));
}

std::vector<SymbolId> Polynomial::variables() const {
  std::vector<SymbolId> vars;
  for (const Term& t : terms_)
    for (const Power& p : t.mono.powers()) vars.push_back(p.var);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

bool Polynomial::contains(SymbolId v) const {
  for (const Term& t : terms_)
    if (t.mono.exponent(v) > 0) return true;
  return false;
}

Monomial Polynomial::monomial_content() const {
  if (terms_.empty()) return {};
  Monomial g = terms_.front().mono;
  for (const Term& t : terms_) {
    if (g.is_one()) break;
    g = Monomial::gcd(g, t.mono);
  }
  return g;
}

Polynomial Polynomial::map_symbols(const std::function<SymbolId(SymbolId)>& f, bool conjugate_coefficients) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) {
    Monomial m;
    for (const Power& p : t.mono.powers()) m = m * Monomial::variable(f(p.var), p.exp);
    out.push_back({std::move(m), conjugate_coefficients ? t.coef.conj() : t.coef});
  }
  return from_terms(std::move(out));
}

std::size_t Polynomial::hash() const {
  std::size_t h = terms_.size();
  for (const Term& t : terms_) h = h * 31u ^ t.mono.hash() ^ (t.coef.hash() << 1u);
  return h;
}

// --------------------------------------------------------------------- gcd

namespace {

Polynomial make_monic(Polynomial p) {
  if (p.is_zero()) return p;
  return p * (GaussianRational(1) / p.leading().coef);
}

struct GaussInt {
  mpz_class re, im;
  bool is_zero() const { return re == 0 && im == 0; }
};

// Nearest-integer quotient rounding of num/den.
mpz_class round_div(const mpz_class& num, const mpz_class& den) {
  mpz_class twice = 2 * num + den;
  mpz_class den2 = 2 * den;
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), twice.get_mpz_t(), den2.get_mpz_t());
  return q;
}

GaussInt gauss_gcd(GaussInt a, GaussInt b) {
  while (!b.is_zero()) {
    const mpz_class norm = b.re * b.re + b.im * b.im;
    const mpz_class nr = a.re * b.re + a.im * b.im;  // a * conj(b)
    const mpz_class ni = a.im * b.re - a.re * b.im;
    const mpz_class qr = round_div(nr, norm), qi = round_div(ni, norm);
    GaussInt r{a.re - (qr * b.re - qi * b.im), a.im - (qr * b.im + qi * b.re)};
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Scales p to Gaussian-integer coefficients with trivial Z[i]-content.
// Keeps pseudo-remainder sequences from growing.
Polynomial integer_normalize(Polynomial p) {
  if (p.is_zero()) return p;
  mpz_class l = 1;
  for (const Term& t : p.terms()) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.real().get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.imag().get_den_mpz_t());
  }
  GaussInt g{0, 0};
  for (const Term& t : p.terms()) {
    GaussInt c{t.coef.real().get_num() * (l / t.coef.real().get_den()),
               t.coef.imag().get_num() * (l / t.coef.imag().get_den())};
    g = gauss_gcd(std::move(g), std::move(c));
    if (abs(g.re) + abs(g.im) == 1) break;
  }
  return p * (GaussianRational(mpq_class(l)) / GaussianRational(mpq_class(g.re), mpq_class(g.im)));
}

Polynomial exact(const Polynomial& a, const Polynomial& b) {
  auto q = a.divide_exact(b);
  if (!q) throw std::logic_error("internal: expected exact polynomial division");
  return *q;
}

Polynomial gcd_primitive(const Polynomial& a, const Polynomial& b);

Polynomial content_in(const Polynomial& p, SymbolId v) {
  Polynomial g;
  for (const Polynomial& c : p.coefficients_in(v)) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? make_monic(c) : gcd(g, c);
    if (g.is_constant()) return Polynomial(1);
  }
  return g;
}

Polynomial primitive_part(const Polynomial& p, SymbolId v) {
  const Polynomial c = content_in(p, v);
  return integer_normalize(c.is_constant() ? p : exact(p, c));
}

// Pseudo-remainder of a by b with respect to v, deg_v(a) >= deg_v(b).
Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, SymbolId v) {
  std::vector<Polynomial> r = a.coefficients_in(v);
  const std::vector<Polynomial> bc = b.coefficients_in(v);
  const std::size_t n = bc.size() - 1;
  const Polynomial& lb = bc.back();
  auto trim = [&] {
    while (!r.empty() && r.back().is_zero()) r.pop_back();
  };
  trim();
  while (!r.empty() && r.size() - 1 >= n) {
    const std::size_t d = r.size() - 1;
    const Polynomial lr = r.back();
    const std::size_t shift = d - n;
    for (std::size_t k = 0; k < r.size(); ++k) {
      Polynomial next = r[k] * lb;
      if (k >= shift && k - shift < bc.size()) next -= lr * bc[k - shift];
      r[k] = std::move(next);
    }
    trim();
    if (!r.empty()) {
      // Drop the integer content accumulated by the lc(b) multiplications.
      Polynomial joined = integer_normalize(Polynomial::from_coefficients(v, r));
      r = joined.coefficients_in(v);
    }
  }
  return Polynomial::from_coefficients(v, r);
}

// Modular coprimality test. Images mod a prime under random evaluation of all
// variables but one bound the degree of the true gcd from above whenever both
// leading coefficients survive, so an answer of true is exact.
constexpr std::uint64_t kPrime = 998244353;  // 1 mod 4, so I has an image
constexpr std::uint64_t kImagUnit = 911660635;  // 3^((p-1)/4)

std::uint64_t mulmod(std::uint64_t x, std::uint64_t y) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % kPrime);
}

std::uint64_t powmod(std::uint64_t x, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, x = mulmod(x, x))
    if (e & 1) r = mulmod(r, x);
  return r;
}

std::optional<std::uint64_t> reduce_mod(const mpq_class& q) {
  const std::uint64_t d = mpz_fdiv_ui(q.get_den_mpz_t(), kPrime);
  if (d == 0) return std::nullopt;
  const std::uint64_t n = mpz_fdiv_ui(q.get_num_mpz_t(), kPrime);
  return mulmod(n, powmod(d, kPrime - 2));
}

using ModPoly = std::vector<std::uint64_t>;

void trim_mod(ModPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

std::size_t mod_gcd_degree(ModPoly a, ModPoly b) {
  trim_mod(a);
  trim_mod(b);
  while (!b.empty()) {
    const std::uint64_t inv = powmod(b.back(), kPrime - 2);
    while (a.size() >= b.size()) {
      const std::uint64_t f = mulmod(a.back(), inv);
      const std::size_t shift = a.size() - b.size();
      for (std::size_t k = 0; k < b.size(); ++k)
        a[k + shift] = (a[k + shift] + kPrime - mulmod(f, b[k])) % kPrime;
      trim_mod(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

std::optional<ModPoly> image_in(const Polynomial& p, SymbolId v, const std::map<SymbolId, std::uint64_t>& point) {
  ModPoly out(p.degree_in(v) + 1, 0);
  for (const Term& t : p.terms()) {
    auto re = reduce_mod(t.coef.real()), im = reduce_mod(t.coef.imag());
    if (!re || !im) return std::nullopt;
    std::uint64_t c = (*re + mulmod(*im, kImagUnit)) % kPrime;
    std::uint32_t e = 0;
    for (const Power& pw : t.mono.powers()) {
      if (pw.var == v) e = pw.exp;
      else c = mulmod(c, powmod(point.at(pw.var), pw.exp));
    }
    out[e] = (out[e] + c) % kPrime;
  }
  return out;
}

bool certainly_coprime(const Polynomial& a, const Polynomial& b, const std::vector<SymbolId>& common) {
  std::set<SymbolId> vars;
  for (SymbolId v : a.variables()) vars.insert(v);
  for (SymbolId v : b.variables()) vars.insert(v);
  std::mt19937_64 rng(0x5eed);
  for (SymbolId v : common) {
    bool decided = false;
    for (int attempt = 0; attempt < 3 && !decided; ++attempt) {
      std::map<SymbolId, std::uint64_t> point;
      for (SymbolId w : vars) point[w] = 2 + rng() % (kPrime - 3);
      auto ia = image_in(a, v, point), ib = image_in(b, v, point);
      if (!ia || !ib) return false;
      if (ia->back() == 0 || ib->back() == 0) continue;
      if (mod_gcd_degree(std::move(*ia), std::move(*ib)) != 0) return false;
      decided = true;
    }
    if (!decided) return false;
  }
  return true;
}

// Both arguments free of monomial content and nonconstant.
Polynomial gcd_primitive(const Polynomial& a, const Polynomial& b) {
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  const auto va = a.variables(), vb = b.variables();
  std::vector<SymbolId> common;
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
  if (common.empty()) return Polynomial(1);
  if (certainly_coprime(a, b, common)) return Polynomial(1);
  if (a.total_degree() >= b.total_degree()) {
    if (a.divide_exact(b)) return make_monic(b);
  } else if (b.divide_exact(a)) {
    return make_monic(a);
  }
  for (SymbolId v : va)
    if (!std::binary_search(vb.begin(), vb.end(), v)) return gcd(content_in(a, v), b);
  for (SymbolId v : vb)
    if (!std::binary_search(va.begin(), va.end(), v)) return gcd(a, content_in(b, v));

  SymbolId v = common.front();
  std::uint32_t best = ~0u;
  for (SymbolId w : common) {
    const std::uint32_t d = std::max(a.degree_in(w), b.degree_in(w));
    if (d < best) {
      best = d;
      v = w;
    }
  }
  const Polynomial ca = content_in(a, v), cb = content_in(b, v);
  const Polynomial cg = gcd(ca, cb);
  Polynomial p = integer_normalize(ca.is_constant() ? a : exact(a, ca));
  Polynomial q = integer_normalize(cb.is_constant() ? b : exact(b, cb));
  if (p.degree_in(v) < q.degree_in(v)) std::swap(p, q);
  while (true) {
    if (q.degree_in(v) == 0) {
      p = Polynomial(1);
      break;
    }
    Polynomial r = pseudo_remainder(p, q, v);
    if (r.is_zero()) {
      p = primitive_part(q, v);
      break;
    }
    p = std::move(q);
    q = primitive_part(r, v);
  }
  return make_monic(p * cg);
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return make_monic(b);
  if (b.is_zero()) return make_monic(a);
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  const Monomial ma = a.monomial_content(), mb = b.monomial_content();
  const Monomial mg = Monomial::gcd(ma, mb);
  if (a.is_monomial() || b.is_monomial()) return Polynomial::monomial(mg);
  const Polynomial pa = ma.is_one() ? a : a.divide_by_monomial(ma);
  const Polynomial pb = mb.is_one() ? b : b.divide_by_monomial(mb);
  if (pa == pb) return make_monic(pa.times_monomial(mg, 1));
  return make_monic(gcd_primitive(pa, pb).times_monomial(mg, 1));
}

// ---------------------------------------------------------------- printing

std::string to_string(const Monomial& m) {
  std::string out;
  for (const Power& p : canonical_powers(m)) {
    if (!out.empty()) out += "*";
    out += symbol_name(p.var);
    if (p.exp > 1) out += "^" + std::to_string(p.exp);
  }
  return out.empty() ? "1" : out;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::vector<const Term*> order;
  for (const Term& t : p.terms()) order.push_back(&t);
  std::sort(order.begin(), order.end(),
            [](const Term* x, const Term* y) { return canonical_compare(x->mono, y->mono) > 0; });
  std::string out;
  for (const Term* t : order) {
    std::string c = t->coef.to_string();
    bool neg = !c.empty() && c[0] == '-';
    if (neg) c.erase(0, 1);
    std::string body;
    if (t->mono.is_one()) {
      body = c;
    } else if (c == "1") {
      body = to_string(t->mono);
    } else {
      body = c + "*" + to_string(t->mono);
    }
    if (out.empty()) out = (neg ? "-" : "") + body;
    else out += (neg ? " - " : " + ") + body;
  }
  return out;
}

}  // namespace cartan
