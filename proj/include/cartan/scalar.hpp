#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "cartan/polynomial.hpp"
#include "cartan/rational.hpp"
#include "cartan/symbol.hpp"

namespace cartan {

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Element of Q(i)(symbols) in canonical form: gcd(num, den) = 1 and the
// denominator's leading coefficient in the global monomial order is 1.
class SymScalar {
 public:
  SymScalar() : den_(1) {}
  SymScalar(long v) : num_(v), den_(1) {}                       // NOLINT(google-explicit-constructor)
  SymScalar(GaussianRational v) : num_(std::move(v)), den_(1) {}  // NOLINT(google-explicit-constructor)
  SymScalar(Polynomial p) : num_(std::move(p)), den_(1) {}      // NOLINT(google-explicit-constructor)

  static SymScalar symbol(SymbolId id) { return Polynomial::variable(id); }
  static SymScalar i() { return GaussianRational::i(); }
  static SymScalar rational(long num, long den) { return GaussianRational::fraction(num, den); }
  static SymScalar fraction(Polynomial num, Polynomial den);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return den_.is_constant() && num_.is_constant() && num_.constant_value().is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  GaussianRational constant_value() const;
  std::set<SymbolId> symbols() const;
  bool depends_on(SymbolId v) const { return num_.contains(v) || den_.contains(v); }

  SymScalar& operator+=(const SymScalar& o);
  SymScalar& operator-=(const SymScalar& o);
  SymScalar& operator*=(const SymScalar& o);
  SymScalar& operator/=(const SymScalar& o);
  SymScalar operator-() const;
  friend SymScalar operator+(SymScalar a, const SymScalar& b) { return a += b; }
  friend SymScalar operator-(SymScalar a, const SymScalar& b) { return a -= b; }
  friend SymScalar operator*(SymScalar a, const SymScalar& b) { return a *= b; }
  friend SymScalar operator/(SymScalar a, const SymScalar& b) { return a /= b; }
  friend bool operator==(const SymScalar& a, const SymScalar& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  SymScalar pow(int n) const;
  SymScalar derivative(SymbolId v) const;
  SymScalar inverse() const;

 private:
  SymScalar(Polynomial num, Polynomial den, bool) : num_(std::move(num)), den_(std::move(den)) {}
  void canonicalize();
  void normalize_leading();

  Polynomial num_;
  Polynomial den_;
};

using Bindings = std::map<SymbolId, SymScalar>;

// Canonical form; values are kept canonical, so this is a checked copy.
SymScalar simplify(const SymScalar& e);
SymScalar conjugate(const SymScalar& e, const SymbolTable& table);
// Simultaneous substitution. Throws DomainError if a denominator vanishes.
SymScalar substitute(const SymScalar& e, const Bindings& bindings);
Polynomial substitute_numerator_only(const Polynomial& p, const Bindings& bindings);
// Oracle: a*den(b) - b*den(a) == 0 without relying on canonical forms.
bool equal_by_cross_multiplication(const SymScalar& a, const SymScalar& b);
// Nonzero and a product of a constant, nonvanishing symbols and the listed
// nonvanishing polynomial factors.
bool is_unit(const SymScalar& e, const SymbolTable& table, const std::vector<Polynomial>& factors = {});

std::string to_string(const SymScalar& e);

}  // namespace cartan
