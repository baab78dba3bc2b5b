#pragma once

#include <boost/container/small_vector.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cartan/rational.hpp"
#include "cartan/symbol.hpp"

namespace cartan {

struct Power {
  SymbolId var;
  std::uint32_t exp;
  friend bool operator==(const Power&, const Power&) = default;
};

// Power product with factors sorted by symbol id.
class Monomial {
 public:
  Monomial() = default;
  static Monomial variable(SymbolId v, std::uint32_t exp = 1);

  bool is_one() const { return powers_.empty(); }
  std::uint32_t degree() const { return degree_; }
  std::uint32_t exponent(SymbolId v) const;
  std::span<const Power> powers() const { return {powers_.data(), powers_.size()}; }

  bool divides(const Monomial& other) const;
  // this / other; requires other.divides(*this).
  Monomial quotient(const Monomial& other) const;
  Monomial without(SymbolId v) const;
  static Monomial gcd(const Monomial& a, const Monomial& b);

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.degree_ == b.degree_ && a.powers_ == b.powers_;
  }
  // Graded lexicographic order on symbol ids (internal storage order).
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

  std::size_t hash() const;

 private:
  boost::container::small_vector<Power, 4> powers_;
  std::uint32_t degree_ = 0;
};

// Graded lexicographic comparison under the global symbol order.
std::strong_ordering canonical_compare(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  GaussianRational coef;
};

// Sparse multivariate polynomial over Q(i); terms strictly decreasing in the
// internal monomial order, coefficients nonzero.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(GaussianRational c);  // NOLINT(google-explicit-constructor)
  Polynomial(long c) : Polynomial(GaussianRational(c)) {}  // NOLINT(google-explicit-constructor)
  static Polynomial variable(SymbolId v);
  static Polynomial monomial(Monomial m, GaussianRational c = 1);
  static Polynomial from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  bool is_monomial() const { return terms_.size() == 1; }
  GaussianRational constant_value() const;
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }
  // Leading term in the global (printing) order.
  const Term& canonical_leading() const;
  std::uint32_t total_degree() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const GaussianRational& c);
  Polynomial operator-() const;
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const GaussianRational& c) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  Polynomial pow(std::uint32_t n) const;
  Polynomial times_monomial(const Monomial& m, const GaussianRational& c) const;
  // q with q * d == *this, if it exists.
  std::optional<Polynomial> divide_exact(const Polynomial& d) const;
  Polynomial divide_by_monomial(const Monomial& m) const;

  Polynomial derivative(SymbolId v) const;
  std::uint32_t degree_in(SymbolId v) const;
  // Coefficients as a polynomial in v, index = power of v.
  std::vector<Polynomial> coefficients_in(SymbolId v) const;
  static Polynomial from_coefficients(SymbolId v, const std::vector<Polynomial>& coeffs);
  std::vector<SymbolId> variables() const;
  bool contains(SymbolId v) const;
  Monomial monomial_content() const;

  Polynomial map_symbols(const std::function<SymbolId(SymbolId)>& f, bool conjugate_coefficients) const;

  std::size_t hash() const;

 private:
  void normalize_sorted();
  std::vector<Term> terms_;
};

// Greatest common divisor, scaled so its internal leading coefficient is 1.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

std::string to_string(const Polynomial& p);
std::string to_string(const Monomial& m);

}  // namespace cartan
