#pragma once

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cartan/errors.hpp"
#include "cartan/matrix.hpp"
#include "cartan/scalar.hpp"

namespace cartan {

using CovectorId = std::uint32_t;

// Process-wide interning of 1-form names (base coframes, lifted coframes,
// Maurer-Cartan forms, coordinate differentials "d(x)").
CovectorId intern_covector(std::string_view name);
std::optional<CovectorId> find_covector(std::string_view name);
const std::string& covector_name(CovectorId id);
// The covector d(x) of a coordinate or parameter.
CovectorId differential_of(SymbolId s);
// Inverse of differential_of, if id was produced by it.
std::optional<SymbolId> differential_symbol(CovectorId id);

// Strictly increasing in covector id.
using Word = boost::container::small_vector<CovectorId, 4>;

// Ordered list of 1-forms; the order fixes signs of collected coefficients.
class CovectorBasis {
 public:
  CovectorBasis() = default;
  explicit CovectorBasis(std::vector<CovectorId> ids);
  static CovectorBasis from_names(const std::vector<std::string>& names);

  std::size_t size() const { return ids_.size(); }
  CovectorId operator[](std::size_t i) const { return ids_[i]; }
  const std::vector<CovectorId>& ids() const { return ids_; }
  std::optional<std::size_t> position(CovectorId id) const;
  bool contains(CovectorId id) const { return position(id).has_value(); }
  CovectorBasis concat(const CovectorBasis& other) const;

 private:
  std::vector<CovectorId> ids_;
  std::map<CovectorId, std::size_t> index_;
};

// Homogeneous element of the exterior algebra with SymScalar coefficients.
class Form {
 public:
  Form() = default;
  explicit Form(int degree) : degree_(degree) {}
  static Form scalar(const SymScalar& s);
  static Form covector(CovectorId id, const SymScalar& coef = SymScalar(1));
  // Adds coef * (w_0 ^ ... ^ w_k) for an arbitrary (unsorted) word.
  static Form monomial(const std::vector<CovectorId>& word, const SymScalar& coef);

  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Word, SymScalar>& terms() const { return terms_; }
  SymScalar coefficient(const Word& w) const;
  SymScalar as_scalar() const;  // degree 0 only
  std::vector<CovectorId> covectors() const;
  bool all_coefficients_constant() const;

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form& operator*=(const SymScalar& s);
  Form operator-() const;
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Form a, const SymScalar& s) { return a *= s; }
  friend Form operator*(const SymScalar& s, Form a) { return a *= s; }
  friend bool operator==(const Form& a, const Form& b);

  // Adds coef to a sorted word's coefficient.
  void accumulate(const Word& w, const SymScalar& coef);

 private:
  void adopt_degree(int d);

  int degree_ = 0;
  std::map<Word, SymScalar> terms_;
};

Form wedge(const Form& f, const Form& g);

// Covector conjugation: pairs of covectors exchanged by the involution.
class CovectorConjugation {
 public:
  void pair(CovectorId a, CovectorId b);
  void self(CovectorId a) { pair(a, a); }
  std::optional<CovectorId> partner(CovectorId id) const;
  bool has(CovectorId id) const { return partner(id).has_value(); }

 private:
  std::map<CovectorId, CovectorId> partner_;
};

// Coefficient-conjugate and swap names; a covector without a partner is an error.
Form conjugate(const Form& f, const SymbolTable& table, const CovectorConjugation& conj);
Form substitute(const Form& f, const Bindings& bindings);
// Replaces covectors by 1-forms; covectors not in the map stay.
Form rewrite(const Form& f, const std::map<CovectorId, Form>& subs);
// Applies rewrite until no key of subs occurs (at most max_passes passes).
Form rewrite_fully(const Form& f, const std::map<CovectorId, Form>& subs, int max_passes = 8);

struct DerivationRules {
  std::map<SymbolId, Form> scalar;      // d(symbol) as a 1-form
  std::map<CovectorId, Form> covector;  // d(covector) as a 2-form
};

Form exterior_derivative(const SymScalar& s, const DerivationRules& rules);
Form exterior_derivative(const Form& f, const DerivationRules& rules);

struct PairCoefficient {
  std::size_t first = 0;   // basis positions, first < second
  std::size_t second = 0;
  SymScalar value;
};

// Coefficients of a 1-form against a basis.
std::vector<SymScalar> collect_linear(const Form& f, const CovectorBasis& basis);
// Coefficients of w_a ^ w_b (a < b in basis order) of a 2-form; zero pairs omitted.
std::vector<PairCoefficient> collect(const Form& f, const CovectorBasis& basis);
Form reconstruct(const std::vector<PairCoefficient>& pairs, const CovectorBasis& basis);

// Replaces base[i] by sum_j (g^-1)_ij lifted[j].
Form rewrite_to_coframe(const Form& f, const CovectorBasis& base, const CovectorBasis& lifted, const SymMatrix& change);

// Terms printed in basis order when the basis covers the form, else by id.
std::string to_string(const Form& f, const CovectorBasis& basis = {});

}  // namespace cartan
