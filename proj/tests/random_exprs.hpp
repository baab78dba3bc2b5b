#pragma once

#include <random>
#include <vector>

#include "cartan/scalar.hpp"

namespace cartan::testing {

// Small random rational functions over a fixed symbol pool.
class RandomScalars {
 public:
  RandomScalars(const SymbolTable& table, std::vector<SymbolId> pool, unsigned seed)
      : table_(table), pool_(std::move(pool)), rng_(seed) {}

  GaussianRational coefficient() {
    std::uniform_int_distribution<long> d(-3, 3);
    long re = d(rng_), im = d(rng_);
    if (re == 0 && im == 0) re = 1;
    std::uniform_int_distribution<long> den(1, 3);
    return {mpq_class(re, den(rng_)), mpq_class(im)};
  }

  Polynomial polynomial(int max_terms, int max_degree) {
    std::uniform_int_distribution<int> nt(1, max_terms);
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::uniform_int_distribution<std::size_t> var(0, pool_.size() - 1);
    std::vector<Term> terms;
    const int n = nt(rng_);
    for (int k = 0; k < n; ++k) {
      Monomial m;
      const int d = deg(rng_);
      for (int j = 0; j < d; ++j) m = m * Monomial::variable(pool_[var(rng_)]);
      terms.push_back({m, coefficient()});
    }
    return Polynomial::from_terms(std::move(terms));
  }

  SymScalar scalar() {
    Polynomial num = polynomial(3, 2);
    Polynomial den;
    do {
      den = polynomial(2, 2);
    } while (den.is_zero());
    return SymScalar::fraction(num, den);
  }

  std::mt19937& engine() { return rng_; }
  const SymbolTable& table() const { return table_; }

 private:
  const SymbolTable& table_;
  std::vector<SymbolId> pool_;
  std::mt19937 rng_;
};

}  // namespace cartan::testing
