#pragma once

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <vector>

#include "cartan/rational.hpp"
#include "cartan/scalar.hpp"

namespace Eigen {

template <>
struct NumTraits<cartan::SymScalar> : GenericNumTraits<cartan::SymScalar> {
  using Real = cartan::SymScalar;
  using NonInteger = cartan::SymScalar;
  using Nested = cartan::SymScalar;
  using Literal = cartan::SymScalar;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 50,
    MulCost = 100
  };
  static Real epsilon() { return 0; }
  static Real dummy_precision() { return 0; }
  static Real highest() { return 0; }
  static Real lowest() { return 0; }
  static int digits10() { return 0; }
};

template <>
struct NumTraits<cartan::GaussianRational> : GenericNumTraits<cartan::GaussianRational> {
  using Real = cartan::GaussianRational;
  using NonInteger = cartan::GaussianRational;
  using Nested = cartan::GaussianRational;
  using Literal = cartan::GaussianRational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 10,
    MulCost = 20
  };
  static Real epsilon() { return 0; }
  static Real dummy_precision() { return 0; }
  static Real highest() { return 0; }
  static Real lowest() { return 0; }
  static int digits10() { return 0; }
};

}  // namespace Eigen

namespace cartan {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using SymMatrix = Matrix<SymScalar>;
using ConstMatrix = Matrix<GaussianRational>;

inline std::size_t pivot_cost(const GaussianRational&) { return 1; }
inline std::size_t pivot_cost(const SymScalar& s) {
  if (s.is_constant()) return 1;
  return 2 + s.numerator().terms().size() + s.denominator().terms().size();
}

template <class Scalar>
Matrix<Scalar> identity_matrix(Eigen::Index n) {
  Matrix<Scalar> m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = Scalar(r == c ? 1 : 0);
  return m;
}

template <class Scalar>
Matrix<Scalar> multiply(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix dimensions do not match");
  Matrix<Scalar> out(a.rows(), b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      Scalar acc(0);
      for (Eigen::Index k = 0; k < a.cols(); ++k)
        if (!a(r, k).is_zero() && !b(k, c).is_zero()) acc += a(r, k) * b(k, c);
      out(r, c) = std::move(acc);
    }
  return out;
}

// Reduced row echelon form with the accumulated row operations:
// transform * input == reduced.
template <class Scalar>
struct RowReduction {
  Matrix<Scalar> reduced;
  Matrix<Scalar> transform;
  std::vector<Eigen::Index> pivot_columns;  // one per pivot row, rows 0..rank-1
  Eigen::Index rank() const { return static_cast<Eigen::Index>(pivot_columns.size()); }
};

template <class Scalar>
RowReduction<Scalar> row_reduce(const Matrix<Scalar>& input, bool track_transform = true) {
  RowReduction<Scalar> out;
  Matrix<Scalar> a = input;
  const Eigen::Index m = a.rows(), n = a.cols();
  Matrix<Scalar> t = track_transform ? identity_matrix<Scalar>(m) : Matrix<Scalar>(0, 0);
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < n && row < m; ++col) {
    Eigen::Index best = -1;
    std::size_t best_cost = 0;
    for (Eigen::Index r = row; r < m; ++r) {
      if (a(r, col).is_zero()) continue;
      const std::size_t cost = pivot_cost(a(r, col));
      if (best < 0 || cost < best_cost) {
        best = r;
        best_cost = cost;
      }
    }
    if (best < 0) continue;
    if (best != row) {
      a.row(best).swap(a.row(row));
      if (track_transform) t.row(best).swap(t.row(row));
    }
    const Scalar inv = Scalar(1) / a(row, col);
    for (Eigen::Index c = 0; c < n; ++c)
      if (!a(row, c).is_zero()) a(row, c) = a(row, c) * inv;
    if (track_transform)
      for (Eigen::Index c = 0; c < m; ++c)
        if (!t(row, c).is_zero()) t(row, c) = t(row, c) * inv;
    for (Eigen::Index r = 0; r < m; ++r) {
      if (r == row || a(r, col).is_zero()) continue;
      const Scalar f = a(r, col);
      for (Eigen::Index c = 0; c < n; ++c)
        if (!a(row, c).is_zero()) a(r, c) -= f * a(row, c);
      if (track_transform)
        for (Eigen::Index c = 0; c < m; ++c)
          if (!t(row, c).is_zero()) t(r, c) -= f * t(row, c);
    }
    out.pivot_columns.push_back(col);
    ++row;
  }
  out.reduced = std::move(a);
  out.transform = std::move(t);
  return out;
}

template <class Scalar>
Eigen::Index rank(const Matrix<Scalar>& a) {
  return row_reduce(a, false).rank();
}

template <class Scalar>
std::optional<Matrix<Scalar>> try_inverse(const Matrix<Scalar>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  auto rr = row_reduce(a, true);
  if (rr.rank() != a.rows()) return std::nullopt;
  return rr.transform;
}

template <class Scalar>
Matrix<Scalar> inverse(const Matrix<Scalar>& a) {
  auto inv = try_inverse(a);
  if (!inv) throw DomainError("matrix is not invertible");
  return *inv;
}

template <class Scalar>
Scalar determinant(Matrix<Scalar> a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const Eigen::Index n = a.rows();
  Scalar det(1);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index best = -1;
    std::size_t best_cost = 0;
    for (Eigen::Index r = col; r < n; ++r) {
      if (a(r, col).is_zero()) continue;
      const std::size_t cost = pivot_cost(a(r, col));
      if (best < 0 || cost < best_cost) {
        best = r;
        best_cost = cost;
      }
    }
    if (best < 0) return Scalar(0);
    if (best != col) {
      a.row(best).swap(a.row(col));
      det = -det;
    }
    det *= a(col, col);
    const Scalar inv = Scalar(1) / a(col, col);
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (a(r, col).is_zero()) continue;
      const Scalar f = a(r, col) * inv;
      for (Eigen::Index c = col; c < n; ++c)
        if (!a(col, c).is_zero()) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

}  // namespace cartan
