#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "tcs/rational.hpp"

namespace tcs {

/// Dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  T* row(std::size_t r) { return data_.data() + r * cols_; }
  const T* row(std::size_t r) const { return data_.data() + r * cols_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(RationalMatrix& m);
std::size_t rank(RationalMatrix m);
/// One solution of A x = b (free variables set to zero), or nullopt.
std::optional<std::vector<Rational>> solve(const RationalMatrix& a, const std::vector<Rational>& b);
/// Basis of {x : A x = 0}, one vector per free column.
std::vector<std::vector<Rational>> nullspace(const RationalMatrix& a);

/// maximize c.x subject to A x = b, lower <= x <= upper. Bounds may be
/// infinite for the double backend; the exact backend uses `has_upper` /
/// `has_lower` flags instead.
template <class T>
struct BoundedLP {
  Matrix<T> a;
  std::vector<T> b;
  std::vector<T> c;
  std::vector<T> lower;
  std::vector<T> upper;
  std::vector<bool> has_lower;
  std::vector<bool> has_upper;

  /// Convenience: n variables all boxed in [lo, hi].
  static BoundedLP boxed(Matrix<T> a, std::vector<T> b, std::vector<T> c, const T& lo, const T& hi);
};

template <class T>
struct LPResult {
  T objective;
  std::vector<T> x;
  /// Simplex multipliers for the equality rows at the optimum.
  std::vector<T> duals;
  std::size_t pivots = 0;
};

/// Two-phase bounded-variable primal simplex with Bland's rule. Nonbasic
/// variables may rest strictly between their bounds (the start point puts
/// each variable at the feasible value closest to zero). Throws
/// VerificationError if the program is infeasible or unbounded.
template <class T>
LPResult<T> maximize(const BoundedLP<T>& lp);

extern template struct BoundedLP<Rational>;
extern template struct BoundedLP<double>;
extern template LPResult<Rational> maximize(const BoundedLP<Rational>&);
extern template LPResult<double> maximize(const BoundedLP<double>&);

}  // namespace tcs
