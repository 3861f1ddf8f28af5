#ifndef FROBREP_RING_MATRIX_HPP
#define FROBREP_RING_MATRIX_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "frobrep/errors.hpp"

namespace frobrep {

/// Square or rectangular matrix over a commutative local ring.
///
/// R is AlgebraElement or TruncatedPolynomial; both supply zero_like, one_like,
/// is_unit, inverse and the arithmetic operators.
template <class R>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const R& proto)
      : rows_(rows), cols_(cols), data_(rows * cols, proto.zero_like()) {}

  static Matrix identity(std::size_t n, const R& proto) {
    Matrix m(n, n, proto);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = proto.one_like();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  R& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const R& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw ParameterError("Matrix product: dimension mismatch");
    Matrix out(a.rows_, b.cols_, a.data_.front());
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        R acc = a(i, 0) * b(0, j);
        for (std::size_t k = 1; k < a.cols_; ++k) acc += a(i, k) * b(k, j);
        out(i, j) = std::move(acc);
      }
    return out;
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_, data_.front());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  template <class F>
  Matrix map(F&& f) const {
    Matrix out = *this;
    for (auto& x : out.data_) x = f(x);
    return out;
  }

  /// Entry-wise power.
  Matrix entrywise_pow(std::uint64_t e) const {
    return map([e](const R& x) { return x.pow(e); });
  }

  /// Determinant by elimination with unit pivots (always available over a local ring
  /// for invertible matrices; a column without a unit gives a non-unit determinant).
  R determinant() const {
    if (rows_ != cols_) throw ParameterError("determinant of a non-square matrix");
    Matrix m = *this;
    const std::size_t n = rows_;
    R det = data_.front().one_like();
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = n;
      for (std::size_t r = c; r < n; ++r)
        if (m(r, c).is_unit()) {
          piv = r;
          break;
        }
      if (piv == n) return laplace_determinant();
      if (piv != c) {
        for (std::size_t k = 0; k < n; ++k) std::swap(m(piv, k), m(c, k));
        det = -det;
      }
      det = det * m(c, c);
      R inv = m(c, c).inverse();
      for (std::size_t r = c + 1; r < n; ++r) {
        R factor = m(r, c) * inv;
        if (factor.is_zero()) continue;
        for (std::size_t k = c; k < n; ++k) m(r, k) -= factor * m(c, k);
      }
    }
    return det;
  }

  bool is_invertible() const { return determinant().is_unit(); }

  /// Inverse by Gauss-Jordan with unit pivots.
  Matrix inverse() const {
    if (rows_ != cols_) throw ParameterError("inverse of a non-square matrix");
    const std::size_t n = rows_;
    Matrix m = *this;
    Matrix inv = identity(n, data_.front());
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = n;
      for (std::size_t r = c; r < n; ++r)
        if (m(r, c).is_unit()) {
          piv = r;
          break;
        }
      if (piv == n) throw DomainError("matrix is not invertible over the local ring");
      if (piv != c)
        for (std::size_t k = 0; k < n; ++k) {
          std::swap(m(piv, k), m(c, k));
          std::swap(inv(piv, k), inv(c, k));
        }
      R pinv = m(c, c).inverse();
      for (std::size_t k = 0; k < n; ++k) {
        m(c, k) = m(c, k) * pinv;
        inv(c, k) = inv(c, k) * pinv;
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || m(r, c).is_zero()) continue;
        R factor = m(r, c);
        for (std::size_t k = 0; k < n; ++k) {
          m(r, k) -= factor * m(c, k);
          inv(r, k) -= factor * inv(c, k);
        }
      }
    }
    return inv;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const R& x = (*this)(i, j);
        if (i == j ? !(x == x.one_like()) : !x.is_zero()) return false;
      }
    return true;
  }

 private:
  R laplace_determinant() const {
    // Fallback for matrices with a non-unit column: cofactor expansion (n is tiny).
    const std::size_t n = rows_;
    if (n == 1) return (*this)(0, 0);
    R acc = data_.front().zero_like();
    for (std::size_t j = 0; j < n; ++j) {
      Matrix minor(n - 1, n - 1, data_.front());
      for (std::size_t r = 1; r < n; ++r)
        for (std::size_t c = 0, cc = 0; c < n; ++c)
          if (c != j) minor(r - 1, cc++) = (*this)(r, c);
      R term = (*this)(0, j) * minor.determinant();
      if (j % 2) acc -= term;
      else acc += term;
    }
    return acc;
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<R> data_;
};

}  // namespace frobrep

#endif  // FROBREP_RING_MATRIX_HPP
