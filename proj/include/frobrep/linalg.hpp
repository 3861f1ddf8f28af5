#ifndef FROBREP_LINALG_HPP
#define FROBREP_LINALG_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "frobrep/errors.hpp"
#include "frobrep/fp.hpp"

// Exact linear algebra over F_p: sparse operators, dense matrices, and
// subspaces kept in reduced row echelon form.

namespace frobrep {

using Vec = std::vector<Scalar>;

inline bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](Scalar s) { return s == 0; });
}

/// v += c * w
inline void axpy(Vec& v, Scalar c, const Vec& w, Scalar p) {
  if (c == 0) return;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (w[k]) v[k] = mod_add(v[k], mod_mul(c, w[k], p), p);
}

inline Vec unit_vector(std::size_t dim, std::size_t index) {
  Vec v(dim, 0);
  v.at(index) = 1;
  return v;
}

/// Column-compressed sparse matrix over F_p. Immutable once built.
class SparseMatrix {
 public:
  struct Entry {
    std::size_t row;
    Scalar value;
  };

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols, Scalar p) : rows_(rows), p_(p), columns_(cols) {}

  static SparseMatrix zero(std::size_t rows, std::size_t cols, Scalar p) { return SparseMatrix(rows, cols, p); }
  static SparseMatrix identity(std::size_t dim, Scalar p) {
    SparseMatrix m(dim, dim, p);
    for (std::size_t k = 0; k < dim; ++k) m.columns_[k].push_back({k, 1 % p});
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }
  Scalar prime() const { return p_; }

  const std::vector<Entry>& column(std::size_t c) const { return columns_[c]; }

  Scalar at(std::size_t r, std::size_t c) const {
    for (const auto& e : columns_[c])
      if (e.row == r) return e.value;
    return 0;
  }

  Vec apply(const Vec& x) const {
    if (x.size() != cols()) throw ParameterError("SparseMatrix::apply: dimension mismatch");
    Vec y(rows_, 0);
    for (std::size_t c = 0; c < x.size(); ++c) {
      if (!x[c]) continue;
      for (const auto& e : columns_[c]) y[e.row] = mod_add(y[e.row], mod_mul(e.value, x[c], p_), p_);
    }
    return y;
  }

  Vec apply_column(std::size_t c) const {
    Vec y(rows_, 0);
    for (const auto& e : columns_[c]) y[e.row] = e.value;
    return y;
  }

  bool is_zero() const {
    return std::all_of(columns_.begin(), columns_.end(), [](const auto& col) { return col.empty(); });
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& col : columns_) n += col.size();
    return n;
  }

  SparseMatrix transpose() const {
    Builder b(cols(), rows_, p_);
    for (std::size_t c = 0; c < cols(); ++c)
      for (const auto& e : columns_[c]) b.add(c, e.row, e.value);
    return b.build();
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols() != b.rows()) throw ParameterError("SparseMatrix product: dimension mismatch");
    Builder out(a.rows(), b.cols(), a.p_);
    for (std::size_t c = 0; c < b.cols(); ++c)
      for (const auto& eb : b.columns_[c])
        for (const auto& ea : a.columns_[eb.row]) out.add(ea.row, c, mod_mul(ea.value, eb.value, a.p_));
    return out.build();
  }

  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, b, 1); }
  friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, b, a.p_ - 1); }

  SparseMatrix scaled(Scalar c) const {
    Builder out(rows_, cols(), p_);
    for (std::size_t col = 0; col < cols(); ++col)
      for (const auto& e : columns_[col]) out.add(e.row, col, mod_mul(c, e.value, p_));
    return out.build();
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols() != b.cols()) return false;
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const auto& x = a.columns_[c];
      const auto& y = b.columns_[c];
      if (x.size() != y.size()) return false;
      for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k].row != y[k].row || x[k].value != y[k].value) return false;
    }
    return true;
  }

  /// Accumulating builder; entries with equal (row, col) are summed.
  class Builder {
   public:
    Builder(std::size_t rows, std::size_t cols, Scalar p) : rows_(rows), p_(p), columns_(cols) {}
    void add(std::size_t r, std::size_t c, Scalar v) {
      if (r >= rows_ || c >= columns_.size()) throw ParameterError("SparseMatrix::Builder::add out of range");
      if (v % p_) columns_[c].push_back({r, v % p_});
    }
    SparseMatrix build() {
      for (auto& col : columns_) {
        std::sort(col.begin(), col.end(), [](const Entry& x, const Entry& y) { return x.row < y.row; });
        std::vector<Entry> merged;
        for (const auto& e : col) {
          if (!merged.empty() && merged.back().row == e.row)
            merged.back().value = mod_add(merged.back().value, e.value, p_);
          else
            merged.push_back(e);
        }
        std::erase_if(merged, [](const Entry& e) { return e.value == 0; });
        col = std::move(merged);
      }
      SparseMatrix m(rows_, 0, p_);
      m.columns_ = std::move(columns_);
      return m;
    }

   private:
    std::size_t rows_;
    Scalar p_;
    std::vector<std::vector<Entry>> columns_;
  };

 private:
  static SparseMatrix combine(const SparseMatrix& a, const SparseMatrix& b, Scalar sign) {
    if (a.rows_ != b.rows_ || a.cols() != b.cols()) throw ParameterError("SparseMatrix sum: dimension mismatch");
    Builder out(a.rows_, a.cols(), a.p_);
    for (std::size_t c = 0; c < a.cols(); ++c) {
      for (const auto& e : a.columns_[c]) out.add(e.row, c, e.value);
      for (const auto& e : b.columns_[c]) out.add(e.row, c, mod_mul(sign, e.value, a.p_));
    }
    return out.build();
  }

  std::size_t rows_ = 0;
  Scalar p_ = 2;
  std::vector<std::vector<Entry>> columns_;
};

/// Row-major dense matrix over F_p.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, Scalar p) : rows_(rows), cols_(cols), p_(p), data_(rows * cols, 0) {}

  static DenseMatrix from_sparse(const SparseMatrix& s) {
    DenseMatrix d(s.rows(), s.cols(), s.prime());
    for (std::size_t c = 0; c < s.cols(); ++c)
      for (const auto& e : s.column(c)) d(e.row, c) = e.value;
    return d;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar prime() const { return p_; }
  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Scalar operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vec column(std::size_t c) const {
    Vec v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  Vec apply(const Vec& x) const {
    Vec y(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::uint64_t acc = 0;
      for (std::size_t c = 0; c < cols_; ++c) acc += static_cast<std::uint64_t>((*this)(r, c)) * x[c] % p_;
      y[r] = static_cast<Scalar>(acc % p_);
    }
    return y;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw ParameterError("DenseMatrix product: dimension mismatch");
    DenseMatrix out(a.rows_, b.cols_, a.p_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        Scalar aik = a(i, k);
        if (!aik) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (b(k, j)) out(i, j) = mod_add(out(i, j), mod_mul(aik, b(k, j), a.p_), a.p_);
      }
    return out;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_zero() const { return frobrep::is_zero(data_); }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  Scalar p_ = 2;
  Vec data_;
};

/// A subspace of F_p^N held as a canonical reduced row echelon basis.
///
/// Rows are sorted by pivot column, each pivot entry is 1 and every other row
/// vanishes at that column, so two subspaces are equal iff their bases are.
class Subspace {
 public:
  Subspace() = default;
  Subspace(std::size_t ambient_dim, Scalar p) : ambient_(ambient_dim), p_(p) {}

  static Subspace span(std::size_t ambient_dim, Scalar p, std::span<const Vec> vectors) {
    Subspace s(ambient_dim, p);
    for (const auto& v : vectors) s.insert(v);
    return s;
  }
  static Subspace full(std::size_t ambient_dim, Scalar p) {
    Subspace s(ambient_dim, p);
    for (std::size_t k = 0; k < ambient_dim; ++k) s.insert(unit_vector(ambient_dim, k));
    return s;
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }
  Scalar prime() const { return p_; }
  const std::vector<Vec>& basis() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Remainder of v modulo the subspace (zero iff v lies in it).
  Vec reduce(Vec v) const {
    check(v);
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      Scalar c = v[pivots_[k]];
      if (c) axpy(v, mod_neg(c, p_), rows_[k], p_);
    }
    return v;
  }

  bool contains(const Vec& v) const { return frobrep::is_zero(reduce(v)); }

  bool contains(const Subspace& other) const {
    return std::all_of(other.rows_.begin(), other.rows_.end(), [this](const Vec& v) { return contains(v); });
  }

  /// Adds v to the span; returns true iff the dimension grew.
  bool insert(const Vec& v) {
    Vec r = reduce(v);
    auto it = std::find_if(r.begin(), r.end(), [](Scalar s) { return s != 0; });
    if (it == r.end()) return false;
    std::size_t piv = static_cast<std::size_t>(it - r.begin());
    Scalar inv = mod_inv(r[piv], p_);
    for (auto& s : r) s = mod_mul(s, inv, p_);
    for (auto& row : rows_) {
      Scalar c = row[piv];
      if (c) axpy(row, mod_neg(c, p_), r, p_);
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv);
    std::size_t idx = static_cast<std::size_t>(pos - pivots_.begin());
    pivots_.insert(pos, piv);
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(idx), std::move(r));
    return true;
  }

  /// Coordinates of v (assumed to lie in the subspace) with respect to basis().
  Vec coordinates(const Vec& v) const {
    check(v);
    Vec c(rows_.size());
    for (std::size_t k = 0; k < rows_.size(); ++k) c[k] = v[pivots_[k]];
    return c;
  }

  /// Vector with the given coordinates.
  Vec combine(const Vec& coords) const {
    Vec v(ambient_, 0);
    for (std::size_t k = 0; k < rows_.size(); ++k) axpy(v, coords[k], rows_[k], p_);
    return v;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.pivots_ == b.pivots_ && a.rows_ == b.rows_;
  }

 private:
  void check(const Vec& v) const {
    if (v.size() != ambient_) throw ParameterError("Subspace: vector has wrong dimension");
  }

  std::size_t ambient_ = 0;
  Scalar p_ = 2;
  std::vector<std::size_t> pivots_;
  std::vector<Vec> rows_;
};

inline std::size_t rank(std::size_t ambient_dim, Scalar p, std::span<const Vec> vectors) {
  return Subspace::span(ambient_dim, p, vectors).dim();
}

inline std::size_t rank(const SparseMatrix& m) {
  Subspace s(m.rows(), m.prime());
  for (std::size_t c = 0; c < m.cols(); ++c) s.insert(m.apply_column(c));
  return s.dim();
}

/// Column space of a sparse matrix.
inline Subspace image(const SparseMatrix& m) {
  Subspace s(m.rows(), m.prime());
  for (std::size_t c = 0; c < m.cols(); ++c) s.insert(m.apply_column(c));
  return s;
}

/// Basis of { c : sum_b c_b * rows[b] = 0 }.
inline std::vector<Vec> left_kernel(std::span<const Vec> rows, std::size_t width, Scalar p) {
  const std::size_t k = rows.size();
  // Augment each row with an identity block and row reduce; rows whose left part
  // vanishes carry kernel coefficients in the right part.
  Subspace aug(width + k, p);
  for (std::size_t b = 0; b < k; ++b) {
    Vec v(width + k, 0);
    std::copy(rows[b].begin(), rows[b].end(), v.begin());
    v[width + b] = 1;
    aug.insert(v);
  }
  std::vector<Vec> kernel;
  for (std::size_t idx = 0; idx < aug.dim(); ++idx) {
    if (aug.pivots()[idx] < width) continue;
    const Vec& row = aug.basis()[idx];
    kernel.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(width), row.end());
  }
  return kernel;
}

/// Basis of { x : M x = 0 } for M given by its rows (each of length width).
inline std::vector<Vec> right_kernel(std::span<const Vec> rows, std::size_t width, Scalar p) {
  Subspace r = Subspace::span(width, p, rows);
  std::vector<bool> is_pivot(width, false);
  for (auto c : r.pivots()) is_pivot[c] = true;
  std::vector<Vec> kernel;
  for (std::size_t free = 0; free < width; ++free) {
    if (is_pivot[free]) continue;
    Vec x(width, 0);
    x[free] = 1;
    for (std::size_t k = 0; k < r.dim(); ++k) x[r.pivots()[k]] = mod_neg(r.basis()[k][free], p);
    kernel.push_back(std::move(x));
  }
  return kernel;
}

/// Subspace of vectors annihilated by every listed operator.
template <class Op>
Subspace joint_kernel_in(const Subspace& s, const std::vector<Op>& ops) {
  std::vector<Vec> stacked;
  std::size_t width = 0;
  for (const auto& v : s.basis()) {
    Vec row;
    for (const auto& op : ops) {
      Vec img = op.apply(v);
      row.insert(row.end(), img.begin(), img.end());
    }
    width = row.size();
    stacked.push_back(std::move(row));
  }
  Subspace out(s.ambient_dim(), s.prime());
  if (s.dim() == 0) return out;
  if (width == 0) return s;
  for (const auto& c : left_kernel(stacked, width, s.prime())) out.insert(s.combine(c));
  return out;
}

/// Smallest subspace containing the seeds and stable under every operator.
///
/// Passes apply all operators, in list order, to the vectors added in the previous
/// pass. If `trace` is given it receives the dimension after the seeds and after
/// every pass that changed it.
template <class Op>
Subspace operator_closure(std::size_t ambient_dim, Scalar p, std::span<const Vec> seeds, const std::vector<Op>& ops,
                          std::vector<std::size_t>* trace = nullptr) {
  Subspace s(ambient_dim, p);
  std::vector<Vec> frontier;
  for (const auto& v : seeds)
    if (s.insert(v)) frontier.push_back(v);
  if (trace) trace->push_back(s.dim());
  while (!frontier.empty()) {
    std::vector<Vec> next;
    for (const auto& v : frontier)
      for (const auto& op : ops) {
        Vec w = op.apply(v);
        if (s.insert(w)) next.push_back(std::move(w));
      }
    if (trace && !next.empty()) trace->push_back(s.dim());
    frontier = std::move(next);
  }
  return s;
}

}  // namespace frobrep

#endif  // FROBREP_LINALG_HPP
