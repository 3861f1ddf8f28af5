#ifndef FROBREP_GLNREP_HPP
#define FROBREP_GLNREP_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frobrep/char_ring.hpp"
#include "frobrep/errors.hpp"
#include "frobrep/fp.hpp"
#include "frobrep/linalg.hpp"
#include "frobrep/ring_matrix.hpp"

// Finite-dimensional GL_n-modules with weight bases.

namespace frobrep {

/// Default cap on ambient dimensions before a computation is refused.
inline constexpr std::size_t kDefaultScopeLimit = 4096;

using Weight = std::vector<int>;

inline bool is_dominant(const Weight& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] < w[i + 1]) return false;
  return true;
}

inline int weight_degree(const Weight& w) {
  int d = 0;
  for (int v : w) d += v;
  return d;
}

inline Weight weight_add(Weight a, const Weight& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Weight weight_scale(Weight a, int k) {
  for (auto& v : a) v *= k;
  return a;
}

inline std::string weight_to_string(const Weight& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s + ")";
}

/// sum_i m_i (e_1 + ... + e_i).
inline Weight weight_from_omega(const std::vector<int>& m) {
  Weight w(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) w[j] += m[i];
  return w;
}

/// Coefficients of w in the basis omega_i = e_1 + ... + e_i.
inline std::vector<int> omega_coefficients(const Weight& w) {
  std::vector<int> c(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) c[i] = w[i] - (i + 1 < w.size() ? w[i + 1] : 0);
  return c;
}

struct ModPDecomposition {
  Weight r_part;
  Weight s_part;
  std::vector<int> m;  // omega-coefficients of r_part, each in [0, p)

  /// Index i (1-based) if r_part = e_1 + ... + e_i, else 0.
  int fundamental_index() const {
    int found = 0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] == 0) continue;
      if (m[k] != 1 || found) return 0;
      found = static_cast<int>(k) + 1;
    }
    return found;
  }
  bool r_is_zero() const {
    return std::all_of(m.begin(), m.end(), [](int v) { return v == 0; });
  }
};

inline ModPDecomposition mod_p_reduce(const Weight& lambda, Scalar p) {
  const int pi = static_cast<int>(checked_prime(p));
  const auto c = omega_coefficients(lambda);
  std::vector<int> m(c.size()), s(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    m[i] = ((c[i] % pi) + pi) % pi;
    s[i] = (c[i] - m[i]) / pi;
  }
  return {weight_from_omega(m), weight_from_omega(s), m};
}

inline bool is_restricted(const Weight& lambda, Scalar p) {
  const auto c = omega_coefficients(lambda);
  return std::all_of(c.begin(), c.end(), [p](int v) { return v >= 0 && v < static_cast<int>(p); });
}

// Integer matrices ------------------------------------------------------------

/// Column-sparse matrix over Z.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_.size(); }
  const std::map<std::size_t, long long>& column(std::size_t c) const { return cols_[c]; }

  void add(std::size_t r, std::size_t c, long long v) {
    if (!v) return;
    auto& col = cols_[c];
    auto [it, ins] = col.try_emplace(r, 0);
    it->second = detail::checked_add(it->second, v);
    if (!it->second) col.erase(it);
  }

  bool is_zero() const {
    return std::all_of(cols_.begin(), cols_.end(), [](const auto& c) { return c.empty(); });
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix out(a.rows_, b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (const auto& [k, bv] : b.cols_[j])
        for (const auto& [i, av] : a.cols_[k]) out.add(i, j, detail::checked_mul(av, bv));
    return out;
  }

  /// Entrywise exact division; a remainder means the lattice is not stable.
  IntMatrix divided_exactly(long long d) const {
    IntMatrix out(rows_, cols());
    for (std::size_t j = 0; j < cols(); ++j)
      for (const auto& [i, v] : cols_[j]) {
        if (v % d) throw InternalError("integral form: divided power is not integral");
        out.cols_[j][i] = v / d;
      }
    return out;
  }

  SparseMatrix mod_p(Scalar p) const {
    SparseMatrix::Builder b(rows_, cols(), p);
    const long long pl = static_cast<long long>(p);
    for (std::size_t j = 0; j < cols(); ++j)
      for (const auto& [i, v] : cols_[j]) b.add(i, j, static_cast<Scalar>(((v % pl) + pl) % pl));
    return b.build();
  }

 private:
  std::size_t rows_ = 0;
  std::vector<std::map<std::size_t, long long>> cols_;
};

// Weight modules ---------------------------------------------------------------

enum class ModuleKind { trivial, standard, exterior, sym, tensor, twist, det_power, subquotient, bare };

namespace detail {

struct ModuleNode {
  ModuleKind kind = ModuleKind::trivial;
  int n = 1;
  Scalar p = 2;
  std::size_t dim = 0;
  std::vector<Weight> weights;
  std::vector<std::string> labels;
  std::vector<SparseMatrix> lie;                 // E_ij at index i*n + j
  std::optional<std::vector<IntMatrix>> integral;  // same indexing
  std::vector<std::shared_ptr<const ModuleNode>> children;
  int param = 0;                         // exterior degree, symmetric degree, det exponent
  std::vector<std::vector<int>> tuples;  // subsets (exterior) or multisets (sym)
  // subquotient S/N: N and representatives of S modulo N, all in ambient coordinates
  std::optional<Subspace> sub_s, sub_n, reps;
  bool flagged_zero = false;
};

inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur;
  auto rec = [&](auto& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v < n; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline std::vector<std::vector<int>> multisets(int d, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto& self, int start) -> void {
    if (static_cast<int>(cur.size()) == m) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v < d; ++v) {
      cur.push_back(v);
      self(self, v);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline std::size_t tuple_index(const std::vector<std::vector<int>>& tuples, const std::vector<int>& t) {
  auto it = std::lower_bound(tuples.begin(), tuples.end(), t);
  if (it == tuples.end() || *it != t) throw InternalError("tuple not in basis");
  return static_cast<std::size_t>(it - tuples.begin());
}

}  // namespace detail

class WeightModule {
 public:
  using Node = detail::ModuleNode;

  WeightModule() = default;
  explicit WeightModule(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  // Factories -----------------------------------------------------------------

  static WeightModule trivial(int n, Scalar p) {
    auto nd = base_node(ModuleKind::trivial, n, p, 1);
    nd->weights = {Weight(static_cast<std::size_t>(n), 0)};
    nd->labels = {"1"};
    nd->integral = zero_integral(n, 1);
    finish_lie_from_integral(*nd);
    return WeightModule(std::move(nd));
  }

  static WeightModule standard(int n, Scalar p) {
    auto nd = base_node(ModuleKind::standard, n, p, static_cast<std::size_t>(n));
    std::vector<IntMatrix> e = zero_integral(n, nd->dim);
    for (int k = 0; k < n; ++k) {
      Weight w(static_cast<std::size_t>(n), 0);
      w[static_cast<std::size_t>(k)] = 1;
      nd->weights.push_back(w);
      nd->labels.push_back("e" + std::to_string(k + 1));
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) e[idx(n, i, j)].add(static_cast<std::size_t>(i), static_cast<std::size_t>(j), 1);
    nd->integral = std::move(e);
    finish_lie_from_integral(*nd);
    return WeightModule(std::move(nd));
  }

  /// Lambda^k U; for k > n the zero module, flagged.
  static WeightModule exterior_power(int n, Scalar p, int k) {
    if (k < 0) throw ParameterError("exterior_power: negative degree");
    auto tuples = detail::subsets(n, k);
    auto nd = base_node(ModuleKind::exterior, n, p, tuples.size());
    nd->param = k;
    nd->flagged_zero = k > n;
    std::vector<IntMatrix> e = zero_integral(n, nd->dim);
    for (const auto& t : tuples) {
      Weight w(static_cast<std::size_t>(n), 0);
      std::string label;
      for (int v : t) {
        ++w[static_cast<std::size_t>(v)];
        label += (label.empty() ? "e" : "^e") + std::to_string(v + 1);
      }
      nd->weights.push_back(w);
      nd->labels.push_back(label.empty() ? "1" : label);
    }
    for (std::size_t c = 0; c < tuples.size(); ++c) {
      const auto& t = tuples[c];
      for (int a = 0; a < n; ++a)
        for (int b : t) {
          if (a == b) {
            e[idx(n, a, b)].add(c, c, 1);
            continue;
          }
          if (std::find(t.begin(), t.end(), a) != t.end()) continue;
          std::vector<int> s = t;
          int crossed = 0;
          for (int v : t)
            if (v != b && v > std::min(a, b) && v < std::max(a, b)) ++crossed;
          std::replace(s.begin(), s.end(), b, a);
          std::sort(s.begin(), s.end());
          e[idx(n, a, b)].add(detail::tuple_index(tuples, s), c, crossed % 2 ? -1 : 1);
        }
    }
    nd->tuples = std::move(tuples);
    nd->integral = std::move(e);
    finish_lie_from_integral(*nd);
    return WeightModule(std::move(nd));
  }

  /// Sym^m of a module, on the monomial basis.
  static WeightModule sym_power(const WeightModule& child, int m) {
    if (m < 0) throw ParameterError("sym_power: negative degree");
    const Node& c = child.node();
    auto tuples = detail::multisets(static_cast<int>(c.dim), m);
    auto nd = base_node(ModuleKind::sym, c.n, c.p, tuples.size());
    nd->param = m;
    nd->children = {child.node_};
    for (const auto& t : tuples) {
      Weight w(static_cast<std::size_t>(c.n), 0);
      std::string label;
      for (int v : t) {
        w = weight_add(w, c.weights[static_cast<std::size_t>(v)]);
        label += (label.empty() ? "" : "*") + c.labels[static_cast<std::size_t>(v)];
      }
      nd->weights.push_back(w);
      nd->labels.push_back(label.empty() ? "1" : "(" + label + ")");
    }
    // Derivation rule: E(y_1...y_m) = sum_k y_1..E(y_k)..y_m.
    const int n = c.n;
    if (c.integral) {
      std::vector<IntMatrix> e = zero_integral(n, tuples.size());
      for (int op = 0; op < n * n; ++op) {
        const IntMatrix& ce = (*c.integral)[static_cast<std::size_t>(op)];
        for (std::size_t col = 0; col < tuples.size(); ++col) {
          const auto& t = tuples[col];
          for (std::size_t k = 0; k < t.size(); ++k)
            for (const auto& [row, v] : ce.column(static_cast<std::size_t>(t[k]))) {
              std::vector<int> s = t;
              s[k] = static_cast<int>(row);
              std::sort(s.begin(), s.end());
              e[static_cast<std::size_t>(op)].add(detail::tuple_index(tuples, s), col, v);
            }
        }
      }
      nd->tuples = std::move(tuples);
      nd->integral = std::move(e);
      finish_lie_from_integral(*nd);
    } else {
      for (int op = 0; op < n * n; ++op) {
        const SparseMatrix& ce = c.lie[static_cast<std::size_t>(op)];
        SparseMatrix::Builder b(tuples.size(), tuples.size(), c.p);
        for (std::size_t col = 0; col < tuples.size(); ++col) {
          const auto& t = tuples[col];
          for (std::size_t k = 0; k < t.size(); ++k)
            for (const auto& ent : ce.column(static_cast<std::size_t>(t[k]))) {
              std::vector<int> s = t;
              s[k] = static_cast<int>(ent.row);
              std::sort(s.begin(), s.end());
              b.add(detail::tuple_index(tuples, s), col, ent.value);
            }
        }
        nd->lie.push_back(b.build());
      }
      nd->tuples = std::move(tuples);
    }
    return WeightModule(std::move(nd));
  }

  static WeightModule tensor(const WeightModule& a, const WeightModule& b) {
    const Node& x = a.node();
    const Node& y = b.node();
    if (x.n != y.n || x.p != y.p) throw ParameterError("tensor: modules for different groups");
    auto nd = base_node(ModuleKind::tensor, x.n, x.p, x.dim * y.dim);
    nd->children = {a.node_, b.node_};
    for (std::size_t i = 0; i < x.dim; ++i)
      for (std::size_t j = 0; j < y.dim; ++j) {
        nd->weights.push_back(weight_add(x.weights[i], y.weights[j]));
        nd->labels.push_back(x.labels[i] + "(x)" + y.labels[j]);
      }
    const int n = x.n;
    if (x.integral && y.integral) {
      std::vector<IntMatrix> e = zero_integral(n, nd->dim);
      for (int op = 0; op < n * n; ++op) {
        const auto& ex = (*x.integral)[static_cast<std::size_t>(op)];
        const auto& ey = (*y.integral)[static_cast<std::size_t>(op)];
        for (std::size_t i = 0; i < x.dim; ++i)
          for (std::size_t j = 0; j < y.dim; ++j) {
            for (const auto& [r, v] : ex.column(i)) e[static_cast<std::size_t>(op)].add(r * y.dim + j, i * y.dim + j, v);
            for (const auto& [r, v] : ey.column(j)) e[static_cast<std::size_t>(op)].add(i * y.dim + r, i * y.dim + j, v);
          }
      }
      nd->integral = std::move(e);
      finish_lie_from_integral(*nd);
    } else {
      for (int op = 0; op < n * n; ++op)
        nd->lie.push_back(kron_sum(x.lie[static_cast<std::size_t>(op)], y.lie[static_cast<std::size_t>(op)], x.dim, y.dim,
                                   x.p));
    }
    return WeightModule(std::move(nd));
  }

  /// V^[1]: weights times p, zero Lie action, group action through p-th powers.
  static WeightModule frobenius_twist(const WeightModule& child) {
    const Node& c = child.node();
    auto nd = base_node(ModuleKind::twist, c.n, c.p, c.dim);
    nd->children = {child.node_};
    for (std::size_t k = 0; k < c.dim; ++k) {
      nd->weights.push_back(weight_scale(c.weights[k], static_cast<int>(c.p)));
      nd->labels.push_back(c.labels[k] + "^[1]");
    }
    for (int op = 0; op < c.n * c.n; ++op) nd->lie.push_back(SparseMatrix::zero(c.dim, c.dim, c.p));
    return WeightModule(std::move(nd));
  }

  static WeightModule det_power(int n, Scalar p, int k) {
    auto nd = base_node(ModuleKind::det_power, n, p, 1);
    nd->param = k;
    nd->weights = {Weight(static_cast<std::size_t>(n), k)};
    nd->labels = {"det^" + std::to_string(k)};
    std::vector<IntMatrix> e = zero_integral(n, 1);
    for (int i = 0; i < n; ++i) e[idx(n, i, i)].add(0, 0, k);
    nd->integral = std::move(e);
    finish_lie_from_integral(*nd);
    return WeightModule(std::move(nd));
  }

  /// S/N for submodules N within S of an ambient module, both spanned by weight vectors.
  static WeightModule subquotient(const WeightModule& ambient, const Subspace& s, const Subspace& n_sub) {
    const Node& a = ambient.node();
    if (s.ambient_dim() != a.dim || n_sub.ambient_dim() != a.dim)
      throw ParameterError("subquotient: subspaces live in a different ambient");
    if (!s.contains(n_sub)) throw ParameterError("subquotient: N is not contained in S");
    Subspace reps(a.dim, a.p);
    for (const auto& v : s.basis()) reps.insert(n_sub.reduce(v));
    auto nd = base_node(ModuleKind::subquotient, a.n, a.p, reps.dim());
    nd->children = {ambient.node_};
    for (std::size_t k = 0; k < reps.dim(); ++k) {
      const Vec& row = reps.basis()[k];
      const Weight& w = a.weights[reps.pivots()[k]];
      for (std::size_t c = 0; c < row.size(); ++c)
        if (row[c] && a.weights[c] != w) throw ParameterError("subquotient: basis is not weight-homogeneous");
      nd->weights.push_back(w);
      nd->labels.push_back("[" + a.labels[reps.pivots()[k]] + "]");
    }
    for (int op = 0; op < a.n * a.n; ++op) {
      SparseMatrix::Builder b(reps.dim(), reps.dim(), a.p);
      for (std::size_t k = 0; k < reps.dim(); ++k) {
        Vec img = a.lie[static_cast<std::size_t>(op)].apply(reps.basis()[k]);
        Vec red = n_sub.reduce(img);
        if (!reps.contains(red)) throw DomainError("subquotient: S is not stable under the Lie action");
        Vec co = reps.coordinates(red);
        for (std::size_t r = 0; r < co.size(); ++r) b.add(r, k, co[r]);
      }
      nd->lie.push_back(b.build());
    }
    nd->sub_s = s;
    nd->sub_n = n_sub;
    nd->reps = std::move(reps);
    return WeightModule(std::move(nd));
  }

  /// A module known only through weights and Lie matrices; it has no group action.
  static WeightModule bare(int n, Scalar p, std::vector<Weight> weights, std::vector<SparseMatrix> lie) {
    auto nd = base_node(ModuleKind::bare, n, p, weights.size());
    if (lie.size() != static_cast<std::size_t>(n * n)) throw ParameterError("bare module: need n^2 Lie matrices");
    nd->weights = std::move(weights);
    nd->labels.resize(nd->dim, "?");
    nd->lie = std::move(lie);
    return WeightModule(std::move(nd));
  }

  // Accessors -------------------------------------------------------------------

  int n() const { return node().n; }
  Scalar prime() const { return node().p; }
  std::size_t dim() const { return node().dim; }
  ModuleKind kind() const { return node().kind; }
  bool flagged_zero() const { return node().flagged_zero; }
  const std::vector<Weight>& weights() const { return node().weights; }
  const Weight& weight(std::size_t k) const { return node().weights.at(k); }
  const std::string& label(std::size_t k) const { return node().labels.at(k); }
  bool has_integral_form() const { return node().integral.has_value(); }
  const Node& node() const {
    if (!node_) throw ParameterError("WeightModule: empty module handle");
    return *node_;
  }
  bool same_as(const WeightModule& o) const { return node_ == o.node_; }

  /// Matrix of E_ij (0-based) mod p.
  const SparseMatrix& lie(int i, int j) const {
    check_axes(i, j);
    return node().lie[idx(n(), i, j)];
  }

  const IntMatrix& integral(int i, int j) const {
    check_axes(i, j);
    if (!node().integral) throw CapabilityError("module has no integral form");
    return (*node().integral)[idx(n(), i, j)];
  }

  /// E_ij^(m) mod p for i != j.
  SparseMatrix divided_power(int i, int j, int m) const {
    check_axes(i, j);
    if (i == j) throw ParameterError("divided_power: only off-diagonal root vectors");
    if (m < 0) throw ParameterError("divided_power: negative order");
    return divided_power_of(node(), i, j, m);
  }

  /// Largest m for which E_ij^(m) can be nonzero on this module.
  int divided_power_bound(int j) const {
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& w : weights()) {
      int v = w[static_cast<std::size_t>(j)];
      if (first || v < lo) lo = v;
      if (first || v > hi) hi = v;
      first = false;
    }
    return hi - lo;
  }

  /// Every nonzero E_ij^(m), i != j, m >= 1, in a fixed order.
  std::vector<SparseMatrix> divided_power_operators() const {
    std::vector<SparseMatrix> ops;
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j) {
        if (i == j) continue;
        for (int m = 1; m <= divided_power_bound(j); ++m) {
          SparseMatrix d = divided_power(i, j, m);
          if (!d.is_zero()) ops.push_back(std::move(d));
        }
      }
    return ops;
  }

  /// Action of an invertible matrix over a commutative ring R.
  template <class R>
  Matrix<R> group_matrix(const Matrix<R>& g) const {
    if (g.rows() != static_cast<std::size_t>(n()) || g.cols() != g.rows())
      throw ParameterError("group_matrix: matrix has the wrong size");
    return group_matrix_of(node(), g);
  }

 private:
  static std::size_t idx(int n, int i, int j) { return static_cast<std::size_t>(i * n + j); }

  void check_axes(int i, int j) const {
    if (i < 0 || j < 0 || i >= n() || j >= n()) throw ParameterError("root index out of range");
  }

  static std::shared_ptr<Node> base_node(ModuleKind kind, int n, Scalar p, std::size_t dim) {
    if (n < 1) throw ParameterError("module: n must be >= 1");
    auto nd = std::make_shared<Node>();
    nd->kind = kind;
    nd->n = n;
    nd->p = checked_prime(p);
    nd->dim = dim;
    return nd;
  }

  static std::vector<IntMatrix> zero_integral(int n, std::size_t dim) {
    return std::vector<IntMatrix>(static_cast<std::size_t>(n * n), IntMatrix(dim, dim));
  }

  static void finish_lie_from_integral(Node& nd) {
    nd.lie.clear();
    for (const auto& e : *nd.integral) nd.lie.push_back(e.mod_p(nd.p));
  }

  static SparseMatrix kron_sum(const SparseMatrix& a, const SparseMatrix& b, std::size_t da, std::size_t db,
                               Scalar p) {
    SparseMatrix::Builder out(da * db, da * db, p);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < db; ++j) {
        for (const auto& e : a.column(i)) out.add(e.row * db + j, i * db + j, e.value);
        for (const auto& e : b.column(j)) out.add(i * db + e.row, i * db + j, e.value);
      }
    return out.build();
  }

  static SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix::Builder out(a.rows() * b.rows(), a.cols() * b.cols(), a.prime());
    for (std::size_t i = 0; i < a.cols(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        for (const auto& ea : a.column(i))
          for (const auto& eb : b.column(j))
            out.add(ea.row * b.rows() + eb.row, i * b.cols() + j, mod_mul(ea.value, eb.value, a.prime()));
    return out.build();
  }

  static SparseMatrix divided_power_of(const Node& nd, int i, int j, int m) {
    const std::size_t d = nd.dim;
    if (m == 0) return SparseMatrix::identity(d, nd.p);
    if (nd.integral) {
      const IntMatrix& e = (*nd.integral)[idx(nd.n, i, j)];
      IntMatrix acc = e;
      for (int k = 2; k <= m && !acc.is_zero(); ++k) acc = (acc * e).divided_exactly(k);
      return acc.mod_p(nd.p);
    }
    switch (nd.kind) {
      case ModuleKind::twist: {
        const int p = static_cast<int>(nd.p);
        if (m % p) return SparseMatrix::zero(d, d, nd.p);
        return divided_power_of(*nd.children[0], i, j, m / p);
      }
      case ModuleKind::tensor: {
        const Node& x = *nd.children[0];
        const Node& y = *nd.children[1];
        SparseMatrix acc = SparseMatrix::zero(d, d, nd.p);
        for (int a = 0; a <= m; ++a) {
          SparseMatrix l = divided_power_of(x, i, j, a);
          if (l.is_zero()) continue;
          SparseMatrix r = divided_power_of(y, i, j, m - a);
          if (r.is_zero()) continue;
          acc = acc + kron(l, r);
        }
        return acc;
      }
      case ModuleKind::subquotient: {
        const Node& a = *nd.children[0];
        SparseMatrix amb = divided_power_of(a, i, j, m);
        SparseMatrix::Builder b(d, d, nd.p);
        for (std::size_t k = 0; k < d; ++k) {
          Vec red = nd.sub_n->reduce(amb.apply(nd.reps->basis()[k]));
          if (!nd.reps->contains(red)) throw DomainError("subquotient: S is not stable under divided powers");
          Vec co = nd.reps->coordinates(red);
          for (std::size_t r = 0; r < co.size(); ++r) b.add(r, k, co[r]);
        }
        return b.build();
      }
      default:
        throw CapabilityError("divided powers are not available for this module");
    }
  }

  template <class R>
  static Matrix<R> group_matrix_of(const Node& nd, const Matrix<R>& g) {
    const R& proto = g(0, 0);
    const std::size_t d = nd.dim;
    switch (nd.kind) {
      case ModuleKind::trivial:
        return Matrix<R>::identity(1, proto);
      case ModuleKind::standard:
        return g;
      case ModuleKind::exterior: {
        Matrix<R> out(d, d, proto);
        const std::size_t k = static_cast<std::size_t>(nd.param);
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = 0; b < d; ++b) {
            if (k == 0) {
              out(a, b) = proto.one_like();
              continue;
            }
            Matrix<R> minor(k, k, proto);
            for (std::size_t u = 0; u < k; ++u)
              for (std::size_t v = 0; v < k; ++v)
                minor(u, v) = g(static_cast<std::size_t>(nd.tuples[a][u]), static_cast<std::size_t>(nd.tuples[b][v]));
            out(a, b) = minor.determinant();
          }
        return out;
      }
      case ModuleKind::sym: {
        const Node& c = *nd.children[0];
        Matrix<R> cg = group_matrix_of(c, g);
        Matrix<R> out(d, d, proto);
        for (std::size_t b = 0; b < d; ++b) {
          // Expand prod_k (column t_k of cg) in Sym.
          std::map<std::vector<int>, R> poly;
          poly.emplace(std::vector<int>{}, proto.one_like());
          for (int t : nd.tuples[b]) {
            std::map<std::vector<int>, R> next;
            for (const auto& [mono, coef] : poly)
              for (std::size_t l = 0; l < c.dim; ++l) {
                const R& entry = cg(l, static_cast<std::size_t>(t));
                if (entry.is_zero()) continue;
                std::vector<int> s = mono;
                s.insert(std::upper_bound(s.begin(), s.end(), static_cast<int>(l)), static_cast<int>(l));
                R term = coef * entry;
                auto it = next.find(s);
                if (it == next.end()) next.emplace(std::move(s), std::move(term));
                else it->second += term;
              }
            poly = std::move(next);
          }
          for (auto& [mono, coef] : poly) out(detail::tuple_index(nd.tuples, mono), b) = coef;
        }
        return out;
      }
      case ModuleKind::tensor: {
        const Node& x = *nd.children[0];
        const Node& y = *nd.children[1];
        Matrix<R> gx = group_matrix_of(x, g), gy = group_matrix_of(y, g);
        Matrix<R> out(d, d, proto);
        for (std::size_t a = 0; a < x.dim; ++a)
          for (std::size_t b = 0; b < x.dim; ++b) {
            if (gx(a, b).is_zero()) continue;
            for (std::size_t c = 0; c < y.dim; ++c)
              for (std::size_t e = 0; e < y.dim; ++e) out(a * y.dim + c, b * y.dim + e) = gx(a, b) * gy(c, e);
          }
        return out;
      }
      case ModuleKind::twist:
        return group_matrix_of(*nd.children[0], g.entrywise_pow(nd.p));
      case ModuleKind::det_power: {
        R det = g.determinant();
        if (nd.param < 0) det = det.inverse();
        Matrix<R> out(1, 1, proto);
        out(0, 0) = det.pow(static_cast<std::uint64_t>(nd.param < 0 ? -nd.param : nd.param));
        return out;
      }
      case ModuleKind::subquotient: {
        const Node& a = *nd.children[0];
        Matrix<R> ga = group_matrix_of(a, g);
        const std::size_t fd = proto.fp_dimension();
        Matrix<R> out(d, d, proto);
        for (std::size_t k = 0; k < d; ++k) {
          const Vec& rep = nd.reps->basis()[k];
          std::vector<R> img(a.dim, proto.zero_like());
          for (std::size_t c = 0; c < a.dim; ++c) {
            if (!rep[c]) continue;
            for (std::size_t r = 0; r < a.dim; ++r)
              if (!ga(r, c).is_zero()) img[r] += ga(r, c).scaled(rep[c]);
          }
          std::vector<Vec> comps(d, Vec(fd, 0));  // comps[row][alpha]
          for (std::size_t alpha = 0; alpha < fd; ++alpha) {
            Vec w(a.dim, 0);
            for (std::size_t r = 0; r < a.dim; ++r) w[r] = img[r].fp_coordinates()[alpha];
            Vec red = nd.sub_n->reduce(w);
            if (!nd.reps->contains(red)) throw DomainError("subquotient: S is not stable under the group action");
            Vec co = nd.reps->coordinates(red);
            for (std::size_t r = 0; r < d; ++r) comps[r][alpha] = co[r];
          }
          for (std::size_t r = 0; r < d; ++r) out(r, k) = proto.from_fp_coordinates(comps[r]);
        }
        return out;
      }
      case ModuleKind::bare:
        throw CapabilityError("module has no functorial group action");
    }
    throw InternalError("unknown module kind");
  }

  std::shared_ptr<const Node> node_;
};

/// Weight generating function of a module.
inline LaurentPoly character_of(const WeightModule& m) {
  LaurentPoly f(m.n());
  for (const auto& w : m.weights()) f.add_term(w, 1);
  return f;
}

/// Character of a subspace stable under the torus, from the weights of the ambient basis.
inline LaurentPoly subspace_character(const Subspace& s, const std::vector<Weight>& basis_weights, int n) {
  std::map<Weight, std::vector<std::size_t>> by_weight;
  for (std::size_t c = 0; c < basis_weights.size(); ++c) by_weight[basis_weights[c]].push_back(c);
  LaurentPoly f(n);
  for (const auto& [w, cols] : by_weight) {
    std::vector<Vec> proj;
    for (const auto& row : s.basis()) {
      Vec v(cols.size());
      for (std::size_t k = 0; k < cols.size(); ++k) v[k] = row[cols[k]];
      proj.push_back(std::move(v));
    }
    f.add_term(w, static_cast<long long>(rank(cols.size(), s.prime(), proj)));
  }
  return f;
}

// Highest weight modules ---------------------------------------------------------

/// Sym^{m_1}(Lambda^1 U) (x) ... (x) Sym^{m_n}(Lambda^n U), keeping Sym^0 factors.
inline WeightModule highest_weight_ambient(int n, Scalar p, const std::vector<int>& m) {
  WeightModule out;
  for (int k = 1; k <= n; ++k) {
    WeightModule f = WeightModule::sym_power(WeightModule::exterior_power(n, p, k), m[static_cast<std::size_t>(k - 1)]);
    out = k == 1 ? f : WeightModule::tensor(out, f);
  }
  return out;
}

inline std::size_t highest_weight_ambient_dim(int n, const std::vector<int>& m) {
  std::size_t d = 1;
  for (int k = 1; k <= n; ++k) {
    const long long b = binomial(static_cast<unsigned>(n), static_cast<unsigned>(k));
    d *= static_cast<std::size_t>(binomial(static_cast<unsigned>(b + m[static_cast<std::size_t>(k - 1)] - 1),
                                           static_cast<unsigned>(m[static_cast<std::size_t>(k - 1)])));
  }
  return d;
}

struct HighestWeightData {
  Weight lambda;
  std::vector<int> m;
  WeightModule ambient;
  std::size_t generator_index = 0;  // v(lambda) is this basis vector of the ambient
  Subspace submodule;               // W(lambda) in ambient coordinates

  Vec generator() const { return unit_vector(ambient.dim(), generator_index); }
  WeightModule module() const {
    return WeightModule::subquotient(ambient, submodule, Subspace(ambient.dim(), ambient.prime()));
  }
};

inline void check_gln_scope(int n, Scalar p) {
  if (n < 1 || n > 3) throw ScopeError("GL_n computations are limited to 1 <= n <= 3");
  checked_prime(p);
  if (p > 7) throw ScopeError("GL_n computations are limited to p <= 7");
}

/// W(lambda): the submodule generated by v(lambda), for lambda in X_1'.
inline HighestWeightData build_W_lambda(const Weight& lambda, Scalar p, std::size_t scope_limit = kDefaultScopeLimit) {
  const int n = static_cast<int>(lambda.size());
  check_gln_scope(n, p);
  if (!is_restricted(lambda, p)) throw DomainError("build_W_lambda: weight " + weight_to_string(lambda) + " is not restricted");
  HighestWeightData h;
  h.lambda = lambda;
  h.m = omega_coefficients(lambda);
  if (highest_weight_ambient_dim(n, h.m) > scope_limit)
    throw ScopeError("build_W_lambda: ambient dimension exceeds the scope limit");
  h.ambient = highest_weight_ambient(n, p, h.m);
  // v(lambda) is the tensor of the first basis vectors of each factor.
  h.generator_index = 0;
  if (h.ambient.weight(0) != lambda) throw InternalError("build_W_lambda: generator has the wrong weight");
  const auto ops = h.ambient.divided_power_operators();
  std::vector<Vec> seeds{h.generator()};
  h.submodule = operator_closure(h.ambient.dim(), p, std::span<const Vec>(seeds), ops);
  return h;
}

/// Operator matrices restricted to a stable subspace, in its basis coordinates.
inline std::vector<SparseMatrix> restrict_operators(const std::vector<SparseMatrix>& ops, const Subspace& s) {
  std::vector<SparseMatrix> out;
  for (const auto& op : ops) {
    SparseMatrix::Builder b(s.dim(), s.dim(), s.prime());
    for (std::size_t k = 0; k < s.dim(); ++k) {
      Vec img = op.apply(s.basis()[k]);
      if (!s.contains(img)) throw DomainError("restrict_operators: subspace is not stable");
      Vec co = s.coordinates(img);
      for (std::size_t r = 0; r < co.size(); ++r) b.add(r, k, co[r]);
    }
    out.push_back(b.build());
  }
  return out;
}

struct RestrictedIrreducible {
  HighestWeightData w;
  Subspace maximal;  // M(lambda) in ambient coordinates
  std::size_t dim = 0;
  LaurentPoly character;
};

/// L(mu) = W(mu)/M(mu) for mu in X_1'.
///
/// L(mu)^* is generated by the functional dual to the highest weight line, so
/// dim L(mu) is the dimension of its closure under the transposed operators and
/// M(mu) is the common kernel of that closure.
inline RestrictedIrreducible restricted_irreducible(const Weight& mu, Scalar p,
                                                    std::size_t scope_limit = kDefaultScopeLimit) {
  RestrictedIrreducible out;
  out.w = build_W_lambda(mu, p, scope_limit);
  const Subspace& W = out.w.submodule;
  const int n = static_cast<int>(mu.size());
  auto ops = restrict_operators(out.w.ambient.divided_power_operators(), W);
  std::vector<SparseMatrix> dual;
  for (const auto& op : ops) dual.push_back(op.transpose());
  std::vector<Weight> row_weights;
  std::optional<std::size_t> top;
  for (std::size_t k = 0; k < W.dim(); ++k) {
    row_weights.push_back(out.w.ambient.weight(W.pivots()[k]));
    if (row_weights.back() == mu) {
      if (top) throw InternalError("restricted_irreducible: highest weight space is not a line");
      top = k;
    }
  }
  if (!top) throw InternalError("restricted_irreducible: highest weight missing");
  std::vector<Vec> seeds{unit_vector(W.dim(), *top)};
  Subspace F = operator_closure(W.dim(), p, std::span<const Vec>(seeds), dual);
  out.dim = F.dim();
  out.character = subspace_character(F, row_weights, n);
  out.maximal = Subspace(out.w.ambient.dim(), p);
  for (const auto& x : right_kernel(F.basis(), W.dim(), p)) out.maximal.insert(W.combine(x));
  return out;
}

namespace detail {
inline std::shared_ptr<const RestrictedIrreducible> cached_restricted(const Weight& mu, Scalar p,
                                                                      std::size_t scope_limit) {
  static std::mutex mu_lock;
  static std::map<std::pair<Weight, Scalar>, std::shared_ptr<const RestrictedIrreducible>> cache;
  const int n = static_cast<int>(mu.size());
  check_gln_scope(n, p);
  if (highest_weight_ambient_dim(n, omega_coefficients(mu)) > scope_limit)
    throw ScopeError("irreducible " + weight_to_string(mu) + ": ambient dimension exceeds the scope limit");
  {
    std::lock_guard<std::mutex> g(mu_lock);
    auto it = cache.find({mu, p});
    if (it != cache.end()) return it->second;
  }
  auto value = std::make_shared<const RestrictedIrreducible>(restricted_irreducible(mu, p, scope_limit));
  std::lock_guard<std::mutex> g(mu_lock);
  return cache.emplace(std::make_pair(mu, p), value).first->second;
}
}  // namespace detail

struct GlnIrreducible {
  Weight lambda;
  std::size_t dim = 0;
  LaurentPoly character;
};

/// Dimension and character of L(lambda) by the tensor product recursion.
///
/// L(lambda) = L(lambda - c*1) (x) det^c with c = lambda_n, and for lambda_n = 0,
/// L(lambda) = L(r) (x) L(s)^[1] with lambda = r + p s.
inline GlnIrreducible gln_irreducible(const Weight& lambda, Scalar p, std::size_t scope_limit = kDefaultScopeLimit) {
  const int n = static_cast<int>(lambda.size());
  check_gln_scope(n, p);
  if (!is_dominant(lambda)) throw DomainError("weight " + weight_to_string(lambda) + " is not dominant");
  const int c = lambda.back();
  Weight base = lambda;
  for (auto& v : base) v -= c;
  GlnIrreducible out{lambda, 1, LaurentPoly::constant(n, 1)};
  if (std::any_of(base.begin(), base.end(), [](int v) { return v != 0; })) {
    auto dec = mod_p_reduce(base, p);
    auto r = detail::cached_restricted(dec.r_part, p, scope_limit);
    out.dim = r->dim;
    out.character = r->character;
    if (std::any_of(dec.s_part.begin(), dec.s_part.end(), [](int v) { return v != 0; })) {
      auto rest = gln_irreducible(dec.s_part, p, scope_limit);
      out.dim *= rest.dim;
      out.character = out.character * adams(rest.character, p);
    }
  }
  out.character = out.character.shifted(Weight(static_cast<std::size_t>(n), c));
  return out;
}

inline std::size_t dim_gln_irreducible(const Weight& lambda, Scalar p, std::size_t scope_limit = kDefaultScopeLimit) {
  return gln_irreducible(lambda, p, scope_limit).dim;
}

/// L(lambda) as a module with a group action.
inline WeightModule gln_irreducible_module(const Weight& lambda, Scalar p,
                                           std::size_t scope_limit = kDefaultScopeLimit) {
  const int n = static_cast<int>(lambda.size());
  check_gln_scope(n, p);
  if (!is_dominant(lambda)) throw DomainError("weight " + weight_to_string(lambda) + " is not dominant");
  const int c = lambda.back();
  Weight base = lambda;
  for (auto& v : base) v -= c;
  auto dec = mod_p_reduce(base, p);
  auto r = detail::cached_restricted(dec.r_part, p, scope_limit);
  WeightModule out;
  if (r->maximal.dim() == 0 && r->w.submodule.dim() == r->w.ambient.dim()) {
    out = r->w.ambient;
  } else {
    out = WeightModule::subquotient(r->w.ambient, r->w.submodule, r->maximal);
  }
  if (std::any_of(dec.s_part.begin(), dec.s_part.end(), [](int v) { return v != 0; }))
    out = WeightModule::tensor(out, WeightModule::frobenius_twist(gln_irreducible_module(dec.s_part, p, scope_limit)));
  if (c != 0) out = WeightModule::tensor(out, WeightModule::det_power(n, p, c));
  return out;
}

// Highest weight vector identities ----------------------------------------------

struct IdentityCheck {
  std::string name;  // e.g. "(2) j=3"
  bool passed = false;
};

struct RootVectorReport {
  Weight lambda;
  int k = 0;       // 1-based highest index with m_k != 0
  int i = 0;       // 1-based highest index below k with m_i != 0, or 0
  std::vector<IdentityCheck> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
  }
};

/// Checks the eigenvalue identities for the root vectors at v(lambda) in the ambient module.
inline RootVectorReport root_vector_identities(const Weight& lambda, Scalar p) {
  const int n = static_cast<int>(lambda.size());
  check_gln_scope(n, p);
  if (!is_restricted(lambda, p)) throw DomainError("weight " + weight_to_string(lambda) + " is not restricted");
  const auto m = omega_coefficients(lambda);
  RootVectorReport rep;
  rep.lambda = lambda;
  for (int a = 1; a <= n; ++a)
    if (m[static_cast<std::size_t>(a - 1)]) rep.k = a;
  if (!rep.k) throw DomainError("root_vector_identities: weight is zero");
  for (int a = 1; a < rep.k; ++a)
    if (m[static_cast<std::size_t>(a - 1)]) rep.i = a;
  const WeightModule amb = highest_weight_ambient(n, p, m);
  const Vec v = unit_vector(amb.dim(), 0);
  auto E = [&](int a, int b, const Vec& x) { return amb.lie(a - 1, b - 1).apply(x); };
  auto times = [&](long long c, Vec x) {
    Scalar s = mod_reduce(c, p);
    for (auto& e : x) e = mod_mul(e, s, p);
    return x;
  };
  const int k = rep.k;
  const long long mk = m[static_cast<std::size_t>(k - 1)];
  for (int j = 1; j <= k; ++j)
    rep.checks.push_back({"(1) j=" + std::to_string(j), E(j, k, v) == times(j == k ? mk : 0, v)});
  for (int j = k + 1; j <= n; ++j) {
    Vec ejk = E(j, k, v);
    rep.checks.push_back({"(2) j=" + std::to_string(j), E(k, k, ejk) == times(mk - 1, ejk)});
  }
  if (mk == 1 && rep.i) {
    const int i = rep.i;
    const long long mi = m[static_cast<std::size_t>(i - 1)];
    rep.checks.push_back({"(3)", E(i, i, v) == times(mi + 1, v)});
    Vec eki = E(k, i, v);
    rep.checks.push_back({"(4a)", E(i, i, eki) == times(mi, eki)});
    for (int j = k + 1; j <= n; ++j) {
      Vec w = E(k, i, E(j, k, v));
      rep.checks.push_back({"(4b) j=" + std::to_string(j), E(i, i, w) == times(mi, w)});
    }
  }
  return rep;
}

}  // namespace frobrep

#endif  // FROBREP_GLNREP_HPP
