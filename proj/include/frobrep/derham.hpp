#ifndef FROBREP_DERHAM_HPP
#define FROBREP_DERHAM_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "frobrep/induced.hpp"

// The de Rham complex of R(n,r), optionally tensored with V^[1].
//
// Term i is I(L^i U (x) V^[1]); dx_J is the basis vector of the subset J of L^i U.

namespace frobrep {

/// d_i : f dx_J (x) t -> sum_k d_k f dx_k ^ dx_J (x) t.
///
/// Term i has basis index (position(x^e) * binom(n,i) + J) * twist_dim + t, with J
/// the rank of the subset in detail::subsets order.
inline SparseMatrix de_rham_differential(const PolyRing& R, int i, std::size_t twist_dim = 1) {
  const int n = R.n();
  if (i < 1 || i > n) throw ParameterError("de Rham degree " + std::to_string(i) + " out of range");
  const Scalar p = R.prime();
  const auto from = detail::subsets(n, i - 1);
  const auto to = detail::subsets(n, i);
  const std::size_t fa = from.size() * twist_dim, fb = to.size() * twist_dim;
  SparseMatrix::Builder b(R.size() * fb, R.size() * fa, p);
  for (std::size_t c = 0; c < R.size(); ++c)
    for (std::size_t s = 0; s < from.size(); ++s)
      for (int k = 0; k < n; ++k) {
        const auto& J = from[s];
        const int ek = R.exponents(c)[static_cast<std::size_t>(k)];
        if (ek % static_cast<int>(p) == 0) continue;
        if (std::find(J.begin(), J.end(), k) != J.end()) continue;
        const int below = static_cast<int>(std::count_if(J.begin(), J.end(), [k](int j) { return j < k; }));
        std::vector<int> K = J;
        K.insert(K.begin() + below, k);
        const Scalar coef = mod_reduce(below % 2 ? -ek : ek, p);
        const std::size_t t = detail::tuple_index(to, K);
        const std::size_t row = R.position(c - R.stride(k)) * fb + t * twist_dim;
        const std::size_t col = R.position(c) * fa + s * twist_dim;
        for (std::size_t v = 0; v < twist_dim; ++v) b.add(row + v, col + v, coef);
      }
  return b.build();
}

/// Weights of the untwisted term i: x^e dx_J has weight e + sum_{j in J} e_j.
inline std::vector<Weight> de_rham_weights(const PolyRing& R, int i) {
  const auto sets = detail::subsets(R.n(), i);
  std::vector<Weight> out;
  for (std::size_t pos = 0; pos < R.size(); ++pos)
    for (const auto& J : sets) {
      Weight w = R.exponents(R.code_at(pos));
      for (int j : J) w[static_cast<std::size_t>(j)] += 1;
      out.push_back(std::move(w));
    }
  return out;
}

class DeRhamComplex {
 public:
  static DeRhamComplex build(int n, int r, Scalar p, std::optional<WeightModule> twist = std::nullopt,
                             std::size_t scope_limit = kDefaultScopeLimit) {
    if (twist && (twist->n() != n || twist->prime() != p))
      throw ParameterError("de Rham twist must be a module for the same (n, p)");
    DeRhamComplex c;
    c.n_ = n;
    c.r_ = r;
    c.p_ = p;
    if (twist) c.twist_ = *twist;
    for (int i = 0; i <= n; ++i) {
      WeightModule fiber = WeightModule::exterior_power(n, p, i);
      if (twist) fiber = WeightModule::tensor(fiber, WeightModule::frobenius_twist(*twist));
      c.terms_.push_back(InducedModule::build(fiber, r, scope_limit));
    }
    for (int i = 1; i <= n; ++i) c.diffs_.push_back(de_rham_differential(*c.terms_[0].ring(), i, c.twist_dim()));
    for (int i = 1; i < n; ++i)
      if (!(c.diffs_[static_cast<std::size_t>(i)] * c.diffs_[static_cast<std::size_t>(i - 1)]).is_zero())
        throw InternalError("de Rham differentials do not square to zero");
    return c;
  }

  int n() const { return n_; }
  int r() const { return r_; }
  Scalar prime() const { return p_; }
  std::size_t twist_dim() const { return twist_ ? twist_->dim() : 1; }
  const std::optional<WeightModule>& twist() const { return twist_; }

  const InducedModule& term(int i) const {
    check_degree(i, 0);
    return terms_[static_cast<std::size_t>(i)];
  }
  /// d_i : term(i-1) -> term(i), 1 <= i <= n.
  const SparseMatrix& differential(int i) const {
    check_degree(i, 1);
    return diffs_[static_cast<std::size_t>(i - 1)];
  }

  /// Index of x^e dx_J (x) t_b in term(|J|).
  std::size_t form_index(const MultiIndex& e, const std::vector<int>& J, std::size_t b = 0) const {
    const int i = static_cast<int>(J.size());
    return term(i).index(e, subset_index(i, J) * twist_dim() + b);
  }

 private:
  void check_degree(int i, int lo) const {
    if (i < lo || i > n_) throw ParameterError("de Rham degree " + std::to_string(i) + " out of range");
  }

  std::size_t subset_index(int i, const std::vector<int>& J) const {
    const auto all = detail::subsets(n_, i);
    auto it = std::find(all.begin(), all.end(), J);
    if (it == all.end()) throw ParameterError("not an increasing subset of axes");
    return static_cast<std::size_t>(it - all.begin());
  }

  int n_ = 0, r_ = 0;
  Scalar p_ = 2;
  std::optional<WeightModule> twist_;
  std::vector<InducedModule> terms_;
  std::vector<SparseMatrix> diffs_;
};

inline Subspace image_of_differential(const DeRhamComplex& c, int i) { return image(c.differential(i)); }

/// ker d_{i+1} inside term(i); everything when i = n.
inline Subspace cocycles(const DeRhamComplex& c, int i) {
  const std::size_t dim = c.term(i).dim();
  if (i == c.n()) return Subspace::full(dim, c.prime());
  const SparseMatrix t = c.differential(i + 1).transpose();
  std::vector<Vec> rows;
  for (std::size_t k = 0; k < t.cols(); ++k) rows.push_back(t.apply_column(k));
  auto ker = right_kernel(rows, dim, c.prime());
  return Subspace::span(dim, c.prime(), ker);
}

/// im d_i inside term(i); zero when i = 0.
inline Subspace coboundaries(const DeRhamComplex& c, int i) {
  if (i == 0) return Subspace(c.term(0).dim(), c.prime());
  return image_of_differential(c, i);
}

inline std::vector<std::size_t> cohomology_dimensions(const DeRhamComplex& c) {
  std::vector<std::size_t> out;
  for (int i = 0; i <= c.n(); ++i) {
    const std::size_t z = i == c.n() ? c.term(i).dim() : c.term(i).dim() - rank(c.differential(i + 1));
    const std::size_t b = i == 0 ? 0 : rank(c.differential(i));
    out.push_back(z - b);
  }
  return out;
}

/// H^i with a canonical basis: the echelon basis of the cocycles reduced modulo im d_i.
struct Cohomology {
  Subspace boundaries;
  Subspace classes;

  std::size_t dim() const { return classes.dim(); }
  /// Coordinates of the class of a cocycle.
  Vec class_coordinates(const Vec& cocycle) const { return classes.coordinates(boundaries.reduce(cocycle)); }
  bool is_zero_class(const Vec& cocycle) const { return boundaries.contains(cocycle); }
};

inline Cohomology cohomology(const DeRhamComplex& c, int i) {
  Cohomology h{coboundaries(c, i), Subspace(c.term(i).dim(), c.prime())};
  const Subspace z = cocycles(c, i);
  for (const auto& v : z.basis()) h.classes.insert(h.boundaries.reduce(v));
  return h;
}

struct CartierClass {
  std::vector<int> subset;
  Vec representative;
  Vec class_coordinates;
};

/// Image of dx_J (x) 1 under the inverse Cartier map: the class of x_J^{p-1} dx_J.
inline CartierClass cartier_inverse(const DeRhamComplex& c, const std::vector<int>& J) {
  if (c.r() != 1) throw ParameterError("cartier_inverse needs r = 1");
  if (c.twist()) throw ParameterError("cartier_inverse needs the untwisted complex");
  const int i = static_cast<int>(J.size());
  MultiIndex e(static_cast<std::size_t>(c.n()), 0);
  for (int j : J) e[static_cast<std::size_t>(j)] = static_cast<int>(c.prime()) - 1;
  CartierClass out{J, unit_vector(c.term(i).dim(), c.form_index(e, J)), {}};
  if (i < c.n() && !is_zero(c.differential(i + 1).apply(out.representative)))
    throw InternalError("Cartier representative is not a cocycle");
  out.class_coordinates = cohomology(c, i).class_coordinates(out.representative);
  return out;
}

struct EquivarianceReport {
  bool lie_ok = true;
  bool group_ok = true;
  std::size_t lie_checks = 0;
  std::size_t group_checks = 0;
  std::vector<std::string> failures;
  bool ok() const { return lie_ok && group_ok; }
};

/// d_i commutes with every Lie basis operator and with each sampled group point.
inline EquivarianceReport verify_equivariance(const DeRhamComplex& c, const std::vector<GroupPoint>& samples) {
  EquivarianceReport rep;
  for (int i = 1; i <= c.n(); ++i) {
    const InducedModule& a = c.term(i - 1);
    const InducedModule& b = c.term(i);
    const SparseMatrix& d = c.differential(i);
    for (const auto& e : a.lie_basis_elements()) {
      ++rep.lie_checks;
      if (!(d * a.lie_operator(e) - b.lie_operator(e) * d).is_zero()) {
        rep.lie_ok = false;
        rep.failures.push_back("d_" + std::to_string(i) + " does not commute with a Lie operator on axis " +
                               std::to_string(e.axis));
      }
    }
    for (std::size_t k = 0; k < samples.size(); ++k) {
      ++rep.group_checks;
      GroupOperator ga = a.group_operator(samples[k]);
      GroupOperator gb = b.group_operator(samples[k]);
      for (std::size_t alpha = 0; alpha < ga.components.size(); ++alpha)
        if (!(d * ga.components[alpha] - gb.components[alpha] * d).is_zero()) {
          rep.group_ok = false;
          rep.failures.push_back("d_" + std::to_string(i) + " does not commute with sampled group point " +
                                 std::to_string(k));
          break;
        }
    }
  }
  return rep;
}

}  // namespace frobrep

#endif  // FROBREP_DERHAM_HPP
