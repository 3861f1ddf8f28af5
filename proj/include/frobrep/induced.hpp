#ifndef FROBREP_INDUCED_HPP
#define FROBREP_INDUCED_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frobrep/autgroup.hpp"
#include "frobrep/char_ring.hpp"
#include "frobrep/glnrep.hpp"
#include "frobrep/linalg.hpp"
#include "frobrep/truncated_poly.hpp"

// I(V) = R(n,r) (x) V with its Lie and group actions.
//
// Basis vector x^I (x) v_b has index position(I) * dim V + b, where position is
// the degree-lexicographic rank of the monomial.

namespace frobrep {

/// An A-linear operator on I(V) (x) A, stored as sum_alpha a^alpha (x) G_alpha
/// over the monomial basis of A.
struct GroupOperator {
  AlgebraPtr algebra;
  std::vector<SparseMatrix> components;

  std::vector<Vec> apply(const Vec& v) const {
    std::vector<Vec> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(c.apply(v));
    return out;
  }
};

class InducedModule {
 public:
  InducedModule() = default;

  static InducedModule build(const WeightModule& fiber, int r, std::size_t scope_limit = kDefaultScopeLimit) {
    InducedModule m;
    m.fiber_ = fiber;
    m.ring_ = PolyRing::make(fiber.n(), r, fiber.prime());
    const std::size_t dim = m.ring_->size() * fiber.dim();
    if (dim > scope_limit)
      throw ScopeError("induced module of dimension " + std::to_string(dim) + " exceeds the scope limit " +
                       std::to_string(scope_limit));
    m.build_weights();
    m.build_lie();
    m.build_translations();
    return m;
  }

  const PolyRingPtr& ring() const { return ring_; }
  const WeightModule& fiber() const { return fiber_; }
  int n() const { return ring_->n(); }
  int r() const { return ring_->r(); }
  Scalar prime() const { return ring_->prime(); }
  std::size_t fiber_dim() const { return fiber_.dim(); }
  std::size_t dim() const { return ring_->size() * fiber_.dim(); }

  std::size_t index(const MultiIndex& e, std::size_t b) const { return index_of_code(ring_->code(e), b); }
  std::size_t index_of_code(std::size_t code, std::size_t b) const {
    return ring_->position(code) * fiber_.dim() + b;
  }
  /// Monomial code and fiber index of a basis vector.
  std::pair<std::size_t, std::size_t> split(std::size_t idx) const {
    return {ring_->code_at(idx / fiber_.dim()), idx % fiber_.dim()};
  }

  const std::vector<Weight>& weights() const { return weights_; }
  const std::vector<LieBasisElement>& lie_basis_elements() const { return basis_; }

  /// Matrix of delta_(axis, x^I).
  const SparseMatrix& lie_operator(const LieBasisElement& e) const {
    TruncatedPolynomial::check_axis(*ring_, e.axis);
    return lie_[static_cast<std::size_t>(e.axis) * ring_->size() + ring_->position(ring_->code(e.exponent))];
  }
  const std::vector<SparseMatrix>& lie_operators() const { return lie_; }

  Vec lie_action(const LieBasisElement& e, const Vec& v) const { return lie_operator(e).apply(v); }

  /// d_axis^(m) (x) id for 1 <= m < p^r.
  const SparseMatrix& divided_translation(int axis, int m) const {
    TruncatedPolynomial::check_axis(*ring_, axis);
    if (m < 1 || m >= ring_->height()) throw ParameterError("divided_translation: order out of range");
    return translations_[static_cast<std::size_t>(axis) * static_cast<std::size_t>(ring_->height() - 1) +
                         static_cast<std::size_t>(m - 1)];
  }
  const std::vector<SparseMatrix>& divided_translations() const { return translations_; }

  /// 1 (x) V.
  Subspace constant_slice() const {
    Subspace s(dim(), prime());
    for (std::size_t b = 0; b < fiber_.dim(); ++b) s.insert(unit_vector(dim(), index_of_code(0, b)));
    return s;
  }

  Vec basis_vector(const MultiIndex& e, std::size_t b) const { return unit_vector(dim(), index(e, b)); }

  /// f (x) v -> g(f) * rho(J_g(x)) v with J_g(x)_{ij} = d g_j / d x_i.
  GroupOperator group_operator(const GroupPoint& g) const {
    if (!g.ring()->same_as(*ring_)) throw ParameterError("group_operator: point for a different ring");
    const AlgebraPtr& alg = g.algebra();
    const std::size_t da = alg->dim();
    const PolyRing& R = *ring_;
    const std::size_t dv = fiber_.dim();
    // images of all monomials
    std::vector<TruncatedPolynomial> mono;
    mono.reserve(R.size());
    mono.push_back(TruncatedPolynomial::constant(ring_, alg, 1));
    for (std::size_t c = 1; c < R.size(); ++c) {
      const auto& e = R.exponents(c);
      int axis = 0;
      while (e[static_cast<std::size_t>(axis)] == 0) ++axis;
      mono.push_back(mono[c - R.stride(axis)] * g.image(axis));
    }
    PolyMatrix rho = fiber_.group_matrix(g.jacobian_functions());
    std::vector<SparseMatrix::Builder> builders;
    for (std::size_t a = 0; a < da; ++a) builders.emplace_back(dim(), dim(), prime());
    for (std::size_t c = 0; c < R.size(); ++c)
      for (std::size_t b = 0; b < dv; ++b) {
        const std::size_t col = index_of_code(c, b);
        for (std::size_t row_b = 0; row_b < dv; ++row_b) {
          if (rho(row_b, b).is_zero()) continue;
          const TruncatedPolynomial h = mono[c] * rho(row_b, b);
          const Vec& raw = h.fp_coordinates();
          for (std::size_t d = 0; d < R.size(); ++d)
            for (std::size_t a = 0; a < da; ++a) {
              Scalar v = raw[d * da + a];
              if (v) builders[a].add(index_of_code(d, row_b), col, v);
            }
        }
      }
    GroupOperator op{alg, {}};
    for (auto& b : builders) op.components.push_back(b.build());
    return op;
  }

  std::vector<Vec> group_action(const GroupPoint& g, const Vec& v) const { return group_operator(g).apply(v); }

 private:
  void build_weights() {
    const PolyRing& R = *ring_;
    for (std::size_t pos = 0; pos < R.size(); ++pos) {
      const auto& e = R.exponents(R.code_at(pos));
      for (std::size_t b = 0; b < fiber_.dim(); ++b) weights_.push_back(weight_add(e, fiber_.weight(b)));
    }
  }

  void build_lie() {
    const PolyRing& R = *ring_;
    const Scalar p = prime();
    const std::size_t dv = fiber_.dim();
    basis_ = lie_basis(R);
    for (const auto& el : basis_) {
      const int i = el.axis;
      const std::size_t ic = R.code(el.exponent);
      SparseMatrix::Builder b(dim(), dim(), p);
      for (std::size_t c = 0; c < R.size(); ++c) {
        const auto& e = R.exponents(c);
        // x^I d_i f (x) v
        const int ei = e[static_cast<std::size_t>(i)];
        if (ei % static_cast<int>(p)) {
          long t = R.product_code(c - R.stride(i), ic);
          if (t >= 0)
            for (std::size_t v = 0; v < dv; ++v)
              b.add(index_of_code(static_cast<std::size_t>(t), v), index_of_code(c, v), mod_reduce(ei, p));
        }
        // sum_j f d_j(x^I) (x) E_ji v
        for (int j = 0; j < n(); ++j) {
          const int ij = el.exponent[static_cast<std::size_t>(j)];
          if (ij % static_cast<int>(p) == 0) continue;
          long t = R.product_code(c, ic - R.stride(j));
          if (t < 0) continue;
          const SparseMatrix& E = fiber_.lie(j, i);
          for (std::size_t v = 0; v < dv; ++v)
            for (const auto& ent : E.column(v))
              b.add(index_of_code(static_cast<std::size_t>(t), ent.row), index_of_code(c, v),
                    mod_mul(mod_reduce(ij, p), ent.value, p));
        }
      }
      lie_.push_back(b.build());
    }
  }

  void build_translations() {
    const PolyRing& R = *ring_;
    const Scalar p = prime();
    const std::size_t dv = fiber_.dim();
    for (int i = 0; i < n(); ++i)
      for (int m = 1; m < R.height(); ++m) {
        SparseMatrix::Builder b(dim(), dim(), p);
        for (std::size_t c = 0; c < R.size(); ++c) {
          const int ei = R.exponents(c)[static_cast<std::size_t>(i)];
          if (ei < m) continue;
          Scalar coef = binomial_mod(static_cast<std::uint64_t>(ei), static_cast<std::uint64_t>(m), p);
          if (!coef) continue;
          const std::size_t t = c - static_cast<std::size_t>(m) * R.stride(i);
          for (std::size_t v = 0; v < dv; ++v) b.add(index_of_code(t, v), index_of_code(c, v), coef);
        }
        translations_.push_back(b.build());
      }
  }

  PolyRingPtr ring_;
  WeightModule fiber_;
  std::vector<Weight> weights_;
  std::vector<LieBasisElement> basis_;
  std::vector<SparseMatrix> lie_;
  std::vector<SparseMatrix> translations_;
};

inline LaurentPoly character_of(const InducedModule& m) {
  LaurentPoly f(m.n());
  for (const auto& w : m.weights()) f.add_term(w, 1);
  return f;
}

/// Character of a torus-stable subspace of I(V).
inline LaurentPoly subspace_character(const InducedModule& m, const Subspace& s) {
  return subspace_character(s, m.weights(), m.n());
}

/// Vectors of S killed by every divided translation operator.
inline Subspace g_minus_invariants(const InducedModule& m, const Subspace& s) {
  return joint_kernel_in(s, m.divided_translations());
}

/// Closure of seeds under the Lie basis operators.
inline Subspace lie_closure(const InducedModule& m, std::span<const Vec> seeds,
                            std::vector<std::size_t>* trace = nullptr) {
  return operator_closure(m.dim(), m.prime(), seeds, m.lie_operators(), trace);
}

/// True iff every component of every sampled g maps S into S.
inline bool subspace_group_stable(const InducedModule& m, const Subspace& s, const std::vector<GroupPoint>& samples) {
  for (const auto& g : samples) {
    GroupOperator op = m.group_operator(g);
    for (const auto& comp : op.components)
      for (const auto& v : s.basis())
        if (!s.contains(comp.apply(v))) return false;
  }
  return true;
}

/// True iff every Lie basis operator maps S into S.
inline bool subspace_lie_stable(const InducedModule& m, const Subspace& s) {
  for (const auto& op : m.lie_operators())
    for (const auto& v : s.basis())
      if (!s.contains(op.apply(v))) return false;
  return true;
}

/// I(V (x) W^[r]) next to I(V) (x) P_r^* W on the same basis.
///
/// Both use index (position * dim V + v) * dim W + w, so the bijection is the identity.
struct TensorPullback {
  InducedModule twisted;  // I(V (x) W^[r])
  InducedModule base;     // I(V)
  WeightModule w;

  std::size_t dim() const { return base.dim() * w.dim(); }

  SparseMatrix lie_operator(const LieBasisElement& e) const {
    const SparseMatrix& a = base.lie_operator(e);
    SparseMatrix::Builder b(dim(), dim(), base.prime());
    const std::size_t dw = w.dim();
    for (std::size_t c = 0; c < a.cols(); ++c)
      for (const auto& ent : a.column(c))
        for (std::size_t k = 0; k < dw; ++k) b.add(ent.row * dw + k, c * dw + k, ent.value);
    return b.build();
  }

  /// g acts by its action on I(V) tensored with W evaluated at P_r(g).
  GroupOperator group_operator(const GroupPoint& g) const {
    GroupOperator a = base.group_operator(g);
    const AlgebraPtr& alg = g.algebra();
    AlgebraMatrix pw = w.group_matrix(transfer_P_r(g));
    const std::size_t dw = w.dim(), da = alg->dim();
    std::vector<SparseMatrix::Builder> builders;
    for (std::size_t k = 0; k < da; ++k) builders.emplace_back(dim(), dim(), base.prime());
    for (std::size_t alpha = 0; alpha < da; ++alpha)
      for (std::size_t c = 0; c < base.dim(); ++c)
        for (const auto& ent : a.components[alpha].column(c))
          for (std::size_t x = 0; x < dw; ++x)
            for (std::size_t y = 0; y < dw; ++y) {
              const Vec& co = pw(x, y).coefficients();
              for (std::size_t beta = 0; beta < da; ++beta) {
                if (!co[beta]) continue;
                long prod = alg->product_index(alpha, beta);
                if (prod < 0) continue;
                builders[static_cast<std::size_t>(prod)].add(ent.row * dw + x, c * dw + y,
                                                             mod_mul(ent.value, co[beta], base.prime()));
              }
            }
    GroupOperator op{alg, {}};
    for (auto& b : builders) op.components.push_back(b.build());
    return op;
  }
};

inline WeightModule frobenius_twist_power(const WeightModule& w, int r) {
  WeightModule out = w;
  for (int k = 0; k < r; ++k) out = WeightModule::frobenius_twist(out);
  return out;
}

inline TensorPullback tensor_with_pullback(const InducedModule& base, const WeightModule& w,
                                           std::size_t scope_limit = kDefaultScopeLimit) {
  TensorPullback t;
  t.base = base;
  t.w = w;
  t.twisted = InducedModule::build(WeightModule::tensor(base.fiber(), frobenius_twist_power(w, base.r())), base.r(),
                                   scope_limit);
  return t;
}

}  // namespace frobrep

#endif  // FROBREP_INDUCED_HPP
