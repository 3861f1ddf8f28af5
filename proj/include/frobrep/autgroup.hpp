#ifndef FROBREP_AUTGROUP_HPP
#define FROBREP_AUTGROUP_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "frobrep/errors.hpp"
#include "frobrep/fp.hpp"
#include "frobrep/ring_matrix.hpp"
#include "frobrep/test_algebra.hpp"
#include "frobrep/truncated_poly.hpp"

// Points of the automorphism group of R(n,r) over a test algebra A.
//
// A point g is the tuple of images g_i = g(x_i) in R(n,r)_A. The algebra map
// attached to g is f -> substitute(f, g-images). Composition is
//
//   (g*h)_i = substitute(g_i, h-images),
//
// so the map of g*h is (map of h) after (map of g): the group acts on
// R(n,r) from the right. Linear points compose as J_{g*h} = J_h J_g.

namespace frobrep {

using AlgebraMatrix = Matrix<AlgebraElement>;
using PolyMatrix = Matrix<TruncatedPolynomial>;

class GroupPoint;

enum class PointDefect { none, wrong_shape, constant_not_nilpotent, jacobian_not_invertible };

inline const char* to_string(PointDefect d) {
  switch (d) {
    case PointDefect::none: return "none";
    case PointDefect::wrong_shape: return "wrong_shape";
    case PointDefect::constant_not_nilpotent: return "constant_not_nilpotent";
    case PointDefect::jacobian_not_invertible: return "jacobian_not_invertible";
  }
  return "?";
}

class GroupPoint {
 public:
  GroupPoint() = default;

  /// Wraps images without checking the point criteria; see validate_point.
  static GroupPoint unchecked(PolyRingPtr ring, AlgebraPtr alg, std::vector<TruncatedPolynomial> images) {
    return GroupPoint(std::move(ring), std::move(alg), std::move(images));
  }

  const PolyRingPtr& ring() const { return ring_; }
  const AlgebraPtr& algebra() const { return alg_; }
  int n() const { return ring_->n(); }
  int r() const { return ring_->r(); }
  Scalar prime() const { return ring_->prime(); }
  const std::vector<TruncatedPolynomial>& images() const { return images_; }
  const TruncatedPolynomial& image(int i) const { return images_[static_cast<std::size_t>(i)]; }

  static GroupPoint identity(const PolyRingPtr& ring, const AlgebraPtr& alg) {
    std::vector<TruncatedPolynomial> im;
    for (int i = 0; i < ring->n(); ++i) im.push_back(TruncatedPolynomial::variable(ring, alg, i));
    return GroupPoint(ring, alg, std::move(im));
  }

  /// x_i -> x_i + a_i (each a_i^{p^r} = 0).
  static GroupPoint translation(const PolyRingPtr& ring, const std::vector<AlgebraElement>& a);

  /// x_j -> sum_i m(i,j) x_i, so that the Jacobian at 0 is m.
  static GroupPoint linear(const PolyRingPtr& ring, const AlgebraMatrix& m);

  /// Lie point x_k -> x_k + eps * [k == axis] x^I over an algebra with eps^2 = 0.
  static GroupPoint lie_point(const PolyRingPtr& ring, const AlgebraElement& eps, int axis, const MultiIndex& I);

  /// J(i,j) = d g_j / d x_i at 0, i.e. the coefficient of x_i in g_j.
  AlgebraMatrix jacobian() const {
    AlgebraMatrix m(static_cast<std::size_t>(n()), static_cast<std::size_t>(n()), AlgebraElement::zero(alg_));
    for (int i = 0; i < n(); ++i) {
      MultiIndex e(static_cast<std::size_t>(n()), 0);
      e[static_cast<std::size_t>(i)] = 1;
      const std::size_t c = ring_->code(e);
      for (int j = 0; j < n(); ++j)
        m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = images_[static_cast<std::size_t>(j)].coefficient(c);
    }
    return m;
  }

  /// Matrix of functions (d g_j / d x_i)_{ij} over R(n,r)_A.
  PolyMatrix jacobian_functions() const {
    PolyMatrix m(static_cast<std::size_t>(n()), static_cast<std::size_t>(n()), images_.front());
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j)
        m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
            partial_derivative(images_[static_cast<std::size_t>(j)], i);
    return m;
  }

  std::vector<AlgebraElement> constants() const {
    std::vector<AlgebraElement> c;
    for (const auto& g : images_) c.push_back(g.constant_term());
    return c;
  }

  /// Image of f under the algebra map attached to this point.
  TruncatedPolynomial apply(const TruncatedPolynomial& f) const { return substitute(f, images_); }

  bool is_identity() const { return *this == identity(ring_, alg_); }

  friend bool operator==(const GroupPoint& a, const GroupPoint& b) {
    return a.ring_->same_as(*b.ring_) && a.alg_->same_as(*b.alg_) && a.images_ == b.images_;
  }

 private:
  GroupPoint(PolyRingPtr ring, AlgebraPtr alg, std::vector<TruncatedPolynomial> images)
      : ring_(std::move(ring)), alg_(std::move(alg)), images_(std::move(images)) {}

  PolyRingPtr ring_;
  AlgebraPtr alg_;
  std::vector<TruncatedPolynomial> images_;
};

/// Outcome of validate_point: either a point or the first violated criterion.
struct PointValidation {
  std::optional<GroupPoint> point;
  PointDefect defect = PointDefect::none;
  std::string message;

  bool ok() const { return point.has_value(); }
  const GroupPoint& value() const {
    if (!point) throw DomainError("invalid group point: " + message);
    return *point;
  }
};

inline PointValidation validate_point(const PolyRingPtr& ring, const AlgebraPtr& alg,
                                      std::vector<TruncatedPolynomial> images) {
  PointValidation out;
  if (static_cast<int>(images.size()) != ring->n()) {
    out.defect = PointDefect::wrong_shape;
    out.message = "expected " + std::to_string(ring->n()) + " images, got " + std::to_string(images.size());
    return out;
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    auto& g = images[i];
    if (!g.ring()->same_as(*ring)) {
      out.defect = PointDefect::wrong_shape;
      out.message = "image " + std::to_string(i + 1) + " lives in a different polynomial ring";
      return out;
    }
    if (!g.algebra()->same_as(*alg)) {
      if (g.algebra()->dim() != 1) {
        out.defect = PointDefect::wrong_shape;
        out.message = "image " + std::to_string(i + 1) + " has coefficients in a different algebra";
        return out;
      }
      g = g.extend_scalars(alg);
    }
  }
  const std::uint64_t q = static_cast<std::uint64_t>(ring->height());
  for (std::size_t i = 0; i < images.size(); ++i)
    if (!images[i].constant_term().pow(q).is_zero()) {
      out.defect = PointDefect::constant_not_nilpotent;
      out.message = "constant term of image " + std::to_string(i + 1) + " has nonzero p^r-th power";
      return out;
    }
  GroupPoint g = GroupPoint::unchecked(ring, alg, std::move(images));
  if (!g.jacobian().is_invertible()) {
    out.defect = PointDefect::jacobian_not_invertible;
    out.message = "Jacobian at 0 is not invertible over A";
    return out;
  }
  out.point = std::move(g);
  return out;
}

inline GroupPoint make_point(const PolyRingPtr& ring, const AlgebraPtr& alg, std::vector<TruncatedPolynomial> images) {
  return validate_point(ring, alg, std::move(images)).value();
}

inline GroupPoint GroupPoint::translation(const PolyRingPtr& ring, const std::vector<AlgebraElement>& a) {
  if (static_cast<int>(a.size()) != ring->n()) throw ParameterError("translation: need n constants");
  const AlgebraPtr& alg = a.front().algebra();
  std::vector<TruncatedPolynomial> im;
  for (int i = 0; i < ring->n(); ++i)
    im.push_back(TruncatedPolynomial::variable(ring, alg, i) +
                 TruncatedPolynomial::constant(ring, a[static_cast<std::size_t>(i)]));
  return make_point(ring, alg, std::move(im));
}

inline GroupPoint GroupPoint::linear(const PolyRingPtr& ring, const AlgebraMatrix& m) {
  const std::size_t n = static_cast<std::size_t>(ring->n());
  if (m.rows() != n || m.cols() != n) throw ParameterError("linear: matrix must be n x n");
  const AlgebraPtr& alg = m(0, 0).algebra();
  std::vector<TruncatedPolynomial> im;
  for (std::size_t j = 0; j < n; ++j) {
    TruncatedPolynomial g(ring, alg);
    for (std::size_t i = 0; i < n; ++i)
      g += TruncatedPolynomial::variable(ring, alg, static_cast<int>(i)).scaled(m(i, j));
    im.push_back(std::move(g));
  }
  return make_point(ring, alg, std::move(im));
}

inline GroupPoint GroupPoint::lie_point(const PolyRingPtr& ring, const AlgebraElement& eps, int axis,
                                        const MultiIndex& I) {
  TruncatedPolynomial::check_axis(*ring, axis);
  const AlgebraPtr& alg = eps.algebra();
  std::vector<TruncatedPolynomial> im;
  for (int k = 0; k < ring->n(); ++k) {
    TruncatedPolynomial g = TruncatedPolynomial::variable(ring, alg, k);
    if (k == axis) g += TruncatedPolynomial::monomial(ring, I, eps);
    im.push_back(std::move(g));
  }
  return make_point(ring, alg, std::move(im));
}

inline void check_compatible(const GroupPoint& g, const GroupPoint& h) {
  if (!g.ring()->same_as(*h.ring())) throw ParameterError("group points have different (n, r, p)");
  if (!g.algebra()->same_as(*h.algebra())) throw ParameterError("group points live over different algebras");
}

/// (g*h)_i = substitute(g_i, h-images).
inline GroupPoint compose(const GroupPoint& g, const GroupPoint& h) {
  check_compatible(g, h);
  std::vector<TruncatedPolynomial> im;
  for (const auto& gi : g.images()) im.push_back(substitute(gi, h.images()));
  return make_point(g.ring(), g.algebra(), std::move(im));
}

/// Factors g = translation * linear * unipotent.
struct TriangularFactors {
  std::vector<AlgebraElement> translation;
  AlgebraMatrix linear;
  GroupPoint unipotent;
};

inline bool is_unipotent(const GroupPoint& g) {
  for (const auto& c : g.constants())
    if (!c.is_zero()) return false;
  return g.jacobian().is_identity();
}

inline TriangularFactors triangular_factorize(const GroupPoint& g) {
  const PolyRingPtr& ring = g.ring();
  const std::size_t n = static_cast<std::size_t>(g.n());
  TriangularFactors f{g.constants(), g.jacobian(), GroupPoint()};
  const AlgebraMatrix jinv = f.linear.inverse();
  // u_k = sum_j (J^{-1})_{jk} (g_j - a_j)
  std::vector<TruncatedPolynomial> shifted;
  for (std::size_t j = 0; j < n; ++j)
    shifted.push_back(g.images()[j] - TruncatedPolynomial::constant(ring, f.translation[j]));
  std::vector<TruncatedPolynomial> u;
  for (std::size_t k = 0; k < n; ++k) {
    TruncatedPolynomial acc(ring, g.algebra());
    for (std::size_t j = 0; j < n; ++j) acc += shifted[j].scaled(jinv(j, k));
    u.push_back(std::move(acc));
  }
  f.unipotent = make_point(ring, g.algebra(), std::move(u));
  if (!is_unipotent(f.unipotent)) throw InternalError("triangular_factorize: residue is not unipotent");
  return f;
}

inline GroupPoint recompose(const TriangularFactors& f) {
  const PolyRingPtr& ring = f.unipotent.ring();
  return compose(GroupPoint::translation(ring, f.translation),
                 compose(GroupPoint::linear(ring, f.linear), f.unipotent));
}

/// Inverse of a unipotent point: fixed point of v = x - N(v), where u = x + N.
inline GroupPoint invert_unipotent(const GroupPoint& u) {
  const PolyRingPtr& ring = u.ring();
  const std::size_t n = static_cast<std::size_t>(u.n());
  std::vector<TruncatedPolynomial> nonlinear;
  for (std::size_t i = 0; i < n; ++i)
    nonlinear.push_back(u.images()[i] - TruncatedPolynomial::variable(ring, u.algebra(), static_cast<int>(i)));
  GroupPoint v = GroupPoint::identity(ring, u.algebra());
  const int bound = u.n() * ring->height() + 1;
  for (int step = 0; step <= bound; ++step) {
    std::vector<TruncatedPolynomial> next;
    for (std::size_t i = 0; i < n; ++i)
      next.push_back(TruncatedPolynomial::variable(ring, u.algebra(), static_cast<int>(i)) -
                     substitute(nonlinear[i], v.images()));
    GroupPoint w = make_point(ring, u.algebra(), std::move(next));
    if (w == v) return v;
    v = std::move(w);
  }
  throw InternalError("invert_unipotent: iteration did not stabilize");
}

inline GroupPoint invert(const GroupPoint& g) {
  TriangularFactors f = triangular_factorize(g);
  const PolyRingPtr& ring = g.ring();
  std::vector<AlgebraElement> neg;
  for (const auto& a : f.translation) neg.push_back(-a);
  return compose(invert_unipotent(f.unipotent),
                 compose(GroupPoint::linear(ring, f.linear.inverse()), GroupPoint::translation(ring, neg)));
}

/// g lies in U_i iff every constant term c satisfies c^{p^i} = 0.
inline bool in_U_i(const GroupPoint& g, int level) {
  if (level < 1 || level > g.r()) throw ParameterError("in_U_i: level out of range");
  return constants_nilpotent_of_level(g.images(), level);
}

/// Entry-wise p^r-th power of the Jacobian at 0.
inline AlgebraMatrix transfer_P(const GroupPoint& g, int level) {
  return g.jacobian().entrywise_pow(static_cast<std::uint64_t>(ipow(g.prime(), static_cast<unsigned>(level))));
}
inline AlgebraMatrix transfer_P_r(const GroupPoint& g) { return transfer_P(g, g.r()); }

/// Point of level r-1: Frobenius on A-coefficients, then truncation.
inline GroupPoint transfer_T_r(const GroupPoint& g) {
  if (g.r() < 2) throw DomainError("transfer_T_r needs r >= 2");
  std::vector<TruncatedPolynomial> im;
  for (const auto& gi : g.images()) im.push_back(truncate_to(frobenius_coefficients(gi), g.r() - 1));
  PolyRingPtr target = im.front().ring();
  return make_point(target, g.algebra(), std::move(im));
}

/// Truncation of a point of U_i to level i.
inline GroupPoint transfer_t_ri(const GroupPoint& g, int level) {
  if (!in_U_i(g, level)) throw DomainError("transfer_t_ri: point does not lie in U_i");
  std::vector<TruncatedPolynomial> im;
  for (const auto& gi : g.images()) im.push_back(truncate_to(gi, level));
  PolyRingPtr target = im.front().ring();
  return make_point(target, g.algebra(), std::move(im));
}

struct LieBasisElement {
  int axis;
  MultiIndex exponent;
  friend bool operator==(const LieBasisElement&, const LieBasisElement&) = default;
};

/// All pairs (axis, I): axis-major, monomials in degree-lexicographic order.
inline std::vector<LieBasisElement> lie_basis(const PolyRing& ring) {
  std::vector<LieBasisElement> out;
  for (int i = 0; i < ring.n(); ++i)
    for (std::size_t c : ring.deglex_codes()) out.push_back({i, ring.exponents(c)});
  return out;
}

// Random points --------------------------------------------------------------

inline AlgebraElement random_nilpotent_of_level(const AlgebraPtr& alg, int level, Rng& rng) {
  const std::uint64_t q = static_cast<std::uint64_t>(ipow(alg->prime(), static_cast<unsigned>(level)));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    AlgebraElement a = AlgebraElement::random_nilpotent(alg, rng);
    if (a.pow(q).is_zero()) return a;
  }
  throw ScopeError("could not sample a nilpotent element of the requested level");
}

inline AlgebraMatrix random_invertible_matrix(int n, const AlgebraPtr& alg, Rng& rng) {
  for (;;) {
    AlgebraMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n), AlgebraElement::zero(alg));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = AlgebraElement::random(alg, rng);
    if (m.is_invertible()) return m;
  }
}

inline GroupPoint random_unipotent(const PolyRingPtr& ring, const AlgebraPtr& alg, Rng& rng) {
  std::vector<TruncatedPolynomial> im;
  for (int i = 0; i < ring->n(); ++i) {
    TruncatedPolynomial g = TruncatedPolynomial::variable(ring, alg, i);
    for (std::size_t c = 0; c < ring->size(); ++c)
      if (ring->degree(c) >= 2) g.set_coefficient(c, AlgebraElement::random(alg, rng));
    im.push_back(std::move(g));
  }
  return make_point(ring, alg, std::move(im));
}

inline GroupPoint random_translation(const PolyRingPtr& ring, const AlgebraPtr& alg, Rng& rng, int level = 0) {
  std::vector<AlgebraElement> a;
  for (int i = 0; i < ring->n(); ++i) a.push_back(random_nilpotent_of_level(alg, level ? level : ring->r(), rng));
  return GroupPoint::translation(ring, a);
}

/// translation * linear * unipotent with independent uniform factors.
inline GroupPoint random_point(const PolyRingPtr& ring, const AlgebraPtr& alg, Rng& rng) {
  GroupPoint t = random_translation(ring, alg, rng);
  GroupPoint l = GroupPoint::linear(ring, random_invertible_matrix(ring->n(), alg, rng));
  GroupPoint u = random_unipotent(ring, alg, rng);
  return compose(t, compose(l, u));
}

struct GroupCheckReport {
  std::size_t samples = 0;
  std::size_t checks = 0;
  std::vector<std::string> failures;  // first failing sample per statement
  bool ok() const { return failures.empty(); }
};

/// Group axioms, triangular factorization and the transfer maps on random points.
inline GroupCheckReport check_group_structure(const PolyRingPtr& ring, const AlgebraPtr& alg, std::size_t samples,
                                              Rng& rng) {
  GroupCheckReport rep;
  rep.samples = samples;
  const int r = ring->r();
  const Scalar p = ring->prime();
  const GroupPoint id = GroupPoint::identity(ring, alg);
  auto expect = [&](bool ok, const std::string& statement, std::size_t k) {
    ++rep.checks;
    if (ok) return;
    for (const auto& f : rep.failures)
      if (f.rfind(statement, 0) == 0) return;
    rep.failures.push_back(statement + " (sample " + std::to_string(k) + ")");
  };
  for (std::size_t k = 0; k < samples; ++k) {
    auto g = random_point(ring, alg, rng), h = random_point(ring, alg, rng), c = random_point(ring, alg, rng);
    expect(compose(compose(g, h), c) == compose(g, compose(h, c)), "composition is associative", k);
    expect(compose(g, id) == g && compose(id, g) == g, "the identity point is neutral", k);
    expect(compose(g, invert(g)) == id && compose(invert(g), g) == id, "every point has a two-sided inverse", k);
    auto f = triangular_factorize(g);
    auto back = recompose(f);
    expect(back == g, "triangular factorization recomposes to the point", k);
    auto f2 = triangular_factorize(back);
    expect(f2.translation == f.translation && f2.linear == f.linear && f2.unipotent == f.unipotent,
           "triangular factorization is unique", k);
    for (int i = 1; i <= r; ++i) {
      const std::uint64_t q = static_cast<std::uint64_t>(ipow(p, static_cast<unsigned>(i)));
      bool level = std::all_of(f.translation.begin(), f.translation.end(),
                               [q](const AlgebraElement& a) { return a.pow(q).is_zero(); });
      expect(in_U_i(g, i) == level, "membership in U_i matches the nilpotence level of the translation factor", k);
      if (level)
        expect(transfer_P(transfer_t_ri(g, i), i) == transfer_P(g, i), "P_i after t_{r,i} equals P_i", k);
    }
    if (r >= 2) {
      expect(transfer_P_r(transfer_T_r(g)) == transfer_P_r(g), "P_{r-1} after T_r equals P_r", k);
      expect(transfer_T_r(compose(g, h)) == compose(transfer_T_r(g), transfer_T_r(h)), "T_r is a homomorphism", k);
    }
  }
  return rep;
}

}  // namespace frobrep

#endif  // FROBREP_AUTGROUP_HPP
