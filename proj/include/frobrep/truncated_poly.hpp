#ifndef FROBREP_TRUNCATED_POLY_HPP
#define FROBREP_TRUNCATED_POLY_HPP

#include <algorithm>
#include <cstddef>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "frobrep/errors.hpp"
#include "frobrep/fp.hpp"
#include "frobrep/linalg.hpp"
#include "frobrep/test_algebra.hpp"

namespace frobrep {

using MultiIndex = std::vector<int>;

/// The monomial layout of R(n,r) = F_p[x_1..x_n]/(x_i^{p^r}).
///
/// Monomials are stored by mixed-radix code (radix p^r, axis 0 least
/// significant). The global presentation order is degree-lexicographic:
/// total degree ascending, ties broken lexicographically with larger leading
/// exponents first (so x1^2 < x1 x2 < x2^2 in degree 2). Axes are 0-based.
class PolyRing {
 public:
  static std::shared_ptr<const PolyRing> make(int n, int r, Scalar p) {
    return std::shared_ptr<const PolyRing>(new PolyRing(n, r, checked_prime(p)));
  }

  int n() const { return n_; }
  int r() const { return r_; }
  Scalar prime() const { return p_; }
  /// p^r, the truncation exponent.
  int height() const { return q_; }
  std::size_t size() const { return size_; }

  const MultiIndex& exponents(std::size_t code) const { return exps_[code]; }
  int degree(std::size_t code) const { return degree_[code]; }

  std::size_t code(const MultiIndex& e) const {
    if (static_cast<int>(e.size()) != n_) throw ParameterError("multi-index has wrong length");
    std::size_t c = 0;
    for (int i = n_ - 1; i >= 0; --i) {
      int v = e[static_cast<std::size_t>(i)];
      if (v < 0 || v >= q_) throw ParameterError("multi-index entry out of range");
      c = c * static_cast<std::size_t>(q_) + static_cast<std::size_t>(v);
    }
    return c;
  }

  /// Code of x^a * x^b, or -1 when some exponent reaches p^r.
  long product_code(std::size_t a, std::size_t b) const {
    std::size_t c = 0, mult = 1;
    for (int i = 0; i < n_; ++i) {
      int e = exps_[a][static_cast<std::size_t>(i)] + exps_[b][static_cast<std::size_t>(i)];
      if (e >= q_) return -1;
      c += static_cast<std::size_t>(e) * mult;
      mult *= static_cast<std::size_t>(q_);
    }
    return static_cast<long>(c);
  }

  std::size_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }

  /// Position of a code in degree-lexicographic order, and its inverse.
  std::size_t position(std::size_t code) const { return position_[code]; }
  std::size_t code_at(std::size_t position) const { return order_[position]; }
  const std::vector<std::size_t>& deglex_codes() const { return order_; }

  bool same_as(const PolyRing& o) const { return n_ == o.n_ && r_ == o.r_ && p_ == o.p_; }

 private:
  PolyRing(int n, int r, Scalar p) : n_(n), r_(r), p_(p) {
    if (n < 1) throw ParameterError("PolyRing: n must be >= 1");
    if (r < 1) throw ParameterError("PolyRing: r must be >= 1");
    q_ = static_cast<int>(ipow(p, static_cast<unsigned>(r)));
    long long sz = ipow(q_, static_cast<unsigned>(n));
    if (sz > (1 << 20)) throw ScopeError("PolyRing: p^{rn} exceeds 2^20");
    size_ = static_cast<std::size_t>(sz);
    std::size_t m = 1;
    for (int i = 0; i < n_; ++i) {
      stride_.push_back(m);
      m *= static_cast<std::size_t>(q_);
    }
    exps_.resize(size_);
    degree_.resize(size_);
    for (std::size_t c = 0; c < size_; ++c) {
      std::size_t rest = c;
      int d = 0;
      for (int i = 0; i < n_; ++i) {
        int e = static_cast<int>(rest % static_cast<std::size_t>(q_));
        rest /= static_cast<std::size_t>(q_);
        exps_[c].push_back(e);
        d += e;
      }
      degree_[c] = d;
    }
    order_.resize(size_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(), [this](std::size_t a, std::size_t b) {
      if (degree_[a] != degree_[b]) return degree_[a] < degree_[b];
      return exps_[a] > exps_[b];
    });
    position_.resize(size_);
    for (std::size_t k = 0; k < size_; ++k) position_[order_[k]] = k;
  }

  int n_, r_;
  Scalar p_;
  int q_ = 1;
  std::size_t size_ = 1;
  std::vector<std::size_t> stride_;
  std::vector<MultiIndex> exps_;
  std::vector<int> degree_;
  std::vector<std::size_t> order_, position_;
};

using PolyRingPtr = std::shared_ptr<const PolyRing>;

/// Element of R(n,r)_A, A a TestAlgebra (F_p when A has no generators).
///
/// Dense storage: the coefficient of the monomial with code c occupies the
/// slice [c*dim A, (c+1)*dim A) of one flat F_p vector.
class TruncatedPolynomial {
 public:
  TruncatedPolynomial() = default;
  TruncatedPolynomial(PolyRingPtr ring, AlgebraPtr alg)
      : ring_(std::move(ring)), alg_(std::move(alg)), c_(ring_->size() * alg_->dim(), 0) {
    if (ring_->prime() != alg_->prime()) throw ParameterError("polynomial ring and coefficient algebra differ in p");
  }

  static TruncatedPolynomial constant(const PolyRingPtr& ring, const AlgebraElement& a) {
    TruncatedPolynomial f(ring, a.algebra());
    f.set_coefficient(0, a);
    return f;
  }
  static TruncatedPolynomial constant(const PolyRingPtr& ring, const AlgebraPtr& alg, long long v) {
    return constant(ring, AlgebraElement::scalar(alg, v));
  }
  static TruncatedPolynomial monomial(const PolyRingPtr& ring, const MultiIndex& e, const AlgebraElement& a) {
    TruncatedPolynomial f(ring, a.algebra());
    f.set_coefficient(ring->code(e), a);
    return f;
  }
  static TruncatedPolynomial variable(const PolyRingPtr& ring, const AlgebraPtr& alg, int axis) {
    check_axis(*ring, axis);
    MultiIndex e(static_cast<std::size_t>(ring->n()), 0);
    e[static_cast<std::size_t>(axis)] = 1;
    return monomial(ring, e, AlgebraElement::one(alg));
  }
  /// Element whose F_p-coefficients (over A's monomial basis) are uniform.
  static TruncatedPolynomial random(const PolyRingPtr& ring, const AlgebraPtr& alg, Rng& rng) {
    TruncatedPolynomial f(ring, alg);
    for (auto& s : f.c_) s = rng.scalar(ring->prime());
    return f;
  }
  /// Polynomial over F_p given by its deglex coefficient vector, with scalars extended to A.
  static TruncatedPolynomial from_deglex(const PolyRingPtr& ring, const AlgebraPtr& alg, const Vec& v) {
    if (v.size() != ring->size()) throw ParameterError("from_deglex: vector has wrong size");
    TruncatedPolynomial f(ring, alg);
    const std::size_t d = alg->dim();
    for (std::size_t pos = 0; pos < v.size(); ++pos) f.c_[ring->code_at(pos) * d] = v[pos] % ring->prime();
    return f;
  }

  const PolyRingPtr& ring() const { return ring_; }
  const AlgebraPtr& algebra() const { return alg_; }
  Scalar prime() const { return ring_->prime(); }

  AlgebraElement coefficient(std::size_t code) const {
    const std::size_t d = alg_->dim();
    return AlgebraElement(alg_, Vec(c_.begin() + static_cast<std::ptrdiff_t>(code * d),
                                    c_.begin() + static_cast<std::ptrdiff_t>((code + 1) * d)));
  }
  AlgebraElement coefficient(const MultiIndex& e) const { return coefficient(ring_->code(e)); }
  void set_coefficient(std::size_t code, const AlgebraElement& a) {
    check_alg(a.algebra());
    std::copy(a.coefficients().begin(), a.coefficients().end(),
              c_.begin() + static_cast<std::ptrdiff_t>(code * alg_->dim()));
  }
  bool has_term(std::size_t code) const {
    const std::size_t d = alg_->dim();
    for (std::size_t k = 0; k < d; ++k)
      if (c_[code * d + k]) return true;
    return false;
  }
  AlgebraElement constant_term() const { return coefficient(0); }

  /// Codes carrying nonzero coefficients, in degree-lexicographic order.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t c : ring_->deglex_codes())
      if (has_term(c)) out.push_back(c);
    return out;
  }

  /// Coefficients as a deglex vector over F_p (requires A = F_p).
  Vec deglex_vector() const {
    if (alg_->dim() != 1) throw ParameterError("deglex_vector: coefficients are not in F_p");
    Vec v(ring_->size());
    for (std::size_t pos = 0; pos < v.size(); ++pos) v[pos] = c_[ring_->code_at(pos)];
    return v;
  }

  bool is_zero() const { return frobrep::is_zero(c_); }

  TruncatedPolynomial& operator+=(const TruncatedPolynomial& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] = mod_add(c_[k], o.c_[k], prime());
    return *this;
  }
  TruncatedPolynomial& operator-=(const TruncatedPolynomial& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] = mod_sub(c_[k], o.c_[k], prime());
    return *this;
  }
  friend TruncatedPolynomial operator+(TruncatedPolynomial a, const TruncatedPolynomial& b) { return a += b; }
  friend TruncatedPolynomial operator-(TruncatedPolynomial a, const TruncatedPolynomial& b) { return a -= b; }
  TruncatedPolynomial operator-() const {
    TruncatedPolynomial out(ring_, alg_);
    for (std::size_t k = 0; k < c_.size(); ++k) out.c_[k] = mod_neg(c_[k], prime());
    return out;
  }

  friend TruncatedPolynomial operator*(const TruncatedPolynomial& f, const TruncatedPolynomial& g) {
    return tp_mul(f, g);
  }
  TruncatedPolynomial& operator*=(const TruncatedPolynomial& o) { return *this = tp_mul(*this, o); }

  /// Product with truncation: monomials with an exponent >= p^r are dropped.
  friend TruncatedPolynomial tp_mul(const TruncatedPolynomial& f, const TruncatedPolynomial& g) {
    f.check(g);
    const PolyRing& R = *f.ring_;
    const TestAlgebra& A = *f.alg_;
    const std::size_t d = A.dim();
    const Scalar p = f.prime();
    std::vector<std::uint64_t> acc(f.c_.size(), 0);
    std::vector<std::size_t> fs, gs;
    for (std::size_t c = 0; c < R.size(); ++c) {
      if (f.has_term(c)) fs.push_back(c);
      if (g.has_term(c)) gs.push_back(c);
    }
    for (std::size_t a : fs)
      for (std::size_t b : gs) {
        long pc = R.product_code(a, b);
        if (pc < 0) continue;
        const std::size_t base = static_cast<std::size_t>(pc) * d;
        for (std::size_t i = 0; i < d; ++i) {
          Scalar x = f.c_[a * d + i];
          if (!x) continue;
          for (std::size_t j = 0; j < d; ++j) {
            Scalar y = g.c_[b * d + j];
            if (!y) continue;
            int k = d == 1 ? 0 : A.product_index(i, j);
            if (k >= 0) acc[base + static_cast<std::size_t>(k)] += static_cast<std::uint64_t>(x) * y % p;
          }
        }
      }
    TruncatedPolynomial out(f.ring_, f.alg_);
    for (std::size_t k = 0; k < acc.size(); ++k) out.c_[k] = static_cast<Scalar>(acc[k] % p);
    return out;
  }

  TruncatedPolynomial scaled(const AlgebraElement& a) const { return tp_mul(*this, constant(ring_, a)); }
  TruncatedPolynomial scaled(Scalar s) const {
    TruncatedPolynomial out(ring_, alg_);
    for (std::size_t k = 0; k < c_.size(); ++k) out.c_[k] = mod_mul(c_[k], s % prime(), prime());
    return out;
  }

  TruncatedPolynomial pow(std::uint64_t e) const {
    TruncatedPolynomial result = one_like();
    TruncatedPolynomial base = *this;
    while (e) {
      if (e & 1) result *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return result;
  }

  bool is_unit() const { return constant_term().is_unit(); }

  /// Inverse of a unit: c^{-1} * sum_k (-m)^k, where f = c(1 + m) and m is nilpotent.
  TruncatedPolynomial inverse() const {
    if (!is_unit()) throw DomainError("TruncatedPolynomial::inverse: constant term is not a unit");
    const TruncatedPolynomial cinv = constant(ring_, constant_term().inverse());
    const TruncatedPolynomial neg_m = one_like() - tp_mul(*this, cinv);
    TruncatedPolynomial sum = one_like();
    TruncatedPolynomial term = one_like();
    for (;;) {
      term *= neg_m;
      if (term.is_zero()) break;
      sum += term;
    }
    return tp_mul(sum, cinv);
  }

  /// Same polynomial with F_p-coefficients viewed in A (requires current coefficients in F_p).
  TruncatedPolynomial extend_scalars(const AlgebraPtr& alg) const {
    if (alg_->dim() != 1) throw ParameterError("extend_scalars: coefficients are not in F_p");
    TruncatedPolynomial out(ring_, alg);
    for (std::size_t c = 0; c < ring_->size(); ++c) out.c_[c * alg->dim()] = c_[c];
    return out;
  }

  /// Coordinate slice: the F_p-polynomial multiplying the k-th monomial of A.
  TruncatedPolynomial algebra_component(std::size_t k) const {
    TruncatedPolynomial out(ring_, TestAlgebra::field(prime()));
    const std::size_t d = alg_->dim();
    for (std::size_t c = 0; c < ring_->size(); ++c) out.c_[c] = c_[c * d + k];
    return out;
  }

  // Interface shared with AlgebraElement for ring-generic code.
  TruncatedPolynomial zero_like() const { return TruncatedPolynomial(ring_, alg_); }
  TruncatedPolynomial one_like() const { return constant(ring_, alg_, 1); }
  std::size_t fp_dimension() const { return c_.size(); }
  const Vec& fp_coordinates() const { return c_; }
  TruncatedPolynomial from_fp_coordinates(Vec v) const {
    if (v.size() != c_.size()) throw ParameterError("from_fp_coordinates: wrong size");
    TruncatedPolynomial out(ring_, alg_);
    out.c_ = std::move(v);
    return out;
  }

  friend bool operator==(const TruncatedPolynomial& a, const TruncatedPolynomial& b) {
    return a.ring_->same_as(*b.ring_) && a.alg_->same_as(*b.alg_) && a.c_ == b.c_;
  }

  static void check_axis(const PolyRing& R, int axis) {
    if (axis < 0 || axis >= R.n()) throw ParameterError("axis out of range");
  }

  // Raw slice access for the free operations below.
  Vec& raw() { return c_; }
  const Vec& raw() const { return c_; }

 private:
  void check(const TruncatedPolynomial& o) const {
    if (!ring_->same_as(*o.ring_)) throw ParameterError("polynomials live in different rings");
    check_alg(o.alg_);
  }
  void check_alg(const AlgebraPtr& a) const {
    if (a.get() != alg_.get() && !alg_->same_as(*a)) throw ParameterError("coefficient algebras differ");
  }

  PolyRingPtr ring_;
  AlgebraPtr alg_;
  Vec c_;
};

/// Formal partial derivative along a 0-based axis.
inline TruncatedPolynomial partial_derivative(const TruncatedPolynomial& f, int axis) {
  const PolyRing& R = *f.ring();
  TruncatedPolynomial::check_axis(R, axis);
  const std::size_t d = f.algebra()->dim();
  const Scalar p = f.prime();
  TruncatedPolynomial out = f.zero_like();
  const std::size_t st = R.stride(axis);
  for (std::size_t c = 0; c < R.size(); ++c) {
    int e = R.exponents(c)[static_cast<std::size_t>(axis)];
    if (e == 0) continue;
    Scalar m = static_cast<Scalar>(e % static_cast<int>(p));
    if (!m) continue;
    for (std::size_t k = 0; k < d; ++k) out.raw()[(c - st) * d + k] = mod_mul(m, f.raw()[c * d + k], p);
  }
  return out;
}

/// Divided power x^a -> binom(a_i, m) x^{a - m e_i}, 1 <= m <= p^r - 1.
inline TruncatedPolynomial divided_power(const TruncatedPolynomial& f, int axis, int m) {
  const PolyRing& R = *f.ring();
  TruncatedPolynomial::check_axis(R, axis);
  if (m < 1 || m >= R.height()) throw ParameterError("divided power order out of range");
  const std::size_t d = f.algebra()->dim();
  const Scalar p = f.prime();
  TruncatedPolynomial out = f.zero_like();
  const std::size_t st = R.stride(axis);
  for (std::size_t c = 0; c < R.size(); ++c) {
    int e = R.exponents(c)[static_cast<std::size_t>(axis)];
    if (e < m) continue;
    Scalar b = binomial_mod(static_cast<std::uint64_t>(e), static_cast<std::uint64_t>(m), p);
    if (!b) continue;
    const std::size_t target = c - static_cast<std::size_t>(m) * st;
    for (std::size_t k = 0; k < d; ++k) out.raw()[target * d + k] = mod_mul(b, f.raw()[c * d + k], p);
  }
  return out;
}

/// True iff (constant term)^{p^s} = 0 in A for every image.
inline bool constants_nilpotent_of_level(const std::vector<TruncatedPolynomial>& images, int s) {
  const std::uint64_t e = static_cast<std::uint64_t>(ipow(images.front().prime(), static_cast<unsigned>(s)));
  return std::all_of(images.begin(), images.end(),
                     [e](const TruncatedPolynomial& g) { return g.constant_term().pow(e).is_zero(); });
}

/// Image of f under the algebra map x_i -> images[i].
///
/// f may have F_p coefficients while the images carry A-coefficients; the
/// result then lives in R(n,r)_A.
inline TruncatedPolynomial substitute(const TruncatedPolynomial& f, const std::vector<TruncatedPolynomial>& images) {
  const PolyRing& R = *f.ring();
  if (static_cast<int>(images.size()) != R.n()) throw ParameterError("substitute: need one image per variable");
  for (const auto& g : images) {
    if (!g.ring()->same_as(R)) throw ParameterError("substitute: image in a different ring");
    if (!g.algebra()->same_as(*images.front().algebra())) throw ParameterError("substitute: images over different algebras");
  }
  if (!constants_nilpotent_of_level(images, R.r()))
    throw DomainError("substitute: an image has constant term c with c^{p^r} != 0");
  const AlgebraPtr& alg = images.front().algebra();
  TruncatedPolynomial src = f;
  if (!f.algebra()->same_as(*alg)) {
    if (f.algebra()->dim() != 1) throw ParameterError("substitute: incompatible coefficient algebras");
    src = f.extend_scalars(alg);
  }
  // powers[i][e] = images[i]^e
  const int q = R.height();
  std::vector<std::vector<TruncatedPolynomial>> powers(static_cast<std::size_t>(R.n()));
  for (int i = 0; i < R.n(); ++i) {
    auto& pw = powers[static_cast<std::size_t>(i)];
    pw.push_back(src.one_like());
    for (int e = 1; e < q; ++e) pw.push_back(pw.back() * images[static_cast<std::size_t>(i)]);
  }
  TruncatedPolynomial out = src.zero_like();
  for (std::size_t c = 0; c < R.size(); ++c) {
    if (!src.has_term(c)) continue;
    TruncatedPolynomial term = TruncatedPolynomial::constant(f.ring(), src.coefficient(c));
    for (int i = 0; i < R.n(); ++i) {
      int e = R.exponents(c)[static_cast<std::size_t>(i)];
      if (e) term *= powers[static_cast<std::size_t>(i)][static_cast<std::size_t>(e)];
    }
    out += term;
  }
  return out;
}

/// Image in R(n,s): coefficients of monomials with an exponent >= p^s are dropped.
inline TruncatedPolynomial truncate_to(const TruncatedPolynomial& f, int s) {
  const PolyRing& R = *f.ring();
  if (s < 1 || s > R.r()) throw ParameterError("truncate_to: level out of range");
  PolyRingPtr target = s == R.r() ? f.ring() : PolyRing::make(R.n(), s, R.prime());
  const int qs = target->height();
  TruncatedPolynomial out(target, f.algebra());
  for (std::size_t c = 0; c < R.size(); ++c) {
    const MultiIndex& e = R.exponents(c);
    if (std::any_of(e.begin(), e.end(), [qs](int v) { return v >= qs; })) continue;
    if (f.has_term(c)) out.set_coefficient(target->code(e), f.coefficient(c));
  }
  return out;
}

/// Applies the p-th power map of A to every coefficient.
inline TruncatedPolynomial frobenius_coefficients(const TruncatedPolynomial& f) {
  TruncatedPolynomial out = f.zero_like();
  for (std::size_t c = 0; c < f.ring()->size(); ++c)
    if (f.has_term(c)) out.set_coefficient(c, f.coefficient(c).frobenius());
  return out;
}

}  // namespace frobrep

#endif  // FROBREP_TRUNCATED_POLY_HPP
