#ifndef FROBREP_CHAR_RING_HPP
#define FROBREP_CHAR_RING_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "frobrep/errors.hpp"
#include "frobrep/fp.hpp"

// Laurent polynomials over Z in n variables, used as characters of torus
// representations, and the pair ring built from them.

namespace frobrep {

using Exponent = std::vector<int>;

namespace detail {
inline long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw ScopeError("integer overflow in Laurent polynomial arithmetic");
  return r;
}
inline long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw ScopeError("integer overflow in Laurent polynomial arithmetic");
  return r;
}
}  // namespace detail

class LaurentPoly {
 public:
  using Terms = std::map<Exponent, long long>;

  LaurentPoly() = default;
  explicit LaurentPoly(int n) : n_(n) {
    if (n < 1) throw ParameterError("LaurentPoly: n must be >= 1");
  }

  static LaurentPoly constant(int n, long long c) { return monomial(n, Exponent(static_cast<std::size_t>(n), 0), c); }
  static LaurentPoly monomial(int n, Exponent e, long long c = 1) {
    LaurentPoly f(n);
    if (static_cast<int>(e.size()) != n) throw ParameterError("LaurentPoly: exponent has wrong length");
    if (c) f.terms_[std::move(e)] = c;
    return f;
  }
  static LaurentPoly variable(int n, int axis) {
    Exponent e(static_cast<std::size_t>(n), 0);
    e.at(static_cast<std::size_t>(axis)) = 1;
    return monomial(n, e);
  }

  int n() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  long long coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0 : it->second;
  }

  void add_term(const Exponent& e, long long c) {
    if (static_cast<int>(e.size()) != n_) throw ParameterError("LaurentPoly: exponent has wrong length");
    if (!c) return;
    auto [it, inserted] = terms_.try_emplace(e, 0);
    it->second = detail::checked_add(it->second, c);
    if (!it->second) terms_.erase(it);
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, detail::checked_mul(c, -1));
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  LaurentPoly operator-() const { return scaled(-1); }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    a.check(b);
    if (a.is_zero() || b.is_zero()) return LaurentPoly(a.n_);
    if (a.n_ <= 3 && a.fits_packed() && b.fits_packed()) return packed_product(a, b);
    LaurentPoly out(a.n_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e = ea;
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        out.add_term(e, detail::checked_mul(ca, cb));
      }
    return out;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  LaurentPoly scaled(long long s) const {
    LaurentPoly out(n_);
    if (!s) return out;
    for (const auto& [e, c] : terms_) out.terms_[e] = detail::checked_mul(c, s);
    return out;
  }

  LaurentPoly pow(unsigned k) const {
    LaurentPoly out = constant(n_, 1);
    for (unsigned i = 0; i < k; ++i) out *= *this;
    return out;
  }

  /// Invariance under every permutation of the variables.
  bool is_symmetric() const {
    for (int i = 0; i + 1 < n_; ++i)
      for (const auto& [e, c] : terms_) {
        Exponent s = e;
        std::swap(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(i) + 1]);
        if (coefficient(s) != c) return false;
      }
    return true;
  }

  /// Sum of the coefficients (the dimension, for a character).
  long long augmentation() const {
    long long s = 0;
    for (const auto& [e, c] : terms_) s = detail::checked_add(s, c);
    return s;
  }

  static int total_degree(const Exponent& e) {
    int d = 0;
    for (int v : e) d += v;
    return d;
  }

  std::optional<int> min_degree() const {
    std::optional<int> d;
    for (const auto& [e, c] : terms_) {
      int t = total_degree(e);
      if (!d || t < *d) d = t;
    }
    return d;
  }

  /// Terms of total degree exactly d.
  LaurentPoly graded_piece(int d) const {
    LaurentPoly out(n_);
    for (const auto& [e, c] : terms_)
      if (total_degree(e) == d) out.terms_[e] = c;
    return out;
  }

  /// Multiplies every exponent vector by k.
  LaurentPoly scale_exponents(int k) const {
    LaurentPoly out(n_);
    for (const auto& [e, c] : terms_) {
      Exponent s = e;
      for (auto& v : s) v *= k;
      out.add_term(s, c);
    }
    return out;
  }

  /// Shifts every exponent vector by w (multiplication by t^w).
  LaurentPoly shifted(const Exponent& w) const {
    LaurentPoly out(n_);
    for (const auto& [e, c] : terms_) {
      Exponent s = e;
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += w[i];
      out.terms_[s] = c;
    }
    return out;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [e, c] : terms_) {
      if (!s.empty()) s += c < 0 ? " - " : " + ";
      else if (c < 0) s += "-";
      long long a = c < 0 ? -c : c;
      bool unit = std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
      if (a != 1 || unit) s += std::to_string(a);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i]) continue;
        s += "t" + std::to_string(i + 1);
        if (e[i] != 1) s += "^" + std::to_string(e[i]);
      }
    }
    return s;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }

 private:
  // Exponents in (-kPackBound, kPackBound) are packed into 21-bit fields for fast products.
  static constexpr int kPackBound = 1 << 19;
  static constexpr std::uint64_t kPackBias = 1u << 20;

  bool fits_packed() const {
    for (const auto& [e, c] : terms_)
      for (int v : e)
        if (v <= -kPackBound || v >= kPackBound) return false;
    return true;
  }
  std::uint64_t pack(const Exponent& e) const {
    std::uint64_t key = 0;
    for (int v : e) key = (key << 21) | static_cast<std::uint64_t>(static_cast<long long>(v) + kPackBias);
    return key;
  }
  static LaurentPoly packed_product(const LaurentPoly& a, const LaurentPoly& b) {
    const int n = a.n_;
    std::vector<std::pair<std::uint64_t, long long>> bs;
    bs.reserve(b.terms_.size());
    for (const auto& [e, c] : b.terms_) bs.emplace_back(b.pack(e), c);
    std::unordered_map<std::uint64_t, long long> acc;
    acc.reserve(a.terms_.size() * bs.size());
    // sum of two biased keys carries an extra bias in every field
    std::uint64_t bias = 0;
    for (int i = 0; i < n; ++i) bias = (bias << 21) | kPackBias;
    for (const auto& [ea, ca] : a.terms_) {
      const std::uint64_t ka = a.pack(ea);
      for (const auto& [kb, cb] : bs) {
        auto& slot = acc[ka + kb - bias];
        slot = detail::checked_add(slot, detail::checked_mul(ca, cb));
      }
    }
    LaurentPoly out(n);
    Exponent e(static_cast<std::size_t>(n));
    for (const auto& [key, c] : acc) {
      if (!c) continue;
      std::uint64_t k = key;
      for (int i = n - 1; i >= 0; --i) {
        e[static_cast<std::size_t>(i)] = static_cast<int>(static_cast<long long>(k & ((1u << 21) - 1)) - static_cast<long long>(kPackBias));
        k >>= 21;
      }
      out.terms_.emplace(e, c);
    }
    return out;
  }

  void check(const LaurentPoly& o) const {
    if (n_ != o.n_) throw ParameterError("LaurentPoly: different numbers of variables");
  }

  int n_ = 1;
  Terms terms_;
};

/// psi^p: t_i -> t_i^p.
inline LaurentPoly adams(const LaurentPoly& f, Scalar p) { return f.scale_exponents(static_cast<int>(p)); }

/// (psi^p)^k.
inline LaurentPoly adams_iterate(const LaurentPoly& f, Scalar p, int k) {
  return f.scale_exponents(static_cast<int>(ipow(p, static_cast<unsigned>(k))));
}

/// prod_i (t_i - 1).
inline LaurentPoly delta_class(int n) {
  LaurentPoly out = LaurentPoly::constant(n, 1);
  for (int i = 0; i < n; ++i) out *= LaurentPoly::variable(n, i) - LaurentPoly::constant(n, 1);
  return out;
}

/// prod_i (1 + t_i + ... + t_i^{p^r - 1}), the character of R(n,r).
inline LaurentPoly u_class(int n, int r, Scalar p) {
  const int q = static_cast<int>(ipow(p, static_cast<unsigned>(r)));
  LaurentPoly out = LaurentPoly::constant(n, 1);
  for (int i = 0; i < n; ++i) {
    LaurentPoly factor(n);
    for (int k = 0; k < q; ++k) {
      Exponent e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(i)] = k;
      factor.add_term(e, 1);
    }
    out *= factor;
  }
  return out;
}

/// i-th elementary symmetric polynomial.
inline LaurentPoly elementary_symmetric(int n, int i) {
  LaurentPoly out(n);
  if (i < 0 || i > n) return out;
  std::vector<int> pick(static_cast<std::size_t>(n), 0);
  std::fill(pick.end() - i, pick.end(), 1);
  do out.add_term(pick, 1);
  while (std::next_permutation(pick.begin(), pick.end()));
  return out;
}

/// Orbit sum of t^e under permutations of the variables.
inline LaurentPoly orbit_sum(Exponent e, long long c = 1) {
  const int n = static_cast<int>(e.size());
  LaurentPoly out(n);
  std::sort(e.begin(), e.end());
  do out.add_term(e, c);
  while (std::next_permutation(e.begin(), e.end()));
  return out;
}

/// Exact quotient of f by (t_axis^q - 1), or nullopt if it does not divide.
inline std::optional<LaurentPoly> divide_by_binomial(const LaurentPoly& f, int axis, int q) {
  if (q < 1) throw ParameterError("divide_by_binomial: q must be >= 1");
  if (f.is_zero()) return f;
  const int n = f.n();
  const std::size_t ax = static_cast<std::size_t>(axis);
  // Split f by the exponent of the chosen variable.
  std::map<int, LaurentPoly> slices;
  for (const auto& [e, c] : f.terms()) {
    Exponent rest = e;
    rest[ax] = 0;
    auto [it, ins] = slices.try_emplace(e[ax], LaurentPoly(n));
    it->second.add_term(rest, c);
  }
  const int lo = slices.begin()->first, hi = slices.rbegin()->first;
  // g(t) (t^q - 1) = f(t): with g_k the slices of g, f_k = g_{k-q} - g_k.
  std::map<int, LaurentPoly> g;
  auto slice = [&](const std::map<int, LaurentPoly>& m, int k) {
    auto it = m.find(k);
    return it == m.end() ? LaurentPoly(n) : it->second;
  };
  for (int k = lo; k <= hi - q; ++k) {
    LaurentPoly gk = slice(g, k - q) - slice(slices, k);
    if (!gk.is_zero()) g[k] = gk;
  }
  // Remaining slices must match f_k = g_{k-q} for k > hi - q.
  for (int k = std::max(lo, hi - q + 1); k <= hi; ++k)
    if (!(slice(g, k - q) - slice(slices, k)).is_zero()) return std::nullopt;
  LaurentPoly out(n);
  for (const auto& [k, gk] : g) {
    Exponent w(static_cast<std::size_t>(n), 0);
    w[ax] = k;
    out += gk.shifted(w);
  }
  return out;
}

/// Exact quotient of f by delta = prod (t_i - 1).
inline std::optional<LaurentPoly> divide_by_delta(const LaurentPoly& f) {
  LaurentPoly q = f;
  for (int i = 0; i < f.n(); ++i) {
    auto next = divide_by_binomial(q, i, 1);
    if (!next) return std::nullopt;
    q = *next;
  }
  return q;
}

/// Preimage under psi^p, if every exponent is divisible by p.
inline std::optional<LaurentPoly> adams_preimage(const LaurentPoly& f, Scalar p) {
  LaurentPoly out(f.n());
  for (const auto& [e, c] : f.terms()) {
    Exponent s = e;
    for (auto& v : s) {
      if (v % static_cast<int>(p)) return std::nullopt;
      v /= static_cast<int>(p);
    }
    out.add_term(s, c);
  }
  return out;
}

// Pair ring ------------------------------------------------------------------

struct PairRingParams {
  int n;
  int r;
  Scalar p;
};

/// (b, a): b a character of GL_n, a a character of the Frobenius twist.
struct GrothendieckPair {
  LaurentPoly b;
  LaurentPoly a;
  friend bool operator==(const GrothendieckPair&, const GrothendieckPair&) = default;
};

inline void require_symmetric(const LaurentPoly& f, const char* what) {
  if (!f.is_symmetric()) throw ParameterError(std::string(what) + " is not symmetric");
}

inline GrothendieckPair pair_unit(int n) { return {LaurentPoly(n), LaurentPoly::constant(n, 1)}; }

/// (b,a)(b',a') = (psi(a) b' + psi(a') b + U_r b b', a a').
inline GrothendieckPair pair_mul(const GrothendieckPair& x, const GrothendieckPair& y, const PairRingParams& prm) {
  require_symmetric(x.b, "pair_mul: first b");
  require_symmetric(x.a, "pair_mul: first a");
  require_symmetric(y.b, "pair_mul: second b");
  require_symmetric(y.a, "pair_mul: second a");
  const LaurentPoly u = u_class(prm.n, prm.r, prm.p);
  return {adams(x.a, prm.p) * y.b + adams(y.a, prm.p) * x.b + u * x.b * y.b, x.a * y.a};
}

/// U_r b + psi^p(a).
inline LaurentPoly image_map(const GrothendieckPair& x, const PairRingParams& prm) {
  return u_class(prm.n, prm.r, prm.p) * x.b + adams(x.a, prm.p);
}

/// (delta psi^p(a), -(psi^p)^{r-1}(delta) a).
inline GrothendieckPair kernel_element(const LaurentPoly& a, const PairRingParams& prm) {
  const LaurentPoly d = delta_class(prm.n);
  return {d * adams(a, prm.p), -(adams_iterate(d, prm.p, prm.r - 1) * a)};
}

enum class KernelStep { none, not_in_kernel, delta_division, not_adams_image, a_side_mismatch };

inline const char* to_string(KernelStep s) {
  switch (s) {
    case KernelStep::none: return "none";
    case KernelStep::not_in_kernel: return "not in kernel";
    case KernelStep::delta_division: return "b is not divisible by delta";
    case KernelStep::not_adams_image: return "b / delta is not a psi^p image";
    case KernelStep::a_side_mismatch: return "a-side does not match the parametrization";
  }
  return "?";
}

struct KernelMembership {
  std::optional<LaurentPoly> witness;
  KernelStep failed = KernelStep::none;

  bool ok() const { return witness.has_value(); }
};

/// Solves x = kernel_element(c) for c, or reports the failing step.
inline KernelMembership kernel_membership(const GrothendieckPair& x, const PairRingParams& prm) {
  KernelMembership out;
  if (!image_map(x, prm).is_zero()) {
    out.failed = KernelStep::not_in_kernel;
    return out;
  }
  auto quotient = divide_by_delta(x.b);
  if (!quotient) {
    out.failed = KernelStep::delta_division;
    return out;
  }
  auto c = adams_preimage(*quotient, prm.p);
  if (!c) {
    out.failed = KernelStep::not_adams_image;
    return out;
  }
  if (!(kernel_element(*c, prm) == x)) {
    out.failed = KernelStep::a_side_mismatch;
    return out;
  }
  out.witness = std::move(c);
  return out;
}

// Decomposition into irreducible characters -----------------------------------

/// Lexicographically largest exponent among the terms of f.
inline std::optional<Exponent> lex_top(const LaurentPoly& f) {
  if (f.is_zero()) return std::nullopt;
  return f.terms().rbegin()->first;
}

/// Writes a symmetric f as sum_k c_k char(lambda_k) by peeling highest weights.
///
/// `character(lambda)` must return a symmetric polynomial whose lex-top term is
/// t^lambda with coefficient 1 (true for GL_n irreducible characters).
inline std::map<Exponent, long long> decompose_by_highest_weights(
    LaurentPoly f, const std::function<LaurentPoly(const Exponent&)>& character, int max_steps = 10000) {
  std::map<Exponent, long long> out;
  require_symmetric(f, "decompose_by_highest_weights: input");
  for (int step = 0; step < max_steps; ++step) {
    auto top = lex_top(f);
    if (!top) return out;
    const long long c = f.coefficient(*top);
    LaurentPoly ch = character(*top);
    if (ch.coefficient(*top) != 1 || lex_top(ch) != top)
      throw InternalError("decompose_by_highest_weights: character does not have the expected top term");
    out[*top] = detail::checked_add(out[*top], c);
    f -= ch.scaled(c);
  }
  throw ScopeError("decompose_by_highest_weights: too many steps");
}

/// Sum of `orbits` random orbit sums with exponents in [lo, hi] and coefficients in [-3, 3].
inline LaurentPoly random_symmetric_poly(int n, Rng& rng, int lo = -2, int hi = 3, int orbits = 3) {
  LaurentPoly f(n);
  for (int k = 0; k < orbits; ++k) {
    Exponent e(static_cast<std::size_t>(n));
    for (auto& v : e) v = static_cast<int>(rng.between(lo, hi));
    f += orbit_sum(e, rng.between(-3, 3));
  }
  return f;
}

struct KernelWindowReport {
  std::size_t candidates = 0;
  std::size_t kernel_pairs = 0;
  std::vector<GrothendieckPair> outside_family;
  bool ok() const { return outside_family.empty(); }
};

/// Every rank-one pair (b, a) with exponents in [lo, hi] and coefficients in [-c, c]:
/// those with zero image must be kernel elements of the parametrized family.
inline KernelWindowReport exhaustive_kernel_window(const PairRingParams& prm, int lo, int hi, int c) {
  if (prm.n != 1) throw ParameterError("the exhaustive kernel window is defined for n = 1");
  std::vector<LaurentPoly> polys{LaurentPoly(1)};
  for (int e = lo; e <= hi; ++e) {
    std::vector<LaurentPoly> next;
    for (const auto& f : polys)
      for (int k = -c; k <= c; ++k) next.push_back(f + LaurentPoly::monomial(1, {e}, k));
    polys = std::move(next);
  }
  KernelWindowReport rep;
  for (const auto& b : polys)
    for (const auto& a : polys) {
      ++rep.candidates;
      GrothendieckPair x{b, a};
      if (!image_map(x, prm).is_zero()) continue;
      ++rep.kernel_pairs;
      if (!kernel_membership(x, prm).ok()) rep.outside_family.push_back(x);
    }
  return rep;
}

}  // namespace frobrep

#endif  // FROBREP_CHAR_RING_HPP
