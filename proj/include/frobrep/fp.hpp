#ifndef FROBREP_FP_HPP
#define FROBREP_FP_HPP

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "frobrep/errors.hpp"

namespace frobrep {

/// Element of F_p stored as its canonical representative in [0, p).
using Scalar = std::uint32_t;

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline Scalar checked_prime(std::uint64_t p) {
  if (!is_prime(p)) throw ParameterError("p = " + std::to_string(p) + " is not prime");
  if (p > 65521) throw ScopeError("p = " + std::to_string(p) + " too large");
  return static_cast<Scalar>(p);
}

inline Scalar mod_add(Scalar a, Scalar b, Scalar p) {
  Scalar s = a + b;
  return s >= p ? s - p : s;
}
inline Scalar mod_sub(Scalar a, Scalar b, Scalar p) { return a >= b ? a - b : a + p - b; }
inline Scalar mod_neg(Scalar a, Scalar p) { return a == 0 ? 0 : p - a; }
inline Scalar mod_mul(Scalar a, Scalar b, Scalar p) {
  return static_cast<Scalar>(static_cast<std::uint64_t>(a) * b % p);
}

/// Canonical representative of an arbitrary integer.
inline Scalar mod_reduce(long long v, Scalar p) {
  long long m = v % static_cast<long long>(p);
  if (m < 0) m += p;
  return static_cast<Scalar>(m);
}

inline Scalar mod_pow(Scalar a, std::uint64_t e, Scalar p) {
  Scalar result = 1 % p;
  Scalar base = a % p;
  while (e) {
    if (e & 1) result = mod_mul(result, base, p);
    base = mod_mul(base, base, p);
    e >>= 1;
  }
  return result;
}

inline Scalar mod_inv(Scalar a, Scalar p) {
  if (a % p == 0) throw DomainError("zero has no inverse mod " + std::to_string(p));
  return mod_pow(a, p - 2, p);
}

/// Integer power with overflow detection.
inline long long ipow(long long base, unsigned e) {
  long long r = 1;
  for (unsigned k = 0; k < e; ++k) {
    long long next;
    if (__builtin_mul_overflow(r, base, &next)) throw ScopeError("integer overflow in ipow");
    r = next;
  }
  return r;
}

/// binom(a, b) mod p by Lucas' theorem.
inline Scalar binomial_mod(std::uint64_t a, std::uint64_t b, Scalar p) {
  if (b > a) return 0;
  Scalar result = 1;
  while (a || b) {
    std::uint64_t ai = a % p, bi = b % p;
    if (bi > ai) return 0;
    // small binomial via multiplicative formula in F_p (ai < p, so no zero divisors in the denominator)
    Scalar num = 1, den = 1;
    for (std::uint64_t k = 0; k < bi; ++k) {
      num = mod_mul(num, static_cast<Scalar>((ai - k) % p), p);
      den = mod_mul(den, static_cast<Scalar>((k + 1) % p), p);
    }
    result = mod_mul(result, mod_mul(num, mod_inv(den, p), p), p);
    a /= p;
    b /= p;
  }
  return result;
}

/// Exact binomial coefficient over the integers (small arguments only).
inline long long binomial(long long a, long long b) {
  if (b < 0 || b > a) return 0;
  if (b > a - b) b = a - b;
  long long r = 1;
  for (long long k = 1; k <= b; ++k) {
    long long next;
    if (__builtin_mul_overflow(r, a - b + k, &next)) throw ScopeError("integer overflow in binomial");
    r = next / k;
  }
  return r;
}

/// Seedable generator with a portable bounded draw.
///
/// std::uniform_int_distribution is implementation-defined, so bounded draws use
/// rejection sampling on the raw 64-bit mt19937_64 stream instead. Identical seeds
/// give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw ParameterError("Rng::below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform in [lo, hi].
  long long between(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  Scalar scalar(Scalar p) { return static_cast<Scalar>(below(p)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace frobrep

#endif  // FROBREP_FP_HPP
