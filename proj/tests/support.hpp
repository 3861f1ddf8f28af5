// Shared generators for the property tests.
#ifndef FROBREP_TESTS_SUPPORT_HPP
#define FROBREP_TESTS_SUPPORT_HPP

#include <map>
#include <vector>

#include "frobrep/frobrep.hpp"

namespace frobrep::testing {

inline Vec random_vec(std::size_t dim, Scalar p, Rng& rng) {
  Vec v(dim);
  for (auto& s : v) s = rng.scalar(p);
  return v;
}

inline AlgebraPtr standard_test_algebra(Scalar p, int r) { return TestAlgebra::truncated(p, 1, r); }

/// Untruncated product over F_p on exponent vectors, used as a reference.
inline std::map<MultiIndex, Scalar> naive_product(const TruncatedPolynomial& f, const TruncatedPolynomial& g) {
  std::map<MultiIndex, Scalar> out;
  const PolyRing& R = *f.ring();
  const Scalar p = f.prime();
  for (std::size_t a = 0; a < R.size(); ++a)
    for (std::size_t b = 0; b < R.size(); ++b) {
      Scalar c = mod_mul(f.coefficient(a).constant(), g.coefficient(b).constant(), p);
      if (!c) continue;
      MultiIndex e = R.exponents(a);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += R.exponents(b)[i];
      out[e] = mod_add(out[e], c, p);
    }
  return out;
}

}  // namespace frobrep::testing

#endif
