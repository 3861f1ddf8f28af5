#ifndef FROBREP_IRREDUCIBLES_HPP
#define FROBREP_IRREDUCIBLES_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "frobrep/char_ring.hpp"
#include "frobrep/derham.hpp"
#include "frobrep/glnrep.hpp"
#include "frobrep/induced.hpp"

// Simple G(n,r)-modules L(lambda, G(n,r)) = soc I(L(lambda)).
//
// Dispatch on lambda = r + p s:
//   r = 0            L(p s, G(n,r)) is the pullback of L(s, G(n,r-1)) (of L(s) when r = 1)
//   r = omega_i      im(d_i (x) id) in the de Rham complex twisted by L(s)^[1]
//   otherwise        all of I(L(lambda))

namespace frobrep {

enum class IrreducibleCase { r_zero, fundamental, generic };

inline std::string to_string(IrreducibleCase c) {
  switch (c) {
    case IrreducibleCase::r_zero:
      return "r_zero";
    case IrreducibleCase::fundamental:
      return "fundamental";
    case IrreducibleCase::generic:
      return "generic";
  }
  return "?";
}

struct IrreducibleReport {
  Weight lambda;
  int n = 0, r = 0;
  Scalar p = 2;
  IrreducibleCase kind = IrreducibleCase::generic;
  int fundamental_index = 0;  // i when kind == fundamental
  std::size_t dim = 0;
  LaurentPoly character;      // restriction character to the diagonal torus
  std::vector<std::string> trace;
};

inline bool is_zero_weight(const Weight& w) {
  return std::all_of(w.begin(), w.end(), [](int v) { return v == 0; });
}

inline IrreducibleCase classify(const Weight& lambda, Scalar p) {
  auto d = mod_p_reduce(lambda, p);
  if (d.r_is_zero()) return IrreducibleCase::r_zero;
  if (d.fundamental_index()) return IrreducibleCase::fundamental;
  return IrreducibleCase::generic;
}

namespace detail {

struct ImageData {
  std::size_t dim;
  LaurentPoly character;
};

// rank and character of im d_i in the untwisted complex of R(n,r)
inline const ImageData& de_rham_image(int n, int r, Scalar p, int i, std::size_t scope_limit) {
  static std::mutex lock;
  static std::map<std::tuple<int, int, Scalar, int>, ImageData> cache;
  const auto key = std::make_tuple(n, r, p, i);
  {
    std::lock_guard<std::mutex> g(lock);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto R = PolyRing::make(n, r, p);
  const std::size_t dim = R->size() * static_cast<std::size_t>(binomial(n, i));
  if (dim > scope_limit)
    throw ScopeError("de Rham term of dimension " + std::to_string(dim) + " exceeds the scope limit " +
                     std::to_string(scope_limit));
  Subspace im = image(de_rham_differential(*R, i));
  ImageData d{im.dim(), subspace_character(im, de_rham_weights(*R, i), n)};
  std::lock_guard<std::mutex> g(lock);
  return cache.emplace(key, std::move(d)).first->second;
}

}  // namespace detail

/// Dimension and character of L(lambda, G(n,r)).
inline IrreducibleReport dim_irreducible_G(const Weight& lambda, int r, Scalar p,
                                           std::size_t scope_limit = kDefaultScopeLimit) {
  const int n = static_cast<int>(lambda.size());
  check_gln_scope(n, p);
  if (r < 1) throw ParameterError("r must be >= 1");
  if (!is_dominant(lambda)) throw DomainError("weight " + weight_to_string(lambda) + " is not dominant");
  IrreducibleReport rep;
  rep.lambda = lambda;
  rep.n = n;
  rep.r = r;
  rep.p = p;
  const auto dec = mod_p_reduce(lambda, p);
  rep.kind = classify(lambda, p);
  switch (rep.kind) {
    case IrreducibleCase::r_zero: {
      if (r == 1) {
        auto L = gln_irreducible(dec.s_part, p, scope_limit);
        rep.dim = L.dim;
        rep.character = adams(L.character, p);
        rep.trace.push_back("pullback of L" + weight_to_string(dec.s_part));
      } else {
        auto inner = dim_irreducible_G(dec.s_part, r - 1, p, scope_limit);
        rep.dim = inner.dim;
        rep.character = adams(inner.character, p);
        rep.trace.push_back("pullback of L(" + weight_to_string(dec.s_part) + ", G(" + std::to_string(n) + "," +
                            std::to_string(r - 1) + "))");
        rep.trace.insert(rep.trace.end(), inner.trace.begin(), inner.trace.end());
      }
      break;
    }
    case IrreducibleCase::fundamental: {
      const int i = dec.fundamental_index();
      rep.fundamental_index = i;
      const auto& im = detail::de_rham_image(n, r, p, i, scope_limit);
      auto L = gln_irreducible(dec.s_part, p, scope_limit);
      rep.dim = im.dim * L.dim;
      rep.character = im.character * adams(L.character, p);
      rep.trace.push_back("image of d_" + std::to_string(i) + " (rank " + std::to_string(im.dim) +
                          ") twisted by L" + weight_to_string(dec.s_part) + " (dim " + std::to_string(L.dim) + ")");
      break;
    }
    case IrreducibleCase::generic: {
      if (p == 2 && !(n == 1 && r == 1))
        throw OutsideHypothesesError("weight " + weight_to_string(lambda) +
                                     " needs the generic socle description, which is only established for p != 2");
      auto L = gln_irreducible(lambda, p, scope_limit);
      const long long q = ipow(static_cast<long long>(ipow(p, static_cast<unsigned>(r))), static_cast<unsigned>(n));
      rep.dim = static_cast<std::size_t>(q) * L.dim;
      rep.character = u_class(n, r, p) * L.character;
      rep.trace.push_back("full induced module over L" + weight_to_string(lambda) + " (dim " + std::to_string(L.dim) +
                          ")");
      break;
    }
  }
  return rep;
}

// Socle verification ----------------------------------------------------------

/// Group points over F_p[a]/(a^{p^r}).
inline std::vector<GroupPoint> group_samples(const PolyRingPtr& ring, std::size_t count, Rng& rng) {
  auto A = TestAlgebra::truncated(ring->prime(), 1, ring->r());
  std::vector<GroupPoint> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(random_point(ring, A, rng));
  return out;
}

struct FundamentalSocleReport {
  Weight lambda;
  int i = 0;
  std::size_t twist_dim = 1;
  std::size_t image_dim = 0;
  std::size_t closure_dim = 0;
  bool closure_equals_image = false;
  bool lie_stable = false;
  bool group_stable = false;
  std::size_t samples = 0;
  std::size_t invariants_dim = 0;
  std::size_t expected_invariants_dim = 0;
  std::vector<std::size_t> closure_trace;

  bool ok() const {
    return closure_equals_image && lie_stable && group_stable && invariants_dim == expected_invariants_dim;
  }
};

/// im(d_i (x) id) in the complex twisted by L(s)^[1]: generated by dx_J (x) v, stable, with
/// G^- invariants of dimension binom(n,i) dim L(s).
inline FundamentalSocleReport verify_socle_fundamental(const Weight& lambda, int r, Scalar p, std::size_t samples,
                                                       Rng& rng, std::size_t scope_limit = kDefaultScopeLimit) {
  const int n = static_cast<int>(lambda.size());
  check_gln_scope(n, p);
  if (!is_dominant(lambda)) throw DomainError("weight " + weight_to_string(lambda) + " is not dominant");
  const auto dec = mod_p_reduce(lambda, p);
  const int i = dec.fundamental_index();
  if (!i) throw DomainError("weight " + weight_to_string(lambda) + " does not reduce to a fundamental weight");
  std::optional<WeightModule> twist;
  if (!is_zero_weight(dec.s_part)) twist = gln_irreducible_module(dec.s_part, p, scope_limit);
  auto c = DeRhamComplex::build(n, r, p, twist, scope_limit);
  const InducedModule& term = c.term(i);
  FundamentalSocleReport rep;
  rep.lambda = lambda;
  rep.i = i;
  rep.twist_dim = c.twist_dim();
  Subspace im = image_of_differential(c, i);
  rep.image_dim = im.dim();
  std::vector<Vec> gens;
  for (const auto& J : detail::subsets(n, i))
    for (std::size_t b = 0; b < c.twist_dim(); ++b)
      gens.push_back(unit_vector(term.dim(), c.form_index(MultiIndex(static_cast<std::size_t>(n), 0), J, b)));
  Subspace cl = lie_closure(term, gens, &rep.closure_trace);
  rep.closure_dim = cl.dim();
  rep.closure_equals_image = cl == im;
  rep.lie_stable = subspace_lie_stable(term, im);
  rep.samples = samples;
  rep.group_stable = subspace_group_stable(term, im, group_samples(term.ring(), samples, rng));
  rep.invariants_dim = g_minus_invariants(term, im).dim();
  rep.expected_invariants_dim = static_cast<std::size_t>(binomial(n, i)) * c.twist_dim();
  return rep;
}

struct GenericSocleReport {
  Weight lambda;
  std::size_t full_dim = 0;
  std::size_t closure_dim = 0;
  std::vector<std::size_t> closure_trace;
  bool ok() const { return closure_dim == full_dim; }
};

/// Lie closure of 1 (x) v(lambda) in I(W(lambda)), for lambda = r(lambda) neither 0 nor fundamental.
inline GenericSocleReport verify_socle_generic(const Weight& lambda, int r, Scalar p,
                                               std::size_t scope_limit = kDefaultScopeLimit, Scalar seed_scale = 1) {
  const int n = static_cast<int>(lambda.size());
  check_gln_scope(n, p);
  if (p == 2)
    throw OutsideHypothesesError("the generic socle description is only established for p != 2");
  if (!is_dominant(lambda)) throw DomainError("weight " + weight_to_string(lambda) + " is not dominant");
  if (classify(lambda, p) != IrreducibleCase::generic)
    throw DomainError("weight " + weight_to_string(lambda) + " reduces to zero or a fundamental weight");
  if (!is_restricted(lambda, p))
    throw DomainError("weight " + weight_to_string(lambda) + " must equal its restricted part");
  if (seed_scale % p == 0) throw ParameterError("seed scale must be nonzero mod p");
  HighestWeightData h = build_W_lambda(lambda, p, scope_limit);
  WeightModule W = h.module();
  InducedModule m = InducedModule::build(W, r, scope_limit);
  // v(lambda) in the coordinates of W
  const Vec v = h.submodule.coordinates(h.generator());
  Vec seed(m.dim(), 0);
  for (std::size_t b = 0; b < v.size(); ++b) seed[m.index_of_code(0, b)] = mod_mul(v[b], seed_scale % p, p);
  GenericSocleReport rep;
  rep.lambda = lambda;
  rep.full_dim = m.dim();
  std::vector<Vec> seeds{seed};
  rep.closure_dim = lie_closure(m, seeds, &rep.closure_trace).dim();
  return rep;
}

// Steinberg analogue and characters -------------------------------------------

/// lambda in X_r(T): omega-coefficients in [0, p^r).
inline bool in_X_r(const Weight& lambda, int r, Scalar p) {
  const int q = static_cast<int>(ipow(p, static_cast<unsigned>(r)));
  const auto c = omega_coefficients(lambda);
  return std::all_of(c.begin(), c.end(), [q](int v) { return v >= 0 && v < q; });
}

struct SteinbergCheck {
  Weight lambda, mu;
  std::size_t lhs = 0;       // dim L(lambda + p^r mu, G(n,r))
  std::size_t rhs_left = 0;  // dim L(lambda, G(n,r))
  std::size_t rhs_right = 0; // dim L(mu)
  bool ok() const { return lhs == rhs_left * rhs_right; }
};

inline SteinbergCheck steinberg_factorization_check(const Weight& lambda, const Weight& mu, int r, Scalar p,
                                                    std::size_t scope_limit = kDefaultScopeLimit) {
  if (lambda.size() != mu.size()) throw ParameterError("weights of different rank");
  if (!in_X_r(lambda, r, p)) throw DomainError("weight " + weight_to_string(lambda) + " is not in X_r");
  if (!is_dominant(mu)) throw DomainError("weight " + weight_to_string(mu) + " is not dominant");
  const int q = static_cast<int>(ipow(p, static_cast<unsigned>(r)));
  SteinbergCheck out{lambda, mu};
  out.lhs = dim_irreducible_G(weight_add(lambda, weight_scale(mu, q)), r, p, scope_limit).dim;
  out.rhs_left = dim_irreducible_G(lambda, r, p, scope_limit).dim;
  out.rhs_right = dim_gln_irreducible(mu, p, scope_limit);
  return out;
}

struct LowestPartCheck {
  LaurentPoly lowest;
  LaurentPoly expected;
  bool ok() const { return lowest == expected; }
};

/// Minimal-degree graded piece of the restriction character, against ch L(lambda).
inline LaurentPoly restriction_character_lowest_part(const IrreducibleReport& rep) {
  auto d = rep.character.min_degree();
  return d ? rep.character.graded_piece(*d) : LaurentPoly(rep.n);
}

inline LowestPartCheck check_lowest_part(const IrreducibleReport& rep, std::size_t scope_limit = kDefaultScopeLimit) {
  return {restriction_character_lowest_part(rep), gln_irreducible(rep.lambda, rep.p, scope_limit).character};
}

// Surjection bookkeeping at r = 1 ---------------------------------------------

/// [L(lambda, G(n,1))] = U_1 b + psi^p(a), with b and a integer combinations of ch L(nu).
struct SurjectionBookkeeping {
  GrothendieckPair pair;
  std::map<Exponent, long long> b_terms;
  std::map<Exponent, long long> a_terms;
  bool reconstructs = false;  // U_1 b + psi^p(a) equals the computed character
  bool terms_recompose = false;
  bool ok() const { return reconstructs && terms_recompose; }
};

inline SurjectionBookkeeping surjection_bookkeeping(const IrreducibleReport& rep,
                                                    std::size_t scope_limit = kDefaultScopeLimit) {
  if (rep.r != 1) throw ParameterError("surjection bookkeeping is stated for r = 1");
  const int n = rep.n;
  const Scalar p = rep.p;
  const auto dec = mod_p_reduce(rep.lambda, p);
  GrothendieckPair x{LaurentPoly(n), LaurentPoly(n)};
  switch (rep.kind) {
    case IrreducibleCase::generic:
      x.b = gln_irreducible(rep.lambda, p, scope_limit).character;
      break;
    case IrreducibleCase::r_zero:
      x.a = gln_irreducible(dec.s_part, p, scope_limit).character;
      break;
    case IrreducibleCase::fundamental: {
      // [im d_i] = sum_{j<i} (-1)^{i-1-j} ([Omega^j] - [H^j]), [Omega^j] = U_1 e_j, [H^j] = psi^p(e_j)
      const LaurentPoly s = gln_irreducible(dec.s_part, p, scope_limit).character;
      const int i = dec.fundamental_index();
      for (int j = 0; j < i; ++j) {
        const long long sign = (i - 1 - j) % 2 ? -1 : 1;
        const LaurentPoly e = elementary_symmetric(n, j);
        x.b += (e * adams(s, p)).scaled(sign);
        x.a += (e * s).scaled(-sign);
      }
      break;
    }
  }
  SurjectionBookkeeping out;
  out.pair = x;
  out.reconstructs = image_map(x, {n, 1, p}) == rep.character;
  auto chf = [&](const Exponent& nu) { return gln_irreducible(nu, p, scope_limit).character; };
  out.b_terms = decompose_by_highest_weights(x.b, chf);
  out.a_terms = decompose_by_highest_weights(x.a, chf);
  LaurentPoly b(n), a(n);
  for (const auto& [nu, c] : out.b_terms) b += chf(nu).scaled(c);
  for (const auto& [nu, c] : out.a_terms) a += chf(nu).scaled(c);
  out.terms_recompose = b == x.b && a == x.a;
  return out;
}

}  // namespace frobrep

#endif  // FROBREP_IRREDUCIBLES_HPP
