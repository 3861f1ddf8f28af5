// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "frobrep/frobrep.hpp"

using namespace frobrep;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void expect(bool cond, const std::string& what) {
    if (cond || !ok) {
      ok = ok && cond;
      return;
    }
    ok = false;
    note = what;
  }
};

struct Triple {
  int n, r;
  Scalar p;
};

std::string tag(const Triple& t) {
  return "(n=" + std::to_string(t.n) + ",r=" + std::to_string(t.r) + ",p=" + std::to_string(t.p) + ")";
}

const std::vector<Triple> kCartierSet{{1, 1, 2}, {1, 1, 3}, {1, 1, 5}, {2, 1, 2}, {2, 1, 3},
                                      {3, 1, 2}, {1, 2, 2}, {1, 2, 3}, {2, 2, 2}};

std::size_t pow_size(Scalar p, int e) { return static_cast<std::size_t>(ipow(p, static_cast<unsigned>(e))); }

std::vector<Weight> dominant_nonneg(int n, int max_degree) {
  std::vector<Weight> out;
  std::function<void(Weight&, int, int)> rec = [&](Weight& w, int pos, int left) {
    if (pos == n) {
      out.push_back(w);
      return;
    }
    const int cap = pos == 0 ? left : std::min(left, w[static_cast<std::size_t>(pos - 1)]);
    for (int v = 0; v <= cap; ++v) {
      w[static_cast<std::size_t>(pos)] = v;
      rec(w, pos + 1, left - v);
    }
  };
  Weight w(static_cast<std::size_t>(n), 0);
  rec(w, 0, max_degree);
  return out;
}

Outcome cartier_dimensions() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& t : kCartierSet) {
    auto h = cohomology_dimensions(DeRhamComplex::build(t.n, t.r, t.p));
    for (int i = 0; i <= t.n; ++i)
      o.expect(h[static_cast<std::size_t>(i)] ==
                   pow_size(t.p, t.n * (t.r - 1)) * static_cast<std::size_t>(binomial(t.n, i)),
               "dim H^" + std::to_string(i) + " at " + tag(t));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.expect(secs < 10.0, "runtime " + std::to_string(secs) + " s exceeds 10 s");
  return o;
}

Outcome cartier_inverse_classes() {
  Outcome o;
  for (const auto& t : kCartierSet) {
    if (t.r != 1) continue;
    auto c = DeRhamComplex::build(t.n, 1, t.p);
    for (int i = 0; i <= t.n; ++i) {
      Cohomology h = cohomology(c, i);
      Subspace classes(h.dim(), t.p);
      std::size_t count = 0;
      for (const auto& J : detail::subsets(t.n, i)) {
        auto cl = cartier_inverse(c, J);
        ++count;
        if (i < t.n) o.expect(is_zero(c.differential(i + 1).apply(cl.representative)), "cocycle at " + tag(t));
        classes.insert(cl.class_coordinates);
        for (const auto& op : c.term(i).lie_operators())
          o.expect(h.boundaries.contains(op.apply(cl.representative)), "Lie annihilation at " + tag(t));
      }
      o.expect(classes.dim() == count && classes.dim() == h.dim(),
               "classes independent and spanning in degree " + std::to_string(i) + " at " + tag(t));
    }
  }
  return o;
}

Outcome equivariance() {
  Outcome o;
  Rng rng(101);
  for (const auto& t : kCartierSet) {
    auto c = DeRhamComplex::build(t.n, t.r, t.p);
    auto samples = group_samples(c.term(0).ring(), 20, rng);
    auto rep = verify_equivariance(c, samples);
    o.expect(rep.ok(), "equivariance at " + tag(t));
    o.expect(rep.group_checks == static_cast<std::size_t>(t.n) * 20, "group sample count at " + tag(t));
    o.expect(rep.lie_checks > 0, "Lie checks ran at " + tag(t));
  }
  return o;
}

Outcome fundamental_socle() {
  Outcome o;
  Rng rng(202);
  for (const auto& t : kCartierSet) {
    if (t.r != 1) continue;
    auto plain = DeRhamComplex::build(t.n, 1, t.p);
    for (int i = 1; i <= t.n; ++i) {
      std::vector<int> m(static_cast<std::size_t>(t.n), 0);
      m[static_cast<std::size_t>(i - 1)] = 1;
      const Weight w = weight_from_omega(m);
      auto base = verify_socle_fundamental(w, 1, t.p, 20, rng);
      const std::size_t im_dim = image_of_differential(plain, i).dim();
      o.expect(base.ok() && base.image_dim == im_dim &&
                   base.invariants_dim == static_cast<std::size_t>(binomial(t.n, i)),
               "untwisted socle for fundamental " + std::to_string(i) + " at " + tag(t));
      for (int j = 1; j <= t.n; ++j) {
        std::vector<int> s(static_cast<std::size_t>(t.n), 0);
        s[static_cast<std::size_t>(j - 1)] = 1;
        const Weight sw = weight_from_omega(s);
        const Weight lam = weight_add(w, weight_scale(sw, static_cast<int>(t.p)));
        auto tw = verify_socle_fundamental(lam, 1, t.p, 20, rng);
        const std::size_t ls = dim_gln_irreducible(sw, t.p);
        o.expect(tw.ok() && tw.image_dim == im_dim * ls, "twisted socle " + weight_to_string(lam) + " at " + tag(t));
      }
    }
  }
  return o;
}

Outcome generic_socle() {
  Outcome o;
  struct Case {
    int n;
    Scalar p;
    int r;
    Weight lambda;
  };
  const std::vector<Case> cases{{1, 3, 1, {2}}, {1, 5, 1, {2}}, {1, 5, 1, {3}},
                                {1, 3, 2, {2}}, {2, 3, 1, {2, 0}}, {2, 3, 1, weight_from_omega({1, 1})}};
  const auto start = std::chrono::steady_clock::now();
  for (const auto& c : cases) {
    auto rep = verify_socle_generic(c.lambda, c.r, c.p);
    const std::size_t w_dim = build_W_lambda(c.lambda, c.p).module().dim();
    o.expect(rep.full_dim == pow_size(c.p, c.r * c.n) * w_dim, "ambient dim for " + weight_to_string(c.lambda));
    o.expect(rep.ok(), "Lie closure of 1 (x) v is everything for " + weight_to_string(c.lambda) + " p=" +
                           std::to_string(c.p) + " r=" + std::to_string(c.r));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.expect(secs < 60.0, "runtime " + std::to_string(secs) + " s exceeds 60 s");
  return o;
}

Outcome char_two_guard() {
  Outcome o;
  std::size_t generic_seen = 0;
  for (int n = 2; n <= 3; ++n)
    for (int r = 1; r <= 2; ++r)
      for (const auto& lam : dominant_nonneg(n, 6)) {
        if (classify(lam, 2) != IrreducibleCase::generic) continue;
        ++generic_seen;
        bool guarded = false;
        try {
          dim_irreducible_G(lam, r, 2);
        } catch (const OutsideHypothesesError&) {
          guarded = true;
        } catch (const Error&) {
        }
        o.expect(guarded, "no guard for " + weight_to_string(lam) + " r=" + std::to_string(r));
      }
  o.expect(generic_seen > 0, "no generic weights enumerated");
  for (int r = 1; r <= 2; ++r)
    for (int a = -6; a <= 12; ++a) {
      o.expect(classify({a}, 2) != IrreducibleCase::generic, "generic rank-one weight at p=2");
      bool fine = true;
      try {
        dim_irreducible_G({a}, r, 2);
      } catch (const Error&) {
        fine = false;
      }
      o.expect(fine, "rank-one weight refused at p=2");
    }
  return o;
}

Outcome kernel() {
  Outcome o;
  Rng rng(303);
  for (int n = 1; n <= 3; ++n)
    for (Scalar p : {2u, 3u})
      for (int r = 1; r <= 2; ++r) {
        const PairRingParams prm{n, r, p};
        o.expect(adams_iterate(delta_class(n), p, r) == u_class(n, r, p) * delta_class(n),
                 "Adams identity at " + tag({n, r, p}));
        for (int k = 0; k < 10; ++k) {
          auto a = random_symmetric_poly(n, rng);
          auto m = kernel_membership(kernel_element(a, prm), prm);
          o.expect(m.ok() && *m.witness == a, "round trip at " + tag({n, r, p}));
        }
      }
  for (Scalar p : {2u, 3u})
    for (int r = 1; r <= 2; ++r) {
      auto w = exhaustive_kernel_window({1, r, p}, -1, 2, 1);
      o.expect(w.ok() && w.kernel_pairs > 0, "exhaustive window at " + tag({1, r, p}));
    }
  std::size_t solved = 0;
  for (int k = 0; k < 100; ++k) {
    const PairRingParams prm{2, 1 + k % 2, k % 3 ? 3u : 2u};
    auto a = random_symmetric_poly(2, rng);
    auto m = kernel_membership(kernel_element(a, prm), prm);
    if (m.ok() && *m.witness == a) ++solved;
  }
  o.expect(solved == 100, std::to_string(solved) + "/100 rank-two membership solves");
  return o;
}

Outcome pair_ring() {
  Outcome o;
  Rng rng(404);
  for (int n = 1; n <= 3; ++n)
    for (Scalar p : {2u, 3u})
      for (int r = 1; r <= 2; ++r) {
        const PairRingParams prm{n, r, p};
        auto random_pair = [&] {
          return GrothendieckPair{random_symmetric_poly(n, rng, -1, 2, 2), random_symmetric_poly(n, rng, -1, 2, 2)};
        };
        const auto one = pair_unit(n);
        for (int k = 0; k < 100; ++k) {
          auto x = random_pair(), y = random_pair();
          const auto xy = pair_mul(x, y, prm);
          o.expect(image_map(xy, prm) == image_map(x, prm) * image_map(y, prm), "multiplicativity at " + tag({n, r, p}));
          o.expect(pair_mul(x, one, prm) == x && pair_mul(one, x, prm) == x, "unit at " + tag({n, r, p}));
          if (k < 20) {
            auto z = random_pair();
            o.expect(pair_mul(xy, z, prm) == pair_mul(x, pair_mul(y, z, prm), prm), "associativity at " + tag({n, r, p}));
          }
        }
      }
  return o;
}

Outcome group_structure() {
  Outcome o;
  Rng rng(505);
  for (const auto& t : std::vector<Triple>{{1, 1, 2}, {1, 2, 2}, {2, 1, 3}}) {
    auto ring = PolyRing::make(t.n, t.r, t.p);
    auto rep = check_group_structure(ring, TestAlgebra::truncated(t.p, 1, t.r), 100, rng);
    o.expect(rep.ok(), (rep.failures.empty() ? std::string() : rep.failures.front()) + " at " + tag(t));
  }
  return o;
}

Outcome steinberg() {
  Outcome o;
  for (Scalar p : {3u, 5u})
    for (int r = 1; r <= 2; ++r) {
      const int q = static_cast<int>(ipow(p, static_cast<unsigned>(r)));
      for (int lam = 0; lam < q; ++lam)
        for (int mu = -1; lam + q * mu <= 3 * q; ++mu) {
          auto s = steinberg_factorization_check({lam}, {mu}, r, p);
          o.expect(s.ok(), "rank one (" + std::to_string(lam) + "," + std::to_string(mu) + ") p=" + std::to_string(p));
        }
    }
  for (const auto& lam : std::vector<Weight>{{0, 0}, {1, 0}, {1, 1}, {2, 0}, {2, 1}, {2, 2}, {3, 1}, {4, 2}})
    for (const auto& mu : std::vector<Weight>{{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 0}})
      o.expect(steinberg_factorization_check(lam, mu, 1, 3).ok(),
               "rank two " + weight_to_string(lam) + " " + weight_to_string(mu));
  return o;
}

Outcome invariants_functor() {
  Outcome o;
  for (const auto& t : std::vector<Triple>{{2, 1, 3}, {1, 2, 2}}) {
    const auto U = WeightModule::standard(t.n, t.p);
    std::vector<std::pair<std::string, WeightModule>> fibers{{"trivial", WeightModule::trivial(t.n, t.p)},
                                                             {"U", U},
                                                             {"Lambda^2 U", WeightModule::exterior_power(t.n, t.p, 2)},
                                                             {"Sym^2 U", WeightModule::sym_power(U, 2)}};
    for (const auto& [name, V] : fibers) {
      if (V.dim() == 0) {
        o.expect(t.n < 2, name + " vanishes unexpectedly");
        continue;
      }
      auto m = InducedModule::build(V, t.r);
      auto inv = g_minus_invariants(m, Subspace::full(m.dim(), t.p));
      o.expect(inv.dim() == V.dim(), "dimension for " + name + " at " + tag(t));
      o.expect(subspace_character(m, inv) == character_of(V), "weights for " + name + " at " + tag(t));
    }
  }
  return o;
}

Outcome root_vector_checks() {
  Outcome o;
  for (Scalar p : {3u, 5u})
    for (int m1 = 0; m1 < static_cast<int>(p); ++m1)
      for (int m2 = 0; m2 < static_cast<int>(p); ++m2) {
        if (!m1 && !m2) continue;
        auto rep = root_vector_identities(weight_from_omega({m1, m2}), p);
        o.expect(!rep.checks.empty() && rep.all_passed(),
                 "m=(" + std::to_string(m1) + "," + std::to_string(m2) + ") p=" + std::to_string(p));
      }
  return o;
}

Outcome lowest_parts() {
  Outcome o;
  for (Scalar p : {2u, 3u, 5u})
    for (int r = 1; r <= 2; ++r) {
      const int q = static_cast<int>(ipow(p, static_cast<unsigned>(r)));
      for (int a = -q; a <= 3 * q; ++a)
        o.expect(check_lowest_part(dim_irreducible_G({a}, r, p)).ok(),
                 "rank one a=" + std::to_string(a) + " r=" + std::to_string(r) + " p=" + std::to_string(p));
    }
  for (const auto& lam : dominant_nonneg(2, 9))
    o.expect(check_lowest_part(dim_irreducible_G(lam, 1, 3)).ok(), "rank two " + weight_to_string(lam));
  return o;
}

Outcome surjection() {
  Outcome o;
  for (Scalar p : {2u, 3u, 5u})
    for (int a = -static_cast<int>(p); a <= 2 * static_cast<int>(p); ++a)
      o.expect(surjection_bookkeeping(dim_irreducible_G({a}, 1, p)).ok(),
               "rank one a=" + std::to_string(a) + " p=" + std::to_string(p));
  for (const auto& lam : dominant_nonneg(2, 6))
    o.expect(surjection_bookkeeping(dim_irreducible_G(lam, 1, 3)).ok(), "rank two " + weight_to_string(lam));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"de Rham cohomology dimensions", cartier_dimensions},
      {"inverse Cartier classes span cohomology and are Lie-annihilated", cartier_inverse_classes},
      {"differentials are Lie and group equivariant", equivariance},
      {"socle in the fundamental case", fundamental_socle},
      {"socle in the generic case", generic_socle},
      {"characteristic two guard", char_two_guard},
      {"kernel of the pair-ring surjection", kernel},
      {"pair ring axioms and multiplicativity", pair_ring},
      {"group structure on random points", group_structure},
      {"Steinberg-type factorization", steinberg},
      {"invariants of induced modules", invariants_functor},
      {"highest weight vector identities", root_vector_checks},
      {"lowest graded piece of characters", lowest_parts},
      {"surjection bookkeeping at height one", surjection},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %zu %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), secs,
                o.ok ? "" : ": ", o.ok ? "" : o.note.c_str());
    std::fflush(stdout);
    if (!o.ok) ++failed;
  }
  return failed ? 1 : 0;
}
