#include <gtest/gtest.h>

#include "support.hpp"

using namespace frobrep;

namespace {

using Mod = WeightModule;

AlgebraMatrix identity_over(int n, const AlgebraPtr& A) { return AlgebraMatrix::identity(n, AlgebraElement::one(A)); }

// A zoo of modules covering every construction.
std::vector<std::pair<std::string, Mod>> zoo(Scalar p) {
  std::vector<std::pair<std::string, Mod>> out;
  out.push_back({"U n=2", Mod::standard(2, p)});
  out.push_back({"L2U n=3", Mod::exterior_power(3, p, 2)});
  out.push_back({"S2U n=2", Mod::sym_power(Mod::standard(2, p), 2)});
  out.push_back({"S2(L2U) n=3", Mod::sym_power(Mod::exterior_power(3, p, 2), 2)});
  out.push_back({"U(x)L2U n=2", Mod::tensor(Mod::standard(2, p), Mod::exterior_power(2, p, 2))});
  out.push_back({"det^-1 n=2", Mod::det_power(2, p, -1)});
  out.push_back({"U^[1](x)U n=2", Mod::tensor(Mod::frobenius_twist(Mod::standard(2, p)), Mod::standard(2, p))});
  out.push_back({"trivial n=2", Mod::trivial(2, p)});
  out.push_back({"L(2,1,0)", gln_irreducible_module({2, 1, 0}, p)});
  out.push_back({"L(2,0)", gln_irreducible_module({2, 0}, p)});
  return out;
}

Vec scale(Vec v, Scalar c, Scalar p) {
  for (auto& x : v) x = mod_mul(x, c, p);
  return v;
}

// Brute-force maximal submodule: sum of closures of weight vectors whose closure misses v.
Subspace brute_force_maximal(const HighestWeightData& h, Scalar p) {
  const Subspace& W = h.submodule;
  auto ops = restrict_operators(h.ambient.divided_power_operators(), W);
  std::map<Weight, std::vector<std::size_t>> rows_by_weight;
  std::size_t top = 0;
  for (std::size_t k = 0; k < W.dim(); ++k) {
    Weight w = h.ambient.weight(W.pivots()[k]);
    if (w == h.lambda) top = k;
    rows_by_weight[w].push_back(k);
  }
  Subspace M(W.dim(), p);
  for (const auto& [w, rows] : rows_by_weight) {
    if (w == h.lambda) continue;
    const std::size_t count = static_cast<std::size_t>(ipow(p, static_cast<unsigned>(rows.size())));
    for (std::size_t code = 1; code < count; ++code) {
      Vec x(W.dim(), 0);
      std::size_t c = code;
      for (auto row : rows) {
        x[row] = static_cast<Scalar>(c % p);
        c /= p;
      }
      std::vector<Vec> seeds{x};
      Subspace cl = operator_closure(W.dim(), p, std::span<const Vec>(seeds), ops);
      if (cl.contains(unit_vector(W.dim(), top))) continue;
      for (const auto& b : cl.basis()) M.insert(b);
    }
  }
  Subspace out(h.ambient.dim(), p);
  for (const auto& b : M.basis()) out.insert(W.combine(b));
  return out;
}

}  // namespace

TEST(WeightModules, Examples) {
  auto l2 = Mod::exterior_power(2, 3, 2);
  EXPECT_EQ(l2.dim(), 1u);
  EXPECT_EQ(l2.weight(0), (Weight{1, 1}));
  auto s2 = Mod::sym_power(Mod::standard(1, 3), 2);
  EXPECT_EQ(s2.dim(), 1u);
  EXPECT_EQ(s2.weight(0), (Weight{2}));
  auto u = Mod::exterior_power(3, 5, 1);
  ASSERT_EQ(u.dim(), 3u);
  EXPECT_EQ(u.weight(1), (Weight{0, 1, 0}));
  auto z = Mod::exterior_power(2, 3, 3);
  EXPECT_EQ(z.dim(), 0u);
  EXPECT_TRUE(z.flagged_zero());
  EXPECT_FALSE(l2.flagged_zero());
}

TEST(WeightModules, FrobeniusTwistExamples) {
  auto t = Mod::frobenius_twist(Mod::standard(1, 2));
  EXPECT_EQ(t.dim(), 1u);
  EXPECT_EQ(t.weight(0), (Weight{2}));
  EXPECT_TRUE(t.lie(0, 0).is_zero());
  auto tt = Mod::frobenius_twist(Mod::trivial(2, 3));
  EXPECT_EQ(character_of(tt), character_of(Mod::trivial(2, 3)));
  auto l = Mod::frobenius_twist(Mod::exterior_power(2, 3, 2));
  EXPECT_EQ(l.weights(), (std::vector<Weight>{{3, 3}}));
  // group action through p-th powers
  auto A = TestAlgebra::truncated(3, 1, 1);
  Rng rng(2);
  auto M = random_invertible_matrix(2, A, rng);
  auto st = Mod::frobenius_twist(Mod::standard(2, 3));
  EXPECT_EQ(st.group_matrix(M), M.entrywise_pow(3));
}

TEST(WeightModules, CommutatorRelations) {
  for (Scalar p : {2u, 3u, 5u})
    for (const auto& [name, m] : zoo(p)) {
      const int n = m.n();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              SparseMatrix lhs = m.lie(i, j) * m.lie(k, l) - m.lie(k, l) * m.lie(i, j);
              SparseMatrix rhs = SparseMatrix::zero(m.dim(), m.dim(), p);
              if (j == k) rhs = rhs + m.lie(i, l);
              if (l == i) rhs = rhs - m.lie(k, j);
              EXPECT_EQ(lhs, rhs) << name << " p=" << p;
            }
    }
}

TEST(WeightModules, LieIsDerivativeOfGroupAction) {
  for (Scalar p : {2u, 3u, 5u}) {
    auto D = TestAlgebra::dual_numbers(p);
    auto eps = AlgebraElement::generator(D, 0);
    for (const auto& [name, m] : zoo(p)) {
      const int n = m.n();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          auto g = identity_over(n, D);
          g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) += eps;
          auto G = m.group_matrix(g);
          auto E = DenseMatrix::from_sparse(m.lie(i, j));
          for (std::size_t a = 0; a < m.dim(); ++a)
            for (std::size_t b = 0; b < m.dim(); ++b) {
              const Vec& c = G(a, b).coefficients();
              EXPECT_EQ(c[0], a == b ? 1u : 0u) << name;
              EXPECT_EQ(c[1], E(a, b)) << name << " E" << i << j << " at " << a << "," << b;
            }
        }
    }
  }
}

TEST(WeightModules, WeightGradingAndTorus) {
  for (Scalar p : {3u, 5u})
    for (const auto& [name, m] : zoo(p)) {
      const int n = m.n();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (std::size_t b = 0; b < m.dim(); ++b) {
            Weight target = m.weight(b);
            target[static_cast<std::size_t>(i)] += 1;
            target[static_cast<std::size_t>(j)] -= 1;
            for (const auto& e : m.lie(i, j).column(b)) EXPECT_EQ(m.weight(e.row), target) << name;
          }
      // diagonal E_ii acts by the weight coordinate
      for (int i = 0; i < n; ++i)
        for (std::size_t b = 0; b < m.dim(); ++b) {
          Vec col = m.lie(i, i).apply_column(b);
          EXPECT_EQ(col, scale(unit_vector(m.dim(), b), mod_reduce(m.weight(b)[static_cast<std::size_t>(i)], p), p));
        }
      auto F = TestAlgebra::field(p);
      Rng rng(p);
      std::vector<Scalar> t(static_cast<std::size_t>(n));
      auto g = identity_over(n, F);
      for (int i = 0; i < n; ++i) {
        t[static_cast<std::size_t>(i)] = 1 + rng.scalar(p - 1);
        g(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = AlgebraElement::scalar(F, t[static_cast<std::size_t>(i)]);
      }
      auto G = m.group_matrix(g);
      for (std::size_t a = 0; a < m.dim(); ++a)
        for (std::size_t b = 0; b < m.dim(); ++b) {
          Scalar expect = 0;
          if (a == b) {
            expect = 1;
            for (int i = 0; i < n; ++i) {
              int e = m.weight(b)[static_cast<std::size_t>(i)];
              Scalar ti = t[static_cast<std::size_t>(i)];
              if (e < 0) ti = mod_inv(ti, p);
              expect = mod_mul(expect, mod_pow(ti, static_cast<std::uint64_t>(e < 0 ? -e : e), p), p);
            }
          }
          EXPECT_EQ(G(a, b).constant(), expect) << name;
        }
    }
}

TEST(WeightModules, GroupActionIsMultiplicative) {
  Rng rng(40);
  for (Scalar p : {2u, 3u}) {
    auto A = TestAlgebra::truncated(p, 1, 2);
    for (const auto& [name, m] : zoo(p)) {
      for (int t = 0; t < 3; ++t) {
        auto g = random_invertible_matrix(m.n(), A, rng), h = random_invertible_matrix(m.n(), A, rng);
        EXPECT_EQ(m.group_matrix(g * h), m.group_matrix(g) * m.group_matrix(h)) << name;
      }
    }
  }
}

TEST(WeightModules, BareModuleHasNoGroupAction) {
  auto u = Mod::standard(2, 3);
  std::vector<SparseMatrix> lie;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) lie.push_back(u.lie(i, j));
  auto bare = Mod::bare(2, 3, u.weights(), lie);
  auto F = TestAlgebra::field(3);
  EXPECT_THROW(bare.group_matrix(identity_over(2, F)), CapabilityError);
}

TEST(DividedPowers, MatchGroupActionOfOnePlusTE) {
  // (1 + t E_ij) acts as sum_m t^m E_ij^(m).
  for (Scalar p : {2u, 3u}) {
    const int N = 6;
    auto T = TestAlgebra::make(p, {N});
    auto t = AlgebraElement::generator(T, 0);
    std::vector<Mod> mods{Mod::sym_power(Mod::standard(2, p), 4), Mod::sym_power(Mod::exterior_power(3, p, 2), 3),
                          Mod::tensor(Mod::sym_power(Mod::standard(2, p), 2), Mod::sym_power(Mod::standard(2, p), 3)),
                          gln_irreducible_module({3, 1}, p)};
    for (const auto& m : mods) {
      const int n = m.n();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          auto g = identity_over(n, T);
          g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = t;
          auto G = m.group_matrix(g);
          for (int k = 1; k < N; ++k) {
            auto D = DenseMatrix::from_sparse(m.divided_power(i, j, k));
            for (std::size_t a = 0; a < m.dim(); ++a)
              for (std::size_t b = 0; b < m.dim(); ++b) EXPECT_EQ(G(a, b).coefficients()[static_cast<std::size_t>(k)], D(a, b));
          }
        }
    }
  }
}

TEST(ModPReduce, ExamplesAndRoundTrip) {
  auto d = mod_p_reduce({2, 1}, 2);
  EXPECT_EQ(d.r_part, (Weight{2, 1}));
  EXPECT_EQ(d.s_part, (Weight{0, 0}));
  auto e = mod_p_reduce({6, 3, 0}, 3);
  EXPECT_EQ(e.r_part, (Weight{0, 0, 0}));
  EXPECT_EQ(e.s_part, (Weight{2, 1, 0}));
  for (Scalar p : {2u, 3u, 5u}) {
    auto f = mod_p_reduce({1, 0, 0, 0}, p);
    EXPECT_EQ(f.r_part, (Weight{1, 0, 0, 0}));
    EXPECT_EQ(f.s_part, (Weight{0, 0, 0, 0}));
  }
  Rng rng(6);
  for (int k = 0; k < 500; ++k) {
    const Scalar p = std::vector<Scalar>{2, 3, 5, 7}[rng.below(4)];
    Weight w(1 + rng.below(4));
    for (auto& v : w) v = static_cast<int>(rng.between(-20, 20));
    std::sort(w.rbegin(), w.rend());
    auto dec = mod_p_reduce(w, p);
    EXPECT_EQ(weight_add(dec.r_part, weight_scale(dec.s_part, static_cast<int>(p))), w);
    EXPECT_TRUE(is_restricted(dec.r_part, p));
    EXPECT_TRUE(is_dominant(dec.s_part));
    auto again = mod_p_reduce(dec.r_part, p);
    EXPECT_EQ(again.r_part, dec.r_part);
    EXPECT_EQ(again.s_part, Weight(w.size(), 0));
  }
}

TEST(WLambda, Examples) {
  for (int n = 1; n <= 3; ++n)
    for (int i = 1; i <= n; ++i) {
      Weight w(static_cast<std::size_t>(n), 0);
      for (int k = 0; k < i; ++k) w[static_cast<std::size_t>(k)] = 1;
      auto h = build_W_lambda(w, 3);
      EXPECT_EQ(h.submodule.dim(), h.ambient.dim());
      EXPECT_EQ(h.ambient.dim(), static_cast<std::size_t>(binomial(n, i)));
    }
  auto z = build_W_lambda({0, 0}, 3);
  EXPECT_EQ(z.submodule.dim(), 1u);
  auto s = build_W_lambda({2}, 3);
  EXPECT_EQ(s.submodule.dim(), 1u);
  EXPECT_THROW(build_W_lambda({3}, 3), DomainError);
}

TEST(WLambda, StableUnderDividedPowersAndGroupPoints) {
  Rng rng(9);
  for (Scalar p : {2u, 3u}) {
    const int q = static_cast<int>(p);
    std::vector<Weight> ws = {{1, 1, 0}, {q - 1, 0}, {1, 0, 0}, {q == 2 ? 1 : 2, 1, 0}, {q - 1, q - 1}};
    auto A = TestAlgebra::truncated(p, 1, 2);
    for (const auto& w : ws) {
      auto h = build_W_lambda(w, p);
      for (const auto& op : h.ambient.divided_power_operators())
        for (const auto& b : h.submodule.basis()) EXPECT_TRUE(h.submodule.contains(op.apply(b)));
      for (int t = 0; t < 5; ++t) {
        auto G = h.ambient.group_matrix(random_invertible_matrix(h.ambient.n(), A, rng));
        for (const auto& b : h.submodule.basis())
          for (std::size_t alpha = 0; alpha < A->dim(); ++alpha) {
            Vec img(h.ambient.dim(), 0);
            for (std::size_t r = 0; r < img.size(); ++r)
              for (std::size_t c = 0; c < img.size(); ++c)
                img[r] = mod_add(img[r], mod_mul(G(r, c).coefficients()[alpha], b[c], p), p);
            EXPECT_TRUE(h.submodule.contains(img));
          }
      }
      // the highest weight line is one-dimensional
      std::size_t count = 0;
      for (auto piv : h.submodule.pivots()) count += h.ambient.weight(piv) == w;
      EXPECT_EQ(count, 1u);
    }
  }
}

TEST(GlnIrreducible, Examples) {
  for (Scalar p : {2u, 3u, 5u})
    for (int n = 1; n <= 3; ++n)
      for (int i = 1; i <= n; ++i) {
        Weight w(static_cast<std::size_t>(n), 0);
        for (int k = 0; k < i; ++k) w[static_cast<std::size_t>(k)] = 1;
        auto L = gln_irreducible(w, p);
        EXPECT_EQ(L.dim, static_cast<std::size_t>(binomial(n, i)));
        EXPECT_EQ(L.character, elementary_symmetric(n, i));
      }
  EXPECT_EQ(dim_gln_irreducible({0, 0}, 3), 1u);
  EXPECT_EQ(dim_gln_irreducible({2, 0}, 2), 2u);
  EXPECT_THROW(dim_gln_irreducible({0, 1}, 3), DomainError);
  EXPECT_THROW(dim_gln_irreducible({1, 0, 0, 0}, 3), ScopeError);
  // reference values for SL_3: the adjoint loses a trivial summand exactly when p = 3
  EXPECT_EQ(dim_gln_irreducible({2, 1, 0}, 2), 8u);
  EXPECT_EQ(dim_gln_irreducible({2, 1, 0}, 3), 7u);
  EXPECT_EQ(dim_gln_irreducible({2, 1, 0}, 5), 8u);
  // restricted SL_2 weights give the full symmetric power
  for (Scalar p : {3u, 5u, 7u})
    for (int a = 0; a < static_cast<int>(p); ++a) EXPECT_EQ(dim_gln_irreducible({a, 0}, p), static_cast<std::size_t>(a + 1));
  // det twists
  EXPECT_EQ(gln_irreducible({1, 1}, 3).character, LaurentPoly::monomial(2, {1, 1}));
  EXPECT_EQ(gln_irreducible({0, -1}, 3).character, LaurentPoly::monomial(2, {0, -1}) + LaurentPoly::monomial(2, {-1, 0}));
}

TEST(GlnIrreducible, CharactersAreSymmetricWithCorrectSize) {
  for (Scalar p : {2u, 3u})
    for (int a = 0; a <= 6; ++a)
      for (int b = 0; b <= a; ++b)
        for (int c = 0; c <= b && a <= 4; ++c) {
          Weight w{a, b, c};
          auto L = gln_irreducible(w, p);
          EXPECT_TRUE(L.character.is_symmetric());
          EXPECT_EQ(L.character.augmentation(), static_cast<long long>(L.dim));
          EXPECT_EQ(L.character.coefficient(w), 1);
          EXPECT_EQ(lex_top(L.character), w);
          EXPECT_EQ(gln_irreducible_module(w, p).dim(), L.dim);
          EXPECT_EQ(character_of(gln_irreducible_module(w, p)), L.character);
        }
}

TEST(GlnIrreducible, SteinbergFactorization) {
  for (Scalar p : {2u, 3u})
    for (int a = 0; a < 3 * static_cast<int>(p); ++a)
      for (int b = 0; b <= a; ++b) {
        Weight w{a, b};
        auto dec = mod_p_reduce(w, p);
        EXPECT_EQ(dim_gln_irreducible(w, p), dim_gln_irreducible(dec.r_part, p) * dim_gln_irreducible(dec.s_part, p));
      }
}

TEST(GlnIrreducible, MaximalSubmoduleMatchesBruteForce) {
  for (Scalar p : {2u, 3u})
    for (int m1 = 0; m1 < static_cast<int>(p); ++m1)
      for (int m2 = 0; m2 < static_cast<int>(p); ++m2) {
        Weight w = weight_from_omega({m1, m2});
        auto L = restricted_irreducible(w, p);
        auto brute = brute_force_maximal(L.w, p);
        EXPECT_EQ(L.maximal, brute) << weight_to_string(w) << " p=" << p;
        EXPECT_EQ(L.dim, L.w.submodule.dim() - brute.dim());
      }
}

TEST(RootVectorIdentities, AllRestrictedWeightsRankTwo) {
  for (Scalar p : {3u, 5u})
    for (int m1 = 0; m1 < static_cast<int>(p); ++m1)
      for (int m2 = 0; m2 < static_cast<int>(p); ++m2) {
        if (!m1 && !m2) continue;
        auto rep = root_vector_identities(weight_from_omega({m1, m2}), p);
        EXPECT_TRUE(rep.all_passed());
        EXPECT_FALSE(rep.checks.empty());
      }
  EXPECT_THROW(root_vector_identities({0, 0}, 3), DomainError);
}

TEST(RootVectorIdentities, Examples) {
  // lambda = 2 omega_1: E_11 v = 2v
  auto h = highest_weight_ambient(2, 3, {2, 0});
  Vec v = unit_vector(h.dim(), 0);
  EXPECT_EQ(h.lie(0, 0).apply(v), scale(v, 2, 3));
  // lambda = omega_1 + omega_2: E_11 v = (m_1 + 1) v = 2v
  auto h2 = highest_weight_ambient(2, 3, {1, 1});
  Vec v2 = unit_vector(h2.dim(), 0);
  EXPECT_EQ(h2.lie(0, 0).apply(v2), scale(v2, 2, 3));
  auto rep = root_vector_identities({2, 1}, 3);
  EXPECT_EQ(rep.k, 2);
  EXPECT_EQ(rep.i, 1);
  // E_12 v = 0
  EXPECT_TRUE(is_zero(h2.lie(0, 1).apply(v2)));
}

TEST(Characters, OfModules) {
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i <= n; ++i) EXPECT_EQ(character_of(Mod::exterior_power(n, 3, i)), elementary_symmetric(n, i));
  EXPECT_EQ(character_of(Mod::trivial(2, 5)), LaurentPoly::constant(2, 1));
}
