#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "polyflat/constructions.hpp"
#include "polyflat/diameter.hpp"

using namespace polyflat;

namespace {

CosetSpace cyclic(std::int64_t n) { return CosetSpace(TriangularQuotient(1, {}, {n}, {}, {"x"})); }

}  // namespace

TEST(BfsProfile, CyclicGroup) {
  auto prof = bfs_profile(cyclic(7));
  EXPECT_EQ(prof.diameter, 3u);
  EXPECT_EQ(prof.ball_sizes, (std::vector<std::uint64_t>{1, 3, 5, 7}));
  for (std::int64_t n = 1; n <= 30; ++n)
    EXPECT_EQ(diameter(cyclic(n)), static_cast<std::uint64_t>(n / 2));
}

TEST(BfsProfile, TrivialSpace) {
  auto prof = bfs_profile(heisenberg_Hn(1));
  EXPECT_EQ(prof.diameter, 0u);
  EXPECT_EQ(prof.ball_sizes, (std::vector<std::uint64_t>{1}));
}

TEST(BfsProfile, HeisenbergK2) {
  EXPECT_EQ(diameter(heisenberg_Kp(2)), 2u);
  EXPECT_EQ(oracle::heisenberg_diameter(2, 2, 2), 2u);
}

TEST(BfsProfile, CapRefusal) {
  try {
    bfs_profile(heisenberg_Kp(11), 1000);
    FAIL();
  } catch (const ResourceRefusal& e) {
    EXPECT_NE(std::string(e.what()).find("1000"), std::string::npos);
  }
}

TEST(BfsProfile, NonTransitiveGeneratorsAreAnError) {
  TriangularQuotient g = heisenberg_quotient(3, 3, 3);
  CosetSpace s(g, {{"1", {0, 0, 0}}, {"x", {1, 0, 0}}, {"x^-1", {-1, 0, 0}}});
  EXPECT_THROW(bfs_profile(s), ValidationError);
}

TEST(BfsProfile, BallSizesStrictlyIncrease) {
  for (const auto& s : {heisenberg_Kp(7), heisenberg_Hn(5), build_gamma(IntMatrix{{2, 1}, {1, 1}}, 29, Variant::ord).space}) {
    auto prof = bfs_profile(s);
    EXPECT_EQ(prof.ball_sizes.front(), 1u);
    EXPECT_EQ(Int(prof.ball_sizes.back()), s.coset_count());
    EXPECT_EQ(prof.ball_sizes.size(), prof.diameter + 1);
    for (std::size_t r = 1; r < prof.ball_sizes.size(); ++r)
      EXPECT_GT(prof.ball_sizes[r], prof.ball_sizes[r - 1]);
  }
}

TEST(OracleEquivalence, HeisenbergSetMultiplication) {
  for (auto [qa, qb, qc] : std::vector<std::array<std::int64_t, 3>>{
           {2, 2, 2}, {3, 3, 3}, {5, 5, 5}, {7, 7, 7}, {11, 11, 11}, {13, 13, 13}, {2, 2, 4}, {3, 3, 9},
           {4, 4, 16}, {5, 5, 25}, {6, 6, 36}, {8, 8, 64}, {4, 6, 12}, {1, 5, 5}}) {
    if (qa * qb * qc > 5000)
      continue;
    EXPECT_EQ(diameter(CosetSpace(heisenberg_quotient(qa, qb, qc))), oracle::heisenberg_diameter(qa, qb, qc))
        << qa << "," << qb << "," << qc;
  }
}

TEST(OracleEquivalence, SemidirectSetMultiplication) {
  IntMatrix m{{2, 1}, {1, 1}};
  for (u64 p : splitting_primes({char_poly(m)}, 200)) {
    for (Variant v : {Variant::one, Variant::ord}) {
      Gamma g = build_gamma(m, p, v);
      if (g.lattice_form.size() > 5000)
        continue;
      std::uint64_t expected = oracle::semidirect_diameter(m, g.av.lattice, static_cast<std::int64_t>(g.r));
      EXPECT_EQ(diameter(g.space), expected) << p;
      EXPECT_EQ(diameter(CosetSpace(g.lattice_form)), expected) << p;
    }
  }
}

TEST(BfsProfile, ShuffledGeneratorsGiveSameProfile) {
  std::mt19937_64 rng(89);
  for (const auto& s : {heisenberg_Kp(5), heisenberg_Hn(4), build_gamma(IntMatrix{{2, 1}, {1, 1}}, 31, Variant::ord).space}) {
    auto base = bfs_profile(s);
    auto gens = s.generators();
    for (int k = 0; k < 5; ++k) {
      std::shuffle(gens.begin(), gens.end(), rng);
      EXPECT_EQ(bfs_profile(CosetSpace(s.shape(), gens)).ball_sizes, base.ball_sizes);
    }
  }
}

TEST(BfsProfile, VertexTransitivityForNormalShapes) {
  std::mt19937_64 rng(97);
  std::vector<CosetSpace> spaces{heisenberg_Kp(7), CosetSpace(ZpZrGroup(31, 5, 2)),
                                 build_gamma(IntMatrix{{2, 1}, {1, 1}}, 29, Variant::ord).space};
  for (const auto& s : spaces) {
    ASSERT_TRUE(s.is_normal());
    auto d = bfs_profile(s).diameter;
    for (int k = 0; k < 5; ++k) {
      Coords start(s.arity());
      std::uniform_int_distribution<std::int64_t> pick(-100, 100);
      for (auto& x : start)
        x = pick(rng);
      EXPECT_EQ(bfs_profile(s, default_bfs_cap, start).diameter, d);
    }
  }
}

TEST(HeisenbergBounds, QuotientsAndCosets) {
  for (u64 p : primes_up_to(31)) {
    auto s = heisenberg_Kp(static_cast<std::int64_t>(p));
    EXPECT_LE(diameter(s), 3 * p);
  }
  double eps = 1e9;
  for (std::int64_t n = 1; n <= 16; ++n) {
    auto d = diameter(heisenberg_Hn(n));
    EXPECT_LE(d, static_cast<std::uint64_t>(10 * n));
    if (n >= 2)
      eps = std::min(eps, static_cast<double>(d) / static_cast<double>(n));
  }
  EXPECT_GT(eps, 0.5);
}

TEST(WitnessWord, ReachesTargetWithMinimalLength) {
  CosetSpace s = heisenberg_Hn(4);
  TriangularQuotient g = std::get<TriangularQuotient>(s.shape());
  auto prof = bfs_profile(s);
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::int64_t> pick(0, 15);
  std::size_t longest = 0;
  for (int k = 0; k < 200; ++k) {
    Coords target = s.canonicalise({pick(rng), pick(rng), pick(rng)});
    auto word = witness_word(s, target);
    EXPECT_EQ(s.canonicalise(word_product(g, s.generators(), word)), target);
    longest = std::max(longest, word.size());
    EXPECT_LE(word.size(), prof.diameter);
  }
  EXPECT_TRUE(witness_word(s, s.identity()).empty());
  EXPECT_GT(longest, 0u);
}

TEST(Sandwich, CyclicTower) {
  SubgroupTower tower(TriangularQuotient(1, {}, {8}), divisible_by({4}));
  SandwichResult r = sandwich_check(tower);
  EXPECT_EQ(r.d1, 1u);
  EXPECT_EQ(r.d2, 4u);
  EXPECT_EQ(r.d3, 2u);
  EXPECT_TRUE(r.holds);
}

TEST(Sandwich, CyclicTowersGenerally) {
  for (std::int64_t n = 2; n <= 40; ++n)
    for (std::int64_t m = 1; m <= n; ++m) {
      if (n % m != 0)
        continue;
      SubgroupTower tower(TriangularQuotient(1, {}, {n}), divisible_by({m}));
      SandwichResult r = sandwich_check(tower);
      EXPECT_EQ(r.d2, static_cast<std::uint64_t>(n / 2));
      EXPECT_EQ(r.d3, static_cast<std::uint64_t>(m / 2));
      EXPECT_LE(r.d1, r.d2);
      EXPECT_TRUE(r.holds) << n << " " << m;
    }
}

TEST(Sandwich, HeisenbergTower) {
  for (std::int64_t p : {2, 3}) {
    SubgroupTower tower(heisenberg_quotient(p * p, p * p, p * p), divisible_by({p, p, p}));
    EXPECT_EQ(tower.subgroup_order(), static_cast<std::uint64_t>(p * p * p));
    EXPECT_EQ(tower.coset_count_gh(), static_cast<std::uint64_t>(p * p * p));
    SandwichResult r = sandwich_check(tower);
    EXPECT_EQ(r.d3, diameter(heisenberg_Kp(p)));
    EXPECT_EQ(r.d2, diameter(CosetSpace(heisenberg_quotient(p * p, p * p, p * p))));
    EXPECT_LE(r.d1, r.d2);
    EXPECT_LE(r.d2, 4 * r.d3 * r.d1);
    EXPECT_TRUE(r.holds);
  }
}

TEST(Sandwich, EdgeCases) {
  // H = G: T contains S, so diam_T(H/K) = diam_S(G/K)
  SubgroupTower whole(heisenberg_quotient(3, 3, 3), [](const Coords&) { return true; });
  SandwichResult a = sandwich_check(whole);
  EXPECT_EQ(a.d3, 0u);
  EXPECT_EQ(a.d1, a.d2);
  EXPECT_TRUE(a.holds);
  // H = K: trivial quotient
  SubgroupTower trivial(heisenberg_quotient(3, 3, 3), divisible_by({3, 3, 3}));
  SandwichResult b = sandwich_check(trivial);
  EXPECT_EQ(b.d1, 0u);
  EXPECT_EQ(b.d3, b.d2);
  EXPECT_TRUE(b.holds);
}

TEST(Sandwich, InducedGeneratorsLieInH) {
  SubgroupTower tower(heisenberg_quotient(9, 9, 9), divisible_by({3, 3, 3}));
  auto t = induced_generating_set(tower);
  ASSERT_EQ(t.elements.size(), t.words.size());
  const auto& g = tower.quotient();
  for (std::size_t i = 0; i < t.elements.size(); ++i) {
    for (auto x : t.elements[i])
      EXPECT_EQ(x % 3, 0);
    EXPECT_EQ(g.canonicalise(word_product(g, tower.space().generators(), t.words[i])), t.elements[i]);
    EXPECT_LE(t.words[i].size(), 2 * tower.diam_g_over_h() + 1);
  }
}

TEST(Sandwich, Validation) {
  // membership not closed under products
  EXPECT_THROW(SubgroupTower(TriangularQuotient(1, {}, {8}), [](const Coords& c) { return c[0] <= 3; }),
               ValidationError);
  EXPECT_THROW(SubgroupTower(TriangularQuotient(1, {}, {8}), [](const Coords& c) { return c[0] == 1; }),
               ValidationError);
  // K = H_n is not normal
  EXPECT_THROW(SubgroupTower(heisenberg_quotient(2, 2, 4), divisible_by({1, 1, 1})), ValidationError);
}
