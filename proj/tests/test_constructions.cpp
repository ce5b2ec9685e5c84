#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "polyflat/constructions.hpp"
#include "polyflat/diameter.hpp"

using namespace polyflat;

namespace {

// Multiplies a word out with 3x3 integer matrices.
oracle::V word_in_matrices(const std::vector<std::string>& word) {
  oracle::V acc{0, 0, 0};
  for (const auto& w : word) {
    oracle::V g{0, 0, 0};
    if (w == "x") g = {1, 0, 0};
    else if (w == "x^-1") g = {-1, 0, 0};
    else if (w == "y") g = {0, 1, 0};
    else if (w == "y^-1") g = {0, -1, 0};
    else ADD_FAILURE() << "unexpected letter " << w;
    acc = oracle::heis_mul(acc, g);
  }
  return acc;
}

bool index_p_invariant(const IntMatrix& m, const AvResult& av) {
  if (*lattice_index(av.lattice) != Int(av.p))
    return false;
  for (const auto& row : av.lattice.basis())
    if (!av.lattice.contains(m.apply(row)))
      return false;
  return true;
}

}  // namespace

TEST(Heisenberg, FamilyShapes) {
  EXPECT_EQ(coset_count(heisenberg_Kp(2)), 8);
  EXPECT_EQ(coset_count(heisenberg_Kp(3)), 27);
  EXPECT_LE(diameter(heisenberg_Kp(3)), 9u);
  EXPECT_EQ(diameter(heisenberg_Kp(5)), 4u);
  EXPECT_EQ(coset_count(heisenberg_Hn(3)), 81);
  EXPECT_LE(diameter(heisenberg_Hn(3)), 30u);
  EXPECT_EQ(diameter(heisenberg_Hn(4)), 8u);
  EXPECT_THROW(heisenberg_Kp(4), ValidationError);
  EXPECT_THROW(heisenberg_Kp(1), ValidationError);
  EXPECT_THROW(heisenberg_Hn(0), ValidationError);
}

TEST(Heisenberg, CoordinateConversionRoundTrips) {
  std::mt19937_64 rng(103);
  std::uniform_int_distribution<std::int64_t> d(-100, 100);
  for (int k = 0; k < 100; ++k) {
    Coords c{d(rng), d(rng), d(rng)};
    EXPECT_EQ(heisenberg_from_matrix(heisenberg_to_matrix(c)), c);
  }
}

TEST(ShortCentralWord, Examples) {
  EXPECT_TRUE(short_central_word(0, 5).empty());
  auto w = short_central_word(1, 7);
  EXPECT_EQ(w.size(), 4u);
  EXPECT_EQ(word_in_matrices(w), (oracle::V{0, 0, 1}));
  EXPECT_THROW(short_central_word(25, 5), ValidationError);
  EXPECT_THROW(short_central_word(-1, 5), ValidationError);
  EXPECT_THROW(short_central_word(0, 0), ValidationError);
}

TEST(ShortCentralWord, AllCentralElementsUpToTwenty) {
  for (std::int64_t n = 1; n <= 20; ++n)
    for (std::int64_t c = 0; c < n * n; ++c) {
      auto w = short_central_word(c, n);
      ASSERT_LE(w.size(), static_cast<std::size_t>(8 * n));
      // matrix corner c with a = b = 0 is the normal form z^c
      ASSERT_EQ(word_in_matrices(w), (oracle::V{0, 0, c})) << c << " base " << n;
    }
}

TEST(BuildAv, HyperbolicMod11) {
  IntMatrix m{{2, 1}, {1, 1}};
  AvResult av = build_Av(m, 11);
  EXPECT_EQ(av.lambda, 5u);
  EXPECT_EQ(av.v, (VecModP{1, 3}));
  ASSERT_EQ(av.lattice.basis().size(), 2u);
  EXPECT_EQ(av.lattice.basis()[0], (IntVector{1, 7}));
  EXPECT_EQ(av.lattice.basis()[1], (IntVector{0, 11}));
  EXPECT_TRUE(index_p_invariant(m, av));
  EXPECT_TRUE(acts_as_scalar(m, av.lattice, 5));
  EXPECT_TRUE(av.distinct_roots);
}

TEST(BuildAv, Identity) {
  for (u64 p : {2, 3, 7, 13}) {
    IntMatrix id = IntMatrix::identity(3);
    AvResult av = build_Av(id, p);
    EXPECT_EQ(av.lambda, 1u);
    EXPECT_TRUE(index_p_invariant(id, av));
    EXPECT_TRUE(acts_as_scalar(id, av.lattice, 1));
    EXPECT_FALSE(av.distinct_roots);
  }
}

TEST(BuildAv, UnipotentMod5) {
  IntMatrix m{{1, 1}, {0, 1}};
  AvResult av = build_Av(m, 5);
  EXPECT_EQ(av.lambda, 1u);
  EXPECT_EQ(av.v, (VecModP{0, 1}));
  EXPECT_TRUE(av.lattice.contains(IntVector{1, 0}));
  EXPECT_TRUE(av.lattice.contains(IntVector{0, 5}));
  EXPECT_FALSE(av.lattice.contains(IntVector{0, 1}));
  EXPECT_TRUE(index_p_invariant(m, av));
}

TEST(BuildAv, Errors) {
  EXPECT_THROW(build_Av(IntMatrix{{2, 1}, {1, 1}}, 7), ValidationError);
  EXPECT_THROW(build_Av(IntMatrix{{2, 0}, {0, 1}}, 7), ValidationError);
  EXPECT_THROW(build_Av(IntMatrix{{0, -1}, {1, 0}}, 7), ValidationError);
}

TEST(BuildAv, SweepPropertiesWithIndependentChecks) {
  IntMatrix m{{2, 1}, {1, 1}};
  for (u64 p : splitting_primes({char_poly(m)}, 500)) {
    AvResult av = build_Av(m, p);
    ASSERT_TRUE(index_p_invariant(m, av)) << p;
    // (M - lambda) e_i lies in A_v, i.e. M acts on Z^n / A_v by lambda
    ASSERT_TRUE(acts_as_scalar(m, av.lattice, av.lambda)) << p;
    // lambda is a root of ch(M) with the largest order
    ASSERT_EQ(oracle::mod(static_cast<std::int64_t>(av.lambda * av.lambda % p) - 3 * static_cast<std::int64_t>(av.lambda) + 1,
                          static_cast<std::int64_t>(p)),
              0);
    ASSERT_EQ(mult_order(av.lambda, p), lambda_of(char_poly(m), p));
  }
}

TEST(BuildAv, HigherDimensionalBlocks) {
  std::mt19937_64 rng(107);
  IntMatrix h{{2, 1}, {1, 1}};
  IntMatrix u{{1, 1}, {0, 1}};
  IntMatrix base = oracle::block_diagonal({h, u, IntMatrix{{-1}}});
  for (int k = 0; k < 10; ++k) {
    IntMatrix c = oracle::random_unimodular(rng, 5, 8);
    IntMatrix m = c * base * c.inverse();
    for (u64 p : splitting_primes({char_poly(m)}, 60)) {
      AvResult av = build_Av(m, p);
      ASSERT_TRUE(index_p_invariant(m, av));
      ASSERT_TRUE(acts_as_scalar(m, av.lattice, av.lambda));
      ASSERT_EQ(av.basis.size(), 5u);
    }
  }
}

TEST(BuildGamma, OrdVariant) {
  IntMatrix m{{2, 1}, {1, 1}};
  Gamma g = build_gamma(m, 11, Variant::ord);
  EXPECT_EQ(g.r, 5u);
  EXPECT_EQ(g.space.coset_count(), 55);
  EXPECT_EQ(g.space.shape_name(), "zpzr");
  EXPECT_EQ(g.lattice_form.coset_count(), 55);
  EXPECT_EQ(diameter(g.space), diameter(CosetSpace(g.lattice_form)));
  for (u64 p : splitting_primes({char_poly(m)}, 500)) {
    Gamma gp = build_gamma(m, p, Variant::ord);
    ASSERT_EQ(gp.space.coset_count(), Int(p) * oracle::naive_order(gp.av.lambda, p));
  }
}

TEST(BuildGamma, VariantOneHasIndexP) {
  IntMatrix m{{2, 1}, {1, 1}};
  for (u64 p : splitting_primes({char_poly(m)}, 200)) {
    Gamma g = build_gamma(m, p, Variant::one);
    ASSERT_EQ(g.r, 1u);
    ASSERT_EQ(g.space.coset_count(), Int(p));
  }
}

TEST(BuildGamma, IdentityGivesCyclicGroup) {
  for (u64 p : {3, 5, 11, 17}) {
    Gamma g = build_gamma(IntMatrix::identity(2), p, Variant::ord);
    EXPECT_EQ(g.space.coset_count(), Int(p));
    EXPECT_EQ(diameter(g.space), p / 2);
  }
}

TEST(ExtendToZm, Examples) {
  IntMatrix m{{2, 1}, {1, 1}};
  Gamma g = build_gamma(m, 11, Variant::ord);
  auto base_diam = diameter(CosetSpace(g.lattice_form));

  CosetSpace same = extend_to_zm(g.lattice_form, {});
  EXPECT_EQ(same.coset_count(), 55);
  EXPECT_EQ(diameter(same), base_diam);

  CosetSpace sq = extend_to_zm(g.lattice_form, {m * m});
  EXPECT_EQ(sq.coset_count(), 55);
  EXPECT_LE(diameter(sq), base_diam);

  CosetSpace id = extend_to_zm(g.lattice_form, {IntMatrix::identity(2)});
  EXPECT_EQ(diameter(id), base_diam);

  EXPECT_THROW(extend_to_zm(g.lattice_form, {IntMatrix{{1, 1}, {0, 1}}}), ValidationError);
}

TEST(ExtendToZm, DiameterNeverGrowsAcrossSweep) {
  IntMatrix m{{2, 1}, {1, 1}};
  for (u64 p : splitting_primes({char_poly(m)}, 150)) {
    Gamma g = build_gamma(m, p, Variant::ord);
    auto base = diameter(CosetSpace(g.lattice_form));
    CosetSpace ext = extend_to_zm(g.lattice_form, {m * m * m, m.inverse()});
    ASSERT_EQ(ext.coset_count(), g.lattice_form.coset_count());
    ASSERT_LE(diameter(ext), base) << p;
  }
}

TEST(LambdaOrderBound, DistinctRootPrimes) {
  IntMatrix m{{2, 1}, {1, 1}};
  Rational b = op_norm_upper_bound(m);
  double logb = std::log(b.convert_to<double>());
  int checked = 0;
  for (u64 p : splitting_primes({char_poly(m)}, 2000)) {
    AvResult av = build_Av(m, p);
    if (!av.distinct_roots)
      continue;
    u64 ord = mult_order(av.lambda, p);
    // B^ord >= p - 1 exactly
    Rational power = 1;
    for (u64 i = 0; i < ord; ++i)
      power *= b;
    ASSERT_GE(power, Rational(p - 1)) << p;
    ASSERT_GE(static_cast<double>(ord) + 1e-9, std::log(static_cast<double>(p - 1)) / logb);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(FamilySpec, ValidationAndParameters) {
  FamilySpec heis{FamilyKind::heis_quotients, {}, 1, 20, {Variant::ord}};
  EXPECT_EQ(heis.parameters(), (std::vector<u64>{2, 3, 5, 7, 11, 13, 17, 19}));
  FamilySpec cosets{FamilyKind::heis_cosets, {}, 3, 6, {Variant::ord}};
  EXPECT_EQ(cosets.parameters(), (std::vector<u64>{3, 4, 5, 6}));
  FamilySpec semi{FamilyKind::zn_by_z, {IntMatrix{{2, 1}, {1, 1}}}, 1, 20, {Variant::ord}};
  EXPECT_EQ(semi.parameters(), (std::vector<u64>{5, 11, 19}));
  EXPECT_NO_THROW(semi.validate());

  FamilySpec bad = semi;
  bad.matrices.push_back(IntMatrix{{1, 1}, {0, 1}});
  EXPECT_THROW(bad.validate(), ValidationError);
  bad.kind = FamilyKind::zn_by_zm;
  EXPECT_THROW(bad.validate(), ValidationError);
  FamilySpec nonunimodular{FamilyKind::zn_by_z, {IntMatrix{{2, 0}, {0, 1}}}, 1, 20, {Variant::ord}};
  EXPECT_THROW(nonunimodular.validate(), ValidationError);
  FamilySpec empty{FamilyKind::heis_cosets, {}, 5, 4, {Variant::ord}};
  EXPECT_THROW(empty.validate(), ValidationError);
}
