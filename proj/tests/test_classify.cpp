#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "polyflat/classify.hpp"

using namespace polyflat;

namespace {

bool float_roots_of_unity(const IntMatrix& m) {
  Eigen::MatrixXd a(m.dim(), m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).convert_to<double>();
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  for (const auto& l : es.eigenvalues())
    if (std::abs(std::abs(l) - 1.0) > 1e-6)
      return false;
  return true;
}

IntMatrix strictly_upper(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> d(-2, 2);
  IntMatrix nil(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      nil(i, j) = d(rng);
  return nil;
}

// I + a_1 N + a_2 N^2 + ...
IntMatrix unipotent_polynomial(std::mt19937_64& rng, const IntMatrix& nil) {
  std::uniform_int_distribution<int> d(-2, 2);
  std::size_t n = nil.dim();
  IntMatrix out = IntMatrix::identity(n), power = nil;
  for (std::size_t e = 1; e < n; ++e) {
    int c = d(rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += c * power(i, j);
    power = power * nil;
  }
  return out;
}

}  // namespace

TEST(Cyclotomic, SmallValues) {
  EXPECT_EQ(cyclotomic(1), (IntPoly{-1, 1}));
  EXPECT_EQ(cyclotomic(2), (IntPoly{1, 1}));
  EXPECT_EQ(cyclotomic(4), (IntPoly{1, 0, 1}));
  EXPECT_EQ(cyclotomic(6), (IntPoly{1, -1, 1}));
  EXPECT_EQ(cyclotomic(12), (IntPoly{1, 0, -1, 0, 1}));
  for (std::uint64_t d = 1; d <= 60; ++d)
    EXPECT_EQ(cyclotomic(d).degree(), static_cast<int>(euler_phi(d)));
}

TEST(Cyclotomic, ProductOverDivisorsIsXnMinusOne) {
  for (std::uint64_t n = 1; n <= 40; ++n) {
    IntPoly prod{1};
    for (std::uint64_t d = 1; d <= n; ++d)
      if (n % d == 0)
        prod = prod * cyclotomic(d);
    IntVector expected(n + 1, 0);
    expected[0] = -1;
    expected[n] = 1;
    EXPECT_EQ(prod, IntPoly(expected)) << n;
  }
}

TEST(IsRootsOfUnity, Examples) {
  EXPECT_TRUE(is_roots_of_unity(IntMatrix{{0, -1}, {1, 0}}));
  EXPECT_TRUE(is_roots_of_unity(IntMatrix{{1, 1}, {0, 1}}));
  EXPECT_FALSE(is_roots_of_unity(IntMatrix{{2, 1}, {1, 1}}));
  EXPECT_TRUE(is_roots_of_unity(IntMatrix::identity(4)));
  EXPECT_TRUE(is_roots_of_unity(IntMatrix{{-1}}));
  EXPECT_THROW(is_roots_of_unity(IntMatrix{{2, 0}, {0, 1}}), ValidationError);
}

TEST(IsRootsOfUnity, AgreesWithFloatingOracle) {
  std::mt19937_64 rng(109);
  std::vector<IntMatrix> blocks;
  for (std::uint64_t d : {1, 2, 3, 4, 5, 6, 8, 10, 12})
    blocks.push_back(IntMatrix::companion(cyclotomic(d).coeffs()));
  std::vector<IntMatrix> hyperbolic{IntMatrix{{2, 1}, {1, 1}}, IntMatrix{{1, 1}, {1, 0}},
                                    IntMatrix::companion(IntVector{-1, -1, 0, 1})};
  int agreed = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<IntMatrix> parts;
    std::size_t dim = 0;
    bool expected = true;
    std::uniform_int_distribution<std::size_t> pick(0, blocks.size() + hyperbolic.size());
    while (dim < 5) {
      std::size_t k = pick(rng);
      IntMatrix b = k < blocks.size() ? blocks[k]
                    : k < blocks.size() + hyperbolic.size() ? hyperbolic[k - blocks.size()]
                                                             : IntMatrix{{1, 1}, {0, 1}};
      if (dim + b.dim() > 5)
        break;
      if (k >= blocks.size() && k < blocks.size() + hyperbolic.size())
        expected = false;
      parts.push_back(b);
      dim += b.dim();
    }
    if (parts.empty())
      continue;
    IntMatrix m = oracle::block_diagonal(parts);
    IntMatrix u = oracle::random_unimodular(rng, m.dim(), 6);
    m = u * m * u.inverse();
    bool exact = is_roots_of_unity(m);
    ASSERT_EQ(exact, expected) << "trial " << trial;
    ASSERT_EQ(exact, float_roots_of_unity(m)) << "trial " << trial;
    ++agreed;
  }
  EXPECT_GE(agreed, 150);
}

TEST(LowerCentralSeries, HeisenbergPresentation) {
  LcsReport r = lower_central_series({IntMatrix{{1, 0}, {1, 1}}});
  ASSERT_EQ(r.terms.size(), 3u);
  EXPECT_EQ(r.terms[0], full_lattice(2));
  EXPECT_EQ(r.terms[1], hnf({{0, 1}}, 2));
  EXPECT_TRUE(r.terms[2].is_zero());
  EXPECT_TRUE(r.nilpotent);
  EXPECT_EQ(r.nilpotency_class, 2u);
}

TEST(LowerCentralSeries, IdentityIsAbelian) {
  LcsReport r = lower_central_series({IntMatrix::identity(3), IntMatrix::identity(3)});
  ASSERT_EQ(r.terms.size(), 2u);
  EXPECT_TRUE(r.terms[1].is_zero());
  EXPECT_EQ(r.nilpotency_class, 1u);
}

TEST(LowerCentralSeries, HyperbolicStabilises) {
  LcsReport r = lower_central_series({IntMatrix{{2, 1}, {1, 1}}});
  EXPECT_FALSE(r.nilpotent);
  EXPECT_EQ(r.terms[1], full_lattice(2));
}

TEST(LowerCentralSeries, Errors) {
  EXPECT_THROW(lower_central_series({}), ValidationError);
  EXPECT_THROW(lower_central_series({IntMatrix{{1, 1}, {0, 1}}, IntMatrix{{1, 0}, {1, 1}}}), ValidationError);
  EXPECT_THROW(lower_central_series({IntMatrix{{3}}}), ValidationError);
}

TEST(LowerCentralSeries, UnipotentFamiliesReachZero) {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + trial % 4;
    IntMatrix nil = strictly_upper(rng, n);
    IntMatrix u = oracle::random_unimodular(rng, n, 6);
    std::vector<IntMatrix> family;
    for (int k = 0; k < 1 + trial % 3; ++k)
      family.push_back(u * unipotent_polynomial(rng, nil) * u.inverse());
    LcsReport r = lower_central_series(family);
    ASSERT_TRUE(r.nilpotent);
    ASSERT_LE(r.terms.size(), n + 1);
    for (std::size_t i = 1; i < r.terms.size(); ++i) {
      ASSERT_LE(r.terms[i].rank(), r.terms[i - 1].rank());
      // P_{i+1} inside P_i
      for (const auto& b : r.terms[i].basis())
        ASSERT_TRUE(r.terms[i - 1].contains(b));
      for (const auto& m : family)
        ASSERT_TRUE(is_invariant(r.terms[i], m));
    }
    // ranks of successive quotients add up to the full rank
    std::size_t total = 0;
    for (std::size_t i = 0; i + 1 < r.terms.size(); ++i)
      total += r.terms[i].rank() - r.terms[i + 1].rank();
    ASSERT_EQ(total, n);
  }
}

TEST(Classify, Examples) {
  Classification h = classify_zn_by_zm({IntMatrix{{1, 0}, {1, 1}}});
  EXPECT_TRUE(h.virtually_nilpotent);
  EXPECT_TRUE(h.nilpotent);
  EXPECT_FALSE(h.witness_matrix_index);

  Classification a = classify_zn_by_zm({IntMatrix{{2, 1}, {1, 1}}});
  EXPECT_FALSE(a.virtually_nilpotent);
  EXPECT_FALSE(a.nilpotent);
  EXPECT_EQ(a.witness_matrix_index, 1u);

  Classification r = classify_zn_by_zm({IntMatrix{{0, -1}, {1, 0}}});
  EXPECT_TRUE(r.virtually_nilpotent);
  EXPECT_FALSE(r.nilpotent);
  // (I - M) has determinant 2
  EXPECT_EQ(r.series.terms[1], hnf({{1, -1}, {1, 1}}, 2));
  EXPECT_EQ(lattice_index(r.series.terms[1]), Int(2));
}

TEST(Classify, WitnessIndexFromConstruction) {
  std::mt19937_64 rng(127);
  IntMatrix rot{{0, -1}, {1, 0}};
  IntMatrix hyp{{2, 1}, {1, 1}};
  for (int trial = 0; trial < 20; ++trial) {
    IntMatrix u = oracle::random_unimodular(rng, 4, 6);
    auto conj = [&](const IntMatrix& m) { return u * m * u.inverse(); };
    std::size_t bad = 1 + static_cast<std::size_t>(trial % 3);
    std::vector<IntMatrix> family;
    for (std::size_t i = 1; i <= 3; ++i)
      family.push_back(conj(oracle::block_diagonal({rot.pow(static_cast<long>(i)), i >= bad ? hyp.pow(static_cast<long>(i)) : IntMatrix::identity(2)})));
    Classification c = classify_zn_by_zm(family);
    EXPECT_FALSE(c.virtually_nilpotent);
    EXPECT_EQ(c.witness_matrix_index, bad);
  }
}

TEST(IsRootsOfUnity, SquarefreeOracleKeepsDefectiveSpectraOnTheCircle) {
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 40; ++trial) {
    IntMatrix m = oracle::random_matrix(rng, 1 + trial % 4, -4, 4);
    auto f = oracle::char_poly_q(m);
    IntPoly lib = char_poly(m);
    ASSERT_EQ(f.size(), lib.coeffs().size());
    for (std::size_t i = 0; i < f.size(); ++i)
      ASSERT_EQ(f[i], Rational(lib[i]));
  }
  // a conjugated 4x4 Jordan block: all roots collapse to x - 1
  IntMatrix j{{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {0, 0, 0, 1}};
  IntMatrix u = oracle::random_unimodular(rng, 4, 6);
  EXPECT_EQ(oracle::squarefree_char_poly(u * j * u.inverse()), (oracle::QPoly{-1, 1}));
  EXPECT_EQ(oracle::squarefree_char_poly(oracle::block_diagonal({IntMatrix{{0, -1}, {1, 0}}, IntMatrix{{0, -1}, {1, 0}}})),
            (oracle::QPoly{1, 0, 1}));
}
