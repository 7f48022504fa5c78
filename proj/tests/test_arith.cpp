#include <gtest/gtest.h>

#include "tpcone/arith.hpp"
#include "tpcone/random.hpp"

using namespace tpcone;

TEST(Arith, PrimitiveDividesByGcdAndKeepsSign) {
  EXPECT_EQ(primitive(IntVec{4, -6, 0}), (IntVec{2, -3, 0}));
  EXPECT_EQ(primitive(IntVec{0, 0}), (IntVec{0, 0}));
  EXPECT_EQ(primitive(RatVec{Rational(1, 2), Rational(-1, 3)}), (IntVec{3, -2}));
}

TEST(Arith, LineCanonicalFixesSign) {
  EXPECT_EQ(line_canonical(IntVec{-2, 4}), (IntVec{1, -2}));
  EXPECT_EQ(line_canonical(IntVec{0, -3, 3}), (IntVec{0, 1, -1}));
}

TEST(Arith, PivotColumnsFollowColumnOrder) {
  // column 0 is zero, column 2 is a multiple of column 1
  IntMatrix m{{0, 1, 2, 0}, {0, 2, 4, 1}};
  Echelon e = echelon(m, 4);
  EXPECT_EQ(e.rank(), 2u);
  EXPECT_EQ(e.pivots, (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(e.free_columns(), (std::vector<std::size_t>{0, 2}));
}

TEST(Arith, NullSpaceIsAnnihilated) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t rows = static_cast<std::size_t>(rng.uniform(1, 4)), cols = static_cast<std::size_t>(rng.uniform(2, 6));
    IntMatrix m(rows, IntVec(cols));
    for (auto& r : m)
      for (auto& x : r) x = rng.uniform(-3, 3);
    IntMatrix ns = null_space(m, cols);
    EXPECT_EQ(ns.size() + rank(m, cols), cols);
    for (const auto& v : ns)
      for (const auto& r : m) EXPECT_EQ(dot(r, v), 0);
  }
}

TEST(Arith, RrefHasUnitPivots) {
  IntMatrix m{{2, 4, 6}, {1, 1, 1}};
  Echelon e = echelon(m, 3);
  RatMatrix r = rref(e);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0][0], 1);
  EXPECT_EQ(r[1][0], 0);
  EXPECT_EQ(r[1][1], 1);
  EXPECT_EQ(r[0][1], 0);
}

TEST(Random, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(-10, 10), b.uniform(-10, 10));
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    auto x = c.uniform(1, 100);
    EXPECT_GE(x, 1);
    EXPECT_LE(x, 100);
  }
}
