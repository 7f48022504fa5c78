#include <gtest/gtest.h>

#include <sstream>

#include "tpcone/network.hpp"
#include "tpcone/primitive.hpp"

using namespace tpcone;

namespace {

// Exact determinant of a rational matrix by Gaussian elimination.
Rational det(std::vector<std::vector<Rational>> a) {
  const std::size_t k = a.size();
  Rational d = 1;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    while (p < k && a[p][c] == 0) ++p;
    if (p == k) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < k; ++r) {
      Rational f = a[r][c] / a[c][c];
      for (std::size_t t = c; t < k; ++t) a[r][t] -= f * a[c][t];
    }
  }
  return d;
}

}  // namespace

TEST(Network, SmallEntries) {
  PlanarNetwork n1(1);
  EXPECT_EQ(n1.num_weights(), 0u);
  EXPECT_EQ(n1.entry_polynomial(1, 1), Polynomial::constant(0, 1));

  PlanarNetwork n2(2);
  EXPECT_EQ(n2.num_weights(), 1u);
  EXPECT_EQ(n2.entry_polynomial(2, 1), Polynomial::constant(1, 1));
  Polynomial x11 = n2.entry_polynomial(1, 1);
  EXPECT_EQ(newton_points(x11).size(), 2u);
  // the two paths from source 1 to sink 1, counted by hand
  EXPECT_EQ(n2.paths(1, 1).size(), 2u);
  EXPECT_EQ(n2.paths(2, 1).size(), 1u);
  EXPECT_THROW(n2.entry_polynomial(3, 1), Error);
}

TEST(Network, SpecialCoordinates) {
  for (int n = 2; n <= 4; ++n) {
    PlanarNetwork net(n);
    std::vector<int> top;
    for (int k = n + 1; k <= 2 * n; ++k) top.push_back(k);
    EXPECT_EQ(net.plucker_polynomial(PluckerIndex(n, top)), Polynomial::constant(net.num_weights(), 1));
  }
  PlanarNetwork n2(2);
  Polynomial d = n2.plucker_polynomial(PluckerIndex(2, {1, 2}));
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(d, n2.det_oracle(PluckerIndex(2, {1, 2})));
}

TEST(Network, LindstroemMatchesDeterminantOracle) {
  for (int n = 1; n <= 4; ++n) {
    PlanarNetwork net(n);
    const PluckerSpace& space = space_of(n);
    for (std::size_t r = 0; r < space.size(); ++r)
      EXPECT_EQ(net.plucker_polynomial(space[r]), net.det_oracle(space[r])) << space[r].str();
  }
}

TEST(Network, CoefficientsPositiveAndExponentsBounded) {
  for (int n = 2; n <= 4; ++n) {
    PlanarNetwork net(n);
    for (const auto& p : net.all_plucker_polynomials(2)) {
      EXPECT_FALSE(p.is_zero());
      EXPECT_TRUE(p.all_coefficients_positive());
      for (const auto& pt : newton_points(p))
        for (int e : pt) {
          EXPECT_GE(e, 0);
          EXPECT_LE(e, n - 1);
        }
    }
  }
}

TEST(Network, ThreadCountDoesNotChangeResult) {
  PlanarNetwork net(4);
  EXPECT_EQ(net.all_plucker_polynomials(1), net.all_plucker_polynomials(3));
}

TEST(Network, MatrixIsTotallyPositive) {
  Rng rng(17);
  for (int n : {3, 4}) {
    PlanarNetwork net(n);
    auto polys = net.all_plucker_polynomials();
    const PluckerSpace& space = space_of(n);
    for (int trial = 0; trial < 100; ++trial) {
      WeightAssignment w = WeightAssignment::random(net.num_weights(), rng);
      auto x = net.matrix(w.values);
      for (std::size_t r = 0; r < space.size(); ++r) {
        Rational v = polys[r].evaluate(w.values);
        EXPECT_GT(v, 0);
        if (trial < 5) {
          // the polynomial value is the numeric minor
          MinorSpec m = extract_minor(space[r]);
          std::vector<std::vector<Rational>> sub;
          for (int i : m.rows) {
            std::vector<Rational> row;
            for (int j : m.cols) row.push_back(x[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]);
            sub.push_back(row);
          }
          EXPECT_EQ(sub.empty() ? Rational(1) : det(sub), v);
        }
      }
    }
  }
}

TEST(Network, TorusSectionLeavesSt0RatiosUnchanged) {
  PlanarNetwork full(3, Chart::full), norm(3);
  auto pf = full.all_plucker_polynomials();
  auto pn = norm.all_plucker_polynomials();
  auto prims = enumerate_primitives(3);
  Rng rng(23);
  RatioVector non_st0(3);
  non_st0.alpha[0] = 1;
  non_st0.alpha[19] = -1;
  bool differs = false;
  for (int trial = 0; trial < 20; ++trial) {
    WeightAssignment wf = WeightAssignment::random(9, rng);
    WeightAssignment wn;
    for (auto [r, c] : norm.variable_faces()) wn.values.push_back(wf.values[*full.face_variable(r, c)]);
    RatioVector v(3);
    for (const auto& p : prims) {
      EXPECT_EQ(eval_ratio(p.vec, pf, wf), eval_ratio(p.vec, pn, wn));
      auto c = rng.uniform(-1, 2);
      for (std::size_t i = 0; i < v.size(); ++i) v.alpha[i] += c * p.vec.alpha[i];
    }
    EXPECT_EQ(eval_ratio(v, pf, wf), eval_ratio(v, pn, wn));
    differs = differs || eval_ratio(non_st0, pf, wf) != eval_ratio(non_st0, pn, wn);
  }
  EXPECT_TRUE(differs);
}

TEST(Network, FacePolynomialRoundTrip) {
  PlanarNetwork net(3);
  PluckerIndex s(3, {1, 3, 5});
  Polynomial p = net.plucker_polynomial(s);
  std::stringstream ss;
  write_face_polynomial(ss, s, p);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "n=3 d=4 coord=[1 3 5]");
  FacePolynomialFile f = read_face_polynomial(ss);
  EXPECT_EQ(f.coord, s);
  EXPECT_EQ(f.poly, p);
}

TEST(EvalRatio, PrimitivesLieInUnitInterval) {
  for (int n : {3, 4}) {
    auto polys = PlanarNetwork(n).all_plucker_polynomials();
    Rng rng(static_cast<std::uint64_t>(n));
    EXPECT_EQ(eval_ratio(RatioVector(n), polys, WeightAssignment::random((n - 1) * (n - 1), rng)), 1);
    for (const auto& p : enumerate_primitives(n)) {
      Rational v = eval_ratio(p.vec, polys, WeightAssignment::random((n - 1) * (n - 1), rng));
      EXPECT_GT(v, 0);
      EXPECT_LE(v, 1);
    }
  }
}

TEST(SubtractionFree, PrimitivesPassAndReciprocalsFail) {
  auto polys = PlanarNetwork(3).all_plucker_polynomials();
  for (const auto& p : enumerate_primitives(3)) {
    auto ok = subtraction_free_symbolic(p.vec, polys);
    EXPECT_TRUE(ok.passed) << p.spec.str();
    auto bad = subtraction_free_symbolic(-p.vec, polys);
    EXPECT_FALSE(bad.passed);
    ASSERT_TRUE(bad.negative_term.has_value());
    EXPECT_EQ(bad.negative_term->second.front(), '-');
  }
}

TEST(SubtractionFree, SampledAndLimits) {
  auto polys = PlanarNetwork(3).all_plucker_polynomials();
  auto prims = enumerate_primitives(3);
  Rng rng(2);
  EXPECT_TRUE(subtraction_free_sampled(prims[0].vec, polys, 200, rng).passed);
  RatioVector non_st0(3);
  non_st0.alpha[0] = 1;
  EXPECT_THROW(subtraction_free_symbolic(non_st0, polys), Error);
  RatioVector big = prims[0].vec + prims[1].vec + prims[2].vec + prims[3].vec;
  EXPECT_THROW(subtraction_free_symbolic(big, polys, 5), ResourceLimit);
}
