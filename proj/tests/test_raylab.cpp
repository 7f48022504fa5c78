#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "tpcone/raylab.hpp"

using namespace tpcone;

namespace {

const std::vector<RatioVector>& rays() {
  static const auto r = bundled_rays();
  return r;
}

const RayContext& ctx4() {
  static const RayContext c = RayContext::build(4);
  return c;
}

const RayContext& ctx3() {
  static const RayContext c = [] {
    RayContext c = RayContext::build(3);
    c.F = build_F(3).system;
    return c;
  }();
  return c;
}

std::int64_t at(const RatioVector& v, std::vector<int> s) { return v.alpha[space_of(v.n).rank(PluckerIndex(v.n, s))]; }

}  // namespace

TEST(ParseRatio, Examples) {
  RatioVector v = parse_ratio("[1 4][2 3] / [1 3][2 4]", 2);
  EXPECT_EQ(at(v, {1, 4}), 1);
  EXPECT_EQ(at(v, {1, 3}), -1);
  EXPECT_EQ(nonzeros(v.to_int()), 4u);
  EXPECT_EQ(parse_ratio("[1 4][2 3]/[1 3][2 4]", 2), v);
  EXPECT_EQ(parse_ratio("[14][23]/[13][24]", 2), v);
  RatioVector sq = parse_ratio("[1 2][1 2] / [3 4] * [3 4] / [1 2]", 2);
  EXPECT_EQ(at(sq, {1, 2}), 1);
  EXPECT_EQ(at(sq, {3, 4}), 0);
  EXPECT_EQ(parse_ratio(format_ratio(v), 2), v);
  EXPECT_EQ(format_ratio(RatioVector(2)), "1 / 1");
}

TEST(ParseRatio, Errors) {
  EXPECT_THROW(parse_ratio("", 2), Error);
  EXPECT_THROW(parse_ratio("[1 2] / [3 4] / [1 3]", 2), Error);
  EXPECT_THROW(parse_ratio("[1 2 / [3 4]", 2), Error);
  EXPECT_THROW(parse_ratio("[1 5] / [1 2]", 2), Error);
  EXPECT_THROW(parse_ratio("[1 2] x / [3 4]", 2), Error);
  EXPECT_THROW(parse_ratio("[1 2] / ", 2), Error);
}

TEST(BundledRays, AssetMatchesEmbeddedCopy) {
  std::ifstream f(std::string(TPCONE_SOURCE_DIR) + "/data/bundled_rays.txt");
  ASSERT_TRUE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), std::string(kBundledRaysText));
}

TEST(BundledRays, Shape) {
  ASSERT_EQ(rays().size(), 9u);
  std::int64_t num6 = 0;
  for (auto x : rays()[5].alpha)
    if (x > 0) num6 += x;
  EXPECT_EQ(num6, 13);
  EXPECT_EQ(at(rays()[7], {1, 3, 4, 8}), 2);
  for (const auto& r : rays()) {
    EXPECT_TRUE(st0_check(r).ok) << format_ratio(r);
    EXPECT_EQ(degree_balance(r), 0);
  }
}

TEST(BundledRays, Orbits) {
  for (const auto& r : rays()) {
    auto o = orbit(r);
    EXPECT_EQ(16 % o.size(), 0u);
    EXPECT_TRUE(std::find(o.begin(), o.end(), r) != o.end());
  }
  EXPECT_EQ(orbit(RatioVector(4)).size(), 1u);
}

TEST(BundledRays, OutsidePrimitiveHullWithSeparator) {
  auto g = primitive_matrix(ctx4().primitives);
  for (const auto& r : rays()) {
    auto c = factor_into_primitives(r, ctx4().primitives);
    ASSERT_FALSE(c.feasible);
    for (const auto& row : g) EXPECT_LE(dot(c.separator, row), 0);
    EXPECT_GT(dot(c.separator, r.to_int()), 0);
  }
}

TEST(VerifyRay, FirstBundledRay) {
  VerifyOptions opt;
  opt.samples = 2000;
  RayReport r = verify_ray(rays()[0], ctx4(), opt);
  EXPECT_TRUE(r.st0.ok);
  EXPECT_TRUE(r.degree_ok());
  EXPECT_TRUE(r.bounded.bounded);
  EXPECT_FALSE(r.primitive_member.feasible);
  EXPECT_FALSE(r.extremal.has_value());
  ASSERT_TRUE(r.subtraction_free.has_value());
  EXPECT_TRUE(r.subtraction_free->passed);
  EXPECT_EQ(r.subtraction_free->mode, CheckMode::symbolic);
  auto j = to_json(r);
  EXPECT_EQ(j["bounded"]["verdict"], "no-counterexample");
  EXPECT_EQ(j["primitive_member"]["kind"], "separator");
  EXPECT_EQ(j["subtraction_free"]["verdict"], "nonneg");

  RayReport inv = verify_ray(-rays()[0], ctx4(), opt);
  EXPECT_FALSE(inv.bounded.bounded);
  ASSERT_TRUE(inv.bounded.witness.has_value());
  EXPECT_GT(*inv.bounded.witness_exponent, 0);
  EXPECT_EQ(tropical_exponent(ctx4().profile, -rays()[0], *inv.bounded.witness), *inv.bounded.witness_exponent);
}

TEST(VerifyRay, OrderThreeWithExactSystem) {
  const auto& c = ctx3();
  RayReport r = verify_ray(c.primitives[0].vec, c);
  EXPECT_EQ(r.bounded.mode, BoundMode::exact_system);
  EXPECT_TRUE(r.bounded.bounded);
  ASSERT_TRUE(r.extremal.has_value());
  EXPECT_TRUE(*r.extremal);
  RatioVector two = c.primitives[0].vec + c.primitives[1].vec;
  RayReport s = verify_ray(two, c);
  ASSERT_TRUE(s.extremal.has_value());
  EXPECT_FALSE(*s.extremal);
  RayReport t = verify_ray(-c.primitives[0].vec, c);
  EXPECT_FALSE(t.bounded.bounded);
  EXPECT_TRUE(t.bounded.witness.has_value());
  EXPECT_EQ(to_json(t)["extremal"], false);
}

TEST(Search, OrderThreeHasNoMissingFacet) {
  const auto& c = ctx3();
  ConeV K = primitive_cone(c.primitives);
  SearchResult s = search_method_1(*c.F, dd_facets(K));
  EXPECT_TRUE(s.missing_facets.empty());
  EXPECT_TRUE(s.rays.empty());
  Search2Result s2 = search_method_2(*c.F, K, 3);
  EXPECT_TRUE(s2.converged);
  EXPECT_EQ(s2.rounds_run, 1u);
}

TEST(Search, RecoversADroppedRay) {
  const auto& c = ctx3();
  auto iso = isolated_primitives(c.primitives);
  ASSERT_FALSE(iso.empty());
  // an isolated vector (hull loses a dimension) and a chain member (it does not)
  std::size_t chain_member = 0;
  while (std::find(iso.begin(), iso.end(), chain_member) != iso.end()) ++chain_member;
  for (std::size_t k : {iso[0], chain_member}) {
    ConeV K = primitive_cone(c.primitives);
    IntVec dropped = K.rays[k];
    K.rays.erase(K.rays.begin() + static_cast<std::ptrdiff_t>(k));
    SearchResult s = search_method_1(*c.F, dd_facets(K));
    EXPECT_FALSE(s.missing_facets.empty());
    EXPECT_EQ(s.rays, (std::vector<IntVec>{dropped})) << k;
    Search2Result s2 = search_method_2(*c.F, K, 3);
    EXPECT_TRUE(s2.converged);
    EXPECT_EQ(s2.rounds_run, 2u);
    EXPECT_EQ(s2.rays, (std::vector<IntVec>{dropped}));
  }
}

TEST(WeakSeparation, Definition) {
  EXPECT_TRUE(weakly_separated(PluckerIndex(2, {1, 2}), PluckerIndex(2, {3, 4})));
  EXPECT_FALSE(weakly_separated(PluckerIndex(2, {1, 3}), PluckerIndex(2, {2, 4})));
  EXPECT_TRUE(weakly_separated(PluckerIndex(2, {1, 2}), PluckerIndex(2, {1, 2})));
  EXPECT_TRUE(weakly_separated(PluckerIndex(3, {1, 2, 3}), PluckerIndex(3, {2, 3, 4})));
  EXPECT_FALSE(weakly_separated(PluckerIndex(3, {1, 3, 5}), PluckerIndex(3, {2, 4, 6})));
}

TEST(WeakSeparation, Graphs) {
  WSGraph a = ws_graph(rays()[1]), b = ws_graph(rays()[3]);
  EXPECT_EQ(a.vertices.size(), 10u);
  EXPECT_EQ(a.edge_count(), 18u);
  EXPECT_EQ(b.edge_count(), 18u);
  auto m = ws_isomorphism(a, b);
  ASSERT_TRUE(m.has_value());
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    EXPECT_EQ(a.numerator[i], b.numerator[(*m)[i]]);
    for (std::size_t j = 0; j < a.vertices.size(); ++j) EXPECT_EQ(a.adj[i][j], b.adj[(*m)[i]][(*m)[j]]);
  }
  for (const auto& r : rays()) {
    EXPECT_TRUE(ws_isomorphic(ws_graph(r), ws_graph(cyclic_shift(r))));
    EXPECT_TRUE(ws_isomorphic(ws_graph(r), ws_graph(reflect(r))));
  }
  EXPECT_FALSE(ws_isomorphic(ws_graph(rays()[1]), ws_graph(rays()[4])));
  RatioVector one(4);
  one.alpha[0] = 1;
  EXPECT_EQ(ws_graph(one).edge_count(), 0u);
}

TEST(SubtractionFree, StableUnderShift) {
  RatioVector r = rays()[1];
  for (int k = 0; k < 2; ++k) {
    r = cyclic_shift(r);
    EXPECT_TRUE(subtraction_free_symbolic(r, ctx4().pluckers).passed);
  }
}

namespace {

const ConeH& shipped_f4() {
  static const ConeH f = [] {
    std::ifstream in(std::string(TPCONE_SOURCE_DIR) + "/data/F4.cone");
    return read_cone_h(in);
  }();
  return f;
}

}  // namespace

TEST(ShippedF4, RowsComeFromTheirLambdas) {
  const ConeH& F = shipped_f4();
  EXPECT_EQ(F.dim, 70u);
  EXPECT_EQ(F.ineqs.size(), 360u);
  EXPECT_EQ(rank(F.eqs, 70), 8u);
  EXPECT_EQ(rank(F.eqs, 70), rank(st0_equations(4), 70));
  std::ifstream in(std::string(TPCONE_SOURCE_DIR) + "/data/F4.lambda");
  std::string line;
  std::size_t k = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    IntVec l;
    std::string tok;
    while (ls >> tok) l.emplace_back(tok);
    ASSERT_LT(k, F.ineqs.size());
    EXPECT_EQ(primitive(alpha_inequality(ctx4().profile, l)), F.ineqs[k]) << k;
    ++k;
  }
  EXPECT_EQ(k, 360u);
}

TEST(ShippedF4, BundledRaysAndPrimitivesAreExtreme) {
  const ConeH& F = shipped_f4();
  for (const auto& r : rays()) {
    ASSERT_TRUE(contains(F, r.to_int()));
    EXPECT_TRUE(extremality_test(r.to_int(), F)) << format_ratio(r);
  }
  for (const auto& p : ctx4().primitives) EXPECT_TRUE(extremality_test(p.vec.to_int(), F)) << p.spec.str();
  RatioVector sum = rays()[0] + rays()[1];
  EXPECT_TRUE(contains(F, sum.to_int()));
  EXPECT_FALSE(extremality_test(sum.to_int(), F));
  EXPECT_FALSE(contains(F, (-rays()[0]).to_int()));
}

TEST(ShippedF4, OnlyOneRepairOfTheFirstRayIsExtreme) {
  const ConeH& F = shipped_f4();
  const std::string den = "[1 3 5 8][1 3 6 7][1 4 6 8][2 3 6 8][2 4 5 7]";
  // printed form and the four one-bracket changes restoring ST0
  RatioVector printed = parse_ratio("[1 3 6 8][1 4 5 8][1 4 6 7][2 3 4 5][2 3 6 7] / " + den, 4);
  EXPECT_FALSE(st0_check(printed).ok);
  EXPECT_FALSE(contains(F, printed.to_int()));
  RatioVector other_num = parse_ratio("[1 3 6 8][1 4 5 8][1 6 7 8][2 3 4 5][2 3 6 7] / " + den, 4);
  EXPECT_TRUE(st0_check(other_num).ok);
  EXPECT_FALSE(contains(F, other_num.to_int()));
  for (const char* d : {"[1 3 4 5][1 3 6 7][1 4 6 8][2 3 6 8][2 4 5 7]", "[1 3 5 8][1 3 6 7][1 4 6 8][2 3 4 6][2 4 5 7]"}) {
    RatioVector v = parse_ratio(std::string("[1 3 6 8][1 4 5 8][1 4 6 7][2 3 4 5][2 3 6 7] / ") + d, 4);
    EXPECT_TRUE(st0_check(v).ok);
    EXPECT_TRUE(contains(F, v.to_int()));
    EXPECT_FALSE(extremality_test(v.to_int(), F));
  }
  EXPECT_TRUE(extremality_test(rays()[0].to_int(), F));
}

TEST(ShippedF4, ExactFanAgreesWithTheSystem) {
  // one bounded and one unbounded ratio with few denominators
  const auto& p = ctx4().primitives;
  RatioVector good = p[0].vec + p[7].vec;
  RatioVector bad = p[0].vec - p[7].vec;
  EXPECT_EQ(bounded_exact_fan(ctx4().profile, good).bounded, contains(shipped_f4(), good.to_int()));
  EXPECT_TRUE(contains(shipped_f4(), good.to_int()));
  EXPECT_FALSE(contains(shipped_f4(), bad.to_int()));
  EXPECT_EQ(bounded_exact_fan(ctx4().profile, bad).bounded, contains(shipped_f4(), bad.to_int()));
}
