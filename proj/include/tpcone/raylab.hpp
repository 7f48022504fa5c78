#pragma once

// Ratio parsing, the bundled n=4 rays, the verification pipeline, the two
// discovery searches and weak-separation graphs.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tpcone/arith.hpp"
#include "tpcone/cone.hpp"
#include "tpcone/network.hpp"
#include "tpcone/pluecker.hpp"
#include "tpcone/primitive.hpp"
#include "tpcone/random.hpp"
#include "tpcone/tropical.hpp"

namespace tpcone {

// ---------------------------------------------------------------------------
// Parsing. A ratio is one or more fractions joined by '*'; a fraction is a
// run of brackets, optionally followed by '/' and another run.

namespace detail {

inline void accumulate_brackets(std::string_view run, int n, int sign, RatioVector& v) {
  const PluckerSpace& space = space_of(n);
  std::size_t pos = 0;
  bool any = false;
  while (true) {
    while (pos < run.size() && std::isspace(static_cast<unsigned char>(run[pos]))) ++pos;
    if (pos == run.size()) break;
    if (run[pos] != '[') throw Error("unexpected text '" + std::string(run.substr(pos)) + "' in ratio");
    auto close = run.find(']', pos);
    if (close == std::string_view::npos) throw Error("unterminated bracket in ratio");
    PluckerIndex s = parse_index(run.substr(pos, close - pos + 1), n);
    v.alpha[space.rank(s)] += sign;
    any = true;
    pos = close + 1;
  }
  if (!any) throw Error("empty side in ratio");
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

}  // namespace detail

inline RatioVector parse_ratio(std::string_view text, int n) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) throw Error("empty ratio");
  RatioVector v(n);
  for (auto frac : detail::split(text, '*')) {
    auto sides = detail::split(frac, '/');
    if (sides.size() > 2) throw Error("more than one '/' in a fraction");
    detail::accumulate_brackets(sides[0], n, +1, v);
    if (sides.size() == 2) detail::accumulate_brackets(sides[1], n, -1, v);
  }
  return v;
}

/// Bracket form "num / den" with repeated brackets for exponents.
inline std::string format_ratio(const RatioVector& v) {
  const PluckerSpace& space = space_of(v.n);
  std::string num, den;
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::int64_t k = 0; k < std::abs(v.alpha[r]); ++k) (v.alpha[r] > 0 ? num : den) += space[r].str();
  if (num.empty()) num = "1";
  if (den.empty()) den = "1";
  return num + " / " + den;
}

/// Ratios one per line; blank lines and '#' comments are skipped.
inline std::vector<RatioVector> parse_ratio_list(std::istream& is, int n) {
  std::vector<RatioVector> out;
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_ratio(line, n));
  }
  return out;
}

// Same content as data/bundled_rays.txt.
inline constexpr std::string_view kBundledRaysText = R"rays(# Extreme rays of the n=4 boundedness cone outside the hull of the primitive
# ratios, one orbit representative per line. Repeated brackets are exponents.
# item 1 (printed numerator bracket [2 3 4 5] violates ST0 at indices 4 and 8;
# [2 3 5 8] is the only one-digit change giving a bounded ratio outside the primitive hull)
[1 3 6 8][1 4 5 8][1 4 6 7][2 3 5 8][2 3 6 7] / [1 3 5 8][1 3 6 7][1 4 6 8][2 3 6 8][2 4 5 7]
# item 2
[1 2 4 6][1 2 5 7][1 3 5 6][2 5 6 8][3 4 7 8] / [1 2 5 6][1 3 4 6][1 3 5 7][2 4 6 8][2 5 7 8]
# item 3
[1 2 4 7][1 2 5 6][1 3 4 6][2 5 7 8][3 5 6 8] / [1 2 4 6][1 2 5 7][1 3 5 6][2 5 6 8][3 4 7 8]
# item 4
[1 3 5 8][1 4 5 7][1 4 6 8][2 3 6 7][2 4 5 8] / [1 3 5 7][1 3 6 8][1 4 5 8][2 4 5 7][2 4 6 8]
# item 5
[1 3 4 8][1 3 6 7][1 4 5 7][1 4 6 8][2 3 4 7][2 3 5 8][2 4 6 7] / [1 3 4 7][1 3 5 7][1 4 5 8][1 4 6 7][2 3 4 8][2 3 6 7][2 4 6 8]
# item 6
[1 2 4 8][1 2 5 7][1 2 6 8][1 3 4 7][1 3 5 8][1 3 6 7][1 4 5 6][2 3 4 6][2 3 4 8][2 3 5 7][2 6 7 8][3 5 7 8][4 6 7 8] / [1 2 4 7][1 2 5 8][1 2 6 7][1 3 4 6][1 3 4 8][1 3 6 8][1 4 6 7][2 3 4 7][2 3 5 6][2 3 5 8][2 5 7 8][3 6 7 8][4 5 7 8]
# item 7
[1 2 5 7][1 2 6 8][1 3 4 8][1 3 5 6][1 3 6 7][1 4 5 7][2 3 4 6][2 3 5 7][2 4 5 6][2 6 7 8][3 5 7 8][4 5 6 8][4 6 7 8] / [1 2 5 8][1 2 6 7][1 3 4 6][1 3 6 8][1 4 5 6][1 4 6 7][2 3 4 7][2 3 5 6][2 4 5 7][2 5 7 8][3 5 6 8][3 6 7 8][4 5 7 8]
# item 8 (printed as a product of two fractions; [1 3 4 8] appears twice, read as exponent 2)
[1 2 5 7][1 2 6 8][1 3 4 8][1 3 4 8][1 3 5 6][1 3 6 7][1 4 5 7][2 3 4 6][2 3 5 7][2 4 5 6][2 6 7 8][3 5 7 8] / [1 2 4 8][1 2 6 7][1 3 4 6][1 3 5 7][1 3 6 8][1 4 5 6][1 4 6 7][2 3 4 8][2 3 5 6][2 4 5 7][2 5 7 8][3 5 6 8] * [4 5 6 8][4 6 7 8] / [3 6 7 8][4 5 7 8]
# item 9 (printed as a product of two fractions; repeated brackets read as exponent 2)
[1 2 4 7][1 2 5 7][1 2 6 8][1 3 4 8][1 3 4 8][1 3 5 6][1 3 5 6][1 3 6 7][1 4 5 7][2 3 4 6][2 3 5 7][2 4 5 6] / [1 2 4 8][1 2 5 6][1 2 6 7][1 3 4 6][1 3 5 7][1 3 5 7][1 3 6 8][1 4 5 6][1 4 6 7][2 3 4 8][2 3 5 6][2 4 5 7] * [2 5 6 8][2 6 7 8][3 4 6 8][3 5 7 8][3 5 7 8][4 5 6 8][4 6 7 8] / [2 4 6 8][2 5 7 8][3 4 7 8][3 5 6 8][3 5 6 8][3 6 7 8][4 5 7 8]
)rays";

inline std::vector<RatioVector> bundled_rays() {
  std::istringstream is{std::string(kBundledRaysText)};
  return parse_ratio_list(is, 4);
}

/// Closure under the cyclic shift and the reflection, sorted.
inline std::vector<RatioVector> orbit(const RatioVector& v) {
  std::set<RatioVector> seen{v};
  std::vector<RatioVector> stack{v};
  while (!stack.empty()) {
    RatioVector x = std::move(stack.back());
    stack.pop_back();
    for (RatioVector y : {cyclic_shift(x), reflect(x)})
      if (seen.insert(y).second) stack.push_back(std::move(y));
  }
  return {seen.begin(), seen.end()};
}

// ---------------------------------------------------------------------------
// Verification pipeline.

/// Everything verify_ray needs for one order n.
struct RayContext {
  int n = 0;
  std::vector<Polynomial> pluckers;
  TropicalProfile profile;
  std::vector<Primitive> primitives;
  std::optional<ConeH> F;        // exact boundedness system, when available
  IntMatrix lambda_directions;   // extra sampling directions (fan rays)

  static RayContext build(int n, unsigned threads = 1) {
    RayContext c;
    c.n = n;
    c.pluckers = PlanarNetwork(n).all_plucker_polynomials(threads);
    c.profile = TropicalProfile::from_polynomials(n, c.pluckers);
    c.primitives = enumerate_primitives(n);
    return c;
  }
};

struct VerifyOptions {
  std::uint64_t seed = Rng::kDefaultSeed;
  std::size_t samples = 10'000;      // tropical boundedness samples
  std::int64_t radius = 20;          // lambda box
  std::size_t sf_samples = 1'000;    // sampled subtraction-free fallback
  std::size_t term_cap = kDefaultTermCap;
  bool symbolic = true;              // try the exact subtraction-free expansion
};

struct RayReport {
  RatioVector ratio;
  St0Result st0;
  std::int64_t degree = 0;
  BoundedVerdict bounded;
  ConicCombination primitive_member;
  std::optional<bool> extremal;
  std::string extremal_reason;
  std::optional<SubtractionFreeVerdict> subtraction_free;
  std::string subtraction_free_reason;

  bool degree_ok() const { return degree == 0; }
};

inline RayReport verify_ray(const RatioVector& v, const RayContext& ctx, const VerifyOptions& opt = {}) {
  if (v.n != ctx.n) throw Error("ratio and context have different orders");
  RayReport r;
  r.ratio = v;
  r.st0 = st0_check(v);
  r.degree = degree_balance(v);
  Rng rng(opt.seed);
  if (ctx.F) {
    r.bounded = bounded_exact(*ctx.F, v);
    if (!r.bounded.bounded && r.st0.ok) {
      // find a witness direction for the report
      BoundedVerdict s = bounded_sampled(ctx.profile, v, {opt.samples, opt.radius}, rng, ctx.lambda_directions);
      r.bounded.witness = s.witness;
      r.bounded.witness_exponent = s.witness_exponent;
    }
  } else {
    r.bounded = bounded_sampled(ctx.profile, v, {opt.samples, opt.radius}, rng, ctx.lambda_directions);
  }
  r.primitive_member = factor_into_primitives(v, ctx.primitives);
  if (!ctx.F) {
    r.extremal_reason = "no exact boundedness system";
  } else if (!contains(*ctx.F, v.to_int())) {
    r.extremal = false;
    r.extremal_reason = "not in the cone";
  } else {
    r.extremal = extremality_test(v.to_int(), *ctx.F);
  }
  if (!r.st0.ok) {
    r.subtraction_free_reason = "ST0 fails";
    return r;
  }
  if (opt.symbolic) {
    try {
      r.subtraction_free = subtraction_free_symbolic(v, ctx.pluckers, opt.term_cap);
      return r;
    } catch (const ResourceLimit& e) {
      r.subtraction_free_reason = std::string("symbolic infeasible, use sampled: ") + e.what();
    }
  }
  Rng srng(opt.seed + 1);
  r.subtraction_free = subtraction_free_sampled(v, ctx.pluckers, opt.sf_samples, srng);
  return r;
}

inline nlohmann::ordered_json int_vec_json(const IntVec& v) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

inline nlohmann::ordered_json rat_vec_json(const RatVec& v) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

inline nlohmann::ordered_json to_json(const RayReport& r) {
  using J = nlohmann::ordered_json;
  J j;
  j["ratio"] = format_ratio(r.ratio);
  j["st0"] = {{"pass", r.st0.ok}, {"defect", r.st0.defect}};
  j["degree_balance"] = {{"pass", r.degree_ok()}, {"value", r.degree}};
  J b;
  if (!r.bounded.st0)
    b["verdict"] = "unbounded (ST0 fails)";
  else if (r.bounded.mode == BoundMode::sampled)
    b["verdict"] = r.bounded.bounded ? "no-counterexample" : "unbounded";
  else
    b["verdict"] = r.bounded.bounded ? "bounded" : "unbounded";
  b["mode"] = to_string(r.bounded.mode);
  b["directions_checked"] = r.bounded.directions_checked;
  if (r.bounded.witness) {
    b["witness_lambda"] = int_vec_json(*r.bounded.witness);
    b["witness_exponent"] = r.bounded.witness_exponent->str();
  }
  j["bounded"] = b;
  J m;
  if (r.primitive_member.feasible) {
    m["kind"] = "combination";
    m["coefficients"] = rat_vec_json(r.primitive_member.coefficients);
  } else {
    m["kind"] = "separator";
    m["functional"] = int_vec_json(r.primitive_member.separator);
  }
  j["primitive_member"] = m;
  if (r.extremal)
    j["extremal"] = *r.extremal;
  else
    j["extremal"] = "unknown(" + r.extremal_reason + ")";
  J s;
  if (r.subtraction_free) {
    const auto& sf = *r.subtraction_free;
    s["verdict"] = sf.passed ? "nonneg" : "fails";
    s["mode"] = sf.mode == CheckMode::symbolic ? "symbolic" : "sampled";
    if (sf.mode == CheckMode::symbolic) s["terms"] = sf.terms;
    if (sf.mode == CheckMode::sampled) s["samples"] = sf.samples;
    if (sf.negative_term) s["negative_term"] = {{"exponents", sf.negative_term->first}, {"coefficient", sf.negative_term->second}};
    if (sf.failing_weights) s["failing_weights"] = int_vec_json(*sf.failing_weights);
    if (!r.subtraction_free_reason.empty()) s["note"] = r.subtraction_free_reason;
  } else {
    s["verdict"] = "unknown(" + r.subtraction_free_reason + ")";
  }
  j["subtraction_free"] = s;
  return j;
}

// ---------------------------------------------------------------------------
// Discovery.

struct SearchOptions {
  std::uint64_t seed = Rng::kDefaultSeed;
  std::size_t trials = 4;          // random functionals per missing facet
  std::int64_t coefficient = 1000; // functional entries in [-c, c]
  std::size_t max_missing = 0;     // stop after this many missing facets, 0 for all
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SearchResult {
  std::vector<IntVec> missing_facets;  // facet rows of the hull not implied by F
  std::vector<IntVec> rays;            // new extreme rays of F outside the hull
};

/// For every facet l.x <= 0 of the hull P that F does not imply, minimizes
/// W(-l) + f (f random) over F n {l.x >= 0} sliced by s.x = 1, s minus the
/// sum of the rows of F, and keeps optimal vertices with l.x > 0 that are
/// extreme rays of F. Equalities of P enter with both signs. F must be
/// pointed, otherwise the slice is unbounded.
inline SearchResult search_method_1(const ConeH& F, const ConeH& P, const SearchOptions& opt = {}) {
  SearchResult out;
  Rng rng(opt.seed);
  std::set<IntVec> found;
  IntVec s(F.dim, 0);
  for (const auto& a : F.ineqs)
    for (std::size_t i = 0; i < F.dim; ++i) s[i] -= a[i];
  IntMatrix candidates = P.ineqs;
  for (const auto& e : P.eqs) {
    candidates.push_back(e);
    IntVec m(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) m[i] = -e[i];
    candidates.push_back(std::move(m));
  }
  const Integer weight = Integer(opt.coefficient) * static_cast<std::int64_t>(F.dim);
  for (const auto& l : candidates) {
    if (opt.max_missing && out.missing_facets.size() >= opt.max_missing) break;
    if (opt.deadline && std::chrono::steady_clock::now() > *opt.deadline)
      throw ResourceLimit("search exceeded its time budget");
    if (conic_combination(F.ineqs, F.eqs, l).feasible) continue;
    out.missing_facets.push_back(l);
    ConeH cp = F;
    IntVec flipped(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) flipped[i] = -l[i];
    cp.ineqs.push_back(flipped);
    for (std::size_t t = 0; t < opt.trials; ++t) {
      IntVec f(F.dim);
      for (std::size_t i = 0; i < F.dim; ++i) f[i] = weight * flipped[i] + rng.uniform(-opt.coefficient, opt.coefficient);
      MinimizeResult m = minimize(f, cp, s, Rational(1));
      if (m.status != LpStatus::optimal) continue;
      IntVec x = primitive(m.x);
      if (dot(l, x) <= 0 || !contains(F, x) || !extremality_test(x, F)) continue;
      if (found.insert(x).second) out.rays.push_back(x);
    }
  }
  return out;
}

struct Search2Result {
  std::vector<IntVec> rays;
  std::size_t rounds_run = 0;
  bool converged = false;  // no missing facet remained
};

/// Repeats method 1 with the hull K_{i+1} = K_i + new rays, at most
/// 1 + rounds times.
inline Search2Result search_method_2(const ConeH& F, const ConeV& K1, std::size_t rounds, const SearchOptions& opt = {}) {
  Search2Result out;
  ConeV K = K1;
  for (std::size_t r = 0; r <= rounds; ++r) {
    ConeH P = dd_facets(K);
    SearchOptions o = opt;
    o.seed = opt.seed + r;
    SearchResult s = search_method_1(F, P, o);
    ++out.rounds_run;
    if (s.missing_facets.empty()) {
      out.converged = true;
      break;
    }
    for (auto& x : s.rays) {
      out.rays.push_back(x);
      K.rays.push_back(x);
    }
    if (s.rays.empty()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weak separation.

/// I and J are weakly separated iff I \ J and J \ I do not interleave
/// around the circle: no cyclic a < b < c < d with a, c on one side and
/// b, d on the other.
inline bool weakly_separated(const PluckerIndex& a, const PluckerIndex& b) {
  std::vector<int> side;
  for (int e = 1; e <= 2 * a.n(); ++e) {
    bool in_a = a.contains(e), in_b = b.contains(e);
    if (in_a != in_b) side.push_back(in_a ? 0 : 1);
  }
  int changes = 0;
  for (std::size_t k = 0; k < side.size(); ++k)
    if (side[k] != side[(k + 1) % side.size()]) ++changes;
  return changes <= 2;
}

struct WSGraph {
  std::vector<PluckerIndex> vertices;
  std::vector<bool> numerator;
  std::vector<std::vector<bool>> adj;

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (std::size_t i = 0; i < adj.size(); ++i)
      for (std::size_t j = i + 1; j < adj.size(); ++j) e += adj[i][j];
    return e;
  }
};

inline WSGraph ws_graph(const RatioVector& v) {
  const PluckerSpace& space = space_of(v.n);
  WSGraph g;
  for (std::size_t r = 0; r < v.size(); ++r)
    if (v.alpha[r] != 0) {
      g.vertices.push_back(space[r]);
      g.numerator.push_back(v.alpha[r] > 0);
    }
  const std::size_t k = g.vertices.size();
  g.adj.assign(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      g.adj[i][j] = g.adj[j][i] = weakly_separated(g.vertices[i], g.vertices[j]);
  return g;
}

/// Label-preserving isomorphism by backtracking; returns the vertex map.
inline std::optional<std::vector<std::size_t>> ws_isomorphism(const WSGraph& a, const WSGraph& b) {
  const std::size_t k = a.vertices.size();
  if (b.vertices.size() != k || a.edge_count() != b.edge_count()) return std::nullopt;
  auto degree = [](const WSGraph& g, std::size_t v) {
    std::size_t d = 0;
    for (bool x : g.adj[v]) d += x;
    return d;
  };
  std::vector<std::size_t> map(k, SIZE_MAX);
  std::vector<bool> used(k, false);
  std::function<bool(std::size_t)> go = [&](std::size_t v) {
    if (v == k) return true;
    for (std::size_t w = 0; w < k; ++w) {
      if (used[w] || a.numerator[v] != b.numerator[w] || degree(a, v) != degree(b, w)) continue;
      bool ok = true;
      for (std::size_t u = 0; u < v && ok; ++u) ok = a.adj[v][u] == b.adj[w][map[u]];
      if (!ok) continue;
      map[v] = w;
      used[w] = true;
      if (go(v + 1)) return true;
      used[w] = false;
    }
    map[v] = SIZE_MAX;
    return false;
  };
  if (!go(0)) return std::nullopt;
  return map;
}

inline bool ws_isomorphic(const WSGraph& a, const WSGraph& b) { return ws_isomorphism(a, b).has_value(); }

}  // namespace tpcone
