#pragma once

// Primitive ratios R_{i,j,D}, their linear relations, the rank of the matrix
// G_n they form, the basis B_n and the facet structure of their hull.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tpcone/arith.hpp"
#include "tpcone/cone.hpp"
#include "tpcone/pluecker.hpp"

namespace tpcone {

struct PrimitiveSpec {
  int n = 0;
  int i = 0, j = 0;
  std::vector<int> delta;  // sorted

  /// +1 on [i,j+1,D], [i+1,j,D]; -1 on [i,j,D], [i+1,j+1,D].
  RatioVector vector() const {
    const PluckerSpace& space = space_of(n);
    std::uint32_t base = 0;
    for (int x : delta) base |= 1u << (x - 1);
    auto bit = [](int x) { return 1u << (x - 1); };
    const int i1 = cyclic_next(i, n), j1 = cyclic_next(j, n);
    RatioVector v(n);
    v.alpha[space.rank(base | bit(i) | bit(j1))] += 1;
    v.alpha[space.rank(base | bit(i1) | bit(j))] += 1;
    v.alpha[space.rank(base | bit(i) | bit(j))] -= 1;
    v.alpha[space.rank(base | bit(i1) | bit(j1))] -= 1;
    return v;
  }

  /// "R i j [D]".
  std::string str() const {
    std::string s = "R " + std::to_string(i) + ' ' + std::to_string(j) + " [";
    for (std::size_t k = 0; k < delta.size(); ++k) s += (k ? " " : "") + std::to_string(delta[k]);
    return s + ']';
  }

  friend bool operator==(const PrimitiveSpec&, const PrimitiveSpec&) = default;
  friend auto operator<=>(const PrimitiveSpec&, const PrimitiveSpec&) = default;
};

inline bool valid_primitive(const PrimitiveSpec& p) {
  const int m = 2 * p.n;
  if (p.i < 1 || p.j < 1 || p.i > m || p.j > m || p.i >= p.j) return false;
  if (static_cast<int>(p.delta.size()) != p.n - 2) return false;
  std::set<int> all{p.i, cyclic_next(p.i, p.n), p.j, cyclic_next(p.j, p.n)};
  if (all.size() != 4) return false;
  for (int x : p.delta) {
    if (x < 1 || x > m) return false;
    if (!all.insert(x).second) return false;
  }
  return true;
}

struct Primitive {
  PrimitiveSpec spec;
  RatioVector vec;
};

/// All primitive ratios of order n, i < j, deduplicated by vector, ordered
/// by (i, j, D).
inline std::vector<Primitive> enumerate_primitives(int n) {
  if (n < 3) throw Error("primitive ratios need n >= 3");
  const int m = 2 * n;
  std::vector<Primitive> out;
  std::set<RatioVector> seen;
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) {
      std::set<int> four{i, cyclic_next(i, n), j, cyclic_next(j, n)};
      if (four.size() != 4) continue;
      std::vector<int> rest;
      for (int x = 1; x <= m; ++x)
        if (!four.count(x)) rest.push_back(x);
      // all (n-2)-subsets of rest, lexicographic
      std::vector<int> pick(static_cast<std::size_t>(n - 2));
      for (std::size_t k = 0; k < pick.size(); ++k) pick[k] = static_cast<int>(k);
      const int r = static_cast<int>(rest.size());
      while (true) {
        PrimitiveSpec s{n, i, j, {}};
        for (int k : pick) s.delta.push_back(rest[static_cast<std::size_t>(k)]);
        RatioVector v = s.vector();
        if (seen.insert(v).second) out.push_back({std::move(s), std::move(v)});
        int k = n - 3;
        while (k >= 0 && pick[static_cast<std::size_t>(k)] == r - (n - 2) + k) --k;
        if (k < 0) break;
        ++pick[static_cast<std::size_t>(k)];
        for (int t = k + 1; t < n - 2; ++t) pick[static_cast<std::size_t>(t)] = pick[static_cast<std::size_t>(t - 1)] + 1;
      }
    }
  return out;
}

inline IntMatrix primitive_matrix(const std::vector<Primitive>& ps) {
  IntMatrix g;
  for (const auto& p : ps) g.push_back(p.vec.to_int());
  return g;
}

/// Cyclic arc a, a+1, ..., b (1-based, wrapping), empty when b = a - 1.
inline std::vector<int> cyclic_arc(int a, int b, int n) {
  std::vector<int> out;
  const int m = 2 * n;
  a = (a - 1 + m) % m + 1;
  b = (b - 1 + m) % m + 1;
  if (cyclic_next(b, n) == a) return out;
  for (int x = a;; x = cyclic_next(x, n)) {
    out.push_back(x);
    if (x == b) break;
  }
  return out;
}

/// j - i = n and D fills one of the two arcs between the pairs {i,i+1}, {j,j+1}.
/// Such a primitive is the only one touching the coordinate of n consecutive
/// indices it contains.
inline bool is_isolated(const PrimitiveSpec& p) {
  if (p.j - p.i != p.n) return false;
  auto same = [&](std::vector<int> arc) {
    std::sort(arc.begin(), arc.end());
    return arc == p.delta;
  };
  return same(cyclic_arc(p.i + 2, p.j - 1, p.n)) || same(cyclic_arc(p.j + 2, p.i - 1, p.n));
}

inline std::vector<std::size_t> isolated_primitives(const std::vector<Primitive>& ps) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < ps.size(); ++k)
    if (is_isolated(ps[k].spec)) out.push_back(k);
  return out;
}

/// One chain v1 - v2 = v3 - v4 = v5 - v6, as indices into the primitive list.
struct RelationChain {
  std::array<std::size_t, 6> ids{};

  friend bool operator==(const RelationChain&, const RelationChain&) = default;
  friend auto operator<=>(const RelationChain&, const RelationChain&) = default;
};

inline bool chain_holds(const RelationChain& c, const std::vector<Primitive>& ps) {
  auto d = [&](int a) { return ps[c.ids[2 * a]].vec - ps[c.ids[2 * a + 1]].vec; };
  return d(0) == d(1) && d(1) == d(2);
}

/// All distinct chains
///   V(i,j,D) - V(i,j,D-x+(x+1)) = V(x,j,D-x+i) - V(x,j,D-x+(i+1))
///                               = V(x,i,D-x+j) - V(x,i,D-x+(j+1))
/// over non-isolated (i,j,D) and x in D with x+1 outside D u {i,j}. Chains
/// are oriented so the first nonzero entry of the common difference is
/// positive and the three pairs are sorted.
inline std::vector<RelationChain> relations(const std::vector<Primitive>& ps) {
  if (ps.empty()) return {};
  const int n = ps.front().spec.n;
  std::map<PrimitiveSpec, std::size_t> index;
  for (std::size_t k = 0; k < ps.size(); ++k) index.emplace(ps[k].spec, k);
  auto lookup = [&](int a, int b, std::set<int> d) -> std::optional<std::size_t> {
    PrimitiveSpec s{n, std::min(a, b), std::max(a, b), std::vector<int>(d.begin(), d.end())};
    auto it = index.find(s);
    if (it == index.end()) return std::nullopt;
    return it->second;
  };
  std::set<RelationChain> chains;
  for (const auto& p : ps) {
    if (is_isolated(p.spec)) continue;
    const int i = p.spec.i, j = p.spec.j;
    std::set<int> d(p.spec.delta.begin(), p.spec.delta.end());
    for (int x : p.spec.delta) {
      const int y = cyclic_next(x, n);
      if (d.count(y) || y == i || y == j) continue;
      std::set<int> base = d;
      base.erase(x);
      auto with = [&](int e) {
        std::set<int> s = base;
        s.insert(e);
        return s;
      };
      std::array<std::optional<std::size_t>, 6> k{
          lookup(i, j, d),          lookup(i, j, with(y)),
          lookup(x, j, with(i)),    lookup(x, j, with(cyclic_next(i, n))),
          lookup(x, i, with(j)),    lookup(x, i, with(cyclic_next(j, n)))};
      if (std::any_of(k.begin(), k.end(), [](const auto& o) { return !o.has_value(); })) continue;
      RelationChain c;
      for (std::size_t t = 0; t < 6; ++t) c.ids[t] = *k[t];
      if (!chain_holds(c, ps)) throw Error("relation chain failed for " + p.spec.str());
      RatioVector diff = ps[c.ids[0]].vec - ps[c.ids[1]].vec;
      auto first = std::find_if(diff.alpha.begin(), diff.alpha.end(), [](std::int64_t a) { return a != 0; });
      if (first == diff.alpha.end()) continue;
      std::array<std::pair<std::size_t, std::size_t>, 3> pairs;
      for (std::size_t t = 0; t < 3; ++t) {
        pairs[t] = {c.ids[2 * t], c.ids[2 * t + 1]};
        if (*first < 0) std::swap(pairs[t].first, pairs[t].second);
      }
      std::sort(pairs.begin(), pairs.end());
      for (std::size_t t = 0; t < 3; ++t) {
        c.ids[2 * t] = pairs[t].first;
        c.ids[2 * t + 1] = pairs[t].second;
      }
      chains.insert(c);
    }
  }
  return {chains.begin(), chains.end()};
}

struct RankResult {
  std::size_t rank = 0;
  std::vector<PluckerIndex> free_columns;  // lexicographic order
};

inline RankResult rank_G(int n) {
  auto ps = enumerate_primitives(n);
  const PluckerSpace& space = space_of(n);
  Echelon e = echelon(primitive_matrix(ps), space.size());
  RankResult r;
  r.rank = e.rank();
  for (std::size_t c : e.free_columns()) r.free_columns.push_back(space[c]);
  return r;
}

/// The 2n coordinates {k} u [n+2, 2n] (k = 1..n+1) and [n, 2n] \ {x}
/// (x = 2n down to n+2), in that order.
inline std::vector<PluckerIndex> expected_free_columns(int n) {
  std::vector<PluckerIndex> out;
  for (int k = 1; k <= n + 1; ++k) {
    std::vector<int> s{k};
    for (int t = n + 2; t <= 2 * n; ++t) s.push_back(t);
    out.emplace_back(n, s);
  }
  for (int x = 2 * n; x >= n + 2; --x) {
    std::vector<int> s;
    for (int t = n; t <= 2 * n; ++t)
      if (t != x) s.push_back(t);
    out.emplace_back(n, s);
  }
  return out;
}

/// Free columns listed in the order of expected_free_columns, any others after
/// them in lexicographic order.
inline std::vector<PluckerIndex> display_order(std::vector<PluckerIndex> cols, int n) {
  auto ref = expected_free_columns(n);
  auto key = [&](const PluckerIndex& s) {
    auto it = std::find(ref.begin(), ref.end(), s);
    return std::make_pair(static_cast<std::size_t>(it - ref.begin()), lex_rank(s));
  };
  std::sort(cols.begin(), cols.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return cols;
}

/// Members of B_n: the elements of D on the arc before i start at 1 and are
/// consecutive, and those between i+1 and j start at i+2 and are consecutive.
/// For j = 2n the first arc is [2, i-1] and starts at 2.
inline bool in_basis(const PrimitiveSpec& p) {
  const int m = 2 * p.n;
  auto consecutive_from = [&](int lo, int hi, int start) {
    std::vector<int> hit;
    for (int x : p.delta)
      if (x >= lo && x <= hi) hit.push_back(x);
    for (std::size_t k = 0; k < hit.size(); ++k)
      if (hit[k] != start + static_cast<int>(k)) return false;
    return true;
  };
  bool arc1 = p.j == m ? consecutive_from(2, p.i - 1, 2) : consecutive_from(1, p.i - 1, 1);
  return arc1 && consecutive_from(p.i + 2, p.j - 1, p.i + 2);
}

inline std::vector<Primitive> basis_B(int n) {
  std::vector<Primitive> out;
  for (auto& p : enumerate_primitives(n))
    if (in_basis(p.spec)) out.push_back(std::move(p));
  return out;
}

/// (n-1)^2 + sum_{k=0}^{n-2} sum_{j=1}^{n-1} C(n-j+k-1, k) (n-k-1) j.
inline std::int64_t basis_count_formula(int n) {
  std::int64_t s = static_cast<std::int64_t>(n - 1) * (n - 1);
  for (int k = 0; k <= n - 2; ++k)
    for (int j = 1; j <= n - 1; ++j) s += binomial(n - j + k - 1, k) * (n - k - 1) * j;
  return s;
}

inline ConeV primitive_cone(const std::vector<Primitive>& ps) {
  ConeV v;
  v.dim = ps.empty() ? 0 : ps.front().vec.size();
  v.rays = primitive_matrix(ps);
  return v;
}

struct FacetInfo {
  IntVec normal;                     // normal.x <= 0 on the cone
  std::vector<std::size_t> outer;    // generators strictly inside the half-space
  std::vector<std::size_t> on_facet;
};

struct FacetAnalysis {
  ConeH system;
  std::size_t dimension = 0;
  std::vector<FacetInfo> facets;
};

/// Facets of the hull of the generators with their outer sets. Each facet
/// set is checked to span a hyperplane of the cone's span, to leave every
/// outer generator strictly on one side, and to be maximal.
inline FacetAnalysis analyze_facets(const IntMatrix& gens, std::size_t dim) {
  FacetAnalysis out;
  ConeV v{dim, gens, {}};
  out.system = dd_facets(v);
  out.dimension = cone_dimension(v);
  for (const auto& f : out.system.ineqs) {
    FacetInfo info;
    info.normal = f;
    IntMatrix tight;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      Integer s = dot(f, gens[k]);
      if (s > 0) throw Error("facet inequality violated by a generator");
      if (s == 0) {
        info.on_facet.push_back(k);
        tight.push_back(gens[k]);
      } else {
        info.outer.push_back(k);
      }
    }
    if (rank(tight, dim) + 1 != out.dimension) throw Error("facet set does not span a hyperplane of the cone");
    for (std::size_t k : info.outer) {
      IntMatrix more = tight;
      more.push_back(gens[k]);
      if (rank(more, dim) != out.dimension) throw Error("facet set is not maximal");
    }
    out.facets.push_back(std::move(info));
  }
  return out;
}

/// Names v1..v18 for n = 3: chain c contributes v_{6c+1..6c+6} in chain
/// order (v1 - v2 = v3 - v4 = v5 - v6), isolated primitives follow.
inline std::vector<std::size_t> chain_numbering(const std::vector<Primitive>& ps,
                                              const std::vector<RelationChain>& chains) {
  std::vector<std::size_t> order;
  for (const auto& c : chains)
    for (std::size_t id : c.ids) order.push_back(id);
  for (std::size_t k : isolated_primitives(ps)) order.push_back(k);
  return order;  // order[v - 1] = index of v
}

/// The sixteen outer sets for n = 3, in terms of the numbering above.
inline std::vector<std::vector<int>> expected_outer_sets_n3() {
  return {{13}, {14}, {15}, {16}, {17}, {18},
          {1, 2}, {3, 4}, {5, 6}, {7, 8}, {9, 10}, {11, 12},
          {1, 3, 5}, {2, 4, 6}, {7, 9, 11}, {8, 10, 12}};
}

/// Non-negative combination of primitive vectors or a separating functional.
inline ConicCombination factor_into_primitives(const RatioVector& v, const std::vector<Primitive>& ps) {
  return conic_combination(primitive_matrix(ps), {}, v.to_int());
}

/// "R i j [D]" lines.
inline std::string format_primitives(const std::vector<Primitive>& ps) {
  std::string s;
  for (const auto& p : ps) s += p.spec.str() + '\n';
  return s;
}

}  // namespace tpcone
