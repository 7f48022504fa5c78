#pragma once

// Tropicalization of the Pluecker polynomials. Under the substitution
// face_j -> t^lambda_j each coordinate grows like t^{T_i(lambda)}, where
// T_i(lambda) = max over its Newton points of lambda.mu. A ratio alpha is
// bounded iff sum_i alpha_i T_i(lambda) <= 0 for every lambda; since T is
// linear on each cone of the common refinement of the Newton normal fans,
// it suffices to test the rays of that fan, which yields the finite
// inequality system F.

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tpcone/arith.hpp"
#include "tpcone/cone.hpp"
#include "tpcone/lp.hpp"
#include "tpcone/network.hpp"
#include "tpcone/parallel.hpp"
#include "tpcone/pluecker.hpp"
#include "tpcone/random.hpp"

namespace tpcone {

using PointSet = std::vector<std::vector<int>>;

/// Newton supports of all Pluecker coordinates of one order.
struct TropicalProfile {
  int n = 0;
  std::size_t d = 0;
  std::vector<PointSet> supports;  // lexicographic coordinate order

  static TropicalProfile from_polynomials(int n, const std::vector<Polynomial>& pluckers) {
    TropicalProfile p;
    p.n = n;
    p.d = pluckers.empty() ? 0 : pluckers.front().nvars();
    for (const auto& poly : pluckers) {
      if (poly.is_zero()) throw Error("empty Pluecker polynomial");
      p.supports.push_back(newton_points(poly));
    }
    return p;
  }

  static TropicalProfile build(int n, unsigned threads = 1) {
    PlanarNetwork net(n);
    return from_polynomials(n, net.all_plucker_polynomials(threads));
  }
};

struct TropicalValue {
  Integer value;
  std::vector<std::size_t> argmax;
};

inline TropicalValue tropical_value(const PointSet& points, const IntVec& lambda) {
  if (points.empty()) throw Error("tropical_value: empty support");
  TropicalValue out;
  bool first = true;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].size() != lambda.size()) throw Error("tropical_value: dimension mismatch");
    Integer v = 0;
    for (std::size_t j = 0; j < lambda.size(); ++j)
      if (points[k][j] != 0) v += lambda[j] * points[k][j];
    if (first || v > out.value) {
      out.value = v;
      out.argmax = {k};
      first = false;
    } else if (v == out.value) {
      out.argmax.push_back(k);
    }
  }
  return out;
}

/// The row (T_1(lambda), ..., T_N(lambda)); bounded ratios satisfy row.alpha <= 0.
inline IntVec alpha_inequality(const TropicalProfile& profile, const IntVec& lambda) {
  IntVec row(profile.supports.size());
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = tropical_value(profile.supports[i], lambda).value;
  return row;
}

/// sum_i alpha_i T_i(lambda).
inline Integer tropical_exponent(const TropicalProfile& profile, const RatioVector& v, const IntVec& lambda) {
  Integer s = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v.alpha[i] != 0) s += v.alpha[i] * tropical_value(profile.supports[i], lambda).value;
  return s;
}

/// One maximal cone of the common refinement.
struct FanCone {
  IntMatrix rows;                    // a.lambda <= 0
  std::vector<std::size_t> vertex;   // chosen leading Newton point per refined coordinate
  IntVec interior;                   // a strictly interior integer point
  ConeV generators;                  // rays and lineality of the cone
};

struct Fan {
  std::size_t d = 0;
  std::vector<std::size_t> coordinates;  // which supports were refined, in order
  std::vector<FanCone> cones;

  /// Distinct extreme directions over all cones, lineality in both signs.
  IntMatrix rays() const {
    std::set<IntVec> seen;
    IntMatrix out;
    auto add = [&](IntVec r) {
      r = primitive(std::move(r));
      if (seen.insert(r).second) out.push_back(std::move(r));
    };
    for (const auto& c : cones) {
      for (const auto& r : c.generators.rays) add(r);
      for (const auto& l : c.generators.lin) {
        add(l);
        IntVec m(l.size());
        for (std::size_t i = 0; i < l.size(); ++i) m[i] = -l[i];
        add(std::move(m));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

struct FanOptions {
  unsigned threads = 1;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  // called after each refined coordinate with (done, total, cones)
  std::function<void(std::size_t, std::size_t, std::size_t)> progress;
};

namespace detail {

/// Strictly interior point of { a.x <= 0 }, if the cone is full-dimensional.
inline std::optional<IntVec> strict_interior(const IntMatrix& rows, std::size_t d) {
  if (rows.empty()) return IntVec(d, 0);
  // max t  s.t.  a.x + t <= 0,  t <= 1
  LpProblem lp;
  lp.vars = d + 1;
  lp.objective.assign(d + 1, 0);
  lp.objective[d] = -1;
  for (const auto& a : rows) {
    RatVec r(a.begin(), a.end());
    r.push_back(1);
    lp.add(std::move(r), Sense::le, 0);
  }
  RatVec cap(d + 1, 0);
  cap[d] = 1;
  lp.add(std::move(cap), Sense::le, 1);
  LpSolution s = solve(lp);
  if (s.status != LpStatus::optimal || s.value >= 0) return std::nullopt;
  RatVec x(s.x.begin(), s.x.begin() + static_cast<std::ptrdiff_t>(d));
  return primitive(x);
}

inline IntMatrix prune_rows(IntMatrix rows) {
  std::set<IntVec> seen;
  IntMatrix out;
  for (auto& r : rows) {
    r = primitive(std::move(r));
    if (is_zero(r) || !seen.insert(r).second) continue;
    out.push_back(std::move(r));
  }
  return out;
}

/// Vertices of conv(points) with the irredundant rows of their normal cones.
struct NormalCones {
  std::vector<std::size_t> vertex;  // point indices
  std::vector<IntMatrix> rows;
};

inline NormalCones normal_cones(const PointSet& pts, std::size_t d) {
  NormalCones out;
  for (std::size_t v = 0; v < pts.size(); ++v) {
    IntMatrix rows;
    for (std::size_t w = 0; w < pts.size(); ++w) {
      if (w == v) continue;
      IntVec r(d);
      for (std::size_t j = 0; j < d; ++j) r[j] = pts[w][j] - pts[v][j];
      rows.push_back(std::move(r));
    }
    rows = prune_rows(std::move(rows));
    if (!strict_interior(rows, d)) continue;
    out.vertex.push_back(v);
    out.rows.push_back(rows.empty() ? rows : dd_facets(dd_rays(ConeH{d, rows, {}})).ineqs);
  }
  return out;
}

inline ConeV whole_space(std::size_t d) {
  ConeV v;
  v.dim = d;
  for (std::size_t j = 0; j < d; ++j) {
    IntVec e(d, 0);
    e[j] = 1;
    v.lin.push_back(std::move(e));
  }
  return v;
}

/// Points leading at every generator of the cone (lineality in both signs).
/// Since T is convex, such a point leads on the whole cone.
inline std::vector<std::size_t> common_leaders(const PointSet& pts, const ConeV& g) {
  std::vector<std::size_t> common;
  bool first = true;
  auto meet = [&](const IntVec& r) {
    auto a = tropical_value(pts, r).argmax;
    if (first) {
      common = a;
      first = false;
    } else {
      std::vector<std::size_t> both;
      std::set_intersection(common.begin(), common.end(), a.begin(), a.end(), std::back_inserter(both));
      common = std::move(both);
    }
  };
  for (const auto& r : g.rays) {
    meet(r);
    if (common.empty()) return common;
  }
  for (const auto& l : g.lin) {
    meet(l);
    IntVec m(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) m[i] = -l[i];
    meet(m);
    if (common.empty()) return common;
  }
  return common;
}

}  // namespace detail

/// Common refinement of the normal fans of conv(M_i) for the given
/// coordinates (all coordinates when empty). Cones are split one coordinate
/// at a time; only full-dimensional pieces survive, each kept irredundant.
inline Fan refine_fan(const TropicalProfile& profile, std::vector<std::size_t> coords = {},
                      const FanOptions& opt = {}) {
  if (coords.empty())
    for (std::size_t i = 0; i < profile.supports.size(); ++i) coords.push_back(i);
  const std::size_t d = profile.d;
  Fan fan;
  fan.d = d;
  fan.coordinates = coords;
  std::vector<FanCone> cones(1);
  cones[0].interior = IntVec(d, 0);
  cones[0].generators = detail::whole_space(d);
  for (std::size_t step = 0; step < coords.size(); ++step) {
    const PointSet& pts = profile.supports.at(coords[step]);
    detail::NormalCones nc = detail::normal_cones(pts, d);
    std::vector<std::vector<FanCone>> pieces(cones.size());
    parallel_for(cones.size(), opt.threads, [&](std::size_t k) {
      if (opt.deadline && std::chrono::steady_clock::now() > *opt.deadline)
        throw ResourceLimit("fan refinement exceeded its time budget");
      FanCone& c = cones[k];
      auto lead = nc.vertex.size() == 1 ? std::vector<std::size_t>{nc.vertex[0]} : detail::common_leaders(pts, c.generators);
      if (!lead.empty()) {
        FanCone piece = std::move(c);
        piece.vertex.push_back(lead.front());
        pieces[k].push_back(std::move(piece));
        return;
      }
      for (std::size_t t = 0; t < nc.vertex.size(); ++t) {
        IntMatrix rows = c.rows;
        rows.insert(rows.end(), nc.rows[t].begin(), nc.rows[t].end());
        rows = detail::prune_rows(std::move(rows));
        auto interior = detail::strict_interior(rows, d);
        if (!interior) continue;
        FanCone piece;
        piece.generators = dd_rays(ConeH{d, rows, {}});
        piece.rows = dd_facets(piece.generators).ineqs;
        piece.vertex = c.vertex;
        piece.vertex.push_back(nc.vertex[t]);
        piece.interior = std::move(*interior);
        pieces[k].push_back(std::move(piece));
      }
    });
    std::vector<FanCone> next;
    for (auto& p : pieces)
      for (auto& c : p) next.push_back(std::move(c));
    cones = std::move(next);
    if (opt.progress) opt.progress(step + 1, coords.size(), cones.size());
  }
  fan.cones = std::move(cones);
  return fan;
}

struct BuildFResult {
  ConeH raw;                    // ST0 equalities + deduplicated fan-ray rows
  ConeH system;                 // reduced
  IntMatrix lambdas;            // generating lambda for each row of system.ineqs
  std::size_t fan_cones = 0;
  std::size_t fan_rays = 0;
};

struct BuildFOptions {
  unsigned threads = 1;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::function<void(std::size_t, std::size_t, std::size_t)> progress;
};

/// Inequality rows from a set of lambda rays, deduplicated by primitive form;
/// `sources` receives the first lambda generating each row.
inline IntMatrix rows_from_lambdas(const TropicalProfile& profile, const IntMatrix& lambdas, IntMatrix* sources) {
  std::map<IntVec, IntVec> first;
  IntMatrix rows;
  for (const auto& l : lambdas) {
    IntVec row = primitive(alpha_inequality(profile, l));
    if (is_zero(row)) continue;
    if (first.emplace(row, l).second) {
      rows.push_back(row);
      if (sources) sources->push_back(l);
    }
  }
  return rows;
}

/// The boundedness cone C_n as { alpha : F alpha <= 0, ST0 }.
inline BuildFResult build_F(const TropicalProfile& profile, const BuildFOptions& opt = {}) {
  Fan fan = refine_fan(profile, {}, FanOptions{opt.threads, opt.deadline, opt.progress});
  IntMatrix lambdas = fan.rays();
  BuildFResult out;
  out.fan_cones = fan.cones.size();
  out.fan_rays = lambdas.size();
  IntMatrix sources;
  out.raw.dim = profile.supports.size();
  out.raw.ineqs = rows_from_lambdas(profile, lambdas, &sources);
  out.raw.eqs = st0_equations(profile.n);
  out.system = reduce(out.raw);
  std::map<IntVec, IntVec> src;
  for (std::size_t i = 0; i < out.raw.ineqs.size(); ++i) src.emplace(out.raw.ineqs[i], sources[i]);
  for (const auto& r : out.system.ineqs) out.lambdas.push_back(src.at(r));
  return out;
}

inline BuildFResult build_F(int n, const BuildFOptions& opt = {}) {
  if (n < 2 || n > 4) throw Error("build_F supports n in {2, 3, 4}");
  return build_F(TropicalProfile::build(n, opt.threads), opt);
}

/// Sidecar listing the generating lambda of each inequality, one per line.
inline void write_lambda_sidecar(std::ostream& os, const BuildFResult& f) {
  os << "# lambda ray generating each inequality row, in order\n";
  for (const auto& l : f.lambdas) os << to_string(l) << '\n';
}

enum class BoundMode { exact_system, exact_fan, sampled };

inline const char* to_string(BoundMode m) {
  switch (m) {
    case BoundMode::exact_system: return "exact";
    case BoundMode::exact_fan: return "exact-fan";
    case BoundMode::sampled: return "sampled";
  }
  return "?";
}

struct BoundedVerdict {
  BoundMode mode = BoundMode::sampled;
  bool st0 = true;
  bool bounded = false;          // sampled: "no counterexample found"
  std::optional<IntVec> witness; // lambda with positive tropical exponent
  std::optional<Integer> witness_exponent;
  std::size_t directions_checked = 0;
};

struct SampleBox {
  std::size_t samples = 10'000;
  std::int64_t radius = 20;
};

/// Necessary check: sum alpha_i T_i(lambda) <= 0 on +-axis directions, the
/// extra directions, and `samples` random integer lambdas in [-r, r]^d.
inline BoundedVerdict bounded_sampled(const TropicalProfile& profile, const RatioVector& v, const SampleBox& box,
                                      Rng& rng, const IntMatrix& extra_directions = {}) {
  BoundedVerdict out;
  out.mode = BoundMode::sampled;
  if (!st0_check(v).ok) {
    out.st0 = false;
    out.bounded = false;
    return out;
  }
  const std::size_t d = profile.d;
  auto test = [&](const IntVec& lambda) {
    ++out.directions_checked;
    Integer e = tropical_exponent(profile, v, lambda);
    if (e > 0) {
      out.witness = lambda;
      out.witness_exponent = e;
      return false;
    }
    return true;
  };
  for (std::size_t j = 0; j < d; ++j)
    for (int s : {1, -1}) {
      IntVec e(d, 0);
      e[j] = s;
      if (!test(e)) return out;
    }
  for (const auto& l : extra_directions)
    if (!test(l)) return out;
  for (std::size_t k = 0; k < box.samples; ++k) {
    IntVec l(d);
    for (auto& x : l) x = rng.uniform(-box.radius, box.radius);
    if (!test(l)) return out;
  }
  out.bounded = true;
  return out;
}

/// Exact membership in a precomputed system F.
inline BoundedVerdict bounded_exact(const ConeH& f, const RatioVector& v) {
  BoundedVerdict out;
  out.mode = BoundMode::exact_system;
  out.st0 = st0_check(v).ok;
  out.bounded = out.st0 && contains(f, v.to_int());
  out.directions_checked = f.ineqs.size();
  return out;
}

/// Exact check without F. Writing the tropical exponent as P - Q with P, Q
/// convex (numerator and denominator parts), Q is linear on each cone of the
/// refinement over the denominator coordinates alone, and P - Q is convex and
/// positively homogeneous there, so it is <= 0 on the cone iff it is <= 0 on
/// the cone's generators.
inline BoundedVerdict bounded_exact_fan(const TropicalProfile& profile, const RatioVector& v,
                                        const FanOptions& opt = {}) {
  BoundedVerdict out;
  out.mode = BoundMode::exact_fan;
  if (!st0_check(v).ok) {
    out.st0 = false;
    return out;
  }
  std::vector<std::size_t> denominators;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v.alpha[i] < 0) denominators.push_back(i);
  if (denominators.empty()) {
    // ST0 with no denominator forces the zero vector
    out.bounded = true;
    return out;
  }
  Fan fan = refine_fan(profile, denominators, opt);
  IntMatrix dirs = fan.rays();
  for (const auto& l : dirs) {
    ++out.directions_checked;
    Integer e = tropical_exponent(profile, v, l);
    if (e > 0) {
      out.witness = l;
      out.witness_exponent = e;
      return out;
    }
  }
  out.bounded = true;
  return out;
}

}  // namespace tpcone
