#pragma once

// Exact polyhedral cones in both descriptions:
//   ConeH  { x : a.x <= 0 for a in ineqs, e.x = 0 for e in eqs }
//   ConeV  cone(rays) + span(lin)
// with the double description method converting between them.

#include <algorithm>
#include <chrono>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "tpcone/arith.hpp"
#include "tpcone/lp.hpp"

namespace tpcone {

struct ConeH {
  std::size_t dim = 0;
  IntMatrix ineqs;
  IntMatrix eqs;
};

struct ConeV {
  std::size_t dim = 0;
  IntMatrix rays;
  IntMatrix lin;
};

/// Limits for the double description method.
struct DdOptions {
  std::size_t max_rays = 2'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

namespace detail {

inline void check_dim(const IntMatrix& rows, std::size_t dim) {
  for (const auto& r : rows)
    if (r.size() != dim) throw Error("dimension mismatch: row of length " + std::to_string(r.size()) +
                                     " in a cone of dimension " + std::to_string(dim));
}

inline bool lex_less(const IntVec& a, const IntVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// Canonical integer basis of a subspace: echelon rows, pivots made positive.
inline IntMatrix canonical_basis(const IntMatrix& rows, std::size_t dim) {
  Echelon e = echelon(rows, dim);
  RatMatrix r = rref(e);
  IntMatrix out;
  for (auto& row : r) out.push_back(primitive(row));
  return out;
}

struct DdRay {
  IntVec v;
  boost::dynamic_bitset<> tight;
};

/// Double description on { y in R^k : a.y <= 0 for a in rows }.
inline ConeV dd_core(const IntMatrix& rows, std::size_t k, const DdOptions& opt) {
  IntMatrix lin;
  for (std::size_t i = 0; i < k; ++i) {
    IntVec e(k, 0);
    e[i] = 1;
    lin.push_back(std::move(e));
  }
  std::vector<DdRay> rays;
  const std::size_t m = rows.size();
  for (std::size_t ci = 0; ci < m; ++ci) {
    if (opt.deadline && std::chrono::steady_clock::now() > *opt.deadline)
      throw ResourceLimit("double description exceeded its time budget");
    const IntVec& a = rows[ci];
    // Lineality cut: some lineality direction leaves the half-space.
    std::size_t pick = SIZE_MAX;
    std::vector<Integer> al(lin.size());
    for (std::size_t j = 0; j < lin.size(); ++j) {
      al[j] = dot(a, lin[j]);
      if (al[j] != 0 && pick == SIZE_MAX) pick = j;
    }
    if (pick != SIZE_MAX) {
      IntVec l0 = lin[pick];
      Integer a0 = al[pick];
      if (a0 > 0) {
        for (auto& x : l0) x = -x;
        a0 = -a0;
      }
      for (auto& r : rays) {
        Integer ar = dot(a, r.v);
        if (ar != 0) {
          IntVec nv(k);
          for (std::size_t t = 0; t < k; ++t) nv[t] = -a0 * r.v[t] + ar * l0[t];
          r.v = primitive(std::move(nv));
        }
        r.tight.resize(m);
        r.tight.set(ci);
      }
      IntMatrix new_lin;
      for (std::size_t j = 0; j < lin.size(); ++j) {
        if (j == pick) continue;
        if (al[j] == 0) {
          new_lin.push_back(lin[j]);
          continue;
        }
        IntVec nv(k);
        for (std::size_t t = 0; t < k; ++t) nv[t] = a0 * lin[j][t] - al[j] * l0[t];
        new_lin.push_back(primitive(std::move(nv)));
      }
      lin = std::move(new_lin);
      DdRay nr{primitive(std::move(l0)), boost::dynamic_bitset<>(m)};
      for (std::size_t t = 0; t < ci; ++t) nr.tight.set(t);
      rays.push_back(std::move(nr));
      continue;
    }
    // Regular step.
    std::vector<Integer> val(rays.size());
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = dot(a, rays[r].v);
      if (val[r] > 0)
        pos.push_back(r);
      else if (val[r] < 0)
        neg.push_back(r);
      else
        zero.push_back(r);
    }
    for (std::size_t r : zero) rays[r].tight.set(ci);
    if (pos.empty()) continue;
    const std::size_t need = k >= lin.size() + 2 ? k - lin.size() - 2 : 0;
    std::vector<DdRay> next;
    for (std::size_t r : neg) next.push_back(std::move(rays[r]));
    for (std::size_t r : zero) next.push_back(std::move(rays[r]));
    // Keep pos rays around for adjacency tests; moved-from ones are not used below.
    std::vector<DdRay> created;
    // Candidates for the adjacency test are all rays of the current cone.
    std::vector<const DdRay*> all;
    for (const auto& r : next) all.push_back(&r);
    for (std::size_t r : pos) all.push_back(&rays[r]);
    for (std::size_t pi : pos) {
      const DdRay& p = rays[pi];
      for (std::size_t ni = 0; ni < neg.size(); ++ni) {
        const DdRay& q = next[ni];
        boost::dynamic_bitset<> common = p.tight & q.tight;
        if (common.count() < need) continue;
        bool adjacent = true;
        for (const DdRay* r : all) {
          if (r == &p || r == &q) continue;
          if (common.is_subset_of(r->tight)) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        const Integer& ap = val[pi];
        Integer aq = dot(a, q.v);
        IntVec nv(k);
        for (std::size_t t = 0; t < k; ++t) nv[t] = ap * q.v[t] - aq * p.v[t];
        DdRay nr{primitive(std::move(nv)), common};
        nr.tight.set(ci);
        created.push_back(std::move(nr));
        if (next.size() + created.size() > opt.max_rays)
          throw ResourceLimit("double description exceeded " + std::to_string(opt.max_rays) + " rays");
      }
    }
    for (auto& c : created) next.push_back(std::move(c));
    rays = std::move(next);
  }
  ConeV out;
  out.dim = k;
  for (auto& r : rays) out.rays.push_back(std::move(r.v));
  out.lin = std::move(lin);
  return out;
}

}  // namespace detail

/// Primitive integer form of every row, zero rows dropped, duplicates removed
/// (first occurrence kept).
inline ConeH normalize(const ConeH& c) {
  detail::check_dim(c.ineqs, c.dim);
  detail::check_dim(c.eqs, c.dim);
  ConeH out;
  out.dim = c.dim;
  std::set<IntVec> seen;
  for (const auto& r : c.ineqs) {
    IntVec p = primitive(r);
    if (is_zero(p) || !seen.insert(p).second) continue;
    out.ineqs.push_back(std::move(p));
  }
  std::set<IntVec> seen_eq;
  for (const auto& r : c.eqs) {
    IntVec p = line_canonical(r);
    if (is_zero(p) || !seen_eq.insert(p).second) continue;
    out.eqs.push_back(std::move(p));
  }
  return out;
}

/// Minimal generating system. Rays are primitive integer vectors in
/// lexicographic order; lineality is a canonical basis.
inline ConeV dd_rays(const ConeH& c, const DdOptions& opt = {}) {
  ConeH h = normalize(c);
  // Insertion order: fewest nonzeros first, then lexicographic.
  std::stable_sort(h.ineqs.begin(), h.ineqs.end(), [](const IntVec& a, const IntVec& b) {
    auto za = nonzeros(a), zb = nonzeros(b);
    if (za != zb) return za < zb;
    return detail::lex_less(a, b);
  });
  // Project onto the null space of the equalities once.
  IntMatrix basis;
  if (h.eqs.empty()) {
    for (std::size_t i = 0; i < h.dim; ++i) {
      IntVec e(h.dim, 0);
      e[i] = 1;
      basis.push_back(std::move(e));
    }
  } else {
    basis = null_space(h.eqs, h.dim);
  }
  const std::size_t k = basis.size();
  IntMatrix projected;
  std::set<IntVec> seen;
  for (const auto& a : h.ineqs) {
    IntVec p(k);
    for (std::size_t j = 0; j < k; ++j) p[j] = dot(a, basis[j]);
    p = primitive(std::move(p));
    if (is_zero(p) || !seen.insert(p).second) continue;
    projected.push_back(std::move(p));
  }
  ConeV small = detail::dd_core(projected, k, opt);
  auto lift = [&](const IntVec& y) {
    IntVec x(h.dim, 0);
    for (std::size_t j = 0; j < k; ++j)
      if (y[j] != 0)
        for (std::size_t i = 0; i < h.dim; ++i) x[i] += y[j] * basis[j][i];
    return primitive(std::move(x));
  };
  ConeV out;
  out.dim = h.dim;
  IntMatrix lin;
  for (const auto& l : small.lin) lin.push_back(lift(l));
  out.lin = detail::canonical_basis(lin, h.dim);
  for (const auto& r : small.rays) out.rays.push_back(lift(r));
  if (!out.lin.empty()) {
    // Reduce rays modulo the lineality space so the output is canonical.
    RatMatrix lr = rref(echelon(out.lin, h.dim));
    Echelon le = echelon(out.lin, h.dim);
    for (auto& r : out.rays) {
      RatVec v(r.begin(), r.end());
      for (std::size_t t = 0; t < lr.size(); ++t) {
        Rational f = v[le.pivots[t]];
        if (f == 0) continue;
        for (std::size_t i = 0; i < h.dim; ++i) v[i] -= f * lr[t][i];
      }
      r = primitive(v);
    }
  }
  std::sort(out.rays.begin(), out.rays.end(), detail::lex_less);
  out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
  return out;
}

/// Facet description of cone(rays) + span(lin): the polar cone's rays are the
/// facet normals and its lineality the equalities. The result is irredundant.
inline ConeH dd_facets(const ConeV& v, const DdOptions& opt = {}) {
  detail::check_dim(v.rays, v.dim);
  detail::check_dim(v.lin, v.dim);
  if (v.rays.empty() && v.lin.empty()) throw Error("dd_facets: empty generator list");
  ConeH polar{v.dim, v.rays, v.lin};
  ConeV p = dd_rays(polar, opt);
  return ConeH{v.dim, p.rays, p.lin};
}

inline bool contains(const ConeH& c, const IntVec& x) {
  if (x.size() != c.dim) throw Error("dimension mismatch");
  for (const auto& a : c.ineqs)
    if (dot(a, x) > 0) return false;
  for (const auto& e : c.eqs)
    if (dot(e, x) != 0) return false;
  return true;
}

/// Membership in cone(rays) + span(lin) with an exactly verified certificate
/// either way.
inline ConicCombination member_v(const IntVec& x, const ConeV& c) {
  if (x.size() != c.dim) throw Error("dimension mismatch");
  return conic_combination(c.rays, c.lin, x);
}

/// Why a row was dropped by reduce().
struct Removal {
  IntVec row;
  enum class Reason { zero, duplicate, implied } reason = Reason::implied;
  RatVec ineq_coefficients;  // implied: row = sum c_k kept_k + sum d_e eq_e, c >= 0
  RatVec eq_coefficients;
  std::vector<std::size_t> support;  // indices (into the input ineqs) the coefficients refer to
};

struct Reduction {
  ConeH cone;
  std::vector<Removal> removed;
};

/// Irredundant subsystem defining the same cone. Rows are tested in order;
/// each removal carries a conic-combination certificate over the rows still
/// present at that moment.
inline Reduction reduce_with_certificates(const ConeH& c) {
  detail::check_dim(c.ineqs, c.dim);
  detail::check_dim(c.eqs, c.dim);
  Reduction out;
  out.cone.dim = c.dim;
  // Equalities: keep an independent subset.
  IntMatrix eqs;
  for (const auto& e : c.eqs) {
    IntVec p = line_canonical(e);
    if (is_zero(p)) continue;
    IntMatrix trial = eqs;
    trial.push_back(p);
    if (rank(trial, c.dim) > eqs.size()) eqs.push_back(std::move(p));
  }
  out.cone.eqs = eqs;
  std::vector<IntVec> rows;
  std::vector<std::size_t> origin;
  std::set<IntVec> seen;
  for (std::size_t i = 0; i < c.ineqs.size(); ++i) {
    IntVec p = primitive(c.ineqs[i]);
    if (is_zero(p)) {
      out.removed.push_back({c.ineqs[i], Removal::Reason::zero, {}, {}, {}});
      continue;
    }
    if (!seen.insert(p).second) {
      out.removed.push_back({c.ineqs[i], Removal::Reason::duplicate, {}, {}, {}});
      continue;
    }
    rows.push_back(std::move(p));
    origin.push_back(i);
  }
  std::vector<bool> alive(rows.size(), true);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    IntMatrix others;
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < rows.size(); ++j)
      if (j != i && alive[j]) {
        others.push_back(rows[j]);
        idx.push_back(origin[j]);
      }
    ConicCombination cc = conic_combination(others, eqs, rows[i]);
    if (cc.feasible) {
      alive[i] = false;
      Removal r{rows[i], Removal::Reason::implied, cc.coefficients, cc.lin_coefficients, idx};
      out.removed.push_back(std::move(r));
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (alive[i]) out.cone.ineqs.push_back(rows[i]);
  return out;
}

inline ConeH reduce(const ConeH& c) { return reduce_with_certificates(c).cone; }

/// Dimension of the linear span of the cone.
inline std::size_t cone_dimension(const ConeV& v) {
  IntMatrix all = v.rays;
  all.insert(all.end(), v.lin.begin(), v.lin.end());
  return rank(all, v.dim);
}

/// Every element of a lies in b.
inline bool includes(const ConeH& b, const ConeV& a) {
  for (const auto& r : a.rays)
    if (!contains(b, r)) return false;
  for (const auto& l : a.lin) {
    IntVec m(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) m[i] = -l[i];
    if (!contains(b, l) || !contains(b, m)) return false;
  }
  return true;
}

inline bool includes(const ConeV& b, const ConeV& a) {
  for (const auto& r : a.rays)
    if (!member_v(r, b).feasible) return false;
  for (const auto& l : a.lin) {
    IntVec m(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) m[i] = -l[i];
    if (!member_v(l, b).feasible || !member_v(m, b).feasible) return false;
  }
  return true;
}

/// Tight-constraint rank test: x is an extreme ray iff the inequalities tight
/// at x together with all equalities have rank dim - 1.
inline bool extremality_test(const IntVec& x, const ConeH& c) {
  if (!contains(c, x)) throw Error("extremality_test: point violates the system");
  if (is_zero(x)) return false;
  IntMatrix tight = c.eqs;
  for (const auto& a : c.ineqs)
    if (dot(a, x) == 0) tight.push_back(a);
  return rank(tight, c.dim) + 1 == c.dim;
}

struct MinimizeResult {
  LpStatus status = LpStatus::infeasible;
  RatVec x;
  Rational value;
};

/// Minimizes f over the cone sliced by normal.x = rhs; returns an optimal
/// basic solution.
inline MinimizeResult minimize(const IntVec& f, const ConeH& c, const IntVec& normal, const Rational& rhs) {
  if (f.size() != c.dim || normal.size() != c.dim) throw Error("dimension mismatch");
  LpProblem lp;
  lp.vars = c.dim;
  lp.objective = to_rat_vec(f);
  for (const auto& a : c.ineqs) lp.add(to_rat_vec(a), Sense::le, 0);
  for (const auto& e : c.eqs) lp.add(to_rat_vec(e), Sense::eq, 0);
  lp.add(to_rat_vec(normal), Sense::eq, rhs);
  LpSolution s = solve(lp);
  return {s.status, s.x, s.value};
}

// ---------------------------------------------------------------------------
// Cone files: "H <dim> <#ineq> <#eq>" or "V <dim> <#rays> <#lin>", then one
// integer row per line, inequalities/rays first.

inline void write_rows(std::ostream& os, const IntMatrix& rows) {
  for (const auto& r : rows) os << to_string(r) << '\n';
}

inline void write_cone(std::ostream& os, const ConeH& c) {
  os << "H " << c.dim << ' ' << c.ineqs.size() << ' ' << c.eqs.size() << '\n';
  write_rows(os, c.ineqs);
  write_rows(os, c.eqs);
}

inline void write_cone(std::ostream& os, const ConeV& c) {
  os << "V " << c.dim << ' ' << c.rays.size() << ' ' << c.lin.size() << '\n';
  write_rows(os, c.rays);
  write_rows(os, c.lin);
}

namespace detail {

inline IntMatrix read_rows(std::istream& is, std::size_t count, std::size_t dim) {
  IntMatrix rows;
  std::string line;
  while (rows.size() < count && std::getline(is, line)) {
    std::istringstream ls(line);
    IntVec row;
    std::string tok;
    while (ls >> tok) row.emplace_back(tok);
    if (row.empty()) continue;
    if (row.size() != dim) throw Error("cone file: row of length " + std::to_string(row.size()) + ", expected " + std::to_string(dim));
    rows.push_back(std::move(row));
  }
  if (rows.size() != count) throw Error("cone file: truncated");
  return rows;
}

inline std::tuple<char, std::size_t, std::size_t, std::size_t> read_header(std::istream& is) {
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) break;
  std::istringstream hs(line);
  char kind = 0;
  std::size_t dim = 0, a = 0, b = 0;
  if (!(hs >> kind >> dim >> a >> b) || (kind != 'H' && kind != 'V')) throw Error("cone file: malformed header '" + line + "'");
  return {kind, dim, a, b};
}

}  // namespace detail

inline ConeH read_cone_h(std::istream& is) {
  auto [kind, dim, a, b] = detail::read_header(is);
  if (kind != 'H') throw Error("cone file: expected an H description");
  ConeH c;
  c.dim = dim;
  c.ineqs = detail::read_rows(is, a, dim);
  c.eqs = detail::read_rows(is, b, dim);
  return c;
}

inline ConeV read_cone_v(std::istream& is) {
  auto [kind, dim, a, b] = detail::read_header(is);
  if (kind != 'V') throw Error("cone file: expected a V description");
  ConeV c;
  c.dim = dim;
  c.rays = detail::read_rows(is, a, dim);
  c.lin = detail::read_rows(is, b, dim);
  return c;
}

}  // namespace tpcone
