#pragma once

// Exact-rational two-phase simplex with Bland's rule. Infeasible standard-form
// problems return a Farkas certificate read off the phase-one tableau.

#include <cstddef>
#include <optional>
#include <vector>

#include "tpcone/arith.hpp"

namespace tpcone {

enum class LpStatus { optimal, infeasible, unbounded };

struct StandardFormResult {
  LpStatus status = LpStatus::infeasible;
  RatVec x;        // optimal basic solution (status == optimal)
  Rational value;  // optimal objective value
  RatVec farkas;   // status == infeasible: A^T y <= 0 and b.y > 0
};

namespace detail {

class Tableau {
 public:
  // Rows: m constraint rows, then the objective row (reduced costs | -value).
  Tableau(const RatMatrix& a, const RatVec& b) : m_(a.size()), n_(a.empty() ? 0 : a.front().size()) {
    sign_.assign(m_, 1);
    t_.assign(m_ + 1, RatVec(n_ + m_ + 1));
    for (std::size_t i = 0; i < m_; ++i) {
      if (a[i].size() != n_) throw Error("simplex: ragged constraint matrix");
      if (b[i] < 0) sign_[i] = -1;
      for (std::size_t j = 0; j < n_; ++j)
        if (a[i][j] != 0) t_[i][j] = sign_[i] > 0 ? a[i][j] : Rational(-a[i][j]);
      t_[i][n_ + i] = 1;
      t_[i][rhs()] = sign_[i] > 0 ? b[i] : Rational(-b[i]);
    }
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;
  }

  std::size_t rhs() const { return n_ + m_; }

  void set_costs(const RatVec& cost) {
    // cost over all n_ + m_ columns; reduced costs d_j = c_j - c_B B^-1 A_j.
    cost_ = cost;
    RatVec& z = t_[m_];
    for (std::size_t j = 0; j <= rhs(); ++j) z[j] = j < rhs() ? cost[j] : Rational(0);
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational& cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= rhs(); ++j)
        if (t_[i][j] != 0) z[j] -= cb * t_[i][j];
    }
  }

  // Returns false if unbounded. Columns >= allowed are never entered.
  bool optimize(std::size_t allowed, std::size_t* unbounded_col = nullptr) {
    while (true) {
      std::size_t enter = SIZE_MAX;
      for (std::size_t j = 0; j < allowed; ++j)
        if (t_[m_][j] < 0) {
          enter = j;
          break;
        }
      if (enter == SIZE_MAX) return true;
      std::size_t leave = SIZE_MAX;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][enter] <= 0) continue;
        Rational ratio = t_[i][rhs()] / t_[i][enter];
        if (leave == SIZE_MAX || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == SIZE_MAX) {
        if (unbounded_col) *unbounded_col = enter;
        return false;
      }
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    Rational p = t_[row][col];
    RatVec& pr = t_[row];
    for (auto& v : pr)
      if (v != 0) v /= p;
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j <= rhs(); ++j)
      if (pr[j] != 0) nz.push_back(j);
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == row || t_[i][col] == 0) continue;
      Rational f = t_[i][col];
      for (std::size_t j : nz) t_[i][j] -= f * pr[j];
    }
    basis_[row] = col;
  }

  Rational objective_value() const { return -t_[m_][rhs()]; }

  RatVec solution() const {
    RatVec x(n_);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = t_[i][rhs()];
    return x;
  }

  // y = c_B^T B^-1 in the original (unflipped) row signs.
  RatVec duals() const {
    RatVec y(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      Rational s = 0;
      for (std::size_t k = 0; k < m_; ++k) {
        const Rational& cb = cost_[basis_[k]];
        if (cb != 0 && t_[k][n_ + i] != 0) s += cb * t_[k][n_ + i];
      }
      y[i] = sign_[i] > 0 ? s : Rational(-s);
    }
    return y;
  }

  // Pivots zero-level artificials out of the basis where possible.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (t_[i][j] != 0) {
          pivot(i, j);
          break;
        }
    }
  }

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }

 private:
  std::size_t m_, n_;
  std::vector<int> sign_;
  RatMatrix t_;
  std::vector<std::size_t> basis_;
  RatVec cost_;
};

}  // namespace detail

/// min c.x subject to A x = b, x >= 0.
inline StandardFormResult solve_standard(const RatMatrix& a, const RatVec& b, const RatVec& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw Error("simplex: rhs size mismatch");
  for (const auto& row : a)
    if (row.size() != n) throw Error("simplex: cost size mismatch");
  StandardFormResult res;
  detail::Tableau tab(a, b);
  RatVec phase1(n + m, 0);
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1;
  tab.set_costs(phase1);
  tab.optimize(n + m);
  if (tab.objective_value() > 0) {
    res.status = LpStatus::infeasible;
    res.farkas = tab.duals();
    return res;
  }
  tab.expel_artificials();
  RatVec phase2(n + m, 0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  tab.set_costs(phase2);
  if (!tab.optimize(n)) {
    res.status = LpStatus::unbounded;
    return res;
  }
  res.status = LpStatus::optimal;
  res.x = tab.solution();
  res.value = tab.objective_value();
  return res;
}

enum class Sense { le, eq, ge };

/// min objective.x over rows, with per-variable sign restrictions.
struct LpProblem {
  struct Row {
    RatVec a;
    Sense sense = Sense::le;
    Rational rhs = 0;
  };

  std::size_t vars = 0;
  std::vector<bool> nonneg;  // empty: all free
  RatVec objective;          // empty: feasibility only
  std::vector<Row> rows;

  void add(RatVec a, Sense s, Rational rhs) { rows.push_back({std::move(a), s, std::move(rhs)}); }
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  RatVec x;
  Rational value;
};

inline LpSolution solve(const LpProblem& lp) {
  const std::size_t nv = lp.vars;
  std::vector<std::size_t> pos(nv), neg(nv, SIZE_MAX);
  std::size_t cols = 0;
  for (std::size_t k = 0; k < nv; ++k) {
    pos[k] = cols++;
    bool free = lp.nonneg.empty() || !lp.nonneg[k];
    if (free) neg[k] = cols++;
  }
  std::size_t slack0 = cols;
  for (const auto& r : lp.rows)
    if (r.sense != Sense::eq) ++cols;
  RatMatrix a(lp.rows.size(), RatVec(cols));
  RatVec b(lp.rows.size());
  std::size_t s = slack0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& r = lp.rows[i];
    if (r.a.size() != nv) throw Error("LP row has wrong dimension");
    for (std::size_t k = 0; k < nv; ++k) {
      if (r.a[k] == 0) continue;
      a[i][pos[k]] = r.a[k];
      if (neg[k] != SIZE_MAX) a[i][neg[k]] = -r.a[k];
    }
    if (r.sense == Sense::le) a[i][s++] = 1;
    if (r.sense == Sense::ge) a[i][s++] = -1;
    b[i] = r.rhs;
  }
  RatVec c(cols);
  for (std::size_t k = 0; k < lp.objective.size(); ++k) {
    c[pos[k]] = lp.objective[k];
    if (neg[k] != SIZE_MAX) c[neg[k]] = -lp.objective[k];
  }
  StandardFormResult sf = solve_standard(a, b, c);
  LpSolution out;
  out.status = sf.status;
  if (sf.status == LpStatus::optimal) {
    out.value = sf.value;
    out.x.assign(nv, 0);
    for (std::size_t k = 0; k < nv; ++k) {
      out.x[k] = sf.x[pos[k]];
      if (neg[k] != SIZE_MAX) out.x[k] -= sf.x[neg[k]];
    }
  }
  return out;
}

/// Result of expressing a target as a non-negative combination of generators
/// plus an arbitrary combination of lineality vectors.
struct ConicCombination {
  bool feasible = false;
  RatVec coefficients;      // one per generator, >= 0
  RatVec lin_coefficients;  // one per lineality vector
  IntVec separator;         // infeasible: h.g <= 0 for all g, h.l = 0, h.target > 0
};

/// Solves target = sum c_k gens_k + sum d_l lin_l, c >= 0. Either certificate
/// is re-verified exactly before returning.
inline ConicCombination conic_combination(const IntMatrix& gens, const IntMatrix& lin, const IntVec& target) {
  const std::size_t dim = target.size();
  const std::size_t k = gens.size(), l = lin.size();
  RatMatrix a(dim, RatVec(k + 2 * l));
  for (std::size_t j = 0; j < k; ++j) {
    if (gens[j].size() != dim) throw Error("generator has wrong dimension");
    for (std::size_t i = 0; i < dim; ++i) a[i][j] = gens[j][i];
  }
  for (std::size_t j = 0; j < l; ++j) {
    if (lin[j].size() != dim) throw Error("lineality vector has wrong dimension");
    for (std::size_t i = 0; i < dim; ++i) {
      a[i][k + 2 * j] = lin[j][i];
      a[i][k + 2 * j + 1] = -lin[j][i];
    }
  }
  RatVec b(target.begin(), target.end());
  StandardFormResult sf = solve_standard(a, b, RatVec(k + 2 * l, 0));
  ConicCombination out;
  if (sf.status == LpStatus::optimal) {
    out.feasible = true;
    out.coefficients.assign(sf.x.begin(), sf.x.begin() + static_cast<std::ptrdiff_t>(k));
    for (std::size_t j = 0; j < l; ++j) out.lin_coefficients.push_back(sf.x[k + 2 * j] - sf.x[k + 2 * j + 1]);
    RatVec check(dim, 0);
    for (std::size_t j = 0; j < k; ++j)
      if (out.coefficients[j] != 0)
        for (std::size_t i = 0; i < dim; ++i) check[i] += out.coefficients[j] * gens[j][i];
    for (std::size_t j = 0; j < l; ++j)
      if (out.lin_coefficients[j] != 0)
        for (std::size_t i = 0; i < dim; ++i) check[i] += out.lin_coefficients[j] * lin[j][i];
    for (std::size_t i = 0; i < dim; ++i)
      if (check[i] != target[i]) throw Error("conic combination failed exact re-verification");
    return out;
  }
  out.feasible = false;
  out.separator = primitive(sf.farkas);
  for (const auto& g : gens)
    if (dot(out.separator, g) > 0) throw Error("separating functional failed exact re-verification");
  for (const auto& v : lin)
    if (dot(out.separator, v) != 0) throw Error("separating functional failed exact re-verification");
  if (dot(out.separator, target) <= 0) throw Error("separating functional failed exact re-verification");
  return out;
}

}  // namespace tpcone
