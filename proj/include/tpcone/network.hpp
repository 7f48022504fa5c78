#pragma once

// Planar-network parameterization of totally positive matrices by face
// weights, and exact Pluecker polynomials via non-intersecting path families.
//
// Geometry. Vertices sit on an n x n grid (r, c), rows counted from the top,
// columns from the left; edges point right and down. Source i enters row i
// from the left, sink j leaves the grid at the bottom of column n+1-j. Faces
// are slots (r, c), r, c in 1..n:
//   (r, 1), r < n   the gap left of the grid between rows r and r+1
//   (n, 1)          the bottom-left corner face
//   (n, c), c > 1   the gap below the grid between columns c-1 and c
//   (r, c) else     the unit square with corners in rows r, r+1, columns c-1, c
// A path's weight is the product of the faces on its right-hand side, i.e.
// below-left of it. The boundary slots (column 1 and row n) are pinned to 1 in
// the normalized chart, leaving d = (n-1)^2 free weights ordered row-major:
// (1,2), (1,3), ..., (n-1,n).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tpcone/arith.hpp"
#include "tpcone/parallel.hpp"
#include "tpcone/pluecker.hpp"
#include "tpcone/polynomial.hpp"
#include "tpcone/random.hpp"

namespace tpcone {

enum class Chart {
  normalized,  // (n-1)^2 interior faces, boundary pinned to 1
  full,        // all n^2 face slots
};

/// A monotone lattice path from a source row to a sink column.
struct LatticePath {
  int source_row = 0;
  int sink_column = 0;
  std::vector<int> turn_rows;  // turn_rows[c-1]: row of the edge entering column c (column 1: source row)
  std::uint32_t vertices = 0;  // bitmask over grid vertices (r-1)*n + (c-1)
};

class PlanarNetwork {
 public:
  explicit PlanarNetwork(int n, Chart chart = Chart::normalized) : n_(n), chart_(chart) {
    if (n < 1 || n > 5) throw Error("planar network supports 1 <= n <= 5");
    if (chart == Chart::full && n * n > static_cast<int>(kMaxVariables)) throw Error("full chart supports n <= 4");
  }

  int n() const { return n_; }
  Chart chart() const { return chart_; }

  std::size_t num_weights() const {
    return chart_ == Chart::full ? static_cast<std::size_t>(n_ * n_) : static_cast<std::size_t>((n_ - 1) * (n_ - 1));
  }

  static bool is_boundary_face(int n, int r, int c) { return c == 1 || r == n; }

  /// Variable index of face slot (r, c), or nullopt if pinned to 1.
  std::optional<std::size_t> face_variable(int r, int c) const {
    if (r < 1 || r > n_ || c < 1 || c > n_) throw Error("face slot out of range");
    if (chart_ == Chart::full) return static_cast<std::size_t>((r - 1) * n_ + (c - 1));
    if (is_boundary_face(n_, r, c)) return std::nullopt;
    return static_cast<std::size_t>((r - 1) * (n_ - 1) + (c - 2));
  }

  /// Face slots in variable order.
  std::vector<std::pair<int, int>> variable_faces() const {
    std::vector<std::pair<int, int>> out(num_weights());
    for (int r = 1; r <= n_; ++r)
      for (int c = 1; c <= n_; ++c)
        if (auto v = face_variable(r, c)) out[*v] = {r, c};
    return out;
  }

  int source_row(int i) const { return i; }
  int sink_column(int j) const { return n_ + 1 - j; }

  /// All monotone paths from source i to sink j.
  std::vector<LatticePath> paths(int i, int j) const {
    check_entry(i, j);
    std::vector<LatticePath> out;
    LatticePath p;
    p.source_row = source_row(i);
    p.sink_column = sink_column(j);
    p.turn_rows.push_back(p.source_row);
    extend(p, out);
    return out;
  }

  /// Weight monomial of one path.
  Monomial path_monomial(const LatticePath& p) const {
    Monomial m;
    for (int c = 1; c <= p.sink_column; ++c)
      for (int r = p.turn_rows[static_cast<std::size_t>(c - 1)]; r <= n_; ++r)
        if (auto v = face_variable(r, c)) m.e[*v] += 1;
    return m;
  }

  /// x_ij: sum of path weights from source i to sink j.
  Polynomial entry_polynomial(int i, int j) const {
    Polynomial p(num_weights());
    for (const auto& path : paths(i, j)) p.add_term(path_monomial(path), 1);
    return p;
  }

  /// Minor of the network matrix by Lindstroem's lemma: one term per
  /// vertex-disjoint path family joining the sorted rows to the sorted columns.
  Polynomial minor_polynomial(const MinorSpec& m) const {
    validate_minor(m, n_);
    std::vector<int> rows = m.rows, cols = m.cols;
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    Polynomial out(num_weights());
    if (rows.empty()) {
      out.add_term(Monomial{}, 1);
      return out;
    }
    std::vector<std::vector<LatticePath>> options;
    for (std::size_t k = 0; k < rows.size(); ++k) options.push_back(paths(rows[k], cols[k]));
    families(options, 0, 0, Monomial{}, out);
    return out;
  }

  Polynomial plucker_polynomial(const PluckerIndex& s) const {
    if (s.n() != n_) throw Error("index set of wrong order");
    return minor_polynomial(extract_minor(s));
  }

  /// All Pluecker polynomials in lexicographic order.
  std::vector<Polynomial> all_plucker_polynomials(unsigned threads = 1) const {
    const PluckerSpace& space = space_of(n_);
    std::vector<Polynomial> out(space.size());
    parallel_for(space.size(), threads, [&](std::size_t r) { out[r] = plucker_polynomial(space[r]); });
    return out;
  }

  /// Independent check of minor_polynomial: cofactor expansion of the
  /// symbolic entry matrix.
  Polynomial det_oracle(const MinorSpec& m) const {
    validate_minor(m, n_);
    std::vector<int> rows = m.rows, cols = m.cols;
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    const std::size_t k = rows.size();
    std::vector<std::vector<Polynomial>> mat(k, std::vector<Polynomial>(k));
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) mat[a][b] = entry_polynomial(rows[a], cols[b]);
    std::vector<std::size_t> col_ids(k);
    for (std::size_t b = 0; b < k; ++b) col_ids[b] = b;
    return cofactor(mat, 0, col_ids);
  }

  Polynomial det_oracle(const PluckerIndex& s) const { return det_oracle(extract_minor(s)); }

  /// The network matrix at a point of the chart.
  template <class T>
  std::vector<std::vector<T>> matrix(const std::vector<T>& weights) const {
    std::vector<std::vector<T>> x(static_cast<std::size_t>(n_), std::vector<T>(static_cast<std::size_t>(n_)));
    for (int i = 1; i <= n_; ++i)
      for (int j = 1; j <= n_; ++j)
        x[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = entry_polynomial(i, j).evaluate(weights);
    return x;
  }

 private:
  void check_entry(int i, int j) const {
    if (i < 1 || i > n_ || j < 1 || j > n_) throw Error("matrix entry out of range");
  }

  std::uint32_t vertex_bit(int r, int c) const { return 1u << ((r - 1) * n_ + (c - 1)); }

  void extend(LatticePath& p, std::vector<LatticePath>& out) const {
    const int c = static_cast<int>(p.turn_rows.size());
    const int h = p.turn_rows.back();
    if (c == p.sink_column) {
      std::uint32_t mask = 0;
      for (int cc = 1; cc <= p.sink_column; ++cc) {
        int top = p.turn_rows[static_cast<std::size_t>(cc - 1)];
        int bottom = cc < p.sink_column ? p.turn_rows[static_cast<std::size_t>(cc)] : n_;
        for (int r = top; r <= bottom; ++r) mask |= vertex_bit(r, cc);
      }
      p.vertices = mask;
      out.push_back(p);
      return;
    }
    for (int next = h; next <= n_; ++next) {
      p.turn_rows.push_back(next);
      extend(p, out);
      p.turn_rows.pop_back();
    }
  }

  void families(const std::vector<std::vector<LatticePath>>& options, std::size_t k, std::uint32_t used,
                const Monomial& acc, Polynomial& out) const {
    if (k == options.size()) {
      out.add_term(acc, 1);
      return;
    }
    for (const auto& path : options[k]) {
      if (path.vertices & used) continue;
      families(options, k + 1, used | path.vertices, acc * path_monomial(path), out);
    }
  }

  Polynomial cofactor(const std::vector<std::vector<Polynomial>>& mat, std::size_t row,
                      const std::vector<std::size_t>& cols) const {
    if (cols.empty()) return Polynomial::constant(num_weights(), 1);
    Polynomial sum(num_weights());
    for (std::size_t t = 0; t < cols.size(); ++t) {
      std::vector<std::size_t> rest;
      for (std::size_t u = 0; u < cols.size(); ++u)
        if (u != t) rest.push_back(cols[u]);
      Polynomial term = mat[row][cols[t]] * cofactor(mat, row + 1, rest);
      if (t % 2 == 0)
        sum += term;
      else
        sum -= term;
    }
    return sum;
  }

  int n_;
  Chart chart_;
};

/// Support of a polynomial, sorted.
inline std::vector<std::vector<int>> newton_points(const Polynomial& p) {
  std::vector<std::vector<int>> out;
  for (const auto& [m, c] : p.sorted_terms()) out.push_back(m.exponents(p.nvars()));
  return out;
}

/// "n=<n> d=<d> coord=<bracket form>" followed by the terms.
inline void write_face_polynomial(std::ostream& os, const PluckerIndex& s, const Polynomial& p) {
  os << "n=" << s.n() << " d=" << p.nvars() << " coord=" << s.str() << '\n';
  write_terms(os, p);
}

struct FacePolynomialFile {
  PluckerIndex coord;
  Polynomial poly;
};

inline FacePolynomialFile read_face_polynomial(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw Error("empty polynomial file");
  int n = 0;
  std::size_t d = 0;
  auto npos = header.find("n=");
  auto dpos = header.find(" d=");
  auto cpos = header.find(" coord=");
  if (npos != 0 || dpos == std::string::npos || cpos == std::string::npos) throw Error("malformed header: '" + header + "'");
  n = std::stoi(header.substr(2, dpos - 2));
  d = static_cast<std::size_t>(std::stoul(header.substr(dpos + 3, cpos - dpos - 3)));
  PluckerIndex coord = parse_index(header.substr(cpos + 7), n);
  return {coord, read_terms(is, d)};
}

/// Positive weights, one per free face.
struct WeightAssignment {
  std::vector<Rational> values;

  static WeightAssignment random(std::size_t d, Rng& rng, std::int64_t lo = 1, std::int64_t hi = 100) {
    WeightAssignment w;
    for (std::size_t i = 0; i < d; ++i) w.values.emplace_back(rng.uniform(lo, hi));
    return w;
  }
};

/// Product of Pluecker polynomial values raised to the exponents of v.
inline Rational eval_ratio(const RatioVector& v, const std::vector<Polynomial>& pluckers, const WeightAssignment& w) {
  if (pluckers.size() != v.size()) throw Error("eval_ratio: dimension mismatch");
  for (const auto& x : w.values)
    if (x <= 0) throw Error("weights must be positive");
  Rational out = 1;
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (v.alpha[r] == 0) continue;
    Rational val = pluckers[r].evaluate(w.values);
    if (val <= 0) throw Error("non-positive Pluecker value at positive weights");
    Rational f = 1;
    for (std::int64_t k = 0; k < std::abs(v.alpha[r]); ++k) f *= val;
    if (v.alpha[r] > 0)
      out *= f;
    else
      out /= f;
  }
  return out;
}

enum class CheckMode { symbolic, sampled };

struct SubtractionFreeVerdict {
  CheckMode mode = CheckMode::symbolic;
  bool passed = false;
  std::size_t terms = 0;  // symbolic: number of terms of q - p
  std::optional<std::pair<std::vector<int>, std::string>> negative_term;  // counter-certificate
  std::size_t samples = 0;
  std::optional<std::vector<Integer>> failing_weights;  // sampled counter-example
};

namespace detail {

inline Polynomial product_of_powers(const RatioVector& v, const std::vector<Polynomial>& pluckers, int sign,
                                    std::size_t term_cap) {
  std::vector<const Polynomial*> factors;
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::int64_t k = 0; k < sign * v.alpha[r]; ++k) factors.push_back(&pluckers[r]);
  std::stable_sort(factors.begin(), factors.end(), [](auto* a, auto* b) { return a->size() < b->size(); });
  Polynomial acc = Polynomial::constant(pluckers.front().nvars(), 1);
  for (auto* f : factors) acc = acc.multiply(*f, term_cap);
  return acc;
}

}  // namespace detail

inline constexpr std::size_t kDefaultTermCap = 10'000'000;

/// Expands q - p for the ratio p/q exactly and reports whether every
/// coefficient is non-negative. Throws ResourceLimit past term_cap terms.
inline SubtractionFreeVerdict subtraction_free_symbolic(const RatioVector& v, const std::vector<Polynomial>& pluckers,
                                                        std::size_t term_cap = kDefaultTermCap) {
  if (!st0_check(v).ok) throw Error("subtraction-free check requires an ST0 ratio");
  Polynomial p = detail::product_of_powers(v, pluckers, +1, term_cap);
  Polynomial q = detail::product_of_powers(v, pluckers, -1, term_cap);
  q -= p;
  SubtractionFreeVerdict out;
  out.mode = CheckMode::symbolic;
  out.terms = q.size();
  out.passed = true;
  for (const auto& [m, c] : q.sorted_terms()) {
    if (c < 0) {
      out.passed = false;
      out.negative_term = std::make_pair(m.exponents(q.nvars()), c.str());
      break;
    }
  }
  return out;
}

/// Necessary condition only: q(w) - p(w) > 0 at `samples` random integer
/// weight assignments drawn from {1..100}.
inline SubtractionFreeVerdict subtraction_free_sampled(const RatioVector& v, const std::vector<Polynomial>& pluckers,
                                                       std::size_t samples, Rng& rng) {
  if (!st0_check(v).ok) throw Error("subtraction-free check requires an ST0 ratio");
  SubtractionFreeVerdict out;
  out.mode = CheckMode::sampled;
  out.samples = samples;
  out.passed = true;
  const std::size_t d = pluckers.front().nvars();
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<Integer> w;
    for (std::size_t i = 0; i < d; ++i) w.emplace_back(rng.uniform(1, 100));
    Integer p = 1, q = 1;
    for (std::size_t r = 0; r < v.size(); ++r) {
      if (v.alpha[r] == 0) continue;
      Integer val = pluckers[r].evaluate(w);
      Integer f = boost::multiprecision::pow(val, static_cast<unsigned>(std::abs(v.alpha[r])));
      (v.alpha[r] > 0 ? p : q) *= f;
    }
    if (q - p <= 0) {
      out.passed = false;
      out.failing_weights = w;
      break;
    }
  }
  return out;
}

}  // namespace tpcone
