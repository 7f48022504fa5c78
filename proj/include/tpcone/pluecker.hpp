#pragma once

// Index-set combinatorics for Pluecker coordinates of Gr(n, 2n): naming,
// lexicographic ranking, the minor <-> Grassmannian embedding, the dihedral
// symmetry action and the ST0 test.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tpcone/arith.hpp"

namespace tpcone {

inline std::int64_t binomial(int a, int b) {
  if (b < 0 || a < 0 || b > a) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

/// A sorted n-subset of {1..2n}, stored as a bitmask (bit k-1 <=> element k).
class PluckerIndex {
 public:
  PluckerIndex() = default;

  PluckerIndex(int n, std::uint32_t mask) : n_(n), mask_(mask) { validate(); }

  PluckerIndex(int n, const std::vector<int>& elements) : n_(n) {
    for (int e : elements) {
      if (e < 1 || e > 2 * n) throw Error("index " + std::to_string(e) + " out of range 1.." + std::to_string(2 * n));
      std::uint32_t bit = 1u << (e - 1);
      if (mask_ & bit) throw Error("repeated index " + std::to_string(e));
      mask_ |= bit;
    }
    validate();
  }

  int n() const { return n_; }
  std::uint32_t mask() const { return mask_; }
  bool contains(int e) const { return e >= 1 && e <= 2 * n_ && (mask_ >> (e - 1)) & 1u; }

  std::vector<int> elements() const {
    std::vector<int> out;
    for (int e = 1; e <= 2 * n_; ++e)
      if (contains(e)) out.push_back(e);
    return out;
  }

  /// Bracket form with spaces, e.g. "[1 3 6 8]".
  std::string str() const {
    std::string s = "[";
    bool first = true;
    for (int e : elements()) {
      if (!first) s += ' ';
      s += std::to_string(e);
      first = false;
    }
    return s + "]";
  }

  /// Compact digit form, e.g. "1368"; only meaningful for 2n <= 9.
  std::string digits() const {
    std::string s;
    for (int e : elements()) s += std::to_string(e);
    return s;
  }

  friend bool operator==(const PluckerIndex&, const PluckerIndex&) = default;

 private:
  void validate() const {
    if (n_ < 1 || 2 * n_ > 30) throw Error("unsupported order n=" + std::to_string(n_));
    if (mask_ >> (2 * n_)) throw Error("index set exceeds 1..2n");
    if (std::popcount(mask_) != n_)
      throw Error("index set must have exactly n=" + std::to_string(n_) + " elements");
  }

  int n_ = 0;
  std::uint32_t mask_ = 0;
};

/// Position of S among the sorted n-subsets of {1..2n} in lexicographic order
/// (combinatorial number system).
inline std::size_t lex_rank(const PluckerIndex& s) {
  const int m = 2 * s.n();
  const int n = s.n();
  std::size_t r = 0;
  int prev = 0;
  int k = 0;
  for (int e : s.elements()) {
    ++k;
    for (int v = prev + 1; v < e; ++v) r += static_cast<std::size_t>(binomial(m - v, n - k));
    prev = e;
  }
  return r;
}

inline PluckerIndex lex_unrank(int n, std::size_t rank) {
  const int m = 2 * n;
  if (rank >= static_cast<std::size_t>(binomial(m, n))) throw Error("rank out of range");
  std::vector<int> out;
  int v = 1;
  for (int k = 1; k <= n; ++k) {
    while (true) {
      auto block = static_cast<std::size_t>(binomial(m - v, n - k));
      if (rank < block) break;
      rank -= block;
      ++v;
    }
    out.push_back(v++);
  }
  return PluckerIndex(n, out);
}

/// Parses "[1 3 6 8]" or the digit-packed "[1368]" (2n <= 9 only).
inline PluckerIndex parse_index(std::string_view text, int n) {
  auto b = text.find('[');
  auto e = text.find(']');
  if (b == std::string_view::npos || e == std::string_view::npos || e < b)
    throw Error("malformed bracket: '" + std::string(text) + "'");
  std::string_view body = text.substr(b + 1, e - b - 1);
  std::vector<int> elems;
  bool has_space = body.find_first_of(" \t,") != std::string_view::npos;
  if (!has_space && body.size() > 1) {
    if (2 * n > 9) throw Error("digit-packed brackets require 2n <= 9: '" + std::string(text) + "'");
    for (char c : body) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw Error("malformed bracket: '" + std::string(text) + "'");
      elems.push_back(c - '0');
    }
  } else {
    std::size_t i = 0;
    while (i < body.size()) {
      char c = body[i];
      if (c == ' ' || c == '\t' || c == ',') {
        ++i;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(c))) throw Error("malformed bracket: '" + std::string(text) + "'");
      int v = 0;
      while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) v = v * 10 + (body[i++] - '0');
      elems.push_back(v);
    }
  }
  if (static_cast<int>(elems.size()) != n)
    throw Error("bracket '" + std::string(text) + "' does not have n=" + std::to_string(n) + " elements");
  return PluckerIndex(n, elems);
}

/// Index sets of one order in lexicographic order, with O(1) rank lookup.
class PluckerSpace {
 public:
  explicit PluckerSpace(int n) : n_(n) {
    if (n < 1 || n > 7) throw Error("unsupported order n=" + std::to_string(n));
    const auto count = static_cast<std::size_t>(binomial(2 * n, n));
    rank_of_mask_.assign(std::size_t{1} << (2 * n), -1);
    indices_.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
      indices_.push_back(lex_unrank(n, r));
      rank_of_mask_[indices_.back().mask()] = static_cast<int>(r);
    }
  }

  int n() const { return n_; }
  std::size_t size() const { return indices_.size(); }
  const PluckerIndex& operator[](std::size_t r) const { return indices_[r]; }
  const std::vector<PluckerIndex>& indices() const { return indices_; }

  std::size_t rank(const PluckerIndex& s) const {
    if (s.n() != n_) throw Error("index set of wrong order");
    return static_cast<std::size_t>(rank_of_mask_[s.mask()]);
  }
  std::size_t rank(std::uint32_t mask) const { return rank(PluckerIndex(n_, mask)); }

 private:
  int n_;
  std::vector<PluckerIndex> indices_;
  std::vector<int> rank_of_mask_;
};

/// Row/column sets of a minor of an n x n matrix.
struct MinorSpec {
  std::vector<int> rows;
  std::vector<int> cols;

  friend bool operator==(const MinorSpec&, const MinorSpec&) = default;
};

inline void validate_minor(const MinorSpec& m, int n) {
  if (m.rows.size() != m.cols.size()) throw Error("minor row and column sets differ in size");
  auto check = [n](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) throw Error("minor index repeated");
    for (int x : v)
      if (x < 1 || x > n) throw Error("minor index out of range");
  };
  check(m.rows);
  check(m.cols);
}

/// I'' = I u {2n+1-i : i in [n] \ I'}.
inline PluckerIndex embed_minor(const MinorSpec& m, int n) {
  validate_minor(m, n);
  std::uint32_t mask = 0;
  for (int i : m.rows) mask |= 1u << (i - 1);
  std::uint32_t cols = 0;
  for (int c : m.cols) cols |= 1u << (c - 1);
  for (int i = 1; i <= n; ++i)
    if (!((cols >> (i - 1)) & 1u)) mask |= 1u << (2 * n + 1 - i - 1);
  return PluckerIndex(n, mask);
}

/// Inverse of embed_minor: rows I'' n [n], columns {2n+1-x : x in [n+1..2n] \ I''}.
inline MinorSpec extract_minor(const PluckerIndex& s) {
  const int n = s.n();
  MinorSpec m;
  for (int i = 1; i <= n; ++i)
    if (s.contains(i)) m.rows.push_back(i);
  for (int x = 2 * n; x > n; --x)
    if (!s.contains(x)) m.cols.push_back(2 * n + 1 - x);
  return m;
}

/// Integer exponent vector of a Laurent monomial in the Pluecker coordinates,
/// indexed by lexicographic rank.
struct RatioVector {
  int n = 0;
  std::vector<std::int64_t> alpha;

  RatioVector() = default;
  explicit RatioVector(int order) : n(order), alpha(static_cast<std::size_t>(binomial(2 * order, order)), 0) {}
  RatioVector(int order, std::vector<std::int64_t> a) : n(order), alpha(std::move(a)) {
    if (alpha.size() != static_cast<std::size_t>(binomial(2 * n, n))) throw Error("ratio vector has wrong length");
  }

  std::size_t size() const { return alpha.size(); }
  bool is_zero() const {
    return std::all_of(alpha.begin(), alpha.end(), [](std::int64_t x) { return x == 0; });
  }

  IntVec to_int() const { return IntVec(alpha.begin(), alpha.end()); }

  static RatioVector from_int(int n, const IntVec& v) {
    RatioVector r(n);
    if (v.size() != r.size()) throw Error("ratio vector has wrong length");
    for (std::size_t i = 0; i < v.size(); ++i) r.alpha[i] = v[i].convert_to<std::int64_t>();
    return r;
  }

  RatioVector operator-() const {
    RatioVector r = *this;
    for (auto& x : r.alpha) x = -x;
    return r;
  }
  RatioVector& operator+=(const RatioVector& o) {
    if (o.n != n) throw Error("ratio vectors of different order");
    for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] += o.alpha[i];
    return *this;
  }
  RatioVector& operator-=(const RatioVector& o) { return *this += -o; }
  friend RatioVector operator+(RatioVector a, const RatioVector& b) { return a += b; }
  friend RatioVector operator-(RatioVector a, const RatioVector& b) { return a -= b; }

  friend bool operator==(const RatioVector&, const RatioVector&) = default;
  friend auto operator<=>(const RatioVector&, const RatioVector&) = default;
};

/// Shared, lazily built index space for order n.
inline const PluckerSpace& space_of(int n) {
  static std::vector<std::unique_ptr<PluckerSpace>> cache = [] {
    std::vector<std::unique_ptr<PluckerSpace>> c;
    for (int k = 0; k <= 7; ++k) c.push_back(k >= 1 ? std::make_unique<PluckerSpace>(k) : nullptr);
    return c;
  }();
  if (n < 1 || n > 7) throw Error("unsupported order n=" + std::to_string(n));
  return *cache[static_cast<std::size_t>(n)];
}

namespace detail {

template <class F>
std::uint32_t map_mask(std::uint32_t mask, int n, F&& f) {
  std::uint32_t out = 0;
  for (int e = 1; e <= 2 * n; ++e)
    if ((mask >> (e - 1)) & 1u) out |= 1u << (f(e) - 1);
  return out;
}

template <class F>
RatioVector permute(const RatioVector& v, F&& f) {
  const PluckerSpace& space = space_of(v.n);
  RatioVector out(v.n);
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (v.alpha[r] == 0) continue;
    out.alpha[space.rank(map_mask(space[r].mask(), v.n, f))] = v.alpha[r];
  }
  return out;
}

}  // namespace detail

/// i -> i+1 with 2n -> 1.
inline int cyclic_next(int i, int n) { return i % (2 * n) + 1; }

inline PluckerIndex cyclic_shift(const PluckerIndex& s) {
  return PluckerIndex(s.n(), detail::map_mask(s.mask(), s.n(), [&](int e) { return cyclic_next(e, s.n()); }));
}

inline PluckerIndex reflect(const PluckerIndex& s) {
  return PluckerIndex(s.n(), detail::map_mask(s.mask(), s.n(), [&](int e) { return 2 * s.n() + 1 - e; }));
}

inline RatioVector cyclic_shift(const RatioVector& v) {
  return detail::permute(v, [&](int e) { return cyclic_next(e, v.n); });
}

inline RatioVector reflect(const RatioVector& v) {
  return detail::permute(v, [&](int e) { return 2 * v.n + 1 - e; });
}

struct St0Result {
  bool ok = true;
  std::vector<std::int64_t> defect;  // defect[i-1] = sum of alpha_S over S containing i
};

inline St0Result st0_check(const RatioVector& v) {
  const PluckerSpace& space = space_of(v.n);
  St0Result res;
  res.defect.assign(static_cast<std::size_t>(2 * v.n), 0);
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (v.alpha[r] == 0) continue;
    for (int e : space[r].elements()) res.defect[static_cast<std::size_t>(e - 1)] += v.alpha[r];
  }
  res.ok = std::all_of(res.defect.begin(), res.defect.end(), [](std::int64_t x) { return x == 0; });
  return res;
}

/// Total numerator degree minus total denominator degree.
inline std::int64_t degree_balance(const RatioVector& v) {
  std::int64_t s = 0;
  for (auto a : v.alpha) s += a;
  return s;
}

/// The 2n ST0 equations as rows over R^N.
inline IntMatrix st0_equations(int n) {
  const PluckerSpace& space = space_of(n);
  IntMatrix rows(static_cast<std::size_t>(2 * n), IntVec(space.size(), 0));
  for (std::size_t r = 0; r < space.size(); ++r)
    for (int e : space[r].elements()) rows[static_cast<std::size_t>(e - 1)][r] = 1;
  return rows;
}

}  // namespace tpcone
