#pragma once

// Exact integer/rational vectors and the linear algebra shared by every module:
// primitive normalization, echelon forms, rank and null spaces.

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace tpcone {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

using IntVec = std::vector<Integer>;
using RatVec = std::vector<Rational>;
using IntMatrix = std::vector<IntVec>;
using RatMatrix = std::vector<RatVec>;

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A computation exceeded a configured size or time budget.
struct ResourceLimit : Error {
  using Error::Error;
};

inline IntVec to_int_vec(const std::vector<int>& v) {
  return IntVec(v.begin(), v.end());
}

inline RatVec to_rat_vec(const IntVec& v) {
  return RatVec(v.begin(), v.end());
}

inline bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

inline bool is_zero(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

inline std::size_t nonzeros(const IntVec& v) {
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [](const Integer& x) { return x != 0; }));
}

template <class T, class U>
auto dot(const std::vector<T>& a, const std::vector<U>& b) {
  if (a.size() != b.size()) throw Error("dot: dimension mismatch");
  decltype(T{} * U{}) s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

/// Divides by the gcd of the entries; the zero vector is left alone.
inline IntVec primitive(IntVec v) {
  Integer g = 0;
  for (const auto& x : v) {
    if (x != 0) g = boost::multiprecision::gcd(g, x);
    if (g == 1) return v;
  }
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

/// Clears denominators and divides out the content. Direction is preserved.
inline IntVec primitive(const RatVec& v) {
  Integer l = 1;
  for (const auto& x : v)
    if (x != 0) l = boost::multiprecision::lcm(l, Integer(denominator(x)));
  IntVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = Integer(numerator(v[i])) * (l / Integer(denominator(v[i])));
  return primitive(std::move(out));
}

/// Primitive integer vector whose first nonzero entry is positive; used to
/// identify a line regardless of orientation.
inline IntVec line_canonical(IntVec v) {
  v = primitive(std::move(v));
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    break;
  }
  return v;
}

inline std::string to_string(const IntVec& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

inline std::string to_string(const RatVec& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

/// Row echelon data produced by forward elimination in column order.
///
/// The pivot of each row is the first column (left to right) in which the
/// remaining rows are not all zero, so pivot and free columns depend only on
/// the column order, never on entry magnitudes.
struct Echelon {
  IntMatrix rows;                    // nonzero echelon rows, integer, primitive
  std::vector<std::size_t> pivots;   // pivot column of each row
  std::size_t cols = 0;

  std::size_t rank() const { return pivots.size(); }

  std::vector<std::size_t> free_columns() const {
    std::vector<std::size_t> out;
    std::size_t k = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      if (k < pivots.size() && pivots[k] == c)
        ++k;
      else
        out.push_back(c);
    }
    return out;
  }
};

/// Fraction-free Gaussian elimination over the integers.
inline Echelon echelon(IntMatrix m, std::size_t cols) {
  Echelon e;
  e.cols = cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    // Prefer the shortest nonzero row as pivot to keep entries small; the
    // pivot column itself is fixed by position.
    std::size_t best_nnz = SIZE_MAX;
    for (std::size_t i = r; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      std::size_t z = nonzeros(m[i]);
      if (z < best_nnz) {
        best_nnz = z;
        p = i;
      }
    }
    if (best_nnz == SIZE_MAX) continue;
    std::swap(m[r], m[p]);
    const IntVec& piv = m[r];
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      Integer f = m[i][c];
      Integer g = piv[c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] = g * m[i][k] - f * piv[k];
      m[i] = primitive(std::move(m[i]));
    }
    e.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  e.rows = std::move(m);
  return e;
}

inline Echelon echelon(const IntMatrix& m) {
  return echelon(m, m.empty() ? 0 : m.front().size());
}

inline std::size_t rank(const IntMatrix& m) { return echelon(m).rank(); }

inline std::size_t rank(const IntMatrix& m, std::size_t cols) {
  return echelon(m, cols).rank();
}

/// Reduced row echelon form over the rationals (pivots equal 1).
inline RatMatrix rref(const Echelon& e) {
  RatMatrix out;
  out.reserve(e.rows.size());
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    RatVec row(e.cols);
    Rational p = e.rows[i][e.pivots[i]];
    for (std::size_t k = 0; k < e.cols; ++k) row[k] = Rational(e.rows[i][k]) / p;
    out.push_back(std::move(row));
  }
  for (std::size_t i = out.size(); i-- > 0;) {
    std::size_t c = e.pivots[i];
    for (std::size_t j = 0; j < i; ++j) {
      if (out[j][c] == 0) continue;
      Rational f = out[j][c];
      for (std::size_t k = c; k < e.cols; ++k) out[j][k] -= f * out[i][k];
    }
  }
  return out;
}

/// Integer basis of {x : m x = 0}, one primitive vector per free column.
inline IntMatrix null_space(const IntMatrix& m, std::size_t cols) {
  Echelon e = echelon(m, cols);
  RatMatrix r = rref(e);
  IntMatrix basis;
  for (std::size_t f : e.free_columns()) {
    RatVec v(cols);
    v[f] = 1;
    for (std::size_t i = 0; i < r.size(); ++i) v[e.pivots[i]] = -r[i][f];
    basis.push_back(primitive(v));
  }
  return basis;
}

}  // namespace tpcone
