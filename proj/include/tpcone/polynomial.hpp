#pragma once

// Sparse multivariate polynomials with exact integer coefficients in up to 16
// variables (the face weights of a planar network).

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tpcone/arith.hpp"

namespace tpcone {

/// Fixed-width 128-bit coefficient; overflow throws instead of wrapping.
using Coefficient = boost::multiprecision::checked_int128_t;

inline constexpr std::size_t kMaxVariables = 16;

/// Exponent vector, one byte per variable.
struct Monomial {
  std::array<std::uint8_t, kMaxVariables> e{};

  static Monomial from(const std::vector<int>& exps) {
    if (exps.size() > kMaxVariables) throw Error("too many variables");
    Monomial m;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] < 0 || exps[i] > 255) throw Error("exponent out of range");
      m.e[i] = static_cast<std::uint8_t>(exps[i]);
    }
    return m;
  }

  std::vector<int> exponents(std::size_t nvars) const {
    return std::vector<int>(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(nvars));
  }

  Monomial& operator*=(const Monomial& o) {
    for (std::size_t i = 0; i < kMaxVariables; ++i) {
      unsigned s = unsigned{e[i]} + o.e[i];
      if (s > 255) throw ResourceLimit("monomial exponent overflow");
      e[i] = static_cast<std::uint8_t>(s);
    }
    return *this;
  }
  friend Monomial operator*(Monomial a, const Monomial& b) { return a *= b; }

  unsigned degree() const {
    unsigned d = 0;
    for (auto x : e) d += x;
    return d;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t w[2];
    std::memcpy(w, m.e.data(), sizeof w);
    std::uint64_t h = w[0] * 0x9E3779B97F4A7C15ull;
    h ^= (w[1] + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2));
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

class Polynomial {
 public:
  using Terms = std::unordered_map<Monomial, Coefficient, MonomialHash>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {
    if (nvars > kMaxVariables) throw Error("too many variables");
  }

  static Polynomial constant(std::size_t nvars, Coefficient c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_[Monomial{}] = c;
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const Terms& terms() const { return terms_; }

  void add_term(const Monomial& m, const Coefficient& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Coefficient coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Coefficient(0) : it->second;
  }

  /// Terms sorted by exponent vector (lexicographic), for deterministic output.
  std::vector<std::pair<Monomial, Coefficient>> sorted_terms() const {
    std::vector<std::pair<Monomial, Coefficient>> out(terms_.begin(), terms_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  bool all_coefficients_positive() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second > 0; });
  }

  Polynomial& operator+=(const Polynomial& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  /// Product; throws ResourceLimit once the result would exceed term_cap terms.
  Polynomial multiply(const Polynomial& o, std::size_t term_cap = SIZE_MAX) const {
    check(o);
    const Polynomial& big = size() >= o.size() ? *this : o;
    const Polynomial& small = size() >= o.size() ? o : *this;
    Polynomial r(nvars_);
    r.terms_.reserve(std::min(term_cap, big.size() * small.size()));
    for (const auto& [ms, cs] : small.terms_) {
      for (const auto& [mb, cb] : big.terms_) {
        r.add_term(ms * mb, cs * cb);
        if (r.terms_.size() > term_cap)
          throw ResourceLimit("polynomial product exceeds term cap of " + std::to_string(term_cap));
      }
    }
    return r;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) { return a.multiply(b); }

  /// Exact value at integer or rational points.
  template <class T>
  T evaluate(const std::vector<T>& x) const {
    if (x.size() != nvars_) throw Error("evaluation point has wrong dimension");
    T sum = 0;
    for (const auto& [m, c] : terms_) {
      T t = T(Integer(c.str()));
      for (std::size_t i = 0; i < nvars_; ++i)
        for (unsigned k = 0; k < m.e[i]; ++k) t *= x[i];
      sum += t;
    }
    return sum;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  void check(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw Error("polynomials over different variable sets");
  }

  std::size_t nvars_ = 0;
  Terms terms_;
};

/// One term per line, "coeff: e_1 e_2 ... e_d", terms in lexicographic
/// exponent order.
inline void write_terms(std::ostream& os, const Polynomial& p) {
  for (const auto& [m, c] : p.sorted_terms()) {
    os << c << ':';
    for (std::size_t i = 0; i < p.nvars(); ++i) os << ' ' << int(m.e[i]);
    os << '\n';
  }
}

inline Polynomial read_terms(std::istream& is, std::size_t nvars) {
  Polynomial p(nvars);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw Error("malformed polynomial term: '" + line + "'");
    Coefficient c(line.substr(0, colon));
    std::istringstream rest(line.substr(colon + 1));
    std::vector<int> exps;
    int v;
    while (rest >> v) exps.push_back(v);
    if (exps.size() != nvars) throw Error("term has wrong number of exponents: '" + line + "'");
    p.add_term(Monomial::from(exps), c);
  }
  return p;
}

}  // namespace tpcone
