// Exact rational scalars and small dense vectors/matrices over Q.
#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dhk/error.hpp"

namespace dhk {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// A point of Q^d. Used both for E (points, rays) and for E* (covectors).
using RatVec = std::vector<Rational>;
/// Row-major dense matrix; each entry is one row.
using RatMat = std::vector<RatVec>;

/// Base-10 only; the Integer string constructor reads a leading 0 as octal.
inline Integer decimal_integer(std::string s) {
  bool neg = !s.empty() && s[0] == '-';
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.erase(0, 1);
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw ParseError("malformed integer '" + s + "'");
  s.erase(0, std::min(s.find_first_not_of('0'), s.size() - 1));
  Integer v(s);
  return neg ? Integer(-v) : v;
}

/// Parses "3", "-2/3", "0.125", "-1.5e-2" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw ParseError("empty rational literal");
  try {
    if (s.find('/') != std::string::npos) {
      auto slash = s.find('/');
      Integer num = decimal_integer(s.substr(0, slash));
      Integer den = decimal_integer(s.substr(slash + 1));
      if (den == 0) throw ParseError("zero denominator in '" + s + "'");
      return Rational(num, den);
    }
    // decimal with optional exponent
    std::string mant = s;
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
      mant = s.substr(0, e);
      exp10 = std::stol(s.substr(e + 1));
    }
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      neg = mant[0] == '-';
      mant = mant.substr(1);
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false;
    for (char c : mant) {
      if (c == '.') {
        if (seen_dot) throw ParseError("malformed rational '" + s + "'");
        seen_dot = true;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        digits.push_back(c);
        if (seen_dot) ++frac_digits;
      } else {
        throw ParseError("malformed rational '" + s + "'");
      }
    }
    if (digits.empty()) throw ParseError("malformed rational '" + s + "'");
    Rational r{decimal_integer(digits)};
    long shift = exp10 - frac_digits;
    Integer ten = 10;
    Integer p = boost::multiprecision::pow(ten, static_cast<unsigned>(shift < 0 ? -shift : shift));
    r = shift < 0 ? r / Rational(p) : r * Rational(p);
    return neg ? Rational(-r) : r;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("malformed rational '" + s + "'");
  }
}

/// Canonical text form: "p/q" or "p".
inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::vector<double> to_double(std::span<const Rational> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

inline int sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw DimensionError("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RatVec operator+(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw DimensionError("vector add: dimension mismatch");
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline RatVec operator-(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw DimensionError("vector sub: dimension mismatch");
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline RatVec operator-(const RatVec& a) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline RatVec operator*(const Rational& s, const RatVec& a) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

inline bool is_zero(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

inline RatVec unit_vector(std::size_t dim, std::size_t i) {
  RatVec e(dim, Rational(0));
  e.at(i) = 1;
  return e;
}

inline RatMat transpose(const RatMat& m, std::size_t cols) {
  RatMat t(cols, RatVec(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = m[i][j];
  return t;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(RatMat& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      Rational f = m[r][c];
      for (std::size_t k = 0; k < m[r].size(); ++k) m[r][k] -= f * m[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(RatMat m, std::size_t cols) { return rref(m, cols).size(); }

/// Basis of {x : m x = 0}.
inline RatMat nullspace(RatMat m, std::size_t cols) {
  auto piv = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : piv) is_pivot[p] = true;
  RatMat basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RatVec v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solves the square system m x = b exactly; nullopt if singular.
inline std::optional<RatVec> solve(const RatMat& m, const RatVec& b) {
  std::size_t n = b.size();
  RatMat aug(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    aug[i] = m[i];
    aug[i].push_back(b[i]);
  }
  auto piv = rref(aug, n);
  if (piv.size() < n) return std::nullopt;
  RatVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
  return x;
}

inline Rational determinant(RatMat m) {
  std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

}  // namespace dhk
