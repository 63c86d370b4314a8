// Finite sums  c e^{i <mu, zeta>} / prod_j l_j(zeta)^{m_j}  closed under
// directional derivatives in zeta.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dhk/conespline.hpp"
#include "dhk/error.hpp"
#include "dhk/rational.hpp"

namespace dhk {

class ExpRationalSum {
 public:
  using Complex = std::complex<double>;
  /// (linear form, multiplicity), sorted by form, forms distinct.
  using Denominator = std::vector<std::pair<RatVec, unsigned>>;

  struct Term {
    Complex coeff;
    RatVec exponent;
    Denominator denom;
  };

  static constexpr double kPrune = 1e-14;

  explicit ExpRationalSum(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }

  /// c e^{i <exponent, zeta>} / prod forms(zeta), repeated forms merged.
  void add(Complex c, RatVec exponent, const std::vector<RatVec>& forms) {
    if (exponent.size() != dim_) throw DimensionError("exp-rational term: exponent has wrong dimension");
    std::map<RatVec, unsigned> m;
    for (const auto& f : forms) {
      if (f.size() != dim_) throw DimensionError("exp-rational term: form has wrong dimension");
      if (is_zero(f)) throw NonRegularError("exp-rational term: zero linear form in the denominator");
      ++m[f];
    }
    add_term(c, std::move(exponent), Denominator(m.begin(), m.end()));
  }

  std::vector<Term> terms() const {
    std::vector<Term> out;
    for (const auto& [key, c] : terms_) out.push_back({c, key.first, key.second});
    return out;
  }
  std::size_t size() const { return terms_.size(); }

  ExpRationalSum& operator+=(const ExpRationalSum& o) {
    if (o.dim_ != dim_) throw DimensionError("exp-rational sum: dimension mismatch");
    for (const auto& [key, c] : o.terms_) add_term(c, key.first, key.second);
    return *this;
  }
  friend ExpRationalSum operator+(ExpRationalSum a, const ExpRationalSum& b) { return a += b; }
  friend ExpRationalSum operator*(Complex s, ExpRationalSum a) {
    std::map<Key, Complex> out;
    for (auto& [key, c] : a.terms_)
      if (std::abs(s * c) > kPrune) out[key] = s * c;
    a.terms_ = std::move(out);
    return a;
  }

  /// Directional derivative along xi:
  /// D (e^{i<mu,.>} / prod l^m) = i <mu, xi> (...) - sum_j m_j l_j(xi) (...) / l_j.
  ExpRationalSum derivative(const RatVec& xi) const {
    if (xi.size() != dim_) throw DimensionError("exp-rational derivative: direction has wrong dimension");
    ExpRationalSum out(dim_);
    for (const auto& [key, c] : terms_) {
      const auto& [mu, den] = key;
      Rational mx = dot(mu, xi);
      if (mx != 0) out.add_term(c * Complex(0, to_double(mx)), mu, den);
      for (std::size_t j = 0; j < den.size(); ++j) {
        Rational lx = dot(den[j].first, xi);
        if (lx == 0) continue;
        Denominator raised = den;
        ++raised[j].second;
        out.add_term(-c * (static_cast<double>(den[j].second) * to_double(lx)), mu, std::move(raised));
      }
    }
    return out;
  }

  Complex operator()(std::span<const Complex> zeta) const {
    if (zeta.size() != dim_) throw DimensionError("exp-rational evaluation: zeta has wrong dimension");
    const Complex i(0, 1);
    double zn = conespline::norm(zeta);
    Complex total = 0;
    for (const auto& [key, c] : terms_) {
      const auto& [mu, den] = key;
      Complex v = c * std::exp(i * conespline::pair(to_double(mu), zeta));
      for (const auto& [form, m] : den) {
        auto fd = to_double(form);
        Complex l = conespline::pair(fd, zeta);
        if (!(std::abs(l) > 1e-12 * conespline::norm(fd) * zn))
          throw NonRegularError("exp-rational evaluation: a denominator form vanishes at zeta");
        v /= std::pow(l, static_cast<int>(m));
      }
      total += v;
    }
    return total;
  }

 private:
  using Key = std::pair<RatVec, Denominator>;

  void add_term(Complex c, RatVec mu, Denominator den) {
    Key key{std::move(mu), std::move(den)};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      if (std::abs(c) > kPrune) terms_.emplace(std::move(key), c);
      return;
    }
    it->second += c;
    if (std::abs(it->second) <= kPrune) terms_.erase(it);
  }

  std::size_t dim_;
  std::map<Key, Complex> terms_;
};

}  // namespace dhk
