// Vector partition counts #{s in Z^n_{>=0} : sum s_i b_i = target}, the
// discrete side of the Heaviside densities.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dhk/conespline.hpp"
#include "dhk/error.hpp"
#include "dhk/rational.hpp"

namespace dhk::oracle {

struct LatticeCountConfig {
  std::uint64_t max_nodes = 50'000'000;  // enumeration bound
};

namespace detail {

inline std::vector<long long> integral(const RatVec& v, const char* what) {
  std::vector<long long> out;
  for (const auto& x : v) {
    if (denominator(x) != 1) throw InputError(std::string("lattice_count: ") + what + " must be integral");
    out.push_back(numerator(x).convert_to<long long>());
  }
  return out;
}

}  // namespace detail

inline std::uint64_t lattice_count(std::size_t dim, const std::vector<RatVec>& weights, const RatVec& target,
                                   const LatticeCountConfig& cfg = {}) {
  if (target.size() != dim) throw DimensionError("lattice_count: target has wrong dimension");
  if (weights.empty()) return is_zero(target) ? 1 : 0;
  std::vector<std::vector<long long>> b;
  for (const auto& w : weights) {
    if (w.size() != dim) throw DimensionError("lattice_count: weight has wrong dimension");
    if (is_zero(w)) throw GeometryError("lattice_count: zero weight gives infinitely many solutions");
    b.push_back(detail::integral(w, "weights"));
  }
  auto t = detail::integral(target, "target");
  auto eta_r = conespline::positive_functional(dim, weights);
  if (!eta_r) throw GeometryError("lattice_count: weights do not generate a proper cone");
  // clear denominators of eta so <eta, .> stays integral
  Integer scale = 1;
  for (const auto& x : *eta_r) scale = boost::multiprecision::lcm(scale, Integer(denominator(x)));
  std::vector<long long> eta;
  for (const auto& x : *eta_r) eta.push_back(Rational(x * Rational(scale)).convert_to<long long>());
  auto pair = [&](const std::vector<long long>& v) {
    long long s = 0;
    for (std::size_t k = 0; k < dim; ++k) s += eta[k] * v[k];
    return s;
  };
  std::vector<long long> eb;
  for (const auto& v : b) eb.push_back(pair(v));

  std::uint64_t nodes = 0;
  auto rec = [&](auto&& self, std::size_t i, std::vector<long long>& rem) -> std::uint64_t {
    if (++nodes > cfg.max_nodes) throw LimitError("lattice_count: enumeration bound exceeded");
    long long h = pair(rem);
    if (h < 0) return 0;
    if (i + 1 == b.size()) {
      if (h % eb[i] != 0) return 0;
      long long s = h / eb[i];
      for (std::size_t k = 0; k < dim; ++k)
        if (rem[k] != s * b[i][k]) return 0;
      return 1;
    }
    std::uint64_t total = 0;
    for (long long s = 0; s * eb[i] <= h; ++s) {
      total += self(self, i + 1, rem);
      for (std::size_t k = 0; k < dim; ++k) rem[k] -= b[i][k];
    }
    for (std::size_t k = 0; k < dim; ++k) rem[k] += (h / eb[i] + 1) * b[i][k];
    return total;
  };
  return rec(rec, 0, t);
}

struct LatticePoint {
  RatVec mu;
  std::uint64_t count = 0;
  double scaled = 0;   // count / t^{n - r}
  double density = 0;  // engine density at mu
};

struct LatticeReport {
  long long scale = 0;
  std::vector<LatticePoint> points;
  double constant = 0;           // mean of scaled / density
  double max_relative_gap = 0;   // max |scaled - c f| / f
};

/// N(t mu) / t^{n - rank} against c f(mu) with one fitted constant c.
inline LatticeReport lattice_check(std::size_t dim, const std::vector<RatVec>& weights, const std::vector<RatVec>& mus,
                                   long long t, const LatticeCountConfig& cfg = {}) {
  if (t <= 0) throw InputError("lattice_check: scale must be positive");
  conespline::FiberVolume fv(dim, weights);
  double power = static_cast<double>(weights.size() - rank(weights, dim));
  LatticeReport rep{t, {}, 0, 0};
  double sum = 0;
  for (const auto& mu : mus) {
    LatticePoint p{mu, lattice_count(dim, weights, Rational(t) * mu, cfg), 0, fv(to_double(mu)).value};
    p.scaled = static_cast<double>(p.count) / std::pow(static_cast<double>(t), power);
    if (!(p.density > 0)) throw InputError("lattice_check: mu must lie where the density is positive");
    sum += p.scaled / p.density;
    rep.points.push_back(p);
  }
  if (rep.points.empty()) return rep;
  rep.constant = sum / static_cast<double>(rep.points.size());
  for (const auto& p : rep.points)
    rep.max_relative_gap = std::max(rep.max_relative_gap, std::abs(p.scaled - rep.constant * p.density) / p.density);
  return rep;
}

}  // namespace dhk::oracle
