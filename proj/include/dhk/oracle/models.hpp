// Fixed-point models of products of planes and spheres with linear torus
// actions. These are genuine Hamiltonian spaces, so their DH measures are
// known to be positive and chamber independent.
#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "dhk/localize.hpp"
#include "dhk/rational.hpp"

namespace dhk::oracle {

/// A plane C with weight w (fixed point at `center`, image center + R>=0 w),
/// or a sphere with weight w and radius lambda (fixed points center -+ lambda w
/// with weights +-w).
struct ModelFactor {
  bool sphere = false;
  RatVec weight;
  Rational radius = 0;
  RatVec center;
};

inline localize::FixedPointModel product_model(std::size_t dim, const std::vector<ModelFactor>& factors) {
  localize::FixedPointModel m{dim, factors.size(), {{RatVec(dim, Rational(0)), {}}}, std::nullopt};
  for (const auto& f : factors) {
    std::vector<localize::FixedPointDatum> next;
    for (const auto& p : m.points) {
      if (!f.sphere) {
        next.push_back({p.image + f.center, p.weights});
        next.back().weights.push_back(f.weight);
      } else {
        auto lo = p.image + f.center - f.radius * f.weight;
        auto hi = p.image + f.center + f.radius * f.weight;
        next.push_back({lo, p.weights});
        next.back().weights.push_back(f.weight);
        next.push_back({hi, p.weights});
        next.back().weights.push_back(-f.weight);
      }
    }
    m.points = std::move(next);
  }
  return m;
}

/// A regular direction eta + eps (1, c, c^2, ...) close enough to eta that
/// every weight positive on eta stays positive.
inline RatVec regular_near(const localize::FixedPointModel& m, const RatVec& eta, int max_coord) {
  Rational eps(1, 64 * (max_coord + 1) * static_cast<long>(m.dim));
  for (long c = 2;; ++c) {
    RatVec v = eta;
    Rational x = eps;
    for (auto& e : v) {
      e += x;
      x /= c;
    }
    if (localize::is_regular_direction(m, v)) return v;
  }
}

struct RandomModelSpec {
  std::size_t dim = 2;
  std::size_t halfdim = 3;
  std::size_t spheres = 1;  // number of sphere factors, 2^spheres fixed points
  int max_coord = 2;
};

/// Random product model whose weights span R^dim and whose plane weights
/// generate a proper cone; xi0 is a regular direction positive on the plane
/// weights.
template <class Rng>
localize::FixedPointModel random_product_model(Rng& rng, const RandomModelSpec& spec) {
  std::uniform_int_distribution<int> coef(-spec.max_coord, spec.max_coord);
  std::uniform_int_distribution<int> small(-2, 2);
  std::uniform_int_distribution<int> rad(1, 3);
  for (;;) {
    std::vector<ModelFactor> fs;
    std::vector<RatVec> planes, all;
    for (std::size_t i = 0; i < spec.halfdim; ++i) {
      ModelFactor f;
      f.sphere = i < spec.spheres;
      f.weight = RatVec(spec.dim);
      for (auto& x : f.weight) x = coef(rng);
      f.center = RatVec(spec.dim);
      for (auto& x : f.center) x = small(rng);
      f.radius = Rational(rad(rng), 2);
      fs.push_back(f);
      all.push_back(f.weight);
      if (!f.sphere) planes.push_back(f.weight);
    }
    bool zero = false;
    for (const auto& w : all) zero = zero || is_zero(w);
    if (zero || rank(all, spec.dim) < spec.dim) continue;
    std::optional<RatVec> eta = RatVec(spec.dim, Rational(0));
    if (!planes.empty()) eta = conespline::positive_functional(spec.dim, planes);
    if (!eta) continue;
    auto m = product_model(spec.dim, fs);
    m.xi0 = regular_near(m, *eta, spec.max_coord);
    return m;
  }
}

}  // namespace dhk::oracle
