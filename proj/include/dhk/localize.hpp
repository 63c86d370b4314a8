// Fixed-point data of a Hamiltonian torus action and the measures built from
// it: renormalized weights for a chamber, the localization sum, and the
// signed cone spline of the DH measure.
#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dhk/conespline.hpp"
#include "dhk/error.hpp"
#include "dhk/polycone.hpp"
#include "dhk/rational.hpp"

namespace dhk::localize {

using conespline::Complex;
using conespline::SignedConeSpline;

struct FixedPointDatum {
  RatVec image;
  std::vector<RatVec> weights;

  friend bool operator==(const FixedPointDatum&, const FixedPointDatum&) = default;
};

struct FixedPointModel {
  std::size_t dim = 1;
  std::size_t halfdim = 0;
  std::vector<FixedPointDatum> points;
  std::optional<RatVec> xi0;

  friend bool operator==(const FixedPointModel&, const FixedPointModel&) = default;
};

struct RenormalizedPoint {
  int sign = 1;
  RatVec image;
  std::vector<RatVec> betas;
};

struct RenormalizedModel {
  RatVec xi;
  std::vector<RenormalizedPoint> points;
};

/// Working cone C-hat' = { eta : <beta, eta> >= 0 for every renormalized beta }.
struct GammaRegion {
  polycone::Cone cone;
};

struct ValidationReport {
  RenormalizedModel renormalized;
  GammaRegion gamma;
  std::vector<RatVec> arrangement;  // distinct weight hyperplane normals, primitive
};

/// Structural checks; throws on the first violation.
inline void check_structure(const FixedPointModel& m) {
  if (m.dim == 0) throw DimensionError("model: dim must be >= 1");
  if (m.points.empty()) throw InvalidModelError("model: no fixed points");
  for (std::size_t j = 0; j < m.points.size(); ++j) {
    const auto& p = m.points[j];
    std::string where = "point " + std::to_string(j);
    if (p.image.size() != m.dim) throw DimensionError(where + ": image has wrong dimension");
    if (p.weights.size() != m.halfdim)
      throw InvalidModelError(where + ": has " + std::to_string(p.weights.size()) + " weights, expected " +
                              std::to_string(m.halfdim));
    for (std::size_t i = 0; i < p.weights.size(); ++i) {
      if (p.weights[i].size() != m.dim) throw DimensionError(where + ": weight has wrong dimension");
      if (is_zero(p.weights[i])) throw InvalidModelError(where + ": weight " + std::to_string(i) + " is zero");
    }
    auto r = rank(p.weights, m.dim);
    if (r < m.dim)
      throw InvalidModelError(where + ": weights span a subspace of dimension " + std::to_string(r) + " < " +
                              std::to_string(m.dim));
  }
  if (m.xi0 && m.xi0->size() != m.dim) throw DimensionError("model: xi0 has wrong dimension");
}

/// alpha(xi) != 0 for every weight.
inline bool is_regular_direction(const FixedPointModel& m, const RatVec& xi) {
  if (xi.size() != m.dim) throw DimensionError("direction has wrong dimension");
  for (const auto& p : m.points)
    for (const auto& a : p.weights)
      if (dot(a, xi) == 0) return false;
  return true;
}

/// beta = sign(alpha(xi)) alpha, eps(p) = product of the signs.
inline RenormalizedModel renormalize(const FixedPointModel& m, const RatVec& xi) {
  check_structure(m);
  if (!is_regular_direction(m, xi)) throw NonRegularError("xi is not regular: some weight vanishes on it");
  RenormalizedModel r{xi, {}};
  for (const auto& p : m.points) {
    RenormalizedPoint q{1, p.image, {}};
    for (const auto& a : p.weights) {
      if (dot(a, xi) > 0) {
        q.betas.push_back(a);
      } else {
        q.betas.push_back(-a);
        q.sign = -q.sign;
      }
    }
    r.points.push_back(std::move(q));
  }
  return r;
}

inline std::vector<RatVec> all_betas(const RenormalizedModel& r) {
  std::vector<RatVec> out;
  for (const auto& p : r.points)
    for (const auto& b : p.betas) {
      auto v = polycone::detail::primitive(b);
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
  return out;
}

inline GammaRegion gamma_region(const RenormalizedModel& r) {
  return {polycone::with_generators(polycone::Cone::from_normals(r.xi.size(), all_betas(r)))};
}

/// Canonical regular direction: the seed (xi0, else the first regular point
/// of the moment curve (1, c, c^2, ...)) moved to interior_point of its
/// working cone's dual.
inline RatVec default_chamber_point(const FixedPointModel& m) {
  check_structure(m);
  RatVec seed;
  if (m.xi0) {
    if (!is_regular_direction(m, *m.xi0)) throw NonRegularError("xi0 is not regular: some weight vanishes on it");
    seed = *m.xi0;
  } else {
    for (long c = 2;; ++c) {
      RatVec v(m.dim);
      Rational x = 1;
      for (auto& e : v) {
        e = x;
        x *= c;
      }
      if (is_regular_direction(m, v)) {
        seed = v;
        break;
      }
    }
  }
  auto r = renormalize(m, seed);
  auto xi = polycone::interior_point(polycone::Cone::from_normals(m.dim, all_betas(r)));
  return xi;
}

/// Renormalization for the chosen (or default) chamber plus Gamma and the
/// weight arrangement.
inline ValidationReport validate_model(const FixedPointModel& m, std::optional<RatVec> xi = std::nullopt) {
  check_structure(m);
  if (m.xi0 && !is_regular_direction(m, *m.xi0)) throw NonRegularError("xi0 is not regular: some weight vanishes on it");
  RatVec chamber = xi ? *xi : default_chamber_point(m);
  auto r = renormalize(m, chamber);
  auto betas = all_betas(r);
  if (!conespline::positive_functional(m.dim, betas))
    throw GeometryError("renormalized weights do not generate a proper cone");
  std::vector<RatVec> arr;
  for (const auto& p : m.points)
    for (const auto& a : p.weights) {
      auto v = polycone::detail::primitive(a);
      for (const auto& x : v)
        if (x != 0) {
          if (x < 0) v = -v;
          break;
        }
      if (std::find(arr.begin(), arr.end(), v) == arr.end()) arr.push_back(v);
    }
  auto g = gamma_region(r);
  return {std::move(r), std::move(g), std::move(arr)};
}

/// Every alpha(zeta) is away from zero (same threshold as laplace_factor).
inline bool is_regular(const FixedPointModel& m, std::span<const Complex> zeta) {
  if (zeta.size() != m.dim) throw DimensionError("zeta has wrong dimension");
  double zn = conespline::norm(zeta);
  for (const auto& p : m.points)
    for (const auto& a : p.weights) {
      auto ad = to_double(a);
      if (!(std::abs(conespline::pair(ad, zeta)) > 1e-12 * conespline::norm(ad) * zn)) return false;
    }
  return true;
}

/// Im(zeta) strictly inside the working cone's dual.
inline bool in_gamma_interior(const RenormalizedModel& r, std::span<const Complex> zeta) {
  for (const auto& p : r.points)
    for (const auto& b : p.betas) {
      double s = 0;
      for (std::size_t k = 0; k < b.size(); ++k) s += to_double(b[k]) * zeta[k].imag();
      if (!(s > 0)) return false;
    }
  return true;
}

/// i^n sum_p e^{i <Phi(p), zeta>} / prod_i alpha_i^p(zeta).
inline Complex localization_sum(const FixedPointModel& m, std::span<const Complex> zeta,
                                const RenormalizedModel* strict = nullptr) {
  check_structure(m);
  if (!is_regular(m, zeta)) throw NonRegularError("zeta is not regular: a weight vanishes on it");
  if (strict && !in_gamma_interior(*strict, zeta))
    throw GeometryError("Im(zeta) is not interior to the dual of the working cone");
  const Complex i(0, 1);
  Complex in = std::pow(i, static_cast<int>(m.halfdim));
  Complex total = 0;
  for (const auto& p : m.points) {
    auto img = to_double(p.image);
    Complex term = std::exp(i * conespline::pair(img, zeta));
    for (const auto& a : p.weights) {
      auto ad = to_double(a);
      term /= conespline::pair(ad, zeta);
    }
    total += term;
  }
  return in * total;
}

inline SignedConeSpline spline_from(const RenormalizedModel& r, std::size_t dim) {
  SignedConeSpline s{dim, {}, std::nullopt};
  for (const auto& p : r.points) s.terms.push_back({p.sign, p.image, p.betas});
  return s;
}

/// One term per fixed point: eps(p) delta_{Phi(p)} * H_{beta_1^p} * ... * H_{beta_n^p}.
inline SignedConeSpline dh_measure(const FixedPointModel& m, const RatVec& xi) {
  auto r = renormalize(m, xi);
  return spline_from(r, m.dim);
}

/// min_p <Phi(p), xi> for xi in the interior of the chamber's working cone dual.
inline Rational support_min(const RenormalizedModel& r, const RatVec& xi) {
  for (const auto& p : r.points)
    for (const auto& b : p.betas)
      if (dot(b, xi) <= 0) throw GeometryError("support_min: xi is not interior to the working cone's dual");
  Rational best = dot(r.points.front().image, xi);
  for (const auto& p : r.points) best = std::min(best, Rational(dot(p.image, xi)));
  return best;
}

inline Rational support_min(const FixedPointModel& m, const RatVec& xi) { return support_min(renormalize(m, xi), xi); }

}  // namespace dhk::localize
