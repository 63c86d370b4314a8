// Irreducible Hermitian symmetric pairs of types AIII (su(p,q)) and CI
// (sp(r,R)): roots on the compact Cartan, the compact Weyl group, elliptic
// orbit fixed-point models, and the T-type and K-type measures.
//
// Coordinates. For CI, t* = R^r with the roots e_i -+ e_j. For AIII, t* is
// the trace-zero hyperplane of R^{p+q}, written through its first p+q-1
// coordinates (the last one is minus their sum). In both cases t is
// identified with R^d so that <mu, xi> is the plain dot product. The
// invariant form on t* is the Euclidean form of the ambient coordinates,
// which is the trace form of the defining representation up to a positive
// factor per pair.
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
#include "dhk/exprational.hpp"
#include "dhk/localize.hpp"
#include "dhk/rational.hpp"

namespace dhk::hermitian {

using conespline::Complex;
using conespline::Polynomial;
using conespline::SignedConeSpline;

struct HermitianPairData {
  std::string family;       // "AIII" or "CI"
  std::vector<int> params;  // {p, q} or {r}
  std::size_t dim = 0;      // dim t
  std::vector<RatVec> roots;  // compact first
  std::size_t compact = 0;    // k
  std::vector<RatVec> killing_duals;  // xi_i in t, one per compact root
  std::vector<RatMat> weyl;           // action on t*, identity first
  std::vector<int> weyl_det;
  RatVec center_vector;  // xi_0

  bool trace_zero() const { return family == "AIII"; }
  std::size_t n() const { return roots.size(); }

  /// Ambient coordinates of mu in t*.
  RatVec lift(const RatVec& mu) const {
    if (mu.size() != dim) throw DimensionError("hermitian: vector has wrong dimension");
    RatVec x = mu;
    if (trace_zero()) {
      Rational s = 0;
      for (const auto& v : mu) s += v;
      x.push_back(-s);
    }
    return x;
  }
  Rational form(const RatVec& a, const RatVec& b) const { return dot(lift(a), lift(b)); }
  /// xi in t with <nu, xi> = form(nu, mu) for all nu.
  RatVec dual(const RatVec& mu) const {
    auto x = lift(mu);
    if (!trace_zero()) return x;
    RatVec h(dim);
    for (std::size_t i = 0; i < dim; ++i) h[i] = x[i] - x[dim];
    return h;
  }
  RatVec act(std::size_t w, const RatVec& mu) const {
    RatVec out(dim);
    for (std::size_t r = 0; r < dim; ++r) out[r] = dot(weyl[w][r], mu);
    return out;
  }
  /// P(mu) = prod_{i <= k} <mu, xi_i>.
  Polynomial p_multiplier() const {
    auto p = Polynomial::constant(dim, 1);
    for (const auto& xi : killing_duals) p = p * Polynomial::linear(xi);
    return p;
  }
};

namespace detail {

inline RatMat multiply(const RatMat& a, const RatMat& b) {
  std::size_t n = a.size();
  RatMat c(n, RatVec(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline std::vector<RatVec> sorted(std::vector<RatVec> v) {
  std::sort(v.begin(), v.end());
  return v;
}

/// Reflection of t* in the root alpha, in measure coordinates.
inline RatMat reflection(const HermitianPairData& h, const RatVec& alpha) {
  Rational aa = h.form(alpha, alpha);
  RatMat m(h.dim, RatVec(h.dim));
  for (std::size_t c = 0; c < h.dim; ++c) {
    auto e = unit_vector(h.dim, c);
    auto img = e - (Rational(2) * h.form(alpha, e) / aa) * alpha;
    for (std::size_t r = 0; r < h.dim; ++r) m[r][c] = img[r];
  }
  return m;
}

inline void verify_pair(const HermitianPairData& h) {
  auto fail = [](const std::string& what) { throw InvalidModelError("hermitian pair invariant violated: " + what); };
  std::vector<RatVec> nc(h.roots.begin() + static_cast<std::ptrdiff_t>(h.compact), h.roots.end());
  for (const auto& a : nc)
    if (dot(a, h.center_vector) != 1) fail("alpha(xi_0) != 1 on a noncompact root");
  for (std::size_t i = 0; i < h.compact; ++i)
    if (dot(h.roots[i], h.center_vector) != 0) fail("xi_0 is not central");
  for (const auto& a : nc)
    for (const auto& b : nc)
      if (h.form(a, b) < 0) fail("two noncompact roots pair negatively");
  auto target = sorted(nc);
  for (std::size_t w = 0; w < h.weyl.size(); ++w) {
    std::vector<RatVec> img;
    for (const auto& a : nc) img.push_back(h.act(w, a));
    if (sorted(img) != target) fail("noncompact roots are not Weyl stable");
  }
  for (const auto& a : h.weyl)
    for (const auto& b : h.weyl)
      if (std::find(h.weyl.begin(), h.weyl.end(), multiply(a, b)) == h.weyl.end()) fail("Weyl set is not closed");
  for (std::size_t w = 0; w < h.weyl.size(); ++w)
    if (Rational(h.weyl_det[w]) != determinant(h.weyl[w])) fail("Weyl determinant mismatch");
  if (rank(h.roots, h.dim) != h.dim) fail("roots do not span t*");
}

}  // namespace detail

/// AIII with params {p, q} (p + q <= 5) or CI with params {r} (r <= 3).
inline HermitianPairData build_pair(const std::string& family, const std::vector<int>& params) {
  HermitianPairData h;
  h.family = family;
  h.params = params;
  std::vector<std::size_t> simple;  // indices of compact simple roots
  if (family == "AIII") {
    if (params.size() != 2 || params[0] < 1 || params[1] < 1 || params[0] + params[1] > 5)
      throw InputError("AIII needs params [p, q] with p, q >= 1 and p + q <= 5");
    std::size_t p = static_cast<std::size_t>(params[0]), big_n = p + static_cast<std::size_t>(params[1]);
    h.dim = big_n - 1;
    auto root = [&](std::size_t i, std::size_t j) {  // e_i - e_j in measure coordinates
      RatVec x(big_n, Rational(0));
      x[i] = 1;
      x[j] = -1;
      return RatVec(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(h.dim));
    };
    for (std::size_t i = 0; i < big_n; ++i)
      for (std::size_t j = i + 1; j < big_n; ++j)
        if ((i < p) == (j < p)) {
          if (j == i + 1) simple.push_back(h.roots.size());
          h.roots.push_back(root(i, j));
        }
    h.compact = h.roots.size();
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = p; j < big_n; ++j) h.roots.push_back(root(i, j));
    h.center_vector = RatVec(h.dim, Rational(0));
    for (std::size_t i = 0; i < p; ++i) h.center_vector[i] = 1;
  } else if (family == "CI") {
    if (params.size() != 1 || params[0] < 1 || params[0] > 3) throw InputError("CI needs params [r] with 1 <= r <= 3");
    std::size_t r = static_cast<std::size_t>(params[0]);
    h.dim = r;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i + 1; j < r; ++j) {
        if (j == i + 1) simple.push_back(h.roots.size());
        h.roots.push_back(unit_vector(r, i) - unit_vector(r, j));
      }
    h.compact = h.roots.size();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i; j < r; ++j) h.roots.push_back(unit_vector(r, i) + unit_vector(r, j));
    h.center_vector = RatVec(r, Rational(1, 2));
  } else {
    throw InputError("unsupported Hermitian family '" + family + "' (AIII or CI)");
  }
  for (std::size_t i = 0; i < h.compact; ++i) h.killing_duals.push_back(h.dual(h.roots[i]));

  // compact Weyl group by closure, capped at 10!
  RatMat id(h.dim, RatVec(h.dim, Rational(0)));
  for (std::size_t i = 0; i < h.dim; ++i) id[i][i] = 1;
  std::vector<RatMat> gens;
  for (auto s : simple) gens.push_back(detail::reflection(h, h.roots[s]));
  h.weyl = {id};
  for (std::size_t at = 0; at < h.weyl.size(); ++at)
    for (const auto& g : gens) {
      auto m = detail::multiply(g, h.weyl[at]);
      if (std::find(h.weyl.begin(), h.weyl.end(), m) == h.weyl.end()) {
        if (h.weyl.size() >= 3628800) throw LimitError("Weyl group generation exceeded 10! elements");
        h.weyl.push_back(std::move(m));
      }
    }
  for (const auto& w : h.weyl) h.weyl_det.push_back(determinant(w) > 0 ? 1 : -1);
  detail::verify_pair(h);
  return h;
}

struct OrbitSpec {
  HermitianPairData pair;
  RatVec lambda;
};

struct OrbitModel {
  localize::FixedPointModel model;  // one point per Weyl element, weights w . alpha_i
  RatVec lambda;                    // the compact-antidominant point of W . lambda
  RatVec chamber;                   // xi dual to lambda
  RatVec energy_direction;          // xi_0
  std::vector<int> det;             // det(w) per point
  std::vector<int> compact_sign;    // eps^p from relabelling compact weights as +-alpha_i
  std::vector<std::vector<RatVec>> noncompact;  // alpha^p_i, i > k
  Polynomial p;  // prod_i <mu, -xi_i> = (-1)^k P
};

inline OrbitModel orbit_model(const OrbitSpec& o) {
  const auto& h = o.pair;
  if (o.lambda.size() != h.dim) throw DimensionError("orbit: lambda has wrong dimension");
  for (std::size_t i = h.compact; i < h.n(); ++i)
    if (h.form(h.roots[i], o.lambda) <= 0) throw GeometryError("orbit: lambda is not in the cone C_n");
  for (std::size_t i = 0; i < h.compact; ++i)
    if (h.form(h.roots[i], o.lambda) == 0) throw NonRegularError("orbit: lambda lies on a compact root wall, P(lambda) = 0");

  // W . lambda is the same orbit. Fixed point weights are w . alpha_i at
  // w . lambda_-, where lambda_- is the compact-antidominant point: from there
  // each alpha_c points toward the reflected fixed point, as the image of
  // K . lambda requires. The chamber is the one holding the dominant point,
  // where every alpha_i is positive.
  RatVec lam, dom;
  for (std::size_t w = 0; w < h.weyl.size(); ++w) {
    auto v = h.act(w, o.lambda);
    bool pos = true, neg = true;
    for (std::size_t i = 0; i < h.compact; ++i) {
      pos = pos && h.form(h.roots[i], v) > 0;
      neg = neg && h.form(h.roots[i], v) < 0;
    }
    if (neg) lam = v;
    if (pos) dom = v;
  }
  OrbitModel out;
  out.lambda = lam;
  out.chamber = h.dual(dom);
  out.energy_direction = h.center_vector;
  out.p = Polynomial::constant(h.dim, 1);
  for (const auto& xi : h.killing_duals) out.p = out.p * Polynomial::linear(-xi);
  out.model = {h.dim, h.n(), {}, out.chamber};
  for (std::size_t w = 0; w < h.weyl.size(); ++w) {
    localize::FixedPointDatum d{h.act(w, lam), {}};
    for (const auto& a : h.roots) d.weights.push_back(h.act(w, a));
    // relabel: w . alpha_j (j <= k) is +-alpha_i for a unique i
    int eps = 1;
    std::vector<bool> used(h.compact, false);
    for (std::size_t i = 0; i < h.compact; ++i) {
      bool found = false;
      for (std::size_t j = 0; j < h.compact && !found; ++j) {
        if (used[j]) continue;
        if (d.weights[j] == h.roots[i] || d.weights[j] == -h.roots[i]) {
          used[j] = found = true;
          if (d.weights[j] != h.roots[i]) eps = -eps;
        }
      }
      if (!found) throw InvalidModelError("orbit: compact weights are not +-alpha_1..alpha_k at a fixed point");
    }
    out.det.push_back(h.weyl_det[w]);
    out.compact_sign.push_back(eps);
    out.noncompact.emplace_back(d.weights.begin() + static_cast<std::ptrdiff_t>(h.compact), d.weights.end());
    out.model.points.push_back(std::move(d));
  }
  return out;
}

/// sum_w eps(w) delta_{w.lambda} * H_{alpha_1} * ... * H_{alpha_n}, via the
/// localization spline of the orbit model. With the default chamber the
/// renormalization signs must equal det(w).
inline SignedConeSpline t_type_measure(const OrbitModel& o, std::optional<RatVec> xi = std::nullopt) {
  auto r = localize::renormalize(o.model, xi ? *xi : o.chamber);
  if (!xi)
    for (std::size_t j = 0; j < r.points.size(); ++j)
      if (r.points[j].sign != o.det[j]) throw InvalidModelError("orbit: renormalization sign differs from det(w)");
  return localize::spline_from(r, o.model.dim);
}

/// (-1)^k P * sum_p eps(p) delta_{J(p)} * H_{beta_{k+1}^p} * ... * H_{beta_n^p}
/// with eps(p) = eps^p prod_{i > k} sign(alpha_i^p(xi)) and P(mu) =
/// prod_{i <= k} <mu, xi_i>. The factor (-1)^k makes nu the measure whose
/// transform is i^n prod D_{xi_i} of the localization sum; without it the
/// density is negative on the dominant chamber for odd k. No multiplier
/// when k = 0.
inline SignedConeSpline k_type_measure(const OrbitModel& o, std::optional<RatVec> xi = std::nullopt) {
  RatVec chamber = xi ? *xi : o.chamber;
  SignedConeSpline s{o.model.dim, {}, std::nullopt};
  for (std::size_t j = 0; j < o.model.points.size(); ++j) {
    int eps = o.compact_sign[j];
    std::vector<RatVec> betas;
    for (const auto& a : o.noncompact[j]) {
      Rational v = dot(a, chamber);
      if (v == 0) throw NonRegularError("k-type measure: a noncompact weight vanishes on xi");
      betas.push_back(v > 0 ? a : -a);
      if (v < 0) eps = -eps;
    }
    s.terms.push_back({eps, o.model.points[j].image, std::move(betas)});
  }
  if (!o.p.coeffs.empty() && o.p != Polynomial::constant(o.model.dim, 1)) s.poly = o.p;
  return s;
}

/// i^n sum_p eps^p e^{i <J(p), .>} / prod_{i > k} alpha_i^p, before the
/// derivatives.
inline ExpRationalSum nu_localization_sum(const OrbitModel& o) {
  ExpRationalSum s(o.model.dim);
  Complex in = std::pow(Complex(0, 1), static_cast<int>(o.model.halfdim));
  for (std::size_t j = 0; j < o.model.points.size(); ++j)
    s.add(in * static_cast<double>(o.compact_sign[j]), o.model.points[j].image, o.noncompact[j]);
  return s;
}

/// i^n prod_{i <= k} D_{xi_i} of nu_localization_sum, D the directional
/// derivative in zeta.
inline ExpRationalSum laplace_nu_expression(const OrbitModel& o, const std::vector<RatVec>& killing_duals) {
  auto s = nu_localization_sum(o);
  for (const auto& xi : killing_duals) s = s.derivative(xi);
  return s;
}

inline Complex laplace_nu_symbolic(const OrbitSpec& spec, std::span<const Complex> zeta) {
  auto o = orbit_model(spec);
  if (zeta.size() != o.model.dim) throw DimensionError("laplace_nu: zeta has wrong dimension");
  double zn = conespline::norm(zeta);
  for (const auto& ws : o.noncompact)
    for (const auto& a : ws) {
      auto ad = to_double(a);
      if (!(std::abs(conespline::pair(ad, zeta)) > 1e-12 * conespline::norm(ad) * zn))
        throw NonRegularError("laplace_nu: a noncompact weight vanishes at zeta");
      double im = 0;
      for (std::size_t k = 0; k < ad.size(); ++k) im += ad[k] * zeta[k].imag();
      if (dot(a, o.chamber) < 0) im = -im;
      if (!(im > 0)) throw GeometryError("laplace_nu: Im(zeta) is not interior to the dual of the support cone");
    }
  return laplace_nu_expression(o, spec.pair.killing_duals)(zeta);
}

}  // namespace dhk::hermitian
