// Heaviside convolutions by iterated adaptive quadrature, straight from the
// definition f_k(mu) = int_0^inf f_{k-1}(mu - t b_k) dt.
#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dhk/conespline.hpp"
#include "dhk/error.hpp"
#include "dhk/polycone.hpp"
#include "dhk/rational.hpp"

namespace dhk::oracle {

struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-11;
  unsigned max_depth = 12;
};

struct QuadratureResult {
  double value = 0;
  double error = 0;
};

namespace detail {

/// Adaptive bisection over Gauss-Kronrod 15 panels; stops when the
/// Kronrod-Gauss difference is below max(abs_tol, rel_tol |value|).
template <class F>
QuadratureResult adaptive_gk(const F& f, double a, double b, const QuadratureConfig& cfg, unsigned depth = 0) {
  double err = 0;
  double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
  if (err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(v)) || depth >= cfg.max_depth) return {v, err};
  double m = 0.5 * (a + b);
  auto l = adaptive_gk(f, a, m, cfg, depth + 1);
  auto r = adaptive_gk(f, m, b, cfg, depth + 1);
  return {l.value + r.value, l.error + r.error};
}

}  // namespace detail

/// Density of H_{b_1} * ... * H_{b_n} at mu for full-rank factors. The first
/// d independent factors form the base level, an indicator divided by
/// |det|; the innermost remaining factor is integrated in closed form as an
/// interval length, the others by adaptive Gauss-Kronrod between the points
/// where the ray crosses a kink hyperplane of the inner level. Upper limits
/// come from a functional eta with <eta, b> > 0 on every factor.
inline QuadratureResult quadrature_convolution(std::size_t dim, const std::vector<RatVec>& factors,
                                               std::span<const double> mu, const QuadratureConfig& cfg = {}) {
  if (cfg.abs_tol <= 0 || cfg.rel_tol <= 0) throw InputError("quadrature: tolerances must be positive");
  if (mu.size() != dim) throw DimensionError("quadrature: point has wrong dimension");
  for (const auto& b : factors)
    if (b.size() != dim) throw DimensionError("quadrature: factor has wrong dimension");
  auto eta_r = conespline::positive_functional(dim, factors);
  if (!eta_r) throw GeometryError("quadrature: factors do not generate a proper cone");

  // base: first independent columns
  std::vector<std::size_t> base, rest;
  RatMat chosen;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    auto trial = chosen;
    trial.push_back(factors[i]);
    if (base.size() < dim && rank(trial, dim) == trial.size()) {
      chosen = std::move(trial);
      base.push_back(i);
    } else {
      rest.push_back(i);
    }
  }
  if (base.size() < dim) throw DimensionError("quadrature: factors do not span the ambient space");

  auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd bs(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) bs(r, c) = to_double(factors[base[static_cast<std::size_t>(c)]][static_cast<std::size_t>(r)]);
  Eigen::MatrixXd inv = bs.inverse();
  double inv_det = 1.0 / std::abs(bs.determinant());

  std::vector<Eigen::VectorXd> outer;  // remaining factors, innermost first
  for (auto i : rest) {
    Eigen::VectorXd v(d);
    for (Eigen::Index r = 0; r < d; ++r) v(r) = to_double(factors[i][static_cast<std::size_t>(r)]);
    outer.push_back(v);
  }
  Eigen::VectorXd eta(d);
  for (Eigen::Index r = 0; r < d; ++r) eta(r) = to_double((*eta_r)[static_cast<std::size_t>(r)]);

  auto base_level = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd c = inv * x;
    return c.minCoeff() >= 0 ? inv_det : 0.0;
  };
  if (outer.empty()) {
    Eigen::Map<const Eigen::VectorXd> m(mu.data(), d);
    return {base_level(m), 0.0};
  }

  // innermost: length of { t in [0, inf) : inv (x - t b) >= 0 }
  Eigen::VectorXd g0 = inv * outer[0];
  auto innermost = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd c = inv * x;
    double lo = 0, hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < d; ++j) {
      // c_j - t g_j >= 0
      if (g0(j) > 0) hi = std::min(hi, c(j) / g0(j));
      else if (g0(j) < 0) lo = std::max(lo, c(j) / g0(j));
      else if (c(j) < 0) return 0.0;
    }
    return hi > lo ? (hi - lo) * inv_det : 0.0;
  };

  // kink hyperplanes of f_{k-1}: spans of d-1 of the factors it convolves
  std::vector<std::vector<Eigen::VectorXd>> walls(outer.size());
  for (std::size_t k = 1; k < outer.size(); ++k) {
    std::vector<RatVec> used = chosen;
    for (std::size_t j = 0; j < k; ++j) used.push_back(factors[rest[j]]);
    std::vector<RatVec> normals;
    std::vector<std::size_t> idx(dim - 1);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
      if (depth + 1 == dim) {
        RatMat sub;
        for (auto i : idx) sub.push_back(used[i]);
        auto ns = nullspace(sub, dim);
        if (ns.size() != 1) return;
        auto nv = polycone::detail::primitive(ns[0]);
        if (std::find(normals.begin(), normals.end(), nv) == normals.end()) normals.push_back(nv);
        return;
      }
      for (std::size_t i = start; i < used.size(); ++i) {
        idx[depth] = i;
        rec(i + 1, depth + 1);
      }
    };
    rec(0, 0);
    for (const auto& nv : normals) {
      Eigen::VectorXd w(d);
      for (Eigen::Index r = 0; r < d; ++r) w(r) = to_double(nv[static_cast<std::size_t>(r)]);
      walls[k].push_back(w);
    }
  }

  double total_error = 0;
  std::function<double(const Eigen::VectorXd&, std::size_t)> level = [&](const Eigen::VectorXd& x,
                                                                          std::size_t k) -> double {
    if (k == 0) return innermost(x);
    const Eigen::VectorXd& b = outer[k];
    double upper = eta.dot(x) / eta.dot(b);
    if (upper <= 0) return 0.0;
    std::vector<double> cuts = {0.0, upper};
    for (const auto& w : walls[k]) {
      double den = w.dot(b);
      if (den == 0) continue;
      double t = w.dot(x) / den;
      if (t > 0 && t < upper) cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
    auto f = [&](double t) {
      Eigen::VectorXd y = x - t * b;
      return level(y, k - 1);
    };
    double v = 0, err_sum = 0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      if (cuts[j + 1] - cuts[j] <= 1e-15 * upper) continue;
      auto piece = detail::adaptive_gk(f, cuts[j], cuts[j + 1], cfg);
      v += piece.value;
      err_sum += piece.error;
    }
    if (k + 1 == outer.size()) total_error = err_sum;
    return v;
  };
  Eigen::Map<const Eigen::VectorXd> m(mu.data(), d);
  double v = level(m, outer.size() - 1);
  if (total_error > 1e3 * std::max(cfg.abs_tol, cfg.rel_tol * std::abs(v)))
    throw LimitError("quadrature: depth exceeded before reaching tolerance");
  return {v, std::max(total_error, cfg.abs_tol)};
}

}  // namespace dhk::oracle
