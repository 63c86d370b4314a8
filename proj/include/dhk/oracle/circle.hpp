// The n = 1 truncated integral over {H <= a} on M = C with H = alpha |z|^2 / 2,
// by polar quadrature, against the fixed-point term plus the boundary term
// from the reduced space M_a (a point of volume 1 / alpha).
#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "dhk/error.hpp"

namespace dhk::oracle {

struct CircleReport {
  long alpha = 1;
  std::complex<double> z;
  double a = 0;
  double kappa = 2 * std::numbers::pi;  // beta = omega / kappa
  std::complex<double> quadrature;
  double quadrature_error = 0;
  std::complex<double> fixed_point_term;    // (i / z) e^{i z H(0)} / alpha
  std::complex<double> boundary_magnitude;  // e^{i z a} / (i z) vol(M_a)
  int sign = 0;                             // boundary sign that matches
  double gap_plus = 0, gap_minus = 0;       // |quadrature - rhs| for each sign
  double decay_ratio = 0;                   // |boundary| / |fixed-point term|
};

inline CircleReport truncated_circle_check(long alpha, std::complex<double> z, double a,
                                           double kappa = 2 * std::numbers::pi) {
  if (alpha <= 0) throw InputError("truncated_circle_check: weight must be a positive integer");
  if (!(a > 0)) throw InputError("truncated_circle_check: truncation level must be positive");
  if (z == 0.0) throw NonRegularError("truncated_circle_check: z must be nonzero");
  const std::complex<double> i(0, 1);
  CircleReport rep;
  rep.alpha = alpha;
  rep.z = z;
  rep.a = a;
  rep.kappa = kappa;
  const double al = static_cast<double>(alpha);

  // int_{H <= a} e^{i z H} r dr dtheta / kappa, theta integrated exactly
  double rmax = std::sqrt(2 * a / al);
  auto f = [&](double r, bool imag) {
    auto v = std::exp(i * z * (0.5 * al * r * r)) * r;
    return imag ? v.imag() : v.real();
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double er = 0, ei = 0;
  double re = GK::integrate([&](double r) { return f(r, false); }, 0.0, rmax, 25, 1e-14, &er);
  double im = GK::integrate([&](double r) { return f(r, true); }, 0.0, rmax, 25, 1e-14, &ei);
  rep.quadrature = (2 * std::numbers::pi / kappa) * std::complex<double>(re, im);
  rep.quadrature_error = (2 * std::numbers::pi / kappa) * std::hypot(er, ei);

  rep.fixed_point_term = (i / z) / al;
  rep.boundary_magnitude = std::exp(i * z * a) / (i * z) / al;
  rep.gap_plus = std::abs(rep.quadrature - (rep.fixed_point_term + rep.boundary_magnitude));
  rep.gap_minus = std::abs(rep.quadrature - (rep.fixed_point_term - rep.boundary_magnitude));
  rep.sign = rep.gap_plus <= rep.gap_minus ? 1 : -1;
  rep.decay_ratio = std::abs(rep.boundary_magnitude) / std::abs(rep.fixed_point_term);
  return rep;
}

}  // namespace dhk::oracle
