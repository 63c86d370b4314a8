#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "dhk/conespline.hpp"
#include "dhk/oracle/quadrature.hpp"

using dhk::Rational;
using dhk::RatVec;
using dhk::oracle::quadrature_convolution;

namespace {

RatVec rv(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST(Quadrature, Examples) {
  std::vector<double> m1 = {7};
  EXPECT_NEAR(quadrature_convolution(1, {rv({1})}, m1).value, 1.0, 1e-12);
  std::vector<double> m3 = {3};
  EXPECT_NEAR(quadrature_convolution(1, {rv({1}), rv({1})}, m3).value, 3.0, 1e-9);
  std::vector<double> m25 = {2, 5};
  EXPECT_NEAR(quadrature_convolution(2, {rv({1, 0}), rv({0, 1}), rv({1, 1})}, m25).value, 2.0, 1e-9);
}

TEST(Quadrature, Errors) {
  std::vector<double> m = {1};
  EXPECT_THROW(quadrature_convolution(1, {rv({1}), rv({-1})}, m), dhk::GeometryError);
  std::vector<double> m2 = {1, 1};
  EXPECT_THROW(quadrature_convolution(2, {rv({1, 1}), rv({2, 2})}, m2), dhk::DimensionError);
}

TEST(Quadrature, ThreeFoldConvolutionOnLine) {
  // H_1^{*3}(x) = x^2 / 2
  std::vector<double> m = {2.5};
  EXPECT_NEAR(quadrature_convolution(1, {rv({1}), rv({1}), rv({1})}, m).value, 2.5 * 2.5 / 2, 1e-9);
}

TEST(Quadrature, MatchesFiberVolumeOnRandomInstances) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(0, 3);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  int checked = 0;
  while (checked < 25) {
    std::size_t d = 1 + static_cast<std::size_t>(checked % 3);
    std::size_t n = d + static_cast<std::size_t>(checked % 4);
    std::vector<RatVec> f;
    while (f.size() < n) {
      RatVec b(d);
      for (auto& x : b) x = coef(rng) - (d > 1 ? 1 : 0);
      if (!dhk::is_zero(b)) f.push_back(b);
    }
    if (dhk::rank(f, d) < d || !dhk::conespline::positive_functional(d, f)) continue;
    // point inside the cone: positive combination of the factors
    std::vector<double> mu(d, 0.0);
    for (const auto& b : f) {
      double w = u(rng);
      for (std::size_t k = 0; k < d; ++k) mu[k] += w * dhk::to_double(b[k]);
    }
    double fv = dhk::conespline::heaviside_density(d, f, mu);
    double q = quadrature_convolution(d, f, mu).value;
    EXPECT_NEAR(fv, q, 1e-6 * (1 + fv)) << "d=" << d << " n=" << n;
    ++checked;
  }
}
