#include <gtest/gtest.h>

#include <random>

#include "dhk/conespline.hpp"

using dhk::Rational;
using dhk::RatVec;
using namespace dhk::conespline;
using dhk::operator*;

namespace {

RatVec rv(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

std::vector<double> dv(std::initializer_list<double> xs) { return xs; }

}  // namespace

TEST(HeavisideDensity, Quadrant) {
  EXPECT_NEAR(heaviside_density(2, {rv({1, 0}), rv({0, 1})}, dv({3, 4})), 1.0, 1e-12);
  EXPECT_EQ(heaviside_density(2, {rv({1, 0}), rv({0, 1})}, dv({-1, 4})), 0.0);
}

TEST(HeavisideDensity, ThreeFactorsInPlane) {
  // fiber {s >= 0 : s1 + s3 = 2, s2 + s3 = 5} has length min(2, 5)
  EXPECT_NEAR(heaviside_density(2, {rv({1, 0}), rv({0, 1}), rv({1, 1})}, dv({2, 5})), 2.0, 1e-12);
  EXPECT_NEAR(heaviside_density(2, {rv({1, 0}), rv({0, 1}), rv({1, 1})}, dv({7, 3})), 3.0, 1e-12);
}

TEST(HeavisideDensity, RepeatedLineFactor) {
  EXPECT_NEAR(heaviside_density(1, {rv({1}), rv({1})}, dv({3})), 3.0, 1e-12);
  EXPECT_NEAR(heaviside_density(1, {rv({1}), rv({1}), rv({1})}, dv({2})), 2.0, 1e-12);  // t^2/2
  EXPECT_NEAR(heaviside_density(1, {rv({2})}, dv({3})), 0.5, 1e-12);
}

TEST(HeavisideDensity, LowerRankUsesSpanMeasure) {
  // both factors along (1,1); density w.r.t. length on the diagonal
  std::vector<RatVec> f = {rv({1, 1}), rv({1, 1})};
  double t = 3.0;
  double len = t * std::sqrt(2.0);
  EXPECT_NEAR(heaviside_density(2, f, dv({t, t})), len / 2.0, 1e-12);
  EXPECT_THROW(heaviside_density(2, f, dv({1, 2})), dhk::DimensionError);
}

TEST(HeavisideDensity, RejectsImproperCones) {
  EXPECT_THROW(FiberVolume(1, {rv({1}), rv({-1})}), dhk::GeometryError);
  EXPECT_THROW(FiberVolume(2, {rv({0, 0})}), dhk::GeometryError);
}

// (s3, s4) ranges over the triangle s3 + s4 <= min(a, b); its area distortion
// sqrt(5) cancels against pdet = sqrt(det B B^T) = sqrt(5).
TEST(HeavisideDensity, TwoDimensionalFiber) {
  double a = 2, b = 5;
  EXPECT_NEAR(heaviside_density(2, {rv({1, 0}), rv({0, 1}), rv({1, 1}), rv({1, 1})}, dv({a, b})), 2.0, 1e-10);
  EXPECT_NEAR(heaviside_density(2, {rv({1, 0}), rv({0, 1}), rv({1, 1}), rv({1, 1})}, dv({b, a})), 2.0, 1e-10);
}

TEST(SplineDensity, SphereSpline) {
  // delta_1 * H_{-2} - delta_{-1} * H_{-2}: uniform 1/2 on [-1, 1]
  SignedConeSpline s{1, {{1, rv({1}), {rv({-2})}}, {-1, rv({-1}), {rv({-2})}}}, std::nullopt};
  SplineDensity f(s);
  EXPECT_NEAR(f(dv({0.3})).value, 0.5, 1e-12);
  EXPECT_NEAR(f(dv({-0.99})).value, 0.5, 1e-12);
  EXPECT_NEAR(f(dv({1.5})).value, 0.0, 1e-12);
  EXPECT_NEAR(f(dv({-1.5})).value, 0.0, 1e-12);
}

TEST(SplineDensity, PolynomialMultiplier) {
  SignedConeSpline s{1, {{1, rv({0}), {rv({1})}}}, Polynomial::linear(rv({3}))};
  EXPECT_NEAR(spline_density(s, dv({2})).value, 6.0, 1e-12);
}

TEST(SplineDensity, ValidationErrors) {
  SignedConeSpline bad_sign{1, {{2, rv({0}), {rv({1})}}}, std::nullopt};
  EXPECT_THROW(validate(bad_sign), dhk::InvalidModelError);
  SignedConeSpline mixed{1, {{1, rv({0}), {rv({1})}}, {1, rv({0}), {rv({1}), rv({1})}}}, std::nullopt};
  EXPECT_THROW(validate(mixed), dhk::InvalidModelError);
  SignedConeSpline dim{2, {{1, rv({0}), {rv({1})}}}, std::nullopt};
  EXPECT_THROW(validate(dim), dhk::DimensionError);
}

TEST(Laplace, Examples) {
  std::vector<Complex> z1 = {Complex(0, 1)};
  EXPECT_NEAR(std::abs(laplace_factor({rv({1})}, z1) - Complex(1, 0)), 0.0, 1e-15);
  std::vector<Complex> z2 = {Complex(0, 2)};
  EXPECT_NEAR(std::abs(laplace_factor({rv({1})}, z2) - Complex(0.5, 0)), 0.0, 1e-15);
  std::vector<Complex> z0 = {Complex(0, 0)};
  EXPECT_THROW(laplace_factor({rv({1})}, z0), dhk::NonRegularError);
  std::vector<Complex> zneg = {Complex(0, -1)};
  EXPECT_THROW(laplace_factor({rv({1})}, zneg, true), dhk::GeometryError);
  EXPECT_NO_THROW(laplace_factor({rv({1})}, zneg, false));
}

TEST(Laplace, SphereSplineMatchesClosedForm) {
  // uniform 1/2 on [-1,1]: transform sin(z)/z
  SignedConeSpline s{1, {{1, rv({1}), {rv({-2})}}, {-1, rv({-1}), {rv({-2})}}}, std::nullopt};
  for (double x : {0.3, 1.7, -2.2}) {
    std::vector<Complex> z = {Complex(x, 0.4)};
    Complex expected = std::sin(z[0]) / z[0];
    EXPECT_NEAR(std::abs(spline_laplace(s, z) - expected), 0.0, 1e-13);
  }
}

// Rescaling every factor by c > 0 divides the density by c^n and rescales
// the argument; a permutation of the factors changes nothing.
TEST(HeavisideDensity, RandomInvariances) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coef(0, 3);
  std::uniform_real_distribution<double> u(0.2, 4.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<RatVec> f;
    while (f.size() < 4) {
      RatVec b = {Rational(coef(rng)), Rational(coef(rng))};
      if (!dhk::is_zero(b)) f.push_back(b);
    }
    if (dhk::rank(f, 2) < 2) continue;
    std::vector<double> mu = {u(rng), u(rng)};
    double v = heaviside_density(2, f, mu);
    auto g = f;
    std::reverse(g.begin(), g.end());
    EXPECT_NEAR(heaviside_density(2, g, mu), v, 1e-10 * (1 + v));
    std::vector<RatVec> h;
    for (const auto& b : f) h.push_back(Rational(2) * b);
    std::vector<double> mu2 = {2 * mu[0], 2 * mu[1]};
    // same fiber, pdet scales by 2^2
    EXPECT_NEAR(heaviside_density(2, h, mu2), v / 4.0, 1e-10 * (1 + v));
  }
}
