#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "dhk/oracle/laplace.hpp"

using dhk::Rational;
using dhk::RatVec;
using dhk::conespline::Complex;
using dhk::conespline::SignedConeSpline;
using dhk::oracle::numeric_laplace;
using dhk::oracle::SplineLaplace;

namespace {

RatVec rv(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST(NumericLaplace, HalfLineIndicator) {
  SignedConeSpline s{1, {{1, rv({0}), {rv({1})}}}, std::nullopt};
  std::vector<Complex> z = {Complex(0, 1)};
  auto r = numeric_laplace(s, z);
  EXPECT_NEAR(std::abs(r.value - Complex(1, 0)), 0.0, 1e-10);
}

TEST(NumericLaplace, FlatDensityRealLimit) {
  SignedConeSpline s{1, {{1, rv({-1}), {rv({1})}}, {-1, rv({1}), {rv({1})}}}, std::nullopt};
  SplineLaplace lap(s);
  for (double x : {0.3, 1.0, 2.5, -1.7}) {
    std::vector<Complex> z = {Complex(x, 1e-9)};
    EXPECT_NEAR(std::abs(lap(z).value - 2.0 * std::sin(x) / x), 0.0, 1e-6);
  }
}

TEST(NumericLaplace, EmptySupport) {
  SignedConeSpline s{2, {}, std::nullopt};
  std::vector<Complex> z = {Complex(0, 1), Complex(0, 1)};
  EXPECT_EQ(numeric_laplace(s, z).value, Complex(0, 0));
}

TEST(NumericLaplace, RejectsNonDecayingZeta) {
  SignedConeSpline s{1, {{1, rv({0}), {rv({1})}}}, std::nullopt};
  std::vector<Complex> z = {Complex(1, -0.5)};
  EXPECT_THROW(numeric_laplace(s, z), dhk::GeometryError);
}

TEST(NumericLaplace, ShiftedTermsWithPolynomial) {
  // P(mu) = mu times the flat density: transform is -i d/dz (2 sin z / z)
  SignedConeSpline s{1, {{1, rv({-1}), {rv({1})}}, {-1, rv({1}), {rv({1})}}}, dhk::conespline::Polynomial::linear(rv({1}))};
  double x = 0.8;
  std::vector<Complex> z = {Complex(x, 1e-9)};
  Complex expected = Complex(0, -1) * 2.0 * (std::cos(x) * x - std::sin(x)) / (x * x);
  EXPECT_NEAR(std::abs(numeric_laplace(s, z).value - expected), 0.0, 1e-7);
}

// Numeric transform of the evaluated density against the closed form.
TEST(NumericLaplace, MatchesLaplaceFactorOnRandomFactorSets) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> coef(-1, 2);
  std::uniform_real_distribution<double> u(-1, 1);
  int done = 0;
  auto start = std::chrono::steady_clock::now();
  while (done < 9) {
    std::size_t d = 1 + static_cast<std::size_t>(done % 3);
    std::size_t n = d + static_cast<std::size_t>(done % 3);
    std::vector<RatVec> f;
    while (f.size() < n) {
      RatVec b(d);
      for (auto& x : b) x = coef(rng);
      if (!dhk::is_zero(b)) f.push_back(b);
    }
    if (dhk::rank(f, d) < d) continue;
    auto eta = dhk::conespline::positive_functional(d, f);
    if (!eta) continue;
    SplineLaplace lap(SignedConeSpline{d, {{1, RatVec(d, Rational(0)), f}}, std::nullopt});
    auto e = dhk::to_double(*eta);
    std::vector<std::vector<Complex>> zs;
    for (int k = 0; k < 5; ++k) {
      std::vector<Complex> z(d);
      for (std::size_t j = 0; j < d; ++j) z[j] = Complex(2 * u(rng), e[j] * (0.6 + 0.3 * u(rng)) + 0.05 * u(rng));
      bool ok = true;
      for (const auto& b : f) ok = ok && dhk::conespline::pair(dhk::to_double(b), z).imag() > 0;
      if (ok) zs.push_back(z);
    }
    auto res = lap(zs);
    for (std::size_t k = 0; k < zs.size(); ++k) {
      auto exact = dhk::conespline::laplace_factor(f, zs[k]);
      EXPECT_LE(std::abs(res[k].value - exact), 1e-6 * std::abs(exact)) << "d=" << d << " n=" << n;
    }
    ++done;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "random factor sets: " << secs << " s\n";
}
