#include <gtest/gtest.h>

#include <random>

#include "dhk/exprational.hpp"

using dhk::ExpRationalSum;
using dhk::RatVec;
using C = std::complex<double>;

namespace {

RatVec rv(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST(ExpRational, OneStepProductRule) {
  RatVec mu = rv({2, -1}), l = rv({1, 3}), xi = rv({1, 1});
  ExpRationalSum s(2);
  s.add(1.0, mu, {l});
  auto d = s.derivative(xi);
  std::vector<C> z = {C(0.3, 0.7), C(-0.2, 0.4)};
  C i(0, 1);
  C e = std::exp(i * (2.0 * z[0] - 1.0 * z[1]));
  C lz = z[0] + 3.0 * z[1];
  C expected = i * 1.0 * e / lz - 4.0 * e / (lz * lz);  // <mu, xi> = 1, l(xi) = 4
  EXPECT_LT(std::abs(d(z) - expected), 1e-13);
}

TEST(ExpRational, DerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-2, 2);
  for (int rep = 0; rep < 20; ++rep) {
    ExpRationalSum s(2);
    for (int t = 0; t < 3; ++t) {
      std::vector<RatVec> forms;
      for (int f = 0; f < 2; ++f) {
        RatVec v = rv({c(rng), c(rng)});
        if (dhk::is_zero(v)) v = rv({1, 2});
        forms.push_back(v);
      }
      s.add(C(c(rng), c(rng)) + 0.5, rv({c(rng), c(rng)}), forms);
    }
    RatVec xi = rv({c(rng), 1});
    auto d = s.derivative(xi).derivative(rv({1, 0}));
    std::vector<C> z = {C(0.37, 1.1), C(0.61, 0.9)};
    auto f = [&](double a, double b) {
      std::vector<C> w = {z[0] + a * dhk::to_double(xi[0]) + b, z[1] + a * dhk::to_double(xi[1])};
      return s(w);
    };
    double h = 1e-4;
    C fd = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
    EXPECT_LT(std::abs(d(z) - fd), 1e-5 * (1 + std::abs(fd)));
  }
}

TEST(ExpRational, MergesAndPrunes) {
  ExpRationalSum s(1);
  s.add(2.0, rv({1}), {rv({1}), rv({2})});
  s.add(-2.0, rv({1}), {rv({2}), rv({1})});
  EXPECT_EQ(s.size(), 0u);
  s.add(1.0, rv({0}), {rv({1}), rv({1})});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.terms()[0].denom.size(), 1u);
  EXPECT_EQ(s.terms()[0].denom[0].second, 2u);
  EXPECT_EQ((0.0 * s).size(), 0u);
  // constant exponent, no denominator: derivative is zero
  ExpRationalSum k(1);
  k.add(1.0, rv({0}), {});
  EXPECT_EQ(k.derivative(rv({1})).size(), 0u);
}

TEST(ExpRational, VanishingFormIsAnError) {
  ExpRationalSum s(2);
  s.add(1.0, rv({0, 0}), {rv({1, -1})});
  std::vector<C> z = {C(1, 1), C(1, 1)};
  EXPECT_THROW(s(z), dhk::NonRegularError);
  EXPECT_THROW(s.add(1.0, rv({0, 0}), {rv({0, 0})}), dhk::NonRegularError);
}
