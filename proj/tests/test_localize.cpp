#include <gtest/gtest.h>

#include <random>

#include "dhk/localize.hpp"
#include "dhk/oracle/models.hpp"

using dhk::Rational;
using dhk::RatVec;
using namespace dhk::localize;
using dhk::operator-;

namespace {

RatVec rv(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

FixedPointModel sphere(long lambda) {
  return {1, 1, {{rv({-lambda}), {rv({1})}}, {rv({lambda}), {rv({-1})}}}, std::nullopt};
}

FixedPointModel quadrant_model() { return {2, 2, {{rv({0, 0}), {rv({1, 0}), rv({0, 1})}}}, std::nullopt}; }

std::vector<Complex> cz(std::initializer_list<Complex> xs) { return xs; }

}  // namespace

TEST(ValidateModel, Examples) {
  FixedPointModel plus{1, 2, {{rv({0}), {rv({1}), rv({1})}}}, std::nullopt};
  auto r = validate_model(plus);
  EXPECT_GT(r.renormalized.xi[0], 0);
  EXPECT_TRUE(r.gamma.cone.contains(rv({1})));
  EXPECT_FALSE(r.gamma.cone.contains(rv({-1})));

  FixedPointModel mixed{1, 2, {{rv({0}), {rv({1}), rv({-1})}}}, std::nullopt};
  auto s = validate_model(mixed, rv({1}));
  EXPECT_EQ(s.renormalized.points[0].sign, -1);
  EXPECT_EQ(s.renormalized.points[0].betas, (std::vector<RatVec>{rv({1}), rv({1})}));

  // per-point weights confined to a line
  FixedPointModel flat{2, 2, {{rv({0, 0}), {rv({1, 0}), rv({0, 1})}}, {rv({1, 1}), {rv({1, -1}), rv({-1, 1})}}},
                       std::nullopt};
  EXPECT_THROW(validate_model(flat), dhk::InvalidModelError);
}

TEST(ValidateModel, Errors) {
  FixedPointModel zero{1, 1, {{rv({0}), {rv({0})}}}, std::nullopt};
  EXPECT_THROW(validate_model(zero), dhk::InvalidModelError);
  FixedPointModel uneven{1, 1, {{rv({0}), {rv({1})}}, {rv({1}), {rv({1}), rv({1})}}}, std::nullopt};
  EXPECT_THROW(validate_model(uneven), dhk::InvalidModelError);
  auto m = quadrant_model();
  EXPECT_THROW(validate_model(m, rv({1, 0})), dhk::NonRegularError);
  m.xi0 = rv({0, 1});
  EXPECT_THROW(validate_model(m), dhk::NonRegularError);
}

TEST(ValidateModel, DefaultChamberFollowsSeed) {
  auto m = quadrant_model();
  m.xi0 = rv({3, 5});
  auto r = validate_model(m);
  EXPECT_EQ(r.renormalized.xi, rv({1, 1}));
  FixedPointModel neg{1, 1, {{rv({0}), {rv({-2})}}}, rv({-1})};
  auto s = validate_model(neg);
  EXPECT_LT(s.renormalized.xi[0], 0);
}

TEST(IsRegular, Examples) {
  EXPECT_TRUE(is_regular(sphere(1), cz({{0, 1}})));
  EXPECT_FALSE(is_regular(sphere(1), cz({{0, 0}})));
  FixedPointModel m{2, 2, {{rv({0, 0}), {rv({1, -1}), rv({0, 1})}}}, std::nullopt};
  EXPECT_FALSE(is_regular(m, cz({{1, 1}, {1, 1}})));
}

TEST(LocalizationSum, Examples) {
  auto z = cz({{0.3, 0.7}, {-1.1, 0.4}});
  auto v = localization_sum(quadrant_model(), z);
  EXPECT_NEAR(std::abs(v - Complex(0, 1) * Complex(0, 1) / (z[0] * z[1])), 0.0, 1e-14);
  for (double x : {0.4, 1.3, -2.0}) {
    auto w = cz({{x, 0}});
    EXPECT_NEAR(std::abs(localization_sum(sphere(1), w) - 2.0 * std::sin(x) / x), 0.0, 1e-14);
  }
  FixedPointModel five{1, 1, {{rv({5}), {rv({2})}}}, std::nullopt};
  EXPECT_NEAR(std::abs(localization_sum(five, cz({{0, 1}})) - std::exp(-5.0) / 2), 0.0, 1e-15);
  EXPECT_THROW(localization_sum(sphere(1), cz({{0, 0}})), dhk::NonRegularError);
}

TEST(DhMeasure, Examples) {
  auto q = dh_measure(quadrant_model(), rv({1, 1}));
  ASSERT_EQ(q.terms.size(), 1u);
  EXPECT_EQ(q.terms[0].sign, 1);
  std::vector<double> p = {0.4, 2.0};
  EXPECT_NEAR(dhk::conespline::spline_density(q, p).value, 1.0, 1e-12);

  auto s = dh_measure(sphere(1), rv({1}));
  ASSERT_EQ(s.terms.size(), 2u);
  dhk::conespline::SplineDensity f(s);
  for (double x : {-0.9, 0.0, 0.5}) EXPECT_NEAR(f(std::vector<double>{x}).value, 1.0, 1e-12);
  for (double x : {-1.5, 1.5}) EXPECT_NEAR(f(std::vector<double>{x}).value, 0.0, 1e-12);

  FixedPointModel c2{2, 2, {{rv({0, 0}), {rv({1, 0}), rv({1, 1})}}}, std::nullopt};
  auto t = dh_measure(c2, rv({1, 0}));
  std::vector<double> inside = {2.0, 1.0};
  EXPECT_NEAR(dhk::conespline::spline_density(t, inside).value, 1.0, 1e-12);
  EXPECT_THROW(dh_measure(c2, rv({0, 1})), dhk::NonRegularError);
}

TEST(GammaRegion, Examples) {
  auto g = validate_model(quadrant_model()).gamma.cone;
  EXPECT_TRUE(g.contains(rv({1, 2})));
  EXPECT_FALSE(g.contains(rv({-1, 2})));
  FixedPointModel c2{2, 2, {{rv({0, 0}), {rv({1, 0}), rv({1, 1})}}}, std::nullopt};
  auto h = validate_model(c2, rv({2, -1})).gamma.cone;
  EXPECT_TRUE(h.contains(rv({1, -1})));
  EXPECT_FALSE(h.contains(rv({1, -2})));
  EXPECT_FALSE(h.contains(rv({-1, 1})));
}

TEST(SupportMin, Examples) {
  EXPECT_EQ(support_min(quadrant_model(), rv({1, 1})), 0);
  FixedPointModel line{1, 1, {{rv({1}), {rv({1})}}, {rv({3}), {rv({1})}}}, std::nullopt};
  EXPECT_EQ(support_min(line, rv({1})), 1);
  EXPECT_EQ(support_min(sphere(2), rv({1})), -2);
}

TEST(Renormalize, ParityUnderNegation) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = dhk::oracle::random_product_model(rng, {2, 3, 1, 2});
    auto xi = default_chamber_point(m);
    auto a = renormalize(m, xi);
    auto b = renormalize(m, -xi);
    for (std::size_t j = 0; j < m.points.size(); ++j) {
      EXPECT_EQ(b.points[j].sign, a.points[j].sign * (m.halfdim % 2 ? -1 : 1));
      for (std::size_t i = 0; i < m.halfdim; ++i) EXPECT_EQ(b.points[j].betas[i], -a.points[j].betas[i]);
    }
  }
}

TEST(Renormalize, SameChamberGivesIdenticalSpline) {
  auto m = quadrant_model();
  EXPECT_EQ(dh_measure(m, rv({1, 1})), dh_measure(m, rv({5, 2})));
}

// spline_laplace(dh_measure) is the localization sum term by term.
TEST(LaplaceConsistency, RandomModels) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 15; ++trial) {
    auto m = dhk::oracle::random_product_model(rng, {1 + static_cast<std::size_t>(trial % 3), 3, 1, 2});
    auto rep = validate_model(m);
    auto s = spline_from(rep.renormalized, m.dim);
    auto eta = dhk::to_double(rep.renormalized.xi);
    for (int k = 0; k < 20; ++k) {
      std::vector<Complex> z(m.dim);
      for (std::size_t j = 0; j < m.dim; ++j) z[j] = Complex(u(rng), eta[j] * (0.5 + std::abs(u(rng))));
      if (!is_regular(m, z) || !in_gamma_interior(rep.renormalized, z)) continue;
      auto a = dhk::conespline::spline_laplace(s, z);
      auto b = localization_sum(m, z, &rep.renormalized);
      EXPECT_LE(std::abs(a - b), 1e-10 * std::abs(b));
    }
  }
}

TEST(DhMeasure, PositiveAndVanishingBelowSupport) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = dhk::oracle::random_product_model(rng, {2, 3, 1, 2});
    auto rep = validate_model(m);
    auto xi = rep.renormalized.xi;
    dhk::conespline::SplineDensity f(spline_from(rep.renormalized, 2));
    double smin = dhk::to_double(support_min(rep.renormalized, xi));
    auto xd = dhk::to_double(xi);
    for (int k = 0; k < 100; ++k) {
      std::vector<double> mu = {u(rng), u(rng)};
      double v = f(mu).value;
      EXPECT_GE(v, -1e-9);
      if (mu[0] * xd[0] + mu[1] * xd[1] < smin) EXPECT_NEAR(v, 0.0, 1e-9);
    }
  }
}
