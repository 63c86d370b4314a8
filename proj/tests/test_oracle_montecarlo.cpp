#include <gtest/gtest.h>

#include <numbers>

#include "dhk/oracle/montecarlo.hpp"

using dhk::RatVec;
using dhk::oracle::calibrate;
using dhk::oracle::DensityGrid;
using dhk::oracle::MonteCarloConfig;
using dhk::oracle::montecarlo_pushforward;

namespace {

RatVec rv(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST(MonteCarlo, SameSeedSameTable) {
  MonteCarloConfig cfg{11, 20000, 3.0, 4};
  DensityGrid g{{0.0}, {4.0}, {8}};
  auto a = montecarlo_pushforward(1, {rv({1}), rv({1})}, rv({0}), g, cfg);
  auto b = montecarlo_pushforward(1, {rv({1}), rv({1})}, rv({0}), g, cfg);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.density, b.density);
  cfg.seed = 12;
  auto c = montecarlo_pushforward(1, {rv({1}), rv({1})}, rv({0}), g, cfg);
  EXPECT_NE(a.counts, c.counts);
}

TEST(MonteCarlo, ChunkCountChangesStreamsButNotTotals) {
  DensityGrid g{{0.0}, {4.5}, {9}};
  auto a = montecarlo_pushforward(1, {rv({1})}, rv({0}), g, {3, 50000, 3.0, 1});
  auto b = montecarlo_pushforward(1, {rv({1})}, rv({0}), g, {3, 50000, 3.0, 5});
  std::uint64_t sa = 0, sb = 0;
  for (auto c : a.counts) sa += c;
  for (auto c : b.counts) sb += c;
  // mu = |z|^2 / 2 never leaves [0, 4.5) on the ball of radius 3
  EXPECT_EQ(sa, 50000u);
  EXPECT_EQ(sb, 50000u);
}

TEST(MonteCarlo, Errors) {
  DensityGrid g{{0.0}, {1.0}, {4}};
  EXPECT_THROW(montecarlo_pushforward(1, {rv({1}), rv({-1})}, rv({0}), g), dhk::GeometryError);
  EXPECT_THROW(montecarlo_pushforward(1, {rv({1})}, rv({0}), g, {1, 100, 1.0, 1}), dhk::InputError);
  EXPECT_THROW(montecarlo_pushforward(2, {rv({1, 0})}, rv({0, 0}), g), dhk::DimensionError);
}

TEST(MonteCarlo, CompleteBinsFollowTheCutoff) {
  // a = {e1, e2}: fibers are points, inside the ball iff mu_1 + mu_2 <= r^2 / 2
  DensityGrid g{{0.0, 0.0}, {4.0, 4.0}, {4, 4}};
  auto t = montecarlo_pushforward(2, {rv({1, 0}), rv({0, 1})}, rv({0, 0}), g, {1, 10000, 2.0, 1});
  for (std::size_t b = 0; b < t.complete.size(); ++b) {
    auto lo = g.corner(b);
    EXPECT_EQ(t.complete[b], lo[0] + lo[1] + 2.0 <= 2.0) << b;
  }
}

// The Darboux pushforward is a constant multiple of the engine density, and
// the constant is (2 pi) per complex dimension.
TEST(MonteCarlo, CalibrationOnLinearModels) {
  struct Case {
    std::size_t dim;
    std::vector<RatVec> a;
    DensityGrid grid;
  };
  std::vector<Case> cases = {
      {1, {rv({1})}, {{0.0}, {4.0}, {10}}},
      {1, {rv({1}), rv({1})}, {{0.0}, {4.0}, {10}}},
      {2, {rv({1, 0}), rv({0, 1})}, {{0.0, 0.0}, {2.0, 2.0}, {5, 5}}},
  };
  std::vector<double> per;
  for (const auto& c : cases) {
    RatVec zero(c.dim, dhk::Rational(0));
    auto t = montecarlo_pushforward(c.dim, c.a, zero, c.grid, {7, 1'000'000, 3.0, 8});
    auto rep = calibrate(t, c.dim, c.a, zero);
    EXPECT_TRUE(rep.constant) << "max deviation " << rep.max_deviation;
    EXPECT_NEAR(rep.per_dimension, 2 * std::numbers::pi, 0.02 * 2 * std::numbers::pi);
    per.push_back(rep.per_dimension);
  }
  for (double p : per) EXPECT_LE(std::abs(p - per[0]) / per[0], 0.02);
}
