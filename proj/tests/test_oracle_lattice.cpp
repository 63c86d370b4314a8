#include <gtest/gtest.h>

#include "dhk/oracle/lattice.hpp"

using dhk::RatVec;
using dhk::oracle::lattice_check;
using dhk::oracle::lattice_count;

namespace {

RatVec rv(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST(LatticeCount, SmallExamples) {
  EXPECT_EQ(lattice_count(1, {rv({1})}, rv({5})), 1u);
  EXPECT_EQ(lattice_count(1, {rv({1}), rv({1})}, rv({5})), 6u);
  EXPECT_EQ(lattice_count(1, {rv({2}), rv({3})}, rv({12})), 3u);  // (6,0) (3,2) (0,4)
  EXPECT_EQ(lattice_count(1, {rv({2})}, rv({5})), 0u);
  EXPECT_EQ(lattice_count(1, {rv({1})}, rv({-1})), 0u);
  EXPECT_EQ(lattice_count(1, {}, rv({0})), 1u);
}

TEST(LatticeCount, DiagonalOfTheQuadrant) {
  for (long t : {10L, 100L})
    EXPECT_EQ(lattice_count(2, {rv({1, 0}), rv({0, 1}), rv({1, 1})}, rv({t, t})), static_cast<std::uint64_t>(t + 1));
}

TEST(LatticeCount, MatchesBruteForce) {
  std::vector<RatVec> w = {rv({1, 0}), rv({1, 2}), rv({0, 1}), rv({2, 1})};
  for (long x = 0; x <= 6; ++x)
    for (long y = 0; y <= 6; ++y) {
      std::uint64_t brute = 0;
      for (long a = 0; a <= 6; ++a)
        for (long b = 0; b <= 6; ++b)
          for (long c = 0; c <= 6; ++c)
            for (long d = 0; d <= 6; ++d)
              if (a + b + 2 * d == x && 2 * b + c + d == y) ++brute;
      EXPECT_EQ(lattice_count(2, w, rv({x, y})), brute) << x << "," << y;
    }
}

TEST(LatticeCount, Errors) {
  EXPECT_THROW(lattice_count(1, {rv({1}), rv({-1})}, rv({1})), dhk::GeometryError);
  EXPECT_THROW(lattice_count(1, {RatVec{dhk::Rational(1, 2)}}, rv({1})), dhk::InputError);
  EXPECT_THROW(lattice_count(1, {rv({1}), rv({1}), rv({1})}, rv({100000}), {1000}), dhk::LimitError);
}

TEST(LatticeCheck, OneConstantPerWeightSystem) {
  auto one = lattice_check(1, {rv({1}), rv({1})}, {rv({1}), rv({2}), rv({3})}, 100);
  EXPECT_LE(one.max_relative_gap, 0.05);
  auto two = lattice_check(2, {rv({1, 0}), rv({0, 1}), rv({1, 1})}, {rv({1, 1}), rv({1, 2}), rv({3, 1})}, 100);
  EXPECT_LE(two.max_relative_gap, 0.05);
  EXPECT_NEAR(two.constant, 1.0, 0.05);
}
