#include <gtest/gtest.h>

#include "dhk/localize.hpp"
#include "dhk/oracle/circle.hpp"

using dhk::oracle::truncated_circle_check;
using C = std::complex<double>;

TEST(TruncatedCircle, BoundaryTermCarriesPlusSign) {
  for (auto [alpha, z, a] : {std::tuple{1L, C(0, 1), 1.0}, {1L, C(0.7, 0.5), 2.0}, {2L, C(-1.3, 0.8), 0.5},
                             {3L, C(2.0, 1.5), 3.0}, {1L, C(0.2, 0.6), 5.0}}) {
    auto r = truncated_circle_check(alpha, z, a);
    EXPECT_EQ(r.sign, 1);
    EXPECT_LE(r.gap_plus, 1e-8);
    EXPECT_GT(r.gap_minus, 1e-3);
  }
}

TEST(TruncatedCircle, LargeLevelReducesToTheFixedPoint) {
  auto r = truncated_circle_check(1, C(0.4, 1.0), 40.0);
  EXPECT_LT(r.decay_ratio, 1e-6);
  dhk::localize::FixedPointModel m{1, 1, {{{dhk::Rational(0)}, {{dhk::Rational(1)}}}}, std::nullopt};
  std::vector<C> z = {C(0.4, 1.0)};
  EXPECT_LE(std::abs(r.quadrature - dhk::localize::localization_sum(m, z)), 1e-6);
}

TEST(TruncatedCircle, WrongCalibrationIsVisible) {
  auto r = truncated_circle_check(1, C(0, 1), 1.0, 1.0);
  EXPECT_GT(std::min(r.gap_plus, r.gap_minus), 1e-2);
}

TEST(TruncatedCircle, Errors) {
  EXPECT_THROW(truncated_circle_check(1, C(0, 1), -1.0), dhk::InputError);
  EXPECT_THROW(truncated_circle_check(0, C(0, 1), 1.0), dhk::InputError);
}
