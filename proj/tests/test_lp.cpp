#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "dhk/lp.hpp"

using dhk::Rational;
using dhk::RatVec;
namespace lp = dhk::lp;

namespace {

RatVec rv(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST(Lp, ContradictoryBoundsInfeasibleWithCertificate) {
  lp::Problem p;
  p.num_vars = 1;
  p.constraints = {lp::ge(rv({1}), 1), lp::ge(rv({-1}), 0)};
  auto r = lp::solve(p);
  ASSERT_EQ(r.status, lp::Status::kInfeasible);
  EXPECT_TRUE(lp::is_farkas_certificate(p, r.farkas));
}

TEST(Lp, SimplexSliceFeasible) {
  auto r = lp::feasible(2, {lp::ge(rv({1, 0}), 0), lp::ge(rv({0, 1}), 0), lp::eq(rv({1, 1}), 1)});
  ASSERT_TRUE(r.feasible());
  EXPECT_GE(r.point[0], 0);
  EXPECT_GE(r.point[1], 0);
  EXPECT_EQ(r.point[0] + r.point[1], 1);
}

TEST(Lp, DiagonalRayFeasible) {
  auto r = lp::feasible(2, {lp::ge(rv({1, -1}), 0), lp::ge(rv({-1, 1}), 0), lp::ge(rv({1, 0}), 3)});
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ(r.point[0], r.point[1]);
  EXPECT_GE(r.point[0], 3);
}

TEST(Lp, DimensionMismatchThrows) {
  EXPECT_THROW(lp::feasible(2, {lp::ge(rv({1}), 0)}), dhk::DimensionError);
}

TEST(Lp, UnboundedReportsVerifiedRay) {
  // minimize x - y over the positive quadrant with x >= y - 1
  lp::Problem p;
  p.num_vars = 2;
  p.constraints = {lp::ge(rv({1, 0}), 0), lp::ge(rv({0, 1}), 0), lp::ge(rv({1, -1}), -1)};
  p.objective = rv({-1, 0});
  auto r = lp::solve(p);
  ASSERT_EQ(r.status, lp::Status::kUnbounded);
  EXPECT_LT(dhk::dot(*p.objective, r.ray), 0);
  for (const auto& c : p.constraints) EXPECT_GE(dhk::dot(c.coeffs, r.ray), 0);
}

TEST(Lp, NonnegativeVariablesAndLeRows) {
  lp::Problem p;
  p.num_vars = 2;
  p.nonneg = {true, true};
  p.constraints = {lp::le(rv({1, 2}), 4), lp::le(rv({3, 1}), 6)};
  p.objective = rv({-1, -1});
  auto r = lp::solve(p);
  ASSERT_EQ(r.status, lp::Status::kOptimal);
  // vertex (8/5, 6/5)
  EXPECT_EQ(r.value, Rational(-14, 5));
}

TEST(Lp, DegenerateCyclingExampleTerminates) {
  // Beale's classic cycling example; Bland's rule must terminate.
  lp::Problem p;
  p.num_vars = 4;
  p.nonneg = {true, true, true, true};
  p.constraints = {
      lp::le({Rational(1, 4), Rational(-8), Rational(-1), Rational(9)}, 0),
      lp::le({Rational(1, 2), Rational(-12), Rational(-1, 2), Rational(3)}, 0),
      lp::le(rv({0, 0, 1, 0}), 1),
  };
  p.objective = RatVec{Rational(-3, 4), Rational(20), Rational(-1, 2), Rational(6)};
  auto r = lp::solve(p);
  ASSERT_EQ(r.status, lp::Status::kOptimal);
  EXPECT_EQ(r.value, Rational(-5, 4));
}

// Brute-force oracle: the optimum of a bounded LP over a box is attained at a
// vertex, i.e. a solution of some d tight constraints.
TEST(Lp, RandomBoxedProgramsMatchVertexEnumeration) {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t d = 2 + trial % 2;
    std::vector<lp::Constraint> cons;
    for (std::size_t j = 0; j < d; ++j) {
      cons.push_back(lp::ge(dhk::unit_vector(d, j), -5));
      cons.push_back(lp::le(dhk::unit_vector(d, j), 5));
    }
    for (int k = 0; k < 3; ++k) {
      RatVec a(d);
      for (auto& x : a) x = coef(rng);
      if (dhk::is_zero(a)) continue;
      cons.push_back(lp::ge(a, coef(rng)));
    }
    RatVec c(d);
    for (auto& x : c) x = coef(rng);
    auto r = lp::minimize(d, cons, c);

    // enumerate vertices
    std::optional<Rational> best;
    std::size_t m = cons.size();
    std::vector<std::size_t> idx(d);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
      if (depth == d) {
        dhk::RatMat a;
        RatVec b;
        for (auto i : idx) {
          a.push_back(cons[i].coeffs);
          b.push_back(cons[i].rhs);
        }
        auto x = dhk::solve(a, b);
        if (!x) return;
        for (const auto& con : cons) {
          Rational v = dhk::dot(con.coeffs, *x);
          if (con.sense == lp::Sense::kGe && v < con.rhs) return;
          if (con.sense == lp::Sense::kLe && v > con.rhs) return;
        }
        Rational val = dhk::dot(c, *x);
        if (!best || val < *best) best = val;
        return;
      }
      for (std::size_t i = start; i < m; ++i) {
        idx[depth] = i;
        rec(i + 1, depth + 1);
      }
    };
    rec(0, 0);
    if (!best) {
      EXPECT_EQ(r.status, lp::Status::kInfeasible) << "trial " << trial;
    } else {
      ASSERT_EQ(r.status, lp::Status::kOptimal) << "trial " << trial;
      EXPECT_EQ(r.value, *best) << "trial " << trial;
    }
  }
}
