#include <gtest/gtest.h>

#include <filesystem>

#include "dhk/hermitian.hpp"
#include "dhk/io.hpp"

using dhk::Rational;
using dhk::RatVec;
namespace io = dhk::io;

namespace {

RatVec rv(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST(Io, RationalsExact) {
  EXPECT_EQ(io::rational_from_json(io::Json("-2/3"), "x"), Rational(-2, 3));
  EXPECT_EQ(io::rational_from_json(io::Json(5), "x"), Rational(5));
  EXPECT_EQ(io::rational_from_json(io::Json(0.125), "x"), Rational(1, 8));
  EXPECT_EQ(dhk::parse_rational("010/08"), Rational(5, 4));
  EXPECT_THROW(io::rational_from_json(io::Json("1/0"), "x"), dhk::ParseError);
  EXPECT_THROW(io::rational_from_json(io::Json(true), "x"), dhk::ParseError);
}

TEST(Io, SplineRoundTrip) {
  dhk::conespline::SignedConeSpline s{2, {}, std::nullopt};
  s.terms.push_back({1, {Rational(1, 3), Rational(-7, 5)}, {rv({1, 0}), rv({1, 1})}});
  s.terms.push_back({-1, rv({2, 0}), {rv({0, 1}), rv({1, 1})}});
  auto p = dhk::conespline::Polynomial::linear({Rational(3, 7), Rational(-1)});
  s.poly = p;
  auto back = io::spline_from_json(io::parse_json(io::to_json(s).dump()));
  EXPECT_EQ(back, s);
}

TEST(Io, ModelRoundTrip) {
  dhk::localize::FixedPointModel m{2, 2, {{rv({0, 0}), {rv({1, 0}), rv({0, 1})}}, {rv({1, 0}), {rv({-1, 0}), rv({-1, 1})}}},
                                   rv({2, 1})};
  EXPECT_EQ(io::model_from_json(io::parse_json(io::to_json(m).dump(2))), m);
}

TEST(Io, PolyhedralRoundTrip) {
  dhk::polycone::PolyhedralSet p(2, {{rv({1, 0}), Rational(-1, 2)}, {rv({0, 1}), Rational(0)}});
  auto in = io::polyhedral_from_json(io::parse_json(io::to_json(p).dump()));
  ASSERT_EQ(in.set.halfspaces().size(), 2u);
  EXPECT_EQ(in.set.halfspaces()[0].offset, Rational(-1, 2));
  EXPECT_EQ(in.set.halfspaces()[1].normal, rv({0, 1}));
}

TEST(Io, FieldDiagnostics) {
  try {
    io::spline_from_json(io::parse_json(R"({"dim":2,"terms":[{"sign":1,"base":["0","x"],"factors":[]}]})"));
    FAIL();
  } catch (const dhk::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("terms[0].base[1]"), std::string::npos) << e.what();
  }
  try {
    io::parse_json("{\n  \"dim\": 2,\n  oops\n}", "m.json");
    FAIL();
  } catch (const dhk::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("m.json:3:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(io::model_from_json(io::parse_json(R"({"dim":2,"halfdim":1,"points":[{"image":["0"],"weights":[["1","0"]]}]})")),
               dhk::DimensionError);
}

TEST(Io, OrbitLambdaCoordinates) {
  auto a = io::orbit_from_json(io::parse_json(R"({"family":"AIII","params":[2,1],"lambda":["3","1","-4"]})"));
  auto b = io::orbit_from_json(io::parse_json(R"({"family":"AIII","params":[2,1],"lambda":["3","1"]})"));
  EXPECT_EQ(a.lambda, b.lambda);
  EXPECT_THROW(io::orbit_from_json(io::parse_json(R"({"family":"AIII","params":[2,1],"lambda":["3","1","1"]})")),
               dhk::InvalidModelError);
  EXPECT_THROW(io::orbit_from_json(io::parse_json(R"({"family":"BDI","params":[2],"lambda":["1"]})")), dhk::InputError);
}

TEST(Io, GridAndCsv) {
  auto g = io::parse_grid("0:1:3,-1:1:2", 2);
  EXPECT_EQ(g.size(), 6u);
  EXPECT_DOUBLE_EQ(g.point(5)[0], 1.0);
  EXPECT_DOUBLE_EQ(g.point(5)[1], 1.0);
  EXPECT_THROW(io::parse_grid("0:1:1", 1), dhk::ParseError);
  EXPECT_THROW(io::parse_grid("0:1:4", 2), dhk::DimensionError);
  EXPECT_THROW(io::parse_grid("0:1", 1), dhk::ParseError);

  dhk::conespline::SignedConeSpline s{1, {{1, rv({0}), {rv({1})}}}, std::nullopt};
  auto csv = io::density_csv(dhk::conespline::SplineDensity(s), io::parse_grid("0.5:1.5:3", 1));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "mu_1,density,error_bound");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Io, AtomicWrite) {
  auto dir = std::filesystem::temp_directory_path() / "dhk_io_test";
  std::filesystem::create_directories(dir);
  auto f = dir / "out.json";
  io::write_atomic(f, "first");
  io::write_atomic(f, "second");
  EXPECT_EQ(io::read_file(f), "second");
  EXPECT_FALSE(std::filesystem::exists(dir / "out.json.tmp"));
  std::filesystem::remove_all(dir);
}
