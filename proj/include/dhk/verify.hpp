// Deterministic verification suites, one per acceptance criterion. Each
// returns measured deviations, the tolerance, runtime, and a verdict.
#pragma once

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dhk/conespline.hpp"
#include "dhk/error.hpp"
#include "dhk/hermitian.hpp"
#include "dhk/localize.hpp"
#include "dhk/lp.hpp"
#include "dhk/oracle/circle.hpp"
#include "dhk/oracle/laplace.hpp"
#include "dhk/oracle/lattice.hpp"
#include "dhk/oracle/models.hpp"
#include "dhk/oracle/montecarlo.hpp"
#include "dhk/oracle/quadrature.hpp"
#include "dhk/polycone.hpp"

namespace dhk::verify {

using Json = nlohmann::json;
using conespline::Complex;

struct SuiteReport {
  std::string suite;
  int criterion = 0;
  bool passed = false;
  double measured = 0;   // worst deviation (or failure count), see `metric`
  double tolerance = 0;
  std::string metric;
  double seconds = 0;
  double time_limit = 0;
  Json details = Json::object();

  bool within_time() const { return seconds < time_limit; }
  bool ok() const { return passed && within_time(); }

  Json to_json() const {
    return {{"suite", suite},     {"criterion", criterion}, {"passed", passed},  {"measured", measured},
            {"tolerance", tolerance}, {"metric", metric},     {"seconds", seconds}, {"time_limit", time_limit},
            {"within_time", within_time()}, {"details", details}};
  }
};

struct VerifyConfig {
  std::uint64_t seed = 0;
  std::uint64_t mc_samples = 1'000'000;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

inline RatVec random_vec(std::mt19937_64& rng, std::size_t d, int lo, int hi) {
  std::uniform_int_distribution<int> c(lo, hi);
  RatVec v(d);
  for (auto& x : v) x = c(rng);
  return v;
}

inline RatVec random_combination(std::mt19937_64& rng, const std::vector<RatVec>& gens, std::size_t d) {
  std::uniform_int_distribution<int> c(0, 3);
  RatVec v(d, Rational(0));
  for (const auto& g : gens) v = v + Rational(c(rng)) * g;
  return v;
}

/// Unbounded LP for max t with p + t x in P: x is a recession direction.
inline bool lp_recession(const polycone::PolyhedralSet& p, const RatVec& base, const RatVec& x) {
  std::vector<lp::Constraint> cons;
  for (const auto& h : p.halfspaces()) cons.push_back(lp::ge({dot(h.normal, x)}, h.offset - dot(h.normal, base)));
  cons.push_back(lp::ge({Rational(1)}, 0));
  return lp::minimize(1, std::move(cons), {Rational(-1)}).status == lp::Status::kUnbounded;
}

/// min <xi, x> over { A x >= 0 } is bounded (hence 0).
inline bool lp_in_dual(const polycone::PolyhedralSet& p, const RatVec& xi) {
  std::vector<lp::Constraint> cons;
  for (const auto& h : p.halfspaces()) cons.push_back(lp::ge(h.normal, 0));
  return lp::minimize(p.dim(), std::move(cons), xi).status == lp::Status::kOptimal;
}

/// min <xi, x> over P is bounded.
inline bool lp_bounded_below(const polycone::PolyhedralSet& p, const RatVec& xi) {
  return lp::minimize(p.dim(), p.constraints(), xi).status == lp::Status::kOptimal;
}

/// Some alpha != 0 with A alpha = 0, by fixing one coordinate to 1.
inline bool lp_has_line(const polycone::PolyhedralSet& p) {
  for (std::size_t j = 0; j < p.dim(); ++j) {
    std::vector<lp::Constraint> cons;
    for (const auto& h : p.halfspaces()) cons.push_back(lp::eq(h.normal, 0));
    RatVec e(p.dim(), Rational(0));
    e[j] = 1;
    cons.push_back(lp::eq(e, 1));
    if (lp::feasible(p.dim(), std::move(cons)).feasible()) return true;
  }
  return false;
}

/// <xi, .> has one strict sign on C(P) \\ {0}: min of +-<xi, alpha> over
/// C(P) with |alpha|_1 = 1 is positive, one LP per orthant, stopping at the
/// first orthant that rules a sign out. True when C(P) = {0}.
inline bool lp_strict_sign(const polycone::PolyhedralSet& p, const RatVec& xi) {
  std::size_t d = p.dim();
  for (int sign : {1, -1}) {
    bool holds = true;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d) && holds; ++mask) {
      std::vector<lp::Constraint> cons;
      for (const auto& h : p.halfspaces()) cons.push_back(lp::ge(h.normal, 0));
      RatVec l1(d, Rational(0));
      for (std::size_t j = 0; j < d; ++j) {
        l1[j] = (mask >> j) & 1 ? -1 : 1;
        RatVec e(d, Rational(0));
        e[j] = l1[j];
        cons.push_back(lp::ge(e, 0));
      }
      cons.push_back(lp::eq(l1, 1));
      auto r = lp::minimize(d, std::move(cons), Rational(sign) * xi);
      if (r.feasible() && r.value <= 0) holds = false;
    }
    if (holds) return true;
  }
  return false;
}

inline std::vector<Complex> interior_zeta(std::mt19937_64& rng, const std::vector<double>& eta, double spread) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Complex> z(eta.size());
  for (std::size_t j = 0; j < eta.size(); ++j) z[j] = Complex(spread * u(rng), eta[j] * (0.6 + 0.3 * u(rng)) + 0.05 * u(rng));
  return z;
}

inline bool strictly_decaying(const std::vector<RatVec>& f, std::span<const Complex> z) {
  for (const auto& b : f)
    if (!(conespline::pair(to_double(b), z).imag() > 0)) return false;
  return true;
}

/// Random factor list spanning R^d with a proper cone.
inline std::vector<RatVec> random_factors(std::mt19937_64& rng, std::size_t d, std::size_t n, int lo, int hi) {
  for (;;) {
    std::vector<RatVec> f;
    while (f.size() < n) {
      auto b = random_vec(rng, d, lo, hi);
      if (!is_zero(b)) f.push_back(b);
    }
    if (rank(f, d) == d && conespline::positive_functional(d, f)) return f;
  }
}

}  // namespace detail

// -- 1: polyhedral predicates against LP re-derivations ----------------------

inline SuiteReport suite_cones(const VerifyConfig& cfg = {}) {
  auto t0 = detail::Clock::now();
  SuiteReport rep{"cones", 1};
  rep.metric = "disagreeing sets";
  rep.time_limit = 30;
  std::mt19937_64 rng(cfg.seed ^ 0xC0E5);
  std::uniform_int_distribution<int> dim_d(1, 4), m_d(1, 12);
  int sets = 0, bad = 0, proper = 0, compact = 0;
  std::size_t checks = 0;
  Json failures = Json::array();
  while (sets < 100) {
    std::size_t d = static_cast<std::size_t>(dim_d(rng));
    std::size_t m = static_cast<std::size_t>(m_d(rng));
    // feasible by construction: every half-space holds at a random point
    auto p0 = detail::random_vec(rng, d, -3, 3);
    std::vector<polycone::HalfSpace> hs;
    std::uniform_int_distribution<int> slack(0, 3);
    for (std::size_t k = 0; k < m; ++k) {
      auto n = detail::random_vec(rng, d, -2, 2);
      if (is_zero(n)) n[k % d] = 1;
      hs.push_back({n, dot(n, p0) - slack(rng)});
    }
    polycone::PolyhedralSet p(d, hs);
    ++sets;
    bool agree = true;
    std::string what;
    auto fail = [&](const std::string& w) {
      if (agree) what = w;
      agree = false;
    };

    auto base = polycone::witness_point(p);
    auto ac = polycone::with_generators(polycone::asymptotic_cone(p));
    auto ac_gens = polycone::Cone::from_generators(d, ac.generators());
    for (int k = 0; k < 6; ++k) {
      auto x = k % 2 ? detail::random_combination(rng, ac.generators(), d) : detail::random_vec(rng, d, -2, 2);
      ++checks;
      if (ac_gens.contains(x) != detail::lp_recession(p, base, x)) fail("asymptotic cone");
    }
    auto dual = polycone::with_normals(polycone::dual_cone(ac_gens));  // normals come from double description
    auto dual_gens = polycone::dual_cone(polycone::asymptotic_cone(p)).generators();
    for (int k = 0; k < 6; ++k) {
      auto xi = k % 2 ? detail::random_combination(rng, dual_gens, d) : detail::random_vec(rng, d, -2, 2);
      ++checks;
      if (dual.contains(xi) != detail::lp_in_dual(p, xi)) fail("dual cone");
      ++checks;
      if (polycone::bounded_below(p, xi) != detail::lp_bounded_below(p, xi)) fail("bounded below");
      ++checks;
      if (polycone::proper_projection_directions(p, xi) != detail::lp_strict_sign(p, xi)) fail("proper projection");
    }
    bool pr = polycone::is_proper(p);
    ++checks;
    if (pr == detail::lp_has_line(p)) fail("properness");
    bool cp = polycone::is_compact(p);
    ++checks;
    if (cp != ac.generators().empty()) fail("compactness");
    proper += pr;
    compact += cp;
    if (!agree) {
      ++bad;
      failures.push_back({{"set", sets}, {"dim", d}, {"halfspaces", m}, {"predicate", what}});
    }
  }
  rep.measured = bad;
  rep.tolerance = 0;
  rep.passed = bad == 0;
  rep.details = {{"sets", sets}, {"checks", checks}, {"proper", proper}, {"compact", compact}, {"failures", failures}};
  rep.seconds = detail::since(t0);
  return rep;
}

// -- 2: numeric transform of the density against the closed form ------------

inline SuiteReport suite_laplace(const VerifyConfig& cfg = {}) {
  auto t0 = detail::Clock::now();
  SuiteReport rep{"laplace", 2};
  rep.metric = "max relative deviation";
  rep.tolerance = 1e-3;
  rep.time_limit = 120;
  std::mt19937_64 rng(cfg.seed ^ 0x1A91);
  double worst = 0;
  std::size_t samples = 0;
  Json cases = Json::array();
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t d = 1 + static_cast<std::size_t>(trial % 3);
    std::size_t n = d + static_cast<std::size_t>((trial / 3) % (6 - d));
    auto f = detail::random_factors(rng, d, n, -1, 2);
    auto eta = to_double(*conespline::positive_functional(d, f));
    std::vector<std::vector<Complex>> zs;
    while (zs.size() < 5) {
      auto z = detail::interior_zeta(rng, eta, 2.0);
      if (detail::strictly_decaying(f, z)) zs.push_back(z);
    }
    oracle::SplineLaplace lap(conespline::SignedConeSpline{d, {{1, RatVec(d, Rational(0)), f}}, std::nullopt});
    auto res = lap(zs);
    double w = 0;
    for (std::size_t k = 0; k < zs.size(); ++k) {
      auto exact = conespline::laplace_factor(f, zs[k]);
      w = std::max(w, std::abs(res[k].value - exact) / std::abs(exact));
      ++samples;
    }
    worst = std::max(worst, w);
    cases.push_back({{"dim", d}, {"factors", n}, {"max_relative_deviation", w}});
  }
  rep.measured = worst;
  rep.passed = worst <= rep.tolerance;
  rep.details = {{"factor_sets", cases.size()}, {"zeta_samples", samples}, {"cases", cases}};
  rep.seconds = detail::since(t0);
  return rep;
}

// -- 3: spline transform equals the localization sum --------------------------

inline SuiteReport suite_identity(const VerifyConfig& cfg = {}) {
  auto t0 = detail::Clock::now();
  SuiteReport rep{"identity", 3};
  rep.metric = "max relative deviation";
  rep.tolerance = 1e-10;
  rep.time_limit = 60;
  std::mt19937_64 rng(cfg.seed ^ 0x3D3);
  std::uniform_real_distribution<double> u(-2, 2);
  double worst = 0;
  std::size_t samples = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t d = 1 + static_cast<std::size_t>(trial % 3);
    std::size_t n = std::max<std::size_t>(d, 2 + static_cast<std::size_t>(trial % 3));
    std::size_t spheres = static_cast<std::size_t>(trial % 3);  // at most 4 fixed points
    auto m = oracle::random_product_model(rng, {d, n, spheres, 2});
    auto v = localize::validate_model(m);
    auto s = localize::spline_from(v.renormalized, m.dim);
    auto eta = to_double(v.renormalized.xi);
    int got = 0;
    while (got < 20) {
      std::vector<Complex> z(d);
      for (std::size_t j = 0; j < d; ++j) z[j] = Complex(u(rng), eta[j] * (0.5 + std::abs(u(rng))));
      if (!localize::is_regular(m, z) || !localize::in_gamma_interior(v.renormalized, z)) continue;
      auto a = conespline::spline_laplace(s, z);
      auto b = localize::localization_sum(m, z, &v.renormalized);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
      ++got;
      ++samples;
    }
  }
  rep.measured = worst;
  rep.passed = worst <= rep.tolerance;
  rep.details = {{"models", 20}, {"zeta_samples", samples}};
  rep.seconds = detail::since(t0);
  return rep;
}

// -- 4: two chambers give the same density ------------------------------------

inline SuiteReport suite_chambers(const VerifyConfig& cfg = {}) {
  auto t0 = detail::Clock::now();
  SuiteReport rep{"chambers", 4};
  rep.metric = "max density difference";
  rep.tolerance = 1e-9;
  rep.time_limit = 60;
  std::mt19937_64 rng(cfg.seed ^ 0x4C4);
  std::uniform_real_distribution<double> u(-6, 6);
  double worst = 0;
  int models = 0;
  std::size_t differing_terms = 0;
  int attempts = 0;
  while (models < 10 && ++attempts < 1000) {
    // with a plane factor the second chamber must keep it bounded below, so d = 2
    bool plane = models % 3 == 2;
    std::size_t d = plane ? 2 : 1 + static_cast<std::size_t>(models % 2);
    std::size_t n = 2 + static_cast<std::size_t>(models % 2);
    std::size_t spheres = plane ? n - 1 : n;
    auto m = oracle::random_product_model(rng, {d, n, spheres, 2});
    auto xi1 = localize::default_chamber_point(m);
    // planes must stay bounded below: keep their weights positive
    std::vector<RatVec> planes;
    for (std::size_t i = spheres; i < n; ++i) planes.push_back(m.points[0].weights[i]);
    std::optional<RatVec> xi2;
    for (int tries = 0; tries < 200 && !xi2; ++tries) {
      auto c = detail::random_vec(rng, d, -5, 5);
      if (!localize::is_regular_direction(m, c)) continue;
      bool pos = true;
      for (const auto& a : planes) pos = pos && dot(a, c) > 0;
      if (!pos) continue;
      auto r1 = localize::renormalize(m, xi1), r2 = localize::renormalize(m, c);
      bool other = false;
      for (std::size_t j = 0; j < r1.points.size(); ++j) other = other || r1.points[j].betas != r2.points[j].betas;
      if (other) xi2 = c;
    }
    if (!xi2) continue;
    conespline::SplineDensity f1(localize::dh_measure(m, xi1)), f2(localize::dh_measure(m, *xi2));
    differing_terms += f1.spline().terms.size();
    for (int k = 0; k < 100; ++k) {
      std::vector<double> mu(d);
      for (auto& x : mu) x = u(rng);
      worst = std::max(worst, std::abs(f1(mu).value - f2(mu).value));
    }
    ++models;
  }
  rep.measured = worst;
  rep.passed = models == 10 && worst <= rep.tolerance;
  rep.details = {{"models", models}, {"points_per_model", 100}, {"terms", differing_terms}};
  rep.seconds = detail::since(t0);
  return rep;
}

// -- 5: fiber volumes against nested quadrature -------------------------------

inline SuiteReport suite_convolution(const VerifyConfig& cfg = {}) {
  auto t0 = detail::Clock::now();
  SuiteReport rep{"convolution", 5};
  rep.metric = "max |fiber volume - quadrature| / (1 + value)";
  rep.tolerance = 1e-6;
  rep.time_limit = 120;
  std::mt19937_64 rng(cfg.seed ^ 0x5C5);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  double worst = 0;
  Json cases = Json::array();
  for (int k = 0; k < 50; ++k) {
    std::size_t d = 1 + static_cast<std::size_t>(k % 3);
    std::size_t n = d + static_cast<std::size_t>(k % 4);
    auto f = detail::random_factors(rng, d, n, d > 1 ? -1 : 0, d > 1 ? 2 : 3);
    std::vector<double> mu(d, 0.0);
    for (const auto& b : f) {
      double w = u(rng);
      for (std::size_t j = 0; j < d; ++j) mu[j] += w * to_double(b[j]);
    }
    double fv = conespline::heaviside_density(d, f, mu);
    auto q = oracle::quadrature_convolution(d, f, mu);
    double dev = std::abs(fv - q.value) / (1 + std::abs(fv));
    worst = std::max(worst, dev);
    cases.push_back({{"dim", d}, {"factors", n}, {"mu", mu}, {"fiber_volume", fv}, {"quadrature", q.value},
                     {"quadrature_error", q.error}, {"deviation", dev}});
  }
  rep.measured = worst;
  rep.passed = worst <= rep.tolerance;
  rep.details = {{"instances", cases}};
  rep.seconds = detail::since(t0);
  return rep;
}

// -- 6: Monte Carlo calibration on C^n ----------------------------------------

inline SuiteReport suite_montecarlo(const VerifyConfig& cfg = {}) {
  auto t0 = detail::Clock::now();
  SuiteReport rep{"montecarlo", 6};
  rep.metric = "spread of per-dimension constants";
  rep.tolerance = 0.02;
  rep.time_limit = 300;
  auto e = [](std::initializer_list<long> xs) {
    RatVec v;
    for (long x : xs) v.emplace_back(x);
    return v;
  };
  struct Case {
    std::string name;
    std::size_t dim;
    std::vector<RatVec> a;
    oracle::DensityGrid grid;
  };
  std::vector<Case> cases = {
      {"n=1,d=1", 1, {e({1})}, {{0.0}, {4.0}, {10}}},
      {"n=2,d=1", 1, {e({1}), e({1})}, {{0.0}, {4.0}, {10}}},
      {"n=2,d=2", 2, {e({1, 0}), e({0, 1})}, {{0.0, 0.0}, {2.0, 2.0}, {5, 5}}},
  };
  Json out = Json::array();
  std::vector<double> per;
  bool constant = true;
  for (const auto& c : cases) {
    RatVec zero(c.dim, Rational(0));
    auto t = oracle::montecarlo_pushforward(c.dim, c.a, zero, c.grid, {cfg.seed, cfg.mc_samples, 3.0, 8});
    auto cal = oracle::calibrate(t, c.dim, c.a, zero);
    constant = constant && cal.constant;
    per.push_back(cal.per_dimension);
    out.push_back({{"case", c.name},
                   {"kappa", cal.kappa},
                   {"kappa_error", cal.kappa_error},
                   {"per_dimension", cal.per_dimension},
                   {"bins_used", cal.ratio.size()},
                   {"max_deviation_sigma", cal.max_deviation},
                   {"constant_within_3_sigma", cal.constant}});
  }
  double lo = *std::min_element(per.begin(), per.end()), hi = *std::max_element(per.begin(), per.end());
  double mean = (per[0] + per[1] + per[2]) / 3;
  rep.measured = (hi - lo) / mean;
  rep.passed = constant && rep.measured <= rep.tolerance;
  rep.details = {{"seed", cfg.seed},
                 {"samples", cfg.mc_samples},
                 {"cases", out},
                 {"calibration_per_complex_dimension", mean},
                 {"two_pi", 2 * std::numbers::pi}};
  rep.seconds = detail::since(t0);
  return rep;
}

// -- 7: the two-point sphere model -------------------------------------------

inline SuiteReport suite_archimedes(const VerifyConfig& cfg = {}) {
  auto t0 = detail::Clock::now();
  SuiteReport rep{"archimedes", 7};
  rep.metric = "max(density deviation / 1e-9, transform deviation / 1e-6)";
  rep.tolerance = 1;
  rep.time_limit = 10;
  std::mt19937_64 rng(cfg.seed ^ 0x7A7);
  double worst_density = 0, worst_transform = 0;
  Json cases = Json::array();
  for (Rational lam : {Rational(1), Rational(3, 2), Rational(5, 2)}) {
    localize::FixedPointModel m{1, 1, {{{-lam}, {RatVec{Rational(1)}}}, {{lam}, {RatVec{Rational(-1)}}}}, std::nullopt};
    auto s = localize::dh_measure(m, localize::default_chamber_point(m));
    conespline::SplineDensity f(s);
    double l = to_double(lam);
    std::uniform_real_distribution<double> u(-2 * l, 2 * l);
    double dd = 0;
    for (int k = 0; k < 200; ++k) {
      double x = u(rng);
      if (std::abs(std::abs(x) - l) < 1e-6) continue;
      double expect = std::abs(x) < l ? 1.0 : 0.0;
      dd = std::max(dd, std::abs(f(std::vector<double>{x}).value - expect));
    }
    oracle::SplineLaplace lap(s);
    std::uniform_real_distribution<double> zr(-3, 3);
    double td = 0;
    for (int k = 0; k < 10; ++k) {
      double x = zr(rng);
      if (std::abs(x) < 1e-3) x = 0.5;
      double expect = 2 * std::sin(x * l) / x;
      std::vector<Complex> z = {Complex(x, 1e-9)};
      td = std::max(td, std::abs(lap(z).value - expect));
      std::vector<Complex> zreal = {Complex(x, 0)};
      td = std::max(td, std::abs(localize::localization_sum(m, zreal) - expect));
    }
    worst_density = std::max(worst_density, dd);
    worst_transform = std::max(worst_transform, td);
    cases.push_back({{"lambda", to_string(lam)}, {"density_deviation", dd}, {"transform_deviation", td}});
  }
  rep.measured = std::max(worst_density / 1e-9, worst_transform / 1e-6);
  rep.passed = worst_density <= 1e-9 && worst_transform <= 1e-6;
  rep.details = {{"cases", cases}};
  rep.seconds = detail::since(t0);
  return rep;
}

// -- 8: orbits of Hermitian pairs --------------------------------------------

inline SuiteReport suite_orbits(const VerifyConfig& cfg = {}) {
  auto t0 = detail::Clock::now();
  SuiteReport rep{"orbits", 8};
  rep.metric = "max relative Laplace deviation";
  rep.tolerance = 1e-3;
  rep.time_limit = 180;
  auto e = [](std::initializer_list<long> xs) {
    RatVec v;
    for (long x : xs) v.emplace_back(x);
    return v;
  };
  struct Case {
    std::string name;
    hermitian::HermitianPairData h;
    RatVec lambda;
  };
  std::vector<Case> cases = {{"su(1,1)", hermitian::build_pair("AIII", {1, 1}), e({2})},
                             {"su(2,1)", hermitian::build_pair("AIII", {2, 1}), e({3, 1})},
                             {"sp(2,R)", hermitian::build_pair("CI", {2}), e({3, 1})}};
  std::mt19937_64 rng(cfg.seed ^ 0x8B8);
  bool structure = true;
  double inv = 0, neg = 0, lap_dev = 0;
  Json out = Json::array();
  for (const auto& c : cases) {
    const auto& h = c.h;
    auto o = hermitian::orbit_model({h, c.lambda});
    // fixed points are W . lambda with weights w . alpha_i, exactly
    std::vector<RatVec> orbit, images;
    for (std::size_t w = 0; w < h.weyl.size(); ++w) orbit.push_back(h.act(w, c.lambda));
    bool ok = o.model.points.size() == h.weyl.size();
    for (std::size_t j = 0; j < o.model.points.size() && ok; ++j) {
      images.push_back(o.model.points[j].image);
      for (std::size_t i = 0; i < h.n(); ++i) ok = ok && o.model.points[j].weights[i] == h.act(j, h.roots[i]);
      ok = ok && o.model.points[j].image == h.act(j, o.lambda);
    }
    ok = ok && hermitian::detail::sorted(orbit) == hermitian::detail::sorted(images);
    structure = structure && ok;

    conespline::SplineDensity nu(hermitian::k_type_measure(o));
    std::uniform_real_distribution<double> u(-3, 12);
    double ci = 0, cn = 0;
    for (int k = 0; k < 100; ++k) {
      RatVec mu(h.dim);
      for (auto& x : mu) x = Rational(static_cast<long>(std::round(u(rng) * 64)), 64);
      double v = nu(to_double(mu)).value;
      cn = std::max(cn, -v);
      for (std::size_t w = 0; w < h.weyl.size(); ++w)
        ci = std::max(ci, std::abs(nu(to_double(h.act(w, mu))).value - v));
    }
    inv = std::max(inv, ci);
    neg = std::max(neg, cn);

    oracle::SplineLaplace lap(hermitian::k_type_measure(o));
    std::uniform_real_distribution<double> z1(-1, 1);
    auto eta = to_double(o.chamber);
    double norm = 0;
    for (double x : eta) norm = std::max(norm, std::abs(x));
    std::vector<std::vector<Complex>> zs;
    while (zs.size() < 10) {
      std::vector<Complex> z(h.dim);
      for (std::size_t j = 0; j < h.dim; ++j) z[j] = Complex(z1(rng), (eta[j] / norm) * (0.9 + 0.3 * z1(rng)));
      try {
        Complex sym = hermitian::laplace_nu_symbolic({h, c.lambda}, z);
        (void)sym;
        zs.push_back(z);
      } catch (const InputError&) {
      }
    }
    auto num = lap(zs);
    double cl = 0;
    for (std::size_t k = 0; k < zs.size(); ++k) {
      Complex sym = hermitian::laplace_nu_symbolic({h, c.lambda}, zs[k]);
      cl = std::max(cl, std::abs(sym - num[k].value) / std::abs(sym));
    }
    lap_dev = std::max(lap_dev, cl);
    out.push_back({{"pair", c.name},
                   {"lambda", c.lambda.size()},
                   {"fixed_points_match", ok},
                   {"weyl_invariance_deviation", ci},
                   {"min_density", -cn},
                   {"laplace_deviation", cl}});
  }
  rep.measured = lap_dev;
  rep.passed = structure && inv <= 1e-9 && neg <= 1e-9 && lap_dev <= rep.tolerance;
  rep.details = {{"cases", out}, {"max_weyl_deviation", inv}, {"max_negative_part", neg}, {"structure_exact", structure}};
  rep.seconds = detail::since(t0);
  return rep;
}

// -- 9: lattice counts ---------------------------------------------------------

inline SuiteReport suite_lattice(const VerifyConfig& = {}) {
  auto t0 = detail::Clock::now();
  SuiteReport rep{"lattice", 9};
  rep.metric = "max |N(t mu)/t^(n-d) - c f(mu)| / f(mu)";
  rep.tolerance = 0.05;
  rep.time_limit = 60;
  auto e = [](std::initializer_list<long> xs) {
    RatVec v;
    for (long x : xs) v.emplace_back(x);
    return v;
  };
  auto one = oracle::lattice_check(1, {e({1}), e({1})}, {e({1}), e({2}), e({3})}, 100);
  auto two = oracle::lattice_check(2, {e({1, 0}), e({0, 1}), e({1, 1})}, {e({1, 1}), e({1, 2}), e({3, 1}), e({2, 3})}, 100);
  auto dump = [](const oracle::LatticeReport& r) {
    Json pts = Json::array();
    for (const auto& p : r.points)
      pts.push_back({{"mu", to_string(p.mu[0]) + (p.mu.size() > 1 ? "," + to_string(p.mu[1]) : "")},
                     {"count", p.count},
                     {"scaled", p.scaled},
                     {"density", p.density}});
    return Json{{"scale", r.scale}, {"constant", r.constant}, {"max_relative_gap", r.max_relative_gap}, {"points", pts}};
  };
  rep.measured = std::max(one.max_relative_gap, two.max_relative_gap);
  rep.passed = rep.measured <= rep.tolerance;
  rep.details = {{"weights {1,1}", dump(one)}, {"weights {e1,e2,e1+e2}", dump(two)}};
  rep.seconds = detail::since(t0);
  return rep;
}

// -- 10: truncated circle ----------------------------------------------------

inline SuiteReport suite_circle(const VerifyConfig& = {}) {
  auto t0 = detail::Clock::now();
  SuiteReport rep{"circle", 10};
  rep.metric = "max |quadrature - right-hand side|";
  rep.tolerance = 1e-8;
  rep.time_limit = 30;
  using C = std::complex<double>;
  struct Case {
    long alpha;
    C z;
    double a;
  };
  std::vector<Case> cases = {{1, C(0, 1), 1.0}, {1, C(0.7, 0.5), 2.0}, {2, C(-1.3, 0.8), 0.5}, {3, C(2.0, 1.5), 3.0},
                             {1, C(0.2, 0.6), 5.0}};
  double worst = 0;
  bool sign_plus = true;
  Json out = Json::array();
  auto cplx = [](C v) { return Json::array({v.real(), v.imag()}); };
  for (const auto& c : cases) {
    auto r = oracle::truncated_circle_check(c.alpha, c.z, c.a);
    worst = std::max(worst, r.gap_plus);
    sign_plus = sign_plus && r.sign == 1;
    out.push_back({{"alpha", c.alpha},
                   {"z", cplx(c.z)},
                   {"a", c.a},
                   {"quadrature", cplx(r.quadrature)},
                   {"fixed_point_term", cplx(r.fixed_point_term)},
                   {"boundary_term", cplx(r.boundary_magnitude)},
                   {"gap_plus", r.gap_plus},
                   {"gap_minus", r.gap_minus},
                   {"resolved_sign", r.sign}});
  }
  auto far = oracle::truncated_circle_check(1, C(0.4, 1.0), 40.0);
  localize::FixedPointModel m{1, 1, {{{Rational(0)}, {{Rational(1)}}}}, std::nullopt};
  std::vector<C> z = {C(0.4, 1.0)};
  double limit_gap = std::abs(far.quadrature - localize::localization_sum(m, z));
  rep.measured = worst;
  rep.passed = worst <= rep.tolerance && sign_plus && far.decay_ratio < 1e-6 && limit_gap <= 1e-6;
  rep.details = {{"kappa", 2 * std::numbers::pi},
                 {"resolved_sign", sign_plus ? 1 : -1},
                 {"cases", out},
                 {"large_level", {{"a", 40.0}, {"decay_ratio", far.decay_ratio}, {"gap_to_fixed_point_sum", limit_gap}}}};
  rep.seconds = detail::since(t0);
  return rep;
}

/// Suites reachable from `dhk verify`.
inline const std::vector<std::pair<std::string, std::function<SuiteReport(const VerifyConfig&)>>>& suites() {
  static const std::vector<std::pair<std::string, std::function<SuiteReport(const VerifyConfig&)>>> all = {
      {"cones", suite_cones},           {"laplace", suite_laplace},     {"identity", suite_identity},
      {"chambers", suite_chambers},     {"convolution", suite_convolution}, {"montecarlo", suite_montecarlo},
      {"archimedes", suite_archimedes}, {"orbits", suite_orbits},       {"lattice", suite_lattice},
      {"circle", suite_circle}};
  return all;
}

inline SuiteReport run_suite(const std::string& name, const VerifyConfig& cfg = {}) {
  for (const auto& [n, f] : suites())
    if (n == name) return f(cfg);
  throw InputError("unknown suite '" + name + "'");
}

}  // namespace dhk::verify
