// dhk: batch front end. Subcommands cones, abelian, orbit, verify.
// Exit status: 0 success, 1 internal error, 2 invalid input.
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "dhk/hermitian.hpp"
#include "dhk/io.hpp"
#include "dhk/localize.hpp"
#include "dhk/oracle/laplace.hpp"
#include "dhk/verify.hpp"

namespace fs = std::filesystem;
using dhk::Rational;
using dhk::RatVec;
using dhk::io::Json;
using Complex = std::complex<double>;

namespace {

int log_level() {
  const char* v = std::getenv("DHK_LOG");
  if (!v) return 0;
  std::string s(v);
  if (s == "debug" || s == "2") return 2;
  if (s == "info" || s == "1") return 1;
  return 0;
}

void log(int level, const std::string& msg) {
  if (log_level() >= level) std::cerr << "dhk: " << msg << "\n";
}

struct RunConfig {
  std::string input;
  std::string out = ".";
  std::string grid;
  int zeta_samples = 20;
  std::uint64_t seed = 0;
  std::string chamber;
  std::string measure = "both";
  std::optional<double> tol;
  std::string suite;
};

fs::path out_dir(const RunConfig& rc) {
  fs::path d(rc.out);
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec || !fs::is_directory(d)) throw dhk::InputError("--out: cannot create directory " + d.string());
  auto probe = d / ".dhk_write_probe";
  dhk::io::write_atomic(probe, "");
  fs::remove(probe);
  return d;
}

void emit(const fs::path& path, const std::string& content) {
  dhk::io::write_atomic(path, content);
  log(1, "wrote " + path.string());
}

Json load(const RunConfig& rc) {
  if (rc.input.empty()) throw dhk::InputError("--input is required");
  return dhk::io::parse_json(dhk::io::read_file(rc.input), rc.input);
}

RatVec parse_chamber(const std::string& s, std::size_t dim) {
  RatVec v;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) v.push_back(dhk::parse_rational(part));
  if (v.size() != dim) throw dhk::DimensionError("--chamber: expected " + std::to_string(dim) + " coordinates");
  return v;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json zeta_json(const std::vector<Complex>& z) {
  Json a = Json::array();
  for (auto c : z) a.push_back(complex_json(c));
  return a;
}

/// Box covering the fixed point images, padded into the unbounded side.
dhk::io::Grid default_grid(const std::vector<RatVec>& images, std::size_t dim) {
  dhk::io::Grid g;
  for (std::size_t k = 0; k < dim; ++k) {
    double lo = dhk::to_double(images[0][k]), hi = lo;
    for (const auto& p : images) {
      lo = std::min(lo, dhk::to_double(p[k]));
      hi = std::max(hi, dhk::to_double(p[k]));
    }
    double pad = 1 + 0.5 * (hi - lo);
    g.lo.push_back(lo - pad);
    g.hi.push_back(hi + pad);
    g.n.push_back(dim == 1 ? 81 : 41);
  }
  return g;
}

dhk::io::Grid grid_for(const RunConfig& rc, const std::vector<RatVec>& images, std::size_t dim) {
  return rc.grid.empty() ? default_grid(images, dim) : dhk::io::parse_grid(rc.grid, dim);
}

Json calibration_json() {
  return {{"darboux_over_unit_per_complex_dimension", 2 * std::numbers::pi},
          {"convention", "densities are unit-normalized; the pushforward of omega^n/n! in Darboux coordinates is "
                         "(2 pi)^n times the density"}};
}

// -- cones ---------------------------------------------------------------------

int cmd_cones(const RunConfig& rc) {
  auto in = dhk::io::polyhedral_from_json(load(rc));
  auto dir = out_dir(rc);
  namespace pc = dhk::polycone;
  const auto& p = in.set;
  auto witness = pc::witness_point(p);
  auto ac = pc::with_generators(pc::asymptotic_cone(p));
  auto dual = pc::dual_cone(pc::asymptotic_cone(p));
  Json report = {{"dim", p.dim()},
                 {"witness_point", dhk::io::to_json(witness)},
                 {"asymptotic_cone", dhk::io::to_json(ac)},
                 {"dual_generators", dhk::io::to_json(pc::extreme_generators(dual.generators()))},
                 {"proper", pc::is_proper(p)},
                 {"compact", pc::is_compact(p)}};
  if (!in.generators.empty()) {
    auto c = pc::with_normals(pc::Cone::from_generators(p.dim(), in.generators));
    report["generated_cone_normals"] = dhk::io::to_json(c.normals());
  }
  Json dirs = Json::array();
  for (const auto& xi : in.directions)
    dirs.push_back({{"xi", dhk::io::to_json(xi)},
                    {"bounded_below", pc::bounded_below(p, xi)},
                    {"proper_projection", pc::proper_projection_directions(p, xi)}});
  report["directions"] = dirs;
  emit(dir / "cones.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return 0;
}

// -- abelian -------------------------------------------------------------------

int cmd_abelian(const RunConfig& rc) {
  auto m = dhk::io::model_from_json(load(rc));
  auto dir = out_dir(rc);
  std::optional<RatVec> xi;
  if (!rc.chamber.empty()) xi = parse_chamber(rc.chamber, m.dim);
  if (xi && !dhk::localize::is_regular_direction(m, *xi))
    throw dhk::NonRegularError("--chamber: some weight vanishes on xi");
  auto v = dhk::localize::validate_model(m, xi);
  const auto& r = v.renormalized;
  auto spline = dhk::localize::spline_from(r, m.dim);
  emit(dir / "measure.json", dhk::io::to_json(spline).dump(2) + "\n");

  std::vector<RatVec> images;
  for (const auto& p : m.points) images.push_back(p.image);
  auto grid = grid_for(rc, images, m.dim);
  emit(dir / "density.csv", dhk::io::density_csv(dhk::conespline::SplineDensity(spline), grid));

  // Laplace consistency at sampled zeta with Im zeta inside the dual of Gamma
  double tol = rc.tol.value_or(1e-10);
  std::mt19937_64 rng(rc.seed);
  std::uniform_real_distribution<double> u(-2, 2);
  auto eta = dhk::to_double(r.xi);
  double norm = 0;
  for (double x : eta) norm = std::max(norm, std::abs(x));
  Json samples = Json::array();
  double worst = 0;
  int tries = 0;
  while (static_cast<int>(samples.size()) < rc.zeta_samples && ++tries < 100 * std::max(rc.zeta_samples, 1)) {
    std::vector<Complex> z(m.dim);
    for (std::size_t j = 0; j < m.dim; ++j) z[j] = Complex(u(rng), (eta[j] / norm) * (0.5 + std::abs(u(rng))));
    if (!dhk::localize::is_regular(m, z) || !dhk::localize::in_gamma_interior(r, z)) continue;
    auto a = dhk::conespline::spline_laplace(spline, z);
    auto b = dhk::localize::localization_sum(m, z, &r);
    double dev = std::abs(a - b) / std::abs(b);
    worst = std::max(worst, dev);
    samples.push_back({{"zeta", zeta_json(z)}, {"spline", complex_json(a)}, {"localization", complex_json(b)},
                       {"relative_deviation", dev}});
  }
  Json report = {{"chamber", dhk::io::to_json(r.xi)},
                 {"gamma_generators", dhk::io::to_json(v.gamma.cone.generators())},
                 {"gamma_normals", dhk::io::to_json(v.gamma.cone.normals())},
                 {"support_min", dhk::io::to_json(dhk::localize::support_min(r, r.xi))},
                 {"weight_arrangement", dhk::io::to_json(v.arrangement)},
                 {"zeta_samples", samples},
                 {"max_relative_deviation", worst},
                 {"tolerance", tol},
                 {"consistent", worst <= tol},
                 {"calibration", calibration_json()}};
  emit(dir / "laplace_report.json", report.dump(2) + "\n");
  std::cout << "abelian: " << spline.terms.size() << " terms, max laplace deviation " << worst
            << (worst <= tol ? " (ok)" : " (exceeds tolerance)") << "\n";
  return 0;
}

// -- orbit ---------------------------------------------------------------------

int cmd_orbit(const RunConfig& rc) {
  if (rc.measure != "t" && rc.measure != "k" && rc.measure != "both")
    throw dhk::InputError("--measure: expected t, k or both");
  auto spec = dhk::io::orbit_from_json(load(rc));
  auto dir = out_dir(rc);
  const auto& h = spec.pair;
  auto o = dhk::hermitian::orbit_model(spec);
  std::optional<RatVec> xi;
  if (!rc.chamber.empty()) xi = parse_chamber(rc.chamber, h.dim);

  Json pair = dhk::io::to_json(h);
  Json fixed = Json::array();
  for (std::size_t j = 0; j < o.model.points.size(); ++j)
    fixed.push_back({{"image", dhk::io::to_json(o.model.points[j].image)},
                     {"weights", dhk::io::to_json(o.model.points[j].weights)},
                     {"det", o.det[j]}});
  Json report = {{"pair", pair},
                 {"lambda", dhk::io::to_json(o.lambda)},
                 {"chamber", dhk::io::to_json(xi ? *xi : o.chamber)},
                 {"fixed_points", fixed},
                 {"calibration", calibration_json()}};

  std::vector<RatVec> images;
  for (const auto& p : o.model.points) images.push_back(p.image);
  auto grid = grid_for(rc, images, h.dim);
  if (rc.measure != "k") {
    auto t = dhk::hermitian::t_type_measure(o, xi);
    emit(dir / "t_type.json", dhk::io::to_json(t).dump(2) + "\n");
    emit(dir / "t_type.csv", dhk::io::density_csv(dhk::conespline::SplineDensity(t), grid));
    report["t_type_terms"] = t.terms.size();
  }
  if (rc.measure != "t") {
    auto k = dhk::hermitian::k_type_measure(o, xi);
    emit(dir / "k_type.json", dhk::io::to_json(k).dump(2) + "\n");
    dhk::conespline::SplineDensity nu(k);
    emit(dir / "k_type.csv", dhk::io::density_csv(nu, grid));
    report["k_type_terms"] = k.terms.size();

    // W-invariance and sign of nu on the grid
    double inv = 0, neg = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto x = grid.point(i);
      RatVec mu;
      for (double c : x) mu.push_back(dhk::parse_rational(Json(c).dump()));
      double v0 = nu(dhk::to_double(mu)).value;
      neg = std::max(neg, -v0);
      for (std::size_t w = 0; w < h.weyl.size(); ++w)
        inv = std::max(inv, std::abs(nu(dhk::to_double(h.act(w, mu))).value - v0));
    }
    report["weyl_invariance_deviation"] = inv;
    report["max_negative_part"] = neg;

    // symbolic transform against the numeric transform of nu
    double tol = rc.tol.value_or(1e-3);
    Json cmp = Json::array();
    double worst = 0;
    if (h.dim <= 3) {
      dhk::oracle::SplineLaplace lap(k);
      std::mt19937_64 rng(rc.seed);
      std::uniform_real_distribution<double> u(-1, 1);
      auto eta = dhk::to_double(o.chamber);
      double norm = 0;
      for (double x : eta) norm = std::max(norm, std::abs(x));
      std::vector<std::vector<Complex>> zs;
      std::vector<Complex> sym;
      int tries = 0;
      while (static_cast<int>(zs.size()) < rc.zeta_samples && ++tries < 100 * std::max(rc.zeta_samples, 1)) {
        std::vector<Complex> z(h.dim);
        for (std::size_t j = 0; j < h.dim; ++j) z[j] = Complex(u(rng), (eta[j] / norm) * (0.9 + 0.3 * u(rng)));
        try {
          sym.push_back(dhk::hermitian::laplace_nu_symbolic(spec, z));
          zs.push_back(z);
        } catch (const dhk::InputError&) {
        }
      }
      auto num = lap(zs);
      for (std::size_t s = 0; s < zs.size(); ++s) {
        double dev = std::abs(sym[s] - num[s].value) / std::abs(sym[s]);
        worst = std::max(worst, dev);
        cmp.push_back({{"zeta", zeta_json(zs[s])}, {"symbolic", complex_json(sym[s])},
                       {"numeric", complex_json(num[s].value)}, {"relative_deviation", dev}});
      }
      report["laplace_comparison"] = {{"samples", cmp}, {"max_relative_deviation", worst}, {"tolerance", tol},
                                      {"consistent", worst <= tol}};
    } else {
      report["laplace_comparison"] = {{"skipped", "numeric transform is available for dim <= 3"}};
    }
  }
  emit(dir / "orbit_report.json", report.dump(2) + "\n");
  std::cout << "orbit " << h.family << ": " << o.model.points.size() << " fixed points\n";
  return 0;
}

// -- verify --------------------------------------------------------------------

int cmd_verify(const RunConfig& rc) {
  static const std::vector<std::string> allowed = {"cones", "convolution", "laplace", "montecarlo", "lattice", "circle"};
  if (std::find(allowed.begin(), allowed.end(), rc.suite) == allowed.end())
    throw dhk::InputError("verify: unknown suite '" + rc.suite + "' (cones, convolution, laplace, montecarlo, lattice, circle)");
  auto dir = out_dir(rc);
  dhk::verify::VerifyConfig cfg;
  cfg.seed = rc.seed;
  log(1, "running suite " + rc.suite);
  auto rep = dhk::verify::run_suite(rc.suite, cfg);
  auto j = rep.to_json();
  j["seed"] = rc.seed;
  if (rc.suite == "montecarlo" || rc.suite == "circle") j["calibration"] = calibration_json();
  emit(dir / ("verify_" + rc.suite + ".json"), j.dump(2) + "\n");
  std::cout << (rep.ok() ? "PASS " : "FAIL ") << rc.suite << ": " << rep.metric << " = " << rep.measured << " (tol "
            << rep.tolerance << "), " << rep.seconds << " s\n";
  if (rc.suite == "montecarlo")
    std::cout << "calibration constant per complex dimension: " << rep.details["calibration_per_complex_dimension"]
              << "\n";
  if (rc.suite == "circle") std::cout << "resolved boundary sign: " << rep.details["resolved_sign"] << "\n";
  return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Duistermaat-Heckman measures of torus actions and Hermitian orbits"};
  app.require_subcommand(1);
  RunConfig rc;
  auto common = [&](CLI::App* c, bool input) {
    if (input) c->add_option("--input", rc.input, "input JSON")->required();
    c->add_option("--out", rc.out, "output directory");
  };
  auto* cones = app.add_subcommand("cones", "analyze a polyhedral set");
  common(cones, true);
  auto* abelian = app.add_subcommand("abelian", "measure and Laplace report for a fixed point model");
  common(abelian, true);
  abelian->add_option("--grid", rc.grid, "density grid x0:x1:n,y0:y1:m");
  abelian->add_option("--zeta-samples", rc.zeta_samples, "number of zeta samples")->check(CLI::NonNegativeNumber);
  abelian->add_option("--seed", rc.seed, "random seed");
  abelian->add_option("--chamber", rc.chamber, "regular direction xi, comma separated");
  abelian->add_option("--tol", rc.tol, "tolerance for the Laplace consistency check");
  auto* orbit = app.add_subcommand("orbit", "T-type and K-type measures of an orbit");
  common(orbit, true);
  orbit->add_option("--grid", rc.grid, "density grid x0:x1:n,y0:y1:m");
  orbit->add_option("--zeta-samples", rc.zeta_samples, "number of zeta samples")->check(CLI::NonNegativeNumber);
  orbit->add_option("--seed", rc.seed, "random seed");
  orbit->add_option("--chamber", rc.chamber, "regular direction xi, comma separated");
  orbit->add_option("--measure", rc.measure, "t, k or both");
  orbit->add_option("--tol", rc.tol, "tolerance for the symbolic vs numeric transform");
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  common(verify, false);
  verify->add_option("suite", rc.suite, "cones, convolution, laplace, montecarlo, lattice or circle")->required();
  verify->add_option("--seed", rc.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    if (*cones) return cmd_cones(rc);
    if (*abelian) return cmd_abelian(rc);
    if (*orbit) return cmd_orbit(rc);
    if (*verify) return cmd_verify(rc);
  } catch (const dhk::InputError& e) {
    std::cerr << "dhk: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dhk: internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
