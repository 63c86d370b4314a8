// JSON and CSV forms of the library's values. Rationals are strings
// ("3", "-2/3", "0.125"); JSON numbers are accepted on input and read
// through their decimal text.
#pragma once

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dhk/conespline.hpp"
#include "dhk/error.hpp"
#include "dhk/hermitian.hpp"
#include "dhk/localize.hpp"
#include "dhk/polycone.hpp"
#include "dhk/rational.hpp"

namespace dhk::io {

using Json = nlohmann::json;

/// Parse with a line:column diagnostic on malformed text.
inline Json parse_json(const std::string& text, const std::string& source = "input") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < std::min(e.byte == 0 ? 0 : e.byte - 1, text.size()); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Write to a temporary file next to `path`, then rename over it.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// -- field access -------------------------------------------------------------

namespace detail {

inline const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

inline std::size_t count(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ParseError(where + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

}  // namespace detail

inline Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) return parse_rational(j.dump());  // shortest round-trip decimal
  throw ParseError(where + ": expected a rational string");
}

inline RatVec vec_from_json(const Json& j, const std::string& where, std::optional<std::size_t> dim = std::nullopt) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  RatVec v;
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(rational_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  if (dim && v.size() != *dim)
    throw DimensionError(where + ": has " + std::to_string(v.size()) + " entries, expected " + std::to_string(*dim));
  return v;
}

inline std::vector<RatVec> vecs_from_json(const Json& j, const std::string& where, std::size_t dim) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  std::vector<RatVec> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(vec_from_json(j[k], where + "[" + std::to_string(k) + "]", dim));
  return out;
}

inline Json to_json(const Rational& r) { return to_string(r); }
inline Json to_json(const RatVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}
inline Json to_json(const std::vector<RatVec>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

// -- polyhedral sets and cones ------------------------------------------------

struct PolyhedralInput {
  polycone::PolyhedralSet set;
  std::vector<RatVec> generators;  // optional, for cone input
  std::vector<RatVec> directions;  // covectors to test
};

inline PolyhedralInput polyhedral_from_json(const Json& j) {
  std::size_t d = detail::count(detail::field(j, "dim", "polyhedral set"), "dim");
  if (d == 0) throw DimensionError("dim: must be >= 1");
  std::vector<polycone::HalfSpace> hs;
  if (j.contains("halfspaces")) {
    const auto& a = j["halfspaces"];
    if (!a.is_array()) throw ParseError("halfspaces: expected an array");
    for (std::size_t k = 0; k < a.size(); ++k) {
      std::string w = "halfspaces[" + std::to_string(k) + "]";
      auto n = vec_from_json(detail::field(a[k], "normal", w), w + ".normal", d);
      Rational c = a[k].contains("offset") ? rational_from_json(a[k]["offset"], w + ".offset") : Rational(0);
      hs.push_back({std::move(n), c});
    }
  }
  PolyhedralInput in{polycone::PolyhedralSet(d, std::move(hs)), {}, {}};
  if (j.contains("generators")) in.generators = vecs_from_json(j["generators"], "generators", d);
  if (j.contains("directions")) in.directions = vecs_from_json(j["directions"], "directions", d);
  return in;
}

inline Json to_json(const polycone::PolyhedralSet& p) {
  Json hs = Json::array();
  for (const auto& h : p.halfspaces()) hs.push_back({{"normal", to_json(h.normal)}, {"offset", to_json(h.offset)}});
  return {{"dim", p.dim()}, {"halfspaces", hs}};
}

inline Json to_json(const polycone::Cone& c) {
  Json j = {{"dim", c.dim()}};
  if (c.has_normals()) {
    Json hs = Json::array();
    for (const auto& n : c.normals()) hs.push_back({{"normal", to_json(n)}, {"offset", "0"}});
    j["halfspaces"] = hs;
  }
  if (c.has_generators()) j["generators"] = to_json(c.generators());
  return j;
}

// -- cone splines -------------------------------------------------------------

inline std::string exponent_key(const std::vector<unsigned>& e) {
  std::string s;
  for (std::size_t k = 0; k < e.size(); ++k) s += (k ? "," : "") + std::to_string(e[k]);
  return s;
}

inline Json to_json(const conespline::Polynomial& p) {
  Json j = Json::object();
  for (const auto& [e, c] : p.coeffs) j[exponent_key(e)] = to_string(c);
  return j;
}

inline Json to_json(const conespline::SignedConeSpline& s) {
  Json terms = Json::array();
  for (const auto& t : s.terms) terms.push_back({{"sign", t.sign}, {"base", to_json(t.base)}, {"factors", to_json(t.factors)}});
  Json j = {{"dim", s.dim}, {"terms", terms}};
  if (s.poly) j["poly"] = to_json(*s.poly);
  return j;
}

inline conespline::Polynomial polynomial_from_json(const Json& j, std::size_t d, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object of exponent -> coefficient");
  conespline::Polynomial p{d, {}};
  for (const auto& [key, val] : j.items()) {
    std::vector<unsigned> e;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        std::size_t used = 0;
        long v = std::stol(part, &used);
        if (used != part.size() || v < 0) throw std::invalid_argument(part);
        e.push_back(static_cast<unsigned>(v));
      } catch (const std::exception&) {
        throw ParseError(where + ": bad exponent key '" + key + "'");
      }
    }
    if (e.size() != d) throw DimensionError(where + ": exponent key '" + key + "' has wrong dimension");
    Rational c = rational_from_json(val, where + "." + key);
    if (c != 0) p.coeffs[e] = c;
  }
  return p;
}

inline conespline::SignedConeSpline spline_from_json(const Json& j) {
  std::size_t d = detail::count(detail::field(j, "dim", "spline"), "dim");
  if (d == 0) throw DimensionError("dim: must be >= 1");
  conespline::SignedConeSpline s{d, {}, std::nullopt};
  const auto& terms = detail::field(j, "terms", "spline");
  if (!terms.is_array()) throw ParseError("terms: expected an array");
  for (std::size_t k = 0; k < terms.size(); ++k) {
    std::string w = "terms[" + std::to_string(k) + "]";
    const auto& sg = detail::field(terms[k], "sign", w);
    if (!sg.is_number_integer()) throw ParseError(w + ".sign: expected 1 or -1");
    s.terms.push_back({sg.get<int>(), vec_from_json(detail::field(terms[k], "base", w), w + ".base", d),
                       vecs_from_json(detail::field(terms[k], "factors", w), w + ".factors", d)});
  }
  if (j.contains("poly") && !j["poly"].is_null()) s.poly = polynomial_from_json(j["poly"], d, "poly");
  conespline::validate(s);
  return s;
}

// -- fixed point models and orbits --------------------------------------------

inline Json to_json(const localize::FixedPointModel& m) {
  Json pts = Json::array();
  for (const auto& p : m.points) pts.push_back({{"image", to_json(p.image)}, {"weights", to_json(p.weights)}});
  Json j = {{"dim", m.dim}, {"halfdim", m.halfdim}, {"points", pts}};
  if (m.xi0) j["xi0"] = to_json(*m.xi0);
  return j;
}

inline localize::FixedPointModel model_from_json(const Json& j) {
  localize::FixedPointModel m;
  m.dim = detail::count(detail::field(j, "dim", "model"), "dim");
  m.halfdim = detail::count(detail::field(j, "halfdim", "model"), "halfdim");
  if (m.dim == 0) throw DimensionError("dim: must be >= 1");
  const auto& pts = detail::field(j, "points", "model");
  if (!pts.is_array()) throw ParseError("points: expected an array");
  for (std::size_t k = 0; k < pts.size(); ++k) {
    std::string w = "points[" + std::to_string(k) + "]";
    m.points.push_back({vec_from_json(detail::field(pts[k], "image", w), w + ".image", m.dim),
                        vecs_from_json(detail::field(pts[k], "weights", w), w + ".weights", m.dim)});
  }
  if (j.contains("xi0") && !j["xi0"].is_null()) m.xi0 = vec_from_json(j["xi0"], "xi0", m.dim);
  localize::check_structure(m);
  return m;
}

/// lambda may be given in measure coordinates (length d) or, for AIII, as the
/// full trace-zero vector of length p + q.
inline hermitian::OrbitSpec orbit_from_json(const Json& j) {
  const auto& fam = detail::field(j, "family", "orbit");
  if (!fam.is_string()) throw ParseError("family: expected a string");
  const auto& pr = detail::field(j, "params", "orbit");
  if (!pr.is_array()) throw ParseError("params: expected an array of integers");
  std::vector<int> params;
  for (std::size_t k = 0; k < pr.size(); ++k) {
    if (!pr[k].is_number_integer()) throw ParseError("params[" + std::to_string(k) + "]: expected an integer");
    params.push_back(pr[k].get<int>());
  }
  auto pair = hermitian::build_pair(fam.get<std::string>(), params);
  auto lam = vec_from_json(detail::field(j, "lambda", "orbit"), "lambda");
  if (pair.trace_zero() && lam.size() == pair.dim + 1) {
    Rational s = 0;
    for (const auto& x : lam) s += x;
    if (s != 0) throw InvalidModelError("lambda: full coordinates must sum to zero");
    lam.pop_back();
  }
  if (lam.size() != pair.dim)
    throw DimensionError("lambda: has " + std::to_string(lam.size()) + " entries, expected " + std::to_string(pair.dim));
  return {std::move(pair), std::move(lam)};
}

inline Json to_json(const hermitian::HermitianPairData& h) {
  Json weyl = Json::array();
  for (std::size_t w = 0; w < h.weyl.size(); ++w) weyl.push_back({{"matrix", to_json(h.weyl[w])}, {"det", h.weyl_det[w]}});
  return {{"family", h.family},
          {"params", h.params},
          {"dim", h.dim},
          {"compact_roots", to_json(std::vector<RatVec>(h.roots.begin(), h.roots.begin() + static_cast<std::ptrdiff_t>(h.compact)))},
          {"noncompact_roots", to_json(std::vector<RatVec>(h.roots.begin() + static_cast<std::ptrdiff_t>(h.compact), h.roots.end()))},
          {"killing_duals", to_json(h.killing_duals)},
          {"center_vector", to_json(h.center_vector)},
          {"weyl", weyl}};
}

// -- grids and CSV --------------------------------------------------------------

/// Inclusive tensor grid from "x0:x1:n,y0:y1:m".
struct Grid {
  std::vector<double> lo, hi;
  std::vector<std::size_t> n;

  std::size_t size() const {
    std::size_t s = 1;
    for (auto k : n) s *= k;
    return s;
  }
  std::vector<double> point(std::size_t flat) const {
    std::vector<double> x(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) {
      std::size_t i = flat % n[k];
      flat /= n[k];
      x[k] = lo[k] + (hi[k] - lo[k]) * static_cast<double>(i) / static_cast<double>(n[k] - 1);
    }
    return x;
  }
};

inline Grid parse_grid(const std::string& spec, std::size_t dim) {
  Grid g;
  std::stringstream ss(spec);
  std::string axis;
  while (std::getline(ss, axis, ',')) {
    std::stringstream as(axis);
    std::string a, b, c;
    if (!std::getline(as, a, ':') || !std::getline(as, b, ':') || !std::getline(as, c) )
      throw ParseError("grid: axis '" + axis + "' is not x0:x1:n");
    try {
      std::size_t used = 0;
      double x0 = std::stod(a), x1 = std::stod(b);
      long n = std::stol(c, &used);
      if (used != c.size()) throw std::invalid_argument(c);
      if (n < 2) throw ParseError("grid: resolution must be >= 2 per axis");
      if (!(x1 > x0)) throw ParseError("grid: axis '" + axis + "' needs x0 < x1");
      g.lo.push_back(x0);
      g.hi.push_back(x1);
      g.n.push_back(static_cast<std::size_t>(n));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("grid: axis '" + axis + "' is not x0:x1:n");
    }
  }
  if (g.n.size() != dim)
    throw DimensionError("grid: has " + std::to_string(g.n.size()) + " axes, expected " + std::to_string(dim));
  return g;
}

inline std::string csv_header(std::size_t dim) {
  std::string h;
  for (std::size_t k = 0; k < dim; ++k) h += "mu_" + std::to_string(k + 1) + ",";
  return h + "density,error_bound\n";
}

/// Density table over a grid, one row per point.
inline std::string density_csv(const conespline::SplineDensity& f, const Grid& g) {
  std::ostringstream out;
  out << csv_header(g.n.size()) << std::setprecision(17);
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto x = g.point(i);
    auto v = f(x);
    for (double c : x) out << c << ",";
    out << v.value << "," << v.abs_error_bound << "\n";
  }
  return out.str();
}

}  // namespace dhk::io
