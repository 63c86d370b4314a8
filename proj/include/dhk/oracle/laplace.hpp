// Numeric Fourier-Laplace transform  int e^{i <mu, zeta>} f(mu) dmu  of a cone
// spline density f, using only pointwise density values.
//
// The support lies in apex + C for a pointed cone C. C is split into
// simplicial cones, each parametrized by mu = apex + t sigma(lambda) with
// lambda on a slice simplex (dmu = |det V| t^{d-1} dt dlambda). The slice is
// cut into cells along every hyperplane through the apex where rays change
// combinatorial type; cells are refined until they are small next to the
// complex zero of <sigma(lambda), zeta>, then get a tensor Gauss rule. Along
// a ray the density is polynomial between wall crossings: finite pieces use
// Gauss-Legendre panels short enough for the oscillation, and the last,
// unbounded piece is interpolated and integrated exactly against e^{i omega t}.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "dhk/conespline.hpp"
#include "dhk/error.hpp"
#include "dhk/lp.hpp"
#include "dhk/polycone.hpp"
#include "dhk/rational.hpp"

namespace dhk::oracle {

using conespline::Complex;
using conespline::CVec;

struct LaplaceConfig {
  int segment_points = 24;   // Gauss nodes per slice cell, d = 2
  int triangle_order = 8;    // collapsed Gauss order per triangle, d = 3
  int ray_points = 16;       // Gauss nodes per finite ray panel
  double max_phase = 1.0;    // |omega| times panel length
  double pole_ratio = 0.5;   // cell diameter over distance to the pole, d = 2
  double triangle_pole_ratio = 1.0;  // same for d = 3 triangles
  int max_refine = 12;
};

struct LaplaceResult {
  Complex value = 0;
  double error_estimate = 0;  // residual of the polynomial tail fit
  std::size_t evaluations = 0;
};

namespace detail {

/// Gauss-Legendre rule on [0, 1] by Golub-Welsch.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre01(int m) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, m);
  for (int k = 1; k < m; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  std::vector<double> x(static_cast<std::size_t>(m)), w(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    x[static_cast<std::size_t>(k)] = 0.5 * (es.eigenvalues()(k) + 1.0);
    double v = es.eigenvectors()(0, k);
    w[static_cast<std::size_t>(k)] = v * v;
  }
  return {x, w};
}

inline int poly_degree(const conespline::Polynomial& p) {
  int deg = 0;
  for (const auto& [e, c] : p.coeffs) {
    int s = 0;
    for (auto k : e) s += static_cast<int>(k);
    deg = std::max(deg, s);
  }
  return deg;
}

inline RatVec sign_normalized(RatVec v) {
  v = polycone::detail::primitive(std::move(v));
  for (const auto& x : v)
    if (x != 0) {
      if (x < 0) v = -v;
      break;
    }
  return v;
}

}  // namespace detail

class SplineLaplace {
 public:
  explicit SplineLaplace(conespline::SignedConeSpline s, LaplaceConfig cfg = {})
      : density_(s), spline_(std::move(s)), cfg_(cfg), d_(spline_.dim) {
    if (spline_.terms.empty()) return;
    if (d_ > 3) throw LimitError("numeric_laplace: dimension above 3 is not supported");
    std::size_t n = spline_.terms.front().factors.size();
    for (const auto& t : spline_.terms)
      if (rank(t.factors, d_) < d_)
        throw DimensionError("numeric_laplace: every term needs factors spanning the ambient space");
    degree_ = static_cast<int>(n - d_) + (spline_.poly ? detail::poly_degree(*spline_.poly) : 0) +
              static_cast<int>(d_) - 1;

    std::vector<RatVec> all;
    for (const auto& t : spline_.terms) all.insert(all.end(), t.factors.begin(), t.factors.end());
    auto eta = conespline::positive_functional(d_, all);
    if (!eta) throw GeometryError("numeric_laplace: the support is not contained in a proper cone");
    generators_ = polycone::extreme_generators(all);
    auto cone = polycone::with_normals(polycone::Cone::from_generators(d_, generators_));

    // apex: the <eta, .>-largest a with every base in a + C
    std::vector<lp::Constraint> cons;
    for (const auto& h : cone.normals()) {
      Rational lo = dot(h, spline_.terms.front().base);
      for (const auto& t : spline_.terms) lo = std::min(lo, Rational(dot(h, t.base)));
      cons.push_back(lp::le(h, lo));
    }
    auto res = lp::minimize(d_, cons, -*eta);
    if (res.status != lp::Status::kOptimal) throw GeometryError("numeric_laplace: no apex for the support cone");
    apex_ = res.point;
    apex_d_ = to_double(apex_);

    build_walls();
    build_cells(*eta);
    auto [sx, sw] = detail::gauss_legendre01(cfg_.segment_points);
    seg_x_ = sx;
    seg_w_ = sw;
    auto [tx, tw] = detail::gauss_legendre01(cfg_.triangle_order);
    tri_x_ = tx;
    tri_w_ = tw;
    auto [rx, rw] = detail::gauss_legendre01(cfg_.ray_points);
    ray_x_ = rx;
    ray_w_ = rw;
    fit_nodes();
  }

  const RatVec& apex() const { return apex_; }
  const std::vector<RatVec>& domain_generators() const { return generators_; }

  std::vector<LaplaceResult> operator()(const std::vector<CVec>& zetas) const {
    Batch b{zetas, std::vector<LaplaceResult>(zetas.size()), {}, {}, {}, 0, std::vector<double>(d_)};
    if (spline_.terms.empty() || zetas.empty()) return b.out;
    const Complex i(0, 1);
    std::vector<Complex> phase(zetas.size());
    for (std::size_t z = 0; z < zetas.size(); ++z) {
      if (zetas[z].size() != d_) throw DimensionError("numeric_laplace: zeta has wrong dimension");
      for (const auto& g : generators_) {
        auto gd = to_double(g);
        double decay = 0;
        for (std::size_t k = 0; k < d_; ++k) decay += gd[k] * zetas[z][k].imag();
        if (!(decay > 0)) throw GeometryError("numeric_laplace: Im(zeta) does not decay along a support ray");
      }
      phase[z] = std::exp(i * conespline::pair(apex_d_, zetas[z]));
    }
    b.omega.resize(zetas.size());
    b.acc.resize(zetas.size());

    for (const auto& sc : cones_) {
      // omega at the cone's generators, per zeta
      std::vector<std::vector<Complex>> om(d_, std::vector<Complex>(zetas.size()));
      for (std::size_t c = 0; c < d_; ++c)
        for (std::size_t z = 0; z < zetas.size(); ++z) om[c][z] = conespline::pair(sc.v[c], zetas[z]);
      if (d_ == 1) {
        integrate_ray(b, sc.v[0], sc.jac);
      } else if (d_ == 2) {
        for (const auto& seg : sc.segments) refine_segment(b, sc, om, seg[0], seg[1], 0);
      } else {
        for (const auto& tri : sc.triangles) refine_triangle(b, sc, om, tri, 0);
      }
    }
    for (std::size_t z = 0; z < zetas.size(); ++z) {
      b.out[z].value *= phase[z];
      b.out[z].error_estimate *= std::abs(phase[z]);
      b.out[z].evaluations = b.evals;
    }
    return b.out;
  }

  LaplaceResult operator()(std::span<const Complex> zeta) const {
    return (*this)(std::vector<CVec>{CVec(zeta.begin(), zeta.end())}).front();
  }

 private:
  using P2 = std::array<double, 2>;
  struct Wall {
    std::vector<double> normal;
    double offset;
  };
  struct SimplicialCone {
    std::vector<std::vector<double>> v;
    double jac = 1;
    std::vector<std::array<double, 2>> segments;
    std::vector<std::array<P2, 3>> triangles;
  };
  struct Batch {
    const std::vector<CVec>& zetas;
    std::vector<LaplaceResult> out;
    std::vector<Complex> omega, acc;
    std::vector<double> scratch;
    std::size_t evals;
    std::vector<double> point;
  };

  // -- construction ---------------------------------------------------------

  void build_walls() {
    std::vector<std::pair<RatVec, Rational>> walls;
    for (const auto& t : spline_.terms) {
      std::vector<std::size_t> idx(d_ - 1);
      auto rec = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
        if (depth + 1 == d_) {
          RatMat sub;
          for (auto i : idx) sub.push_back(t.factors[i]);
          auto ns = nullspace(sub, d_);
          if (ns.size() != 1) return;
          auto nv = detail::sign_normalized(ns[0]);
          std::pair<RatVec, Rational> w{nv, dot(nv, t.base)};
          if (std::find(walls.begin(), walls.end(), w) == walls.end()) walls.push_back(w);
          return;
        }
        for (std::size_t i = start; i < t.factors.size(); ++i) {
          idx[depth] = i;
          self(self, i + 1, depth + 1);
        }
      };
      rec(rec, 0, 0);
    }
    for (const auto& [nv, c] : walls) walls_.push_back({to_double(nv), to_double(c)});

    // hyperplanes through the apex where rays meet a wall or a codim-2 stratum
    for (std::size_t i = 0; i < walls.size(); ++i) {
      Rational gi = walls[i].second - dot(walls[i].first, apex_);
      if (gi == 0) add_cut(walls[i].first);
      for (std::size_t j = i + 1; j < walls.size(); ++j) {
        Rational gj = walls[j].second - dot(walls[j].first, apex_);
        RatVec v = gj * walls[i].first - gi * walls[j].first;
        if (!is_zero(v)) add_cut(v);
      }
    }
  }

  void add_cut(const RatVec& v) {
    auto nv = detail::sign_normalized(v);
    if (std::find(cuts_r_.begin(), cuts_r_.end(), nv) == cuts_r_.end()) {
      cuts_r_.push_back(nv);
      cuts_.push_back(to_double(nv));
    }
  }

  /// Simplicial cones covering C, as generator lists.
  std::vector<std::vector<std::vector<double>>> simplicial_cones(const RatVec& eta) const {
    std::vector<std::vector<double>> g;
    for (const auto& v : generators_) g.push_back(to_double(v));
    if (d_ == 1 || d_ == 2) return {g};
    // d = 3: order the rays cyclically on the slice <eta, .> = 1
    auto e = to_double(eta);
    Eigen::Vector3d en(e[0], e[1], e[2]);
    std::vector<Eigen::Vector3d> p;
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (const auto& v : g) {
      Eigen::Vector3d q(v[0], v[1], v[2]);
      q /= q.dot(en);
      p.push_back(q);
      c += q / static_cast<double>(g.size());
    }
    Eigen::Vector3d u0 = p[0] - c;
    u0 -= en * (u0.dot(en) / en.squaredNorm());
    u0.normalize();
    Eigen::Vector3d u1 = en.cross(u0).normalized();
    std::vector<std::pair<double, std::size_t>> ang;
    for (std::size_t k = 0; k < p.size(); ++k) ang.push_back({std::atan2((p[k] - c).dot(u1), (p[k] - c).dot(u0)), k});
    std::sort(ang.begin(), ang.end());
    std::vector<std::vector<std::vector<double>>> out;
    for (std::size_t k = 1; k + 1 < ang.size(); ++k)
      out.push_back({g[ang[0].second], g[ang[k].second], g[ang[k + 1].second]});
    return out;
  }

  static double polygon_area(const std::vector<P2>& p) {
    double a = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const auto& u = p[k];
      const auto& v = p[(k + 1) % p.size()];
      a += u[0] * v[1] - u[1] * v[0];
    }
    return std::abs(a) / 2;
  }

  void build_cells(const RatVec& eta) {
    for (const auto& v : simplicial_cones(eta)) {
      SimplicialCone sc;
      sc.v = v;
      Eigen::MatrixXd vm(static_cast<Eigen::Index>(d_), static_cast<Eigen::Index>(d_));
      for (std::size_t c = 0; c < d_; ++c)
        for (std::size_t r = 0; r < d_; ++r) vm(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[c][r];
      sc.jac = std::abs(vm.determinant());
      auto h_of = [&](const std::vector<double>& cut) {
        std::vector<double> h(d_, 0.0);
        for (std::size_t c = 0; c < d_; ++c)
          for (std::size_t r = 0; r < d_; ++r) h[c] += cut[r] * v[c][r];
        return h;
      };
      if (d_ == 2) {
        std::vector<double> pts = {0.0, 1.0};
        for (const auto& cut : cuts_) {
          auto h = h_of(cut);
          // lambda h_0 + (1 - lambda) h_1 = 0
          if (h[1] - h[0] == 0) continue;
          double l = h[1] / (h[1] - h[0]);
          if (l > 1e-14 && l < 1 - 1e-14) pts.push_back(l);
        }
        std::sort(pts.begin(), pts.end());
        for (std::size_t k = 0; k + 1 < pts.size(); ++k)
          if (pts[k + 1] - pts[k] > 1e-15) sc.segments.push_back({pts[k], pts[k + 1]});
      } else if (d_ == 3) {
        std::vector<std::vector<P2>> cells = {{P2{1, 0}, P2{0, 1}, P2{0, 0}}};
        for (const auto& cut : cuts_) {
          auto h = h_of(cut);
          auto hv = [&](const P2& p) { return p[0] * h[0] + p[1] * h[1] + (1 - p[0] - p[1]) * h[2]; };
          std::vector<std::vector<P2>> next;
          for (const auto& poly : cells) {
            std::vector<P2> pos, neg;
            for (std::size_t k = 0; k < poly.size(); ++k) {
              const P2& a = poly[k];
              const P2& b = poly[(k + 1) % poly.size()];
              double ha = hv(a), hb = hv(b);
              if (ha >= 0) pos.push_back(a);
              if (ha <= 0) neg.push_back(a);
              if ((ha > 0 && hb < 0) || (ha < 0 && hb > 0)) {
                double s = ha / (ha - hb);
                P2 m{a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])};
                pos.push_back(m);
                neg.push_back(m);
              }
            }
            for (auto* part : {&pos, &neg})
              if (part->size() >= 3 && polygon_area(*part) > 1e-14) next.push_back(*part);
          }
          cells = std::move(next);
        }
        for (const auto& poly : cells)
          for (std::size_t k = 1; k + 1 < poly.size(); ++k) sc.triangles.push_back({poly[0], poly[k], poly[k + 1]});
      }
      cones_.push_back(std::move(sc));
    }
  }

  void fit_nodes() {
    int m = degree_ + 1;
    Eigen::MatrixXd v(m, m);
    for (int q = 0; q < m; ++q) {
      double xq = 0.5 * (1 - std::cos(std::numbers::pi * (q + 0.5) / m));
      fit_x_.push_back(xq);
      double p = 1;
      for (int k = 0; k < m; ++k) {
        v(q, k) = p;
        p *= xq;
      }
    }
    fit_lu_ = v.fullPivLu();
  }

  // -- evaluation -----------------------------------------------------------

  /// Lower bound on the distance from a slice cell to the zero of omega:
  /// min over vertices of Im omega over |grad omega|.
  double pole_distance(const std::vector<std::vector<Complex>>& om, const std::vector<std::vector<double>>& lams) const {
    double best = std::numeric_limits<double>::infinity();
    std::size_t nz = om[0].size();
    for (std::size_t z = 0; z < nz; ++z) {
      double grad2 = 0;
      for (std::size_t c = 0; c + 1 < d_; ++c) grad2 += std::norm(om[c][z] - om[d_ - 1][z]);
      if (grad2 == 0) continue;
      double mn = std::numeric_limits<double>::infinity();
      for (const auto& l : lams) {
        double im = 0;
        for (std::size_t c = 0; c < d_; ++c) im += l[c] * om[c][z].imag();
        mn = std::min(mn, im);
      }
      best = std::min(best, mn / std::sqrt(grad2));
    }
    return best;
  }

  std::vector<double> sigma_of(const SimplicialCone& sc, const std::vector<double>& lam) const {
    std::vector<double> s(d_, 0.0);
    for (std::size_t c = 0; c < d_; ++c)
      for (std::size_t r = 0; r < d_; ++r) s[r] += lam[c] * sc.v[c][r];
    return s;
  }

  void refine_segment(Batch& b, const SimplicialCone& sc, const std::vector<std::vector<Complex>>& om, double l0,
                      double l1, int depth) const {
    double dist = pole_distance(om, {{l0, 1 - l0}, {l1, 1 - l1}});
    if (l1 - l0 > cfg_.pole_ratio * dist && depth < cfg_.max_refine) {
      double m = 0.5 * (l0 + l1);
      refine_segment(b, sc, om, l0, m, depth + 1);
      refine_segment(b, sc, om, m, l1, depth + 1);
      return;
    }
    double len = l1 - l0;
    for (std::size_t q = 0; q < seg_x_.size(); ++q) {
      double l = l0 + seg_x_[q] * len;
      integrate_ray(b, sigma_of(sc, {l, 1.0 - l}), sc.jac * seg_w_[q] * len);
    }
  }

  void refine_triangle(Batch& b, const SimplicialCone& sc, const std::vector<std::vector<Complex>>& om,
                       const std::array<P2, 3>& t, int depth) const {
    auto lam = [](const P2& p) { return std::vector<double>{p[0], p[1], 1 - p[0] - p[1]}; };
    double diam = 0;
    for (int a = 0; a < 3; ++a) {
      const P2& p = t[static_cast<std::size_t>(a)];
      const P2& q = t[static_cast<std::size_t>((a + 1) % 3)];
      diam = std::max(diam, std::hypot(p[0] - q[0], p[1] - q[1]));
    }
    double dist = pole_distance(om, {lam(t[0]), lam(t[1]), lam(t[2])});
    if (diam > cfg_.triangle_pole_ratio * dist && depth < cfg_.max_refine) {
      P2 m01{0.5 * (t[0][0] + t[1][0]), 0.5 * (t[0][1] + t[1][1])};
      P2 m12{0.5 * (t[1][0] + t[2][0]), 0.5 * (t[1][1] + t[2][1])};
      P2 m20{0.5 * (t[2][0] + t[0][0]), 0.5 * (t[2][1] + t[0][1])};
      refine_triangle(b, sc, om, {t[0], m01, m20}, depth + 1);
      refine_triangle(b, sc, om, {m01, t[1], m12}, depth + 1);
      refine_triangle(b, sc, om, {m20, m12, t[2]}, depth + 1);
      refine_triangle(b, sc, om, {m01, m12, m20}, depth + 1);
      return;
    }
    const P2 &p0 = t[0], &p1 = t[1], &p2 = t[2];
    double det = std::abs((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0]));
    if (det <= 1e-300) return;
    for (std::size_t a = 0; a < tri_x_.size(); ++a)
      for (std::size_t c = 0; c < tri_x_.size(); ++c) {
        double u = tri_x_[a], s = tri_x_[c];
        double l0 = p0[0] + u * ((1 - s) * (p1[0] - p0[0]) + s * (p2[0] - p0[0]));
        double l1 = p0[1] + u * ((1 - s) * (p1[1] - p0[1]) + s * (p2[1] - p0[1]));
        integrate_ray(b, sigma_of(sc, {l0, l1, 1.0 - l0 - l1}), sc.jac * tri_w_[a] * tri_w_[c] * u * det);
      }
  }

  double g_at(Batch& b, const std::vector<double>& sigma, double t) const {
    for (std::size_t k = 0; k < d_; ++k) b.point[k] = apex_d_[k] + t * sigma[k];
    ++b.evals;
    return std::pow(t, static_cast<double>(d_) - 1.0) * density_(b.point).value;
  }

  /// weight * int_0^inf t^{d-1} e^{i omega t} f(apex + t sigma) dt, per zeta.
  void integrate_ray(Batch& b, const std::vector<double>& sigma, double weight) const {
    const Complex i(0, 1);
    std::size_t nz = b.zetas.size();
    double wmax = 0, wmin = std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < nz; ++z) {
      b.omega[z] = conespline::pair(sigma, b.zetas[z]);
      wmax = std::max(wmax, std::abs(b.omega[z]));
      wmin = std::min(wmin, std::abs(b.omega[z]));
      b.acc[z] = 0;
    }

    // wall crossings along the ray
    std::vector<double> breaks;
    double sn = conespline::norm(sigma);
    double an = conespline::norm(apex_d_);
    for (const auto& w : walls_) {
      double den = 0, num = w.offset;
      for (std::size_t k = 0; k < d_; ++k) {
        den += w.normal[k] * sigma[k];
        num -= w.normal[k] * apex_d_[k];
      }
      if (std::abs(den) <= 1e-14 * conespline::norm(w.normal) * sn) continue;
      double t = num / den;
      if (t > 1e-12 * (1 + an)) breaks.push_back(t);
    }
    std::sort(breaks.begin(), breaks.end());

    double prev = 0;
    for (double next : breaks) {
      double len = next - prev;
      if (len <= 1e-12 * (1 + next)) continue;
      int panels = std::max(1, static_cast<int>(std::ceil(wmax * len / cfg_.max_phase)));
      double h = len / panels;
      for (int p = 0; p < panels; ++p)
        for (std::size_t q = 0; q < ray_x_.size(); ++q) {
          double t = prev + (p + ray_x_[q]) * h;
          double g = g_at(b, sigma, t) * ray_w_[q] * h;
          if (g == 0) continue;
          for (std::size_t z = 0; z < nz; ++z) b.acc[z] += g * std::exp(i * b.omega[z] * t);
        }
      prev = next;
    }

    // unbounded piece: polynomial of degree <= degree_ in s = t - prev
    double scale = (degree_ + 1.0) / wmin;
    Eigen::VectorXd vals(static_cast<Eigen::Index>(fit_x_.size()));
    for (std::size_t q = 0; q < fit_x_.size(); ++q)
      vals(static_cast<Eigen::Index>(q)) = g_at(b, sigma, prev + scale * fit_x_[q]);
    Eigen::VectorXd c = fit_lu_.solve(vals);
    double check_x = 1.5, predicted = 0, xp = 1;
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      predicted += c(k) * xp;
      xp *= check_x;
    }
    double resid = std::abs(predicted - g_at(b, sigma, prev + scale * check_x));
    for (std::size_t z = 0; z < nz; ++z) {
      Complex mi = -i * b.omega[z];
      Complex tail = 0, pw = 1.0 / mi;
      double fact = 1;
      for (Eigen::Index k = 0; k < c.size(); ++k) {
        if (k > 0) {
          fact *= static_cast<double>(k);
          pw /= mi * scale;
        }
        tail += c(k) * fact * pw;
      }
      Complex e0 = std::exp(i * b.omega[z] * prev);
      b.acc[z] += e0 * tail;
      b.out[z].value += weight * b.acc[z];
      b.out[z].error_estimate += weight * resid * std::abs(e0) / b.omega[z].imag();
    }
  }

  conespline::SplineDensity density_;
  conespline::SignedConeSpline spline_;
  LaplaceConfig cfg_;
  std::size_t d_;
  int degree_ = 0;
  RatVec apex_;
  std::vector<double> apex_d_;
  std::vector<RatVec> generators_;
  std::vector<Wall> walls_;
  std::vector<RatVec> cuts_r_;
  std::vector<std::vector<double>> cuts_;
  std::vector<SimplicialCone> cones_;
  std::vector<double> seg_x_, seg_w_, tri_x_, tri_w_, ray_x_, ray_w_, fit_x_;
  Eigen::FullPivLU<Eigen::MatrixXd> fit_lu_;
};

inline LaplaceResult numeric_laplace(const conespline::SignedConeSpline& s, std::span<const Complex> zeta,
                                     const LaplaceConfig& cfg = {}) {
  return SplineLaplace(s, cfg)(zeta);
}

}  // namespace dhk::oracle
