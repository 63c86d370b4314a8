// Signed sums of translated Heaviside convolutions
//
//     S = sum_j sign_j * delta_{base_j} * H_{b_1} * ... * H_{b_n}
//
// optionally multiplied by a polynomial. Densities are evaluated pointwise as
// fiber-polytope volumes: the density of H_{b_1} * ... * H_{b_n} at mu is
//
//     vol_{n-r} { s >= 0 : B s = mu } / pdet(B),
//
// with B = [b_1 ... b_n], r = rank B, and pdet the product of the nonzero
// singular values (the coarea factor). Densities are taken with respect to
// Lebesgue measure on span(B).
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dhk/error.hpp"
#include "dhk/lp.hpp"
#include "dhk/rational.hpp"

namespace dhk::conespline {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

/// Polynomial with rational coefficients, keyed by exponent vectors.
struct Polynomial {
  std::size_t dim = 0;
  std::map<std::vector<unsigned>, Rational> coeffs;

  static Polynomial constant(std::size_t dim, Rational c) {
    Polynomial p{dim, {}};
    if (c != 0) p.coeffs[std::vector<unsigned>(dim, 0)] = c;
    return p;
  }

  /// The linear form mu -> <mu, xi>.
  static Polynomial linear(const RatVec& xi) {
    Polynomial p{xi.size(), {}};
    for (std::size_t j = 0; j < xi.size(); ++j) {
      if (xi[j] == 0) continue;
      std::vector<unsigned> e(xi.size(), 0);
      e[j] = 1;
      p.coeffs[e] = xi[j];
    }
    return p;
  }

  Polynomial operator*(const Polynomial& o) const {
    if (o.dim != dim) throw DimensionError("polynomial product: dimension mismatch");
    Polynomial r{dim, {}};
    for (const auto& [ea, ca] : coeffs)
      for (const auto& [eb, cb] : o.coeffs) {
        std::vector<unsigned> e(dim);
        for (std::size_t j = 0; j < dim; ++j) e[j] = ea[j] + eb[j];
        r.coeffs[e] += ca * cb;
      }
    std::erase_if(r.coeffs, [](const auto& kv) { return kv.second == 0; });
    return r;
  }

  double operator()(std::span<const double> x) const {
    double s = 0;
    for (const auto& [e, c] : coeffs) {
      double term = to_double(c);
      for (std::size_t j = 0; j < dim; ++j)
        for (unsigned k = 0; k < e[j]; ++k) term *= x[j];
      s += term;
    }
    return s;
  }

  Rational operator()(std::span<const Rational> x) const {
    Rational s = 0;
    for (const auto& [e, c] : coeffs) {
      Rational term = c;
      for (std::size_t j = 0; j < dim; ++j)
        for (unsigned k = 0; k < e[j]; ++k) term *= x[j];
      s += term;
    }
    return s;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

struct ConeSplineTerm {
  int sign = 1;
  RatVec base;
  std::vector<RatVec> factors;

  friend bool operator==(const ConeSplineTerm&, const ConeSplineTerm&) = default;
};

struct SignedConeSpline {
  std::size_t dim = 1;
  std::vector<ConeSplineTerm> terms;
  std::optional<Polynomial> poly;

  friend bool operator==(const SignedConeSpline&, const SignedConeSpline&) = default;
};

struct DensityValue {
  double value = 0;
  double abs_error_bound = 0;
};

/// Some xi with <b, xi> >= 1 for every factor b, i.e. a witness that the
/// factors generate a proper cone. nullopt when they do not.
inline std::optional<RatVec> positive_functional(std::size_t dim, const std::vector<RatVec>& factors) {
  std::vector<lp::Constraint> cons;
  for (const auto& b : factors) cons.push_back(lp::ge(b, 1));
  auto r = lp::feasible(dim, std::move(cons));
  if (!r.feasible()) return std::nullopt;
  return r.point;
}

/// Throws unless the spline is well formed: consistent dimensions, sign +-1,
/// nonzero factors generating proper cones, equal factor counts.
inline void validate(const SignedConeSpline& s) {
  if (s.dim == 0) throw DimensionError("spline: dimension must be >= 1");
  std::optional<std::size_t> nfac;
  for (std::size_t j = 0; j < s.terms.size(); ++j) {
    const auto& t = s.terms[j];
    std::string where = "spline term " + std::to_string(j);
    if (t.sign != 1 && t.sign != -1) throw InvalidModelError(where + ": sign must be +1 or -1");
    if (t.base.size() != s.dim) throw DimensionError(where + ": base has wrong dimension");
    if (nfac && *nfac != t.factors.size()) throw InvalidModelError(where + ": factor count differs between terms");
    nfac = t.factors.size();
    for (const auto& b : t.factors) {
      if (b.size() != s.dim) throw DimensionError(where + ": factor has wrong dimension");
      if (is_zero(b)) throw GeometryError(where + ": zero factor");
    }
    if (!positive_functional(s.dim, t.factors)) throw GeometryError(where + ": factors do not generate a proper cone");
  }
  if (s.poly && s.poly->dim != s.dim) throw DimensionError("spline: polynomial has wrong dimension");
}

// ---------------------------------------------------------------------------
// Fiber-volume evaluator

namespace detail {

/// Gram-Schmidt on the rows of `vecs` (each of length n). Returns the number
/// of independent vectors and, through `volume`, the product of the
/// orthogonalized norms.
inline std::size_t gram_schmidt(std::vector<std::vector<double>> vecs, double rel_tol, double* volume) {
  std::vector<std::vector<double>> basis;
  double vol = 1;
  double scale = 0;
  for (const auto& v : vecs)
    for (double x : v) scale = std::max(scale, std::abs(x));
  for (auto& v : vecs) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        double c = std::inner_product(v.begin(), v.end(), q.begin(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
      }
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm <= rel_tol * std::max(scale, 1e-300)) {
      vol = 0;
      continue;
    }
    for (double& x : v) x /= norm;
    basis.push_back(std::move(v));
    vol *= norm;
  }
  if (volume) *volume = vol;
  return basis.size();
}

}  // namespace detail

/// Precomputed density evaluator for one factor list.
class FiberVolume {
 public:
  FiberVolume(std::size_t dim, const std::vector<RatVec>& factors) : d_(dim), n_(factors.size()) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (factors[i].size() != d_) throw DimensionError("heaviside factor has wrong dimension");
      if (is_zero(factors[i])) throw GeometryError("heaviside factor is zero");
    }
    if (!positive_functional(d_, factors)) throw GeometryError("heaviside factors do not generate a proper cone");

    // exact rank and a column basis of span(B)
    RatMat cols = factors;
    r_ = dhk::rank(cols, d_);
    Eigen::MatrixXd b(d_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < d_; ++k) b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = to_double(factors[i][k]);
    if (r_ == 0) {
      pdet_ = 1;
      q_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d_), 0);
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullU);
      pdet_ = 1;
      for (std::size_t k = 0; k < r_; ++k) pdet_ *= svd.singularValues()(static_cast<Eigen::Index>(k));
      q_ = svd.matrixU().leftCols(static_cast<Eigen::Index>(r_));
    }
    bt_ = q_.transpose() * b;  // r x n

    // every r-subset of columns that is a basis of span(B)
    std::vector<std::size_t> idx(r_);
    enumerate_bases(factors, 0, 0, idx);
  }

  std::size_t dim() const { return d_; }
  std::size_t num_factors() const { return n_; }
  std::size_t rank() const { return r_; }
  double coarea_factor() const { return pdet_; }

  DensityValue operator()(std::span<const double> mu) const {
    if (mu.size() != d_) throw DimensionError("density point has wrong dimension");
    Eigen::Map<const Eigen::VectorXd> m(mu.data(), static_cast<Eigen::Index>(d_));
    Eigen::VectorXd mt = q_.transpose() * m;
    double mnorm = m.norm();
    if (r_ < d_) {
      double resid = (m - q_ * mt).norm();
      if (resid > 1e-9 * (1 + mnorm))
        throw DimensionError("density point lies outside the span of the heaviside factors");
    }
    if (n_ == 0) return {1.0, 0.0};

    // vertices of the fiber polytope: basic feasible solutions
    std::vector<std::vector<double>> verts;
    double vtol = 1e-11 * (1 + mnorm);
    for (const auto& bs : bases_) {
      Eigen::VectorXd s = bs.inverse * mt;
      if (s.size() > 0 && s.minCoeff() < -vtol * bs.inv_norm) continue;
      std::vector<double> full(n_, 0.0);
      for (std::size_t k = 0; k < r_; ++k) full[bs.cols[k]] = std::max(0.0, s(static_cast<Eigen::Index>(k)));
      bool dup = false;
      for (const auto& v : verts) {
        double diff = 0, mag = 0;
        for (std::size_t i = 0; i < n_; ++i) {
          diff = std::max(diff, std::abs(v[i] - full[i]));
          mag = std::max(mag, std::abs(v[i]));
        }
        if (diff <= 1e-9 * (1 + mag)) {
          dup = true;
          break;
        }
      }
      if (!dup) verts.push_back(std::move(full));
    }
    if (verts.empty()) return {0.0, 0.0};
    std::size_t k = n_ - r_;
    if (k == 0) return {1.0 / pdet_, 1e-14 / pdet_};

    double smax = 0;
    for (const auto& v : verts)
      for (double x : v) smax = std::max(smax, x);
    double ztol = 1e-9 * std::max(1.0, smax);
    std::vector<std::vector<bool>> zero(verts.size(), std::vector<bool>(n_));
    for (std::size_t a = 0; a < verts.size(); ++a)
      for (std::size_t i = 0; i < n_; ++i) zero[a][i] = verts[a][i] <= ztol;

    std::vector<std::size_t> all(verts.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::size_t> prefix;
    double volume = 0;
    std::size_t simplices = 0;
    pull(verts, zero, all, k, prefix, volume, simplices);
    double factorial = std::tgamma(static_cast<double>(k) + 1);
    double value = volume / factorial / pdet_;
    double err = 1e-12 * (1 + value) * static_cast<double>(simplices + 1);
    return {value, err};
  }

 private:
  struct Basis {
    std::vector<std::size_t> cols;
    Eigen::MatrixXd inverse;
    double inv_norm = 1;
  };

  void enumerate_bases(const std::vector<RatVec>& factors, std::size_t start, std::size_t depth,
                       std::vector<std::size_t>& idx) {
    if (depth == r_) {
      RatMat sub;
      for (auto i : idx) sub.push_back(factors[i]);
      if (dhk::rank(sub, d_) != r_) return;
      Basis b;
      b.cols = idx;
      Eigen::MatrixXd m(static_cast<Eigen::Index>(r_), static_cast<Eigen::Index>(r_));
      for (std::size_t c = 0; c < r_; ++c) m.col(static_cast<Eigen::Index>(c)) = bt_.col(static_cast<Eigen::Index>(idx[c]));
      b.inverse = m.inverse();
      b.inv_norm = std::max(1.0, b.inverse.cwiseAbs().maxCoeff());
      bases_.push_back(std::move(b));
      return;
    }
    for (std::size_t i = start; i < n_; ++i) {
      idx[depth] = i;
      enumerate_bases(factors, i + 1, depth + 1, idx);
    }
  }

  std::size_t affine_rank(const std::vector<std::vector<double>>& verts, const std::vector<std::size_t>& ids) const {
    std::vector<std::vector<double>> diffs;
    for (std::size_t a = 1; a < ids.size(); ++a) {
      std::vector<double> v(n_);
      for (std::size_t i = 0; i < n_; ++i) v[i] = verts[ids[a]][i] - verts[ids[0]][i];
      diffs.push_back(std::move(v));
    }
    return detail::gram_schmidt(std::move(diffs), 1e-9, nullptr);
  }

  /// Pulling triangulation: cone the first vertex over every facet of the
  /// current face that misses it. Faces are cut out by s_i = 0.
  void pull(const std::vector<std::vector<double>>& verts, const std::vector<std::vector<bool>>& zero,
            const std::vector<std::size_t>& face, std::size_t k, std::vector<std::size_t>& prefix, double& volume,
            std::size_t& simplices) const {
    std::size_t v0 = face.front();
    if (k == 0) {
      prefix.push_back(v0);
      std::vector<std::vector<double>> edges;
      for (std::size_t a = 1; a < prefix.size(); ++a) {
        std::vector<double> e(n_);
        for (std::size_t i = 0; i < n_; ++i) e[i] = verts[prefix[a]][i] - verts[prefix[0]][i];
        edges.push_back(std::move(e));
      }
      double vol = 0;
      detail::gram_schmidt(std::move(edges), 0.0, &vol);
      volume += vol;
      ++simplices;
      prefix.pop_back();
      return;
    }
    std::vector<std::vector<std::size_t>> seen;
    for (std::size_t i = 0; i < n_; ++i) {
      if (zero[v0][i]) continue;
      std::vector<std::size_t> facet;
      for (auto a : face)
        if (zero[a][i]) facet.push_back(a);
      if (facet.size() < k) continue;
      if (std::find(seen.begin(), seen.end(), facet) != seen.end()) continue;
      seen.push_back(facet);
      if (affine_rank(verts, facet) != k - 1) continue;
      prefix.push_back(v0);
      pull(verts, zero, facet, k - 1, prefix, volume, simplices);
      prefix.pop_back();
    }
  }

  std::size_t d_, n_, r_ = 0;
  double pdet_ = 1;
  Eigen::MatrixXd q_, bt_;
  std::vector<Basis> bases_;
};

/// Density of H_{b_1} * ... * H_{b_n} at mu.
inline double heaviside_density(std::size_t dim, const std::vector<RatVec>& factors, std::span<const double> mu) {
  return FiberVolume(dim, factors)(mu).value;
}

/// Evaluator for a whole spline; factor lists shared between terms are
/// preprocessed once.
class SplineDensity {
 public:
  explicit SplineDensity(SignedConeSpline spline) : spline_(std::move(spline)) {
    validate(spline_);
    std::map<std::vector<RatVec>, std::size_t> index;
    for (const auto& t : spline_.terms) {
      auto it = index.find(t.factors);
      if (it == index.end()) {
        it = index.emplace(t.factors, evaluators_.size()).first;
        evaluators_.push_back(std::make_shared<FiberVolume>(spline_.dim, t.factors));
      }
      term_eval_.push_back(it->second);
      base_.push_back(to_double(t.base));
    }
  }

  const SignedConeSpline& spline() const { return spline_; }

  DensityValue operator()(std::span<const double> mu) const {
    if (mu.size() != spline_.dim) throw DimensionError("density point has wrong dimension");
    DensityValue total;
    std::vector<double> shifted(mu.size());
    for (std::size_t j = 0; j < spline_.terms.size(); ++j) {
      for (std::size_t k = 0; k < mu.size(); ++k) shifted[k] = mu[k] - base_[j][k];
      auto v = (*evaluators_[term_eval_[j]])(shifted);
      total.value += spline_.terms[j].sign * v.value;
      total.abs_error_bound += v.abs_error_bound;
    }
    if (spline_.poly) {
      double p = (*spline_.poly)(mu);
      total.value *= p;
      total.abs_error_bound *= std::abs(p);
    }
    return total;
  }

 private:
  SignedConeSpline spline_;
  std::vector<std::shared_ptr<const FiberVolume>> evaluators_;
  std::vector<std::size_t> term_eval_;
  std::vector<std::vector<double>> base_;
};

inline DensityValue spline_density(const SignedConeSpline& s, std::span<const double> mu) {
  return SplineDensity(s)(mu);
}

// ---------------------------------------------------------------------------
// Laplace transforms

/// <b, zeta> for real b, complex zeta.
inline Complex pair(std::span<const double> b, std::span<const Complex> zeta) {
  Complex s = 0;
  for (std::size_t k = 0; k < b.size(); ++k) s += b[k] * zeta[k];
  return s;
}

inline double norm(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

inline double norm(std::span<const Complex> v) {
  double s = 0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

/// Pairing with the pole check |<b, zeta>| > 1e-12 |b| |zeta|.
inline Complex regular_pair(std::span<const double> b, std::span<const Complex> zeta) {
  Complex p = pair(b, zeta);
  if (!(std::abs(p) > 1e-12 * norm(b) * norm(zeta)))
    throw NonRegularError("zeta is not regular: a linear form vanishes at it");
  return p;
}

/// (i)^n / prod <b_i, zeta>. With `strict`, also requires <b_i, Im zeta> > 0
/// so that the value is a genuine Laplace transform.
inline Complex laplace_factor(const std::vector<RatVec>& factors, std::span<const Complex> zeta, bool strict = false) {
  Complex value = 1;
  const Complex i(0, 1);
  for (const auto& b : factors) {
    if (b.size() != zeta.size()) throw DimensionError("laplace_factor: dimension mismatch");
    auto bd = to_double(b);
    Complex p = regular_pair(bd, zeta);
    if (strict && !(p.imag() > 0))
      throw GeometryError("laplace_factor: Im(zeta) is not interior to the dual cone of the factors");
    value *= i / p;
  }
  return value;
}

/// sum_j sign_j e^{i <base_j, zeta>} laplace_factor(factors_j, zeta).
inline Complex spline_laplace(const SignedConeSpline& s, std::span<const Complex> zeta, bool strict = false) {
  if (s.poly) throw InvalidModelError("spline_laplace: polynomial multipliers are not supported");
  if (zeta.size() != s.dim) throw DimensionError("spline_laplace: dimension mismatch");
  Complex total = 0;
  const Complex i(0, 1);
  for (const auto& t : s.terms) {
    auto base = to_double(t.base);
    total += static_cast<double>(t.sign) * std::exp(i * pair(base, zeta)) * laplace_factor(t.factors, zeta, strict);
  }
  return total;
}

}  // namespace dhk::conespline
