// Polyhedral sets and cones over Q.
//
// A half space K(xi, c) = { a : <xi, a> >= c }. A polyhedral set is a finite
// intersection of half spaces, a cone one where every offset is zero. Cones
// carry a half-space form, a generator form, or both; conversion between the
// two is done by the double description method.
//
// Every predicate here is exact. Predicates that presuppose a nonempty set
// throw InfeasibleError on an empty one.
#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dhk/error.hpp"
#include "dhk/lp.hpp"
#include "dhk/rational.hpp"

namespace dhk::polycone {

struct HalfSpace {
  RatVec normal;
  Rational offset = 0;

  bool contains(const RatVec& x) const { return dot(normal, x) >= offset; }
  friend bool operator==(const HalfSpace&, const HalfSpace&) = default;
};

class PolyhedralSet {
 public:
  PolyhedralSet() = default;
  PolyhedralSet(std::size_t dim, std::vector<HalfSpace> halfspaces) : dim_(dim), halfspaces_(std::move(halfspaces)) {
    if (dim_ == 0) throw DimensionError("polyhedral set: dimension must be >= 1");
    for (std::size_t i = 0; i < halfspaces_.size(); ++i) {
      if (halfspaces_[i].normal.size() != dim_)
        throw DimensionError("polyhedral set: half space " + std::to_string(i) + " has wrong dimension");
      if (is_zero(halfspaces_[i].normal))
        throw DimensionError("polyhedral set: half space " + std::to_string(i) + " has zero normal");
    }
  }

  std::size_t dim() const { return dim_; }
  const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }

  bool contains(const RatVec& x) const {
    return std::all_of(halfspaces_.begin(), halfspaces_.end(), [&](const HalfSpace& h) { return h.contains(x); });
  }

  std::vector<lp::Constraint> constraints() const {
    std::vector<lp::Constraint> out;
    out.reserve(halfspaces_.size());
    for (const auto& h : halfspaces_) out.push_back(lp::ge(h.normal, h.offset));
    return out;
  }

  PolyhedralSet intersect(const HalfSpace& h) const {
    auto hs = halfspaces_;
    hs.push_back(h);
    return PolyhedralSet(dim_, std::move(hs));
  }

  friend bool operator==(const PolyhedralSet&, const PolyhedralSet&) = default;

 private:
  std::size_t dim_ = 1;
  std::vector<HalfSpace> halfspaces_;
};

/// A polyhedral cone, in half-space form {x : <n_i, x> >= 0}, generator form
/// {sum s_j g_j : s_j >= 0}, or both.
class Cone {
 public:
  static Cone from_normals(std::size_t dim, std::vector<RatVec> normals) {
    check_dims(dim, normals, "normal");
    Cone c;
    c.dim_ = dim;
    c.normals_ = std::move(normals);
    return c;
  }

  static Cone from_generators(std::size_t dim, std::vector<RatVec> generators) {
    check_dims(dim, generators, "generator");
    Cone c;
    c.dim_ = dim;
    c.generators_ = std::move(generators);
    return c;
  }

  /// Both forms; they must describe the same set (see consistent()).
  static Cone from_both(std::size_t dim, std::vector<RatVec> normals, std::vector<RatVec> generators) {
    Cone c = from_normals(dim, std::move(normals));
    check_dims(dim, generators, "generator");
    c.generators_ = std::move(generators);
    return c;
  }

  std::size_t dim() const { return dim_; }
  bool has_normals() const { return normals_.has_value(); }
  bool has_generators() const { return generators_.has_value(); }
  const std::vector<RatVec>& normals() const { return normals_.value(); }
  const std::vector<RatVec>& generators() const { return generators_.value(); }

  bool contains(const RatVec& x) const;

  friend bool operator==(const Cone&, const Cone&) = default;

 private:
  static void check_dims(std::size_t dim, const std::vector<RatVec>& vs, const char* what) {
    if (dim == 0) throw DimensionError("cone: dimension must be >= 1");
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (vs[i].size() != dim)
        throw DimensionError(std::string("cone: ") + what + " " + std::to_string(i) + " has wrong dimension");
  }

  std::size_t dim_ = 1;
  std::optional<std::vector<RatVec>> normals_;
  std::optional<std::vector<RatVec>> generators_;
};

// ---------------------------------------------------------------------------
// LP-backed primitives

struct FeasibilityResult {
  bool feasible = false;
  RatVec witness;  // when feasible
  RatVec farkas;   // when infeasible, one multiplier per constraint
};

inline FeasibilityResult lp_feasible(std::size_t num_vars, std::vector<lp::Constraint> constraints) {
  auto r = lp::feasible(num_vars, std::move(constraints));
  return {r.feasible(), r.point, r.farkas};
}

/// x in cone(generators)?
inline bool in_generated_cone(const std::vector<RatVec>& generators, const RatVec& x) {
  std::size_t d = x.size();
  if (generators.empty()) return is_zero(x);
  lp::Problem p;
  p.num_vars = generators.size();
  p.nonneg.assign(generators.size(), true);
  for (std::size_t k = 0; k < d; ++k) {
    RatVec row(generators.size());
    for (std::size_t j = 0; j < generators.size(); ++j) row[j] = generators[j].at(k);
    p.constraints.push_back(lp::eq(std::move(row), x[k]));
  }
  return lp::solve(p).feasible();
}

inline bool Cone::contains(const RatVec& x) const {
  if (x.size() != dim_) throw DimensionError("cone: point has wrong dimension");
  if (normals_) {
    return std::all_of(normals_->begin(), normals_->end(), [&](const RatVec& n) { return dot(n, x) >= 0; });
  }
  return in_generated_cone(*generators_, x);
}

/// Some point of P, or InfeasibleError.
inline RatVec witness_point(const PolyhedralSet& p) {
  auto r = lp::feasible(p.dim(), p.constraints());
  if (!r.feasible()) throw InfeasibleError("polyhedral set is empty");
  return r.point;
}

/// Nonzero a with <n_i, a> >= 0 and <extra, a> <= 0? (extra may be empty.)
/// Nonzero is enforced coordinate-wise: some +-a_j >= 1, which is a
/// normalization because the feasible set is a cone.
inline bool has_nonzero_cone_point(std::size_t dim, const std::vector<RatVec>& normals,
                                   const std::vector<lp::Constraint>& extra = {}) {
  for (std::size_t j = 0; j < dim; ++j) {
    for (int s : {1, -1}) {
      std::vector<lp::Constraint> cons;
      for (const auto& n : normals) cons.push_back(lp::ge(n, 0));
      for (const auto& c : extra) cons.push_back(c);
      RatVec e(dim, Rational(0));
      e[j] = s;
      cons.push_back(lp::ge(std::move(e), 1));
      if (lp::feasible(dim, std::move(cons)).feasible()) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Double description

/// Extreme-ray description of {x : A x >= 0}: a lineality basis L and the
/// extreme rays of the pointed part C cap L^perp. C = span(L) + cone(rays).
struct RayDescription {
  std::vector<RatVec> lineality;
  std::vector<RatVec> rays;

  /// Generator list for the whole cone: rays plus +-lineality.
  std::vector<RatVec> generators() const {
    std::vector<RatVec> g = rays;
    for (const auto& l : lineality) {
      g.push_back(l);
      g.push_back(-l);
    }
    return g;
  }
};

namespace detail {

/// Scales to a primitive integer vector (same direction).
inline RatVec primitive(RatVec v) {
  Integer l = 1;
  for (const auto& x : v)
    if (x != 0) l = boost::multiprecision::lcm(l, Integer(denominator(x)));
  Integer g = 0;
  for (auto& x : v) {
    x *= Rational(l);
    if (x != 0) g = boost::multiprecision::gcd(g, Integer(numerator(x)));
  }
  if (g > 1)
    for (auto& x : v) x /= Rational(g);
  return v;
}

}  // namespace detail

inline RayDescription double_description(std::size_t dim, const std::vector<RatVec>& rows_in) {
  RayDescription out;
  for (const auto& r : rows_in)
    if (r.size() != dim) throw DimensionError("double description: row has wrong dimension");
  for (auto& l : nullspace(rows_in, dim)) out.lineality.push_back(detail::primitive(std::move(l)));
  if (out.lineality.size() == dim) return out;

  // Pointed part: add <l, x> = 0 as two inequalities, placed first.
  std::vector<RatVec> rows;
  for (const auto& l : out.lineality) {
    rows.push_back(l);
    rows.push_back(-l);
  }
  for (const auto& r : rows_in)
    if (!is_zero(r)) rows.push_back(r);

  // Initial simplicial cone from d independent rows.
  std::vector<std::size_t> basis_rows;
  RatMat acc;
  for (std::size_t i = 0; i < rows.size() && basis_rows.size() < dim; ++i) {
    acc.push_back(rows[i]);
    if (rank(acc, dim) == acc.size()) {
      basis_rows.push_back(i);
    } else {
      acc.pop_back();
    }
  }
  if (basis_rows.size() != dim) throw std::logic_error("double description: pointed part not full rank");

  struct Ray {
    RatVec v;
    std::vector<std::size_t> tight;  // processed rows with <row, v> = 0 (sorted)
  };
  std::vector<bool> processed(rows.size(), false);
  std::vector<Ray> rays;
  {
    RatMat m;
    for (auto i : basis_rows) m.push_back(rows[i]);
    for (std::size_t k = 0; k < dim; ++k) {
      auto v = solve(m, unit_vector(dim, k));
      rays.push_back({detail::primitive(*v), {}});
    }
    for (auto i : basis_rows) processed[i] = true;
    for (auto& r : rays)
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (processed[i] && dot(rows[i], r.v) == 0) r.tight.push_back(i);
  }

  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (processed[i]) continue;
    const RatVec& a = rows[i];
    std::vector<Ray> pos, neg, zero;
    std::vector<Rational> pos_val, neg_val;
    for (auto& r : rays) {
      Rational v = dot(a, r.v);
      if (v > 0) {
        pos.push_back(r);
        pos_val.push_back(v);
      } else if (v < 0) {
        neg.push_back(r);
        neg_val.push_back(v);
      } else {
        zero.push_back(r);
      }
    }
    std::vector<Ray> next;
    for (auto& r : pos) next.push_back(r);
    for (auto& r : zero) {
      r.tight.push_back(i);
      next.push_back(r);
    }
    for (std::size_t p = 0; p < pos.size(); ++p) {
      for (std::size_t n = 0; n < neg.size(); ++n) {
        std::vector<std::size_t> common;
        std::set_intersection(pos[p].tight.begin(), pos[p].tight.end(), neg[n].tight.begin(), neg[n].tight.end(),
                              std::back_inserter(common));
        if (common.size() + 2 < dim) continue;
        RatMat sub;
        for (auto k : common) sub.push_back(rows[k]);
        if (rank(sub, dim) != dim - 2) continue;
        RatVec v = pos_val[p] * neg[n].v - neg_val[n] * pos[p].v;
        Ray nr{detail::primitive(std::move(v)), common};
        nr.tight.push_back(i);
        std::sort(nr.tight.begin(), nr.tight.end());
        next.push_back(std::move(nr));
      }
    }
    processed[i] = true;
    rays = std::move(next);
  }
  for (auto& r : rays) out.rays.push_back(std::move(r.v));
  std::sort(out.rays.begin(), out.rays.end());
  out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
  return out;
}

/// Adds the missing representation to a cone.
inline Cone with_generators(const Cone& c) {
  if (c.has_generators()) return c;
  auto dd = double_description(c.dim(), c.normals());
  return Cone::from_both(c.dim(), c.normals(), dd.generators());
}

inline Cone with_normals(const Cone& c) {
  if (c.has_normals()) return c;
  auto dd = double_description(c.dim(), c.generators());
  return Cone::from_both(c.dim(), dd.generators(), c.generators());
}

/// Both representations describe the same set (containment both ways).
inline bool consistent(const Cone& c) {
  if (!c.has_normals() || !c.has_generators()) return true;
  for (const auto& g : c.generators())
    for (const auto& n : c.normals())
      if (dot(n, g) < 0) return false;
  auto dd = double_description(c.dim(), c.normals());
  for (const auto& g : dd.generators())
    if (!in_generated_cone(c.generators(), g)) return false;
  return true;
}

/// Extreme rays of cone(generators) after dropping redundant and repeated
/// generators; requires a pointed cone.
inline std::vector<RatVec> extreme_generators(const std::vector<RatVec>& generators) {
  std::vector<RatVec> prim;
  for (const auto& g : generators)
    if (!is_zero(g)) prim.push_back(detail::primitive(g));
  std::sort(prim.begin(), prim.end());
  prim.erase(std::unique(prim.begin(), prim.end()), prim.end());
  std::vector<RatVec> out;
  for (std::size_t i = 0; i < prim.size(); ++i) {
    std::vector<RatVec> others;
    for (std::size_t j = 0; j < prim.size(); ++j)
      if (j != i) others.push_back(prim[j]);
    if (!in_generated_cone(others, prim[i])) out.push_back(prim[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Appendix-A operations

/// C(P) = intersection of K(xi_i, 0) for P = intersection of K(xi_i, c_i).
inline Cone asymptotic_cone(const PolyhedralSet& p) {
  std::vector<RatVec> normals;
  for (const auto& h : p.halfspaces()) normals.push_back(h.normal);
  return Cone::from_normals(p.dim(), std::move(normals));
}

/// Dual cone C' = { xi : <xi, C> >= 0 }. Half-space input gives generator
/// output (the normals); generator input gives half-space output.
inline Cone dual_cone(const Cone& c) {
  if (c.has_normals()) {
    if (c.has_generators()) return Cone::from_both(c.dim(), c.generators(), c.normals());
    return Cone::from_generators(c.dim(), c.normals());
  }
  return Cone::from_normals(c.dim(), c.generators());
}

/// True iff P contains no line, i.e. the lineality space of C(P) is {0}.
inline bool is_proper(const PolyhedralSet& p) {
  witness_point(p);
  for (std::size_t j = 0; j < p.dim(); ++j) {
    std::vector<lp::Constraint> cons;
    for (const auto& h : p.halfspaces()) cons.push_back(lp::eq(h.normal, 0));
    cons.push_back(lp::eq(unit_vector(p.dim(), j), 1));
    if (lp::feasible(p.dim(), std::move(cons)).feasible()) return false;
  }
  return true;
}

/// <xi, P> bounded below iff xi in C(P)' = cone(normals).
inline bool bounded_below(const PolyhedralSet& p, const RatVec& xi) {
  if (xi.size() != p.dim()) throw DimensionError("bounded_below: covector has wrong dimension");
  witness_point(p);
  std::vector<RatVec> normals;
  for (const auto& h : p.halfspaces()) normals.push_back(h.normal);
  return in_generated_cone(normals, xi);
}

/// P compact iff C(P) = {0}.
inline bool is_compact(const PolyhedralSet& p) {
  witness_point(p);
  std::vector<RatVec> normals;
  for (const auto& h : p.halfspaces()) normals.push_back(h.normal);
  return !has_nonzero_cone_point(p.dim(), normals);
}

/// xi in Int(C') for a half-space cone: <xi, a> > 0 on C \ {0}.
inline bool in_dual_interior(std::size_t dim, const std::vector<RatVec>& normals, const RatVec& xi) {
  return !has_nonzero_cone_point(dim, normals, {lp::le(xi, 0)});
}

/// <xi, .> restricted to P is a proper map iff xi in +-Int C(P)'.
inline bool proper_projection_directions(const PolyhedralSet& p, const RatVec& xi) {
  if (xi.size() != p.dim()) throw DimensionError("proper_projection_directions: covector has wrong dimension");
  witness_point(p);
  std::vector<RatVec> normals;
  for (const auto& h : p.halfspaces()) normals.push_back(h.normal);
  return in_dual_interior(p.dim(), normals, xi) || in_dual_interior(p.dim(), normals, -xi);
}

/// A point strictly inside a full-dimensional cone. Half-space form: a point
/// with every slack >= 1 and minimal l1 norm. Generator form: the generator sum.
inline RatVec interior_point(const Cone& c) {
  std::size_t d = c.dim();
  if (c.has_normals()) {
    // variables x (d, free) and t (d, t >= |x|)
    lp::Problem prob;
    prob.num_vars = 2 * d;
    for (const auto& n : c.normals()) {
      RatVec row(2 * d, Rational(0));
      std::copy(n.begin(), n.end(), row.begin());
      prob.constraints.push_back(lp::ge(std::move(row), 1));
    }
    for (std::size_t j = 0; j < d; ++j) {
      RatVec up(2 * d, Rational(0)), dn(2 * d, Rational(0));
      up[d + j] = 1;
      up[j] = -1;
      dn[d + j] = 1;
      dn[j] = 1;
      prob.constraints.push_back(lp::ge(std::move(up), 0));
      prob.constraints.push_back(lp::ge(std::move(dn), 0));
    }
    RatVec obj(2 * d, Rational(0));
    for (std::size_t j = 0; j < d; ++j) obj[d + j] = 1;
    prob.objective = obj;
    auto r = lp::solve(prob);
    if (!r.feasible()) throw GeometryError("interior_point: cone is not full-dimensional");
    return RatVec(r.point.begin(), r.point.begin() + static_cast<std::ptrdiff_t>(d));
  }
  const auto& g = c.generators();
  if (g.empty() || rank(g, d) < d) throw GeometryError("interior_point: cone is not full-dimensional");
  RatVec s(d, Rational(0));
  for (const auto& v : g) s = s + v;
  return s;
}

}  // namespace dhk::polycone
