// Exact rational linear programming: two-phase tableau simplex with Bland's rule.
//
// Problems are stated over the original variables; free variables are split
// internally. Infeasibility comes with a Farkas certificate, unboundedness with
// a recession ray, and both are verified exactly before being returned.
#pragma once

#include <cassert>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dhk/error.hpp"
#include "dhk/rational.hpp"

namespace dhk::lp {

enum class Sense { kGe, kLe, kEq };

struct Constraint {
  RatVec coeffs;
  Sense sense = Sense::kGe;
  Rational rhs = 0;
};

inline Constraint ge(RatVec a, Rational b) { return {std::move(a), Sense::kGe, std::move(b)}; }
inline Constraint le(RatVec a, Rational b) { return {std::move(a), Sense::kLe, std::move(b)}; }
inline Constraint eq(RatVec a, Rational b) { return {std::move(a), Sense::kEq, std::move(b)}; }

struct Problem {
  std::size_t num_vars = 0;
  std::vector<Constraint> constraints;
  /// Per-variable nonnegativity; empty means every variable is free.
  std::vector<bool> nonneg;
  /// Minimized when present; pure feasibility otherwise.
  std::optional<RatVec> objective;
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Result {
  Status status = Status::kInfeasible;
  RatVec point;      // feasible point (optimal when an objective was given)
  Rational value;    // objective value at `point`
  RatVec farkas;     // infeasible: multipliers y, one per constraint
  RatVec ray;        // unbounded: direction d with A d (sense) 0 and c.d < 0

  bool feasible() const { return status != Status::kInfeasible; }
};

namespace detail {

inline bool var_nonneg(const Problem& p, std::size_t j) { return !p.nonneg.empty() && p.nonneg[j]; }

inline void validate(const Problem& p) {
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    if (p.constraints[i].coeffs.size() != p.num_vars)
      throw DimensionError("lp: constraint " + std::to_string(i) + " has " +
                           std::to_string(p.constraints[i].coeffs.size()) + " coefficients, expected " +
                           std::to_string(p.num_vars));
  }
  if (!p.nonneg.empty() && p.nonneg.size() != p.num_vars)
    throw DimensionError("lp: nonnegativity mask has wrong length");
  if (p.objective && p.objective->size() != p.num_vars)
    throw DimensionError("lp: objective has wrong length");
}

/// Dense tableau over standard-form columns: structural (split), slacks, artificials.
class Tableau {
 public:
  Tableau(const Problem& p) : prob_(p) {
    // column layout
    for (std::size_t j = 0; j < p.num_vars; ++j) {
      plus_col_.push_back(ncols_++);
      minus_col_.push_back(var_nonneg(p, j) ? npos : ncols_++);
    }
    std::size_t m = p.constraints.size();
    slack_col_.assign(m, npos);
    for (std::size_t i = 0; i < m; ++i)
      if (p.constraints[i].sense != Sense::kEq) slack_col_[i] = ncols_++;
    first_art_ = ncols_;
    ncols_ += m;

    rows_.assign(m, RatVec(ncols_ + 1, Rational(0)));
    basis_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& c = p.constraints[i];
      auto& row = rows_[i];
      for (std::size_t j = 0; j < p.num_vars; ++j) {
        row[plus_col_[j]] = c.coeffs[j];
        if (minus_col_[j] != npos) row[minus_col_[j]] = -c.coeffs[j];
      }
      if (c.sense == Sense::kGe) row[slack_col_[i]] = -1;
      if (c.sense == Sense::kLe) row[slack_col_[i]] = 1;
      row[ncols_] = c.rhs;
      if (c.rhs < 0)
        for (auto& x : row) x = -x;
      row[first_art_ + i] = 1;
      basis_[i] = first_art_ + i;
    }
    allowed_.assign(ncols_, true);
  }

  /// Runs phase I; returns false when infeasible.
  bool phase_one() {
    RatVec cost(ncols_, Rational(0));
    for (std::size_t k = first_art_; k < ncols_; ++k) cost[k] = 1;
    set_cost(cost);
    auto st = iterate();
    assert(st == Status::kOptimal);
    (void)st;
    if (objective_value() != 0) return false;
    // pivot zero-level artificials out where possible, drop redundant rows
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < first_art_) {
        ++i;
        continue;
      }
      std::size_t enter = npos;
      for (std::size_t j = 0; j < first_art_; ++j)
        if (rows_[i][j] != 0) {
          enter = j;
          break;
        }
      if (enter == npos) {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      pivot(i, enter);
      ++i;
    }
    for (std::size_t k = first_art_; k < ncols_; ++k) allowed_[k] = false;
    return true;
  }

  Status phase_two(const RatVec& objective) {
    RatVec cost(ncols_, Rational(0));
    for (std::size_t j = 0; j < prob_.num_vars; ++j) {
      cost[plus_col_[j]] = objective[j];
      if (minus_col_[j] != npos) cost[minus_col_[j]] = -objective[j];
    }
    set_cost(cost);
    return iterate();
  }

  RatVec point() const {
    RatVec col(ncols_, Rational(0));
    for (std::size_t i = 0; i < rows_.size(); ++i) col[basis_[i]] = rows_[i][ncols_];
    return to_original(col);
  }

  RatVec ray() const {
    RatVec col(ncols_, Rational(0));
    col[ray_col_] = 1;
    for (std::size_t i = 0; i < rows_.size(); ++i) col[basis_[i]] = -rows_[i][ray_col_];
    return to_original(col);
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  RatVec to_original(const RatVec& col) const {
    RatVec x(prob_.num_vars, Rational(0));
    for (std::size_t j = 0; j < prob_.num_vars; ++j) {
      x[j] = col[plus_col_[j]];
      if (minus_col_[j] != npos) x[j] -= col[minus_col_[j]];
    }
    return x;
  }

  void set_cost(const RatVec& cost) {
    cost_ = cost;
    reduced_ = cost;
    reduced_.push_back(0);  // slot for -objective value
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational& cb = cost_[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= ncols_; ++j) reduced_[j] -= cb * rows_[i][j];
    }
  }

  Rational objective_value() const { return -reduced_[ncols_]; }

  void pivot(std::size_t r, std::size_t c) {
    auto& prow = rows_[r];
    Rational inv = 1 / prow[c];
    for (auto& x : prow) x *= inv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r || rows_[i][c] == 0) continue;
      Rational f = rows_[i][c];
      for (std::size_t j = 0; j <= ncols_; ++j) rows_[i][j] -= f * prow[j];
    }
    if (!reduced_.empty() && reduced_[c] != 0) {
      Rational f = reduced_[c];
      for (std::size_t j = 0; j <= ncols_; ++j) reduced_[j] -= f * prow[j];
    }
    basis_[r] = c;
  }

  Status iterate() {
    for (;;) {
      std::size_t enter = npos;
      for (std::size_t j = 0; j < ncols_; ++j)
        if (allowed_[j] && reduced_[j] < 0) {
          enter = j;
          break;
        }
      if (enter == npos) return Status::kOptimal;
      std::size_t leave = npos;
      Rational best;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i][enter] <= 0) continue;
        Rational ratio = rows_[i][ncols_] / rows_[i][enter];
        if (leave == npos || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == npos) {
        ray_col_ = enter;
        return Status::kUnbounded;
      }
      pivot(leave, enter);
    }
  }

  const Problem& prob_;
  std::size_t ncols_ = 0;
  std::size_t first_art_ = 0;
  std::vector<std::size_t> plus_col_, minus_col_, slack_col_;
  std::vector<RatVec> rows_;
  std::vector<std::size_t> basis_;
  std::vector<bool> allowed_;
  RatVec cost_, reduced_;
  std::size_t ray_col_ = npos;
};

inline bool satisfies(const Constraint& c, const RatVec& x) {
  Rational v = dot(c.coeffs, x);
  switch (c.sense) {
    case Sense::kGe: return v >= c.rhs;
    case Sense::kLe: return v <= c.rhs;
    case Sense::kEq: return v == c.rhs;
  }
  return false;
}

}  // namespace detail

/// True iff y proves {constraints} infeasible: y sign-compatible with the
/// senses, y^T A vanishes on free variables and is <= 0 on nonnegative ones,
/// and y^T b > 0.
inline bool is_farkas_certificate(const Problem& p, const RatVec& y) {
  if (y.size() != p.constraints.size()) return false;
  Rational yb = 0;
  RatVec ya(p.num_vars, Rational(0));
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto& c = p.constraints[i];
    if (c.sense == Sense::kGe && y[i] < 0) return false;
    if (c.sense == Sense::kLe && y[i] > 0) return false;
    yb += y[i] * c.rhs;
    for (std::size_t j = 0; j < p.num_vars; ++j) ya[j] += y[i] * c.coeffs[j];
  }
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    if (detail::var_nonneg(p, j) ? ya[j] > 0 : ya[j] != 0) return false;
  }
  return yb > 0;
}

Result solve(const Problem& p);

namespace detail {

inline RatVec farkas_certificate(const Problem& p) {
  // Variables y_i (Le rows use y_i = -y'_i with y'_i >= 0).
  Problem alt;
  std::size_t m = p.constraints.size();
  alt.num_vars = m;
  alt.nonneg.assign(m, false);
  std::vector<int> flip(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    if (p.constraints[i].sense == Sense::kGe) alt.nonneg[i] = true;
    if (p.constraints[i].sense == Sense::kLe) {
      alt.nonneg[i] = true;
      flip[i] = -1;
    }
  }
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    RatVec row(m);
    for (std::size_t i = 0; i < m; ++i) row[i] = flip[i] * p.constraints[i].coeffs[j];
    alt.constraints.push_back(var_nonneg(p, j) ? le(std::move(row), 0) : eq(std::move(row), 0));
  }
  RatVec brow(m);
  for (std::size_t i = 0; i < m; ++i) brow[i] = flip[i] * p.constraints[i].rhs;
  alt.constraints.push_back(eq(std::move(brow), 1));
  Result r = solve(alt);
  if (!r.feasible()) throw std::logic_error("lp: Farkas alternative infeasible for an infeasible system");
  RatVec y = r.point;
  for (std::size_t i = 0; i < m; ++i) y[i] *= flip[i];
  return y;
}

}  // namespace detail

inline Result solve(const Problem& p) {
  detail::validate(p);
  Result res;
  detail::Tableau tab(p);
  if (!tab.phase_one()) {
    res.status = Status::kInfeasible;
    res.farkas = detail::farkas_certificate(p);
    if (!is_farkas_certificate(p, res.farkas)) throw std::logic_error("lp: invalid Farkas certificate");
    return res;
  }
  RatVec obj = p.objective ? *p.objective : RatVec(p.num_vars, Rational(0));
  Status st = tab.phase_two(obj);
  res.point = tab.point();
  for (const auto& c : p.constraints)
    if (!detail::satisfies(c, res.point)) throw std::logic_error("lp: witness violates a constraint");
  res.value = dot(obj, res.point);
  res.status = st;
  if (st == Status::kUnbounded) res.ray = tab.ray();
  return res;
}

/// Feasibility only.
inline Result feasible(std::size_t num_vars, std::vector<Constraint> constraints) {
  Problem p;
  p.num_vars = num_vars;
  p.constraints = std::move(constraints);
  return solve(p);
}

/// Minimize c.x over the constraints (free variables).
inline Result minimize(std::size_t num_vars, std::vector<Constraint> constraints, RatVec objective) {
  Problem p;
  p.num_vars = num_vars;
  p.constraints = std::move(constraints);
  p.objective = std::move(objective);
  return solve(p);
}

}  // namespace dhk::lp
