#pragma once

#include <algorithm>
#include <vector>

#include "lpkit/lp.hpp"
#include "lpkit/rng.hpp"

namespace lpkit::testing {

struct RandomLpOptions {
  int rows = 6;
  int cols = 6;
  double density = 0.45;
  // Construct row bounds around the activity of an interior point so the
  // problem is feasible by construction.
  bool feasible = true;
  double equality_frac = 0.25;
  double one_sided_frac = 0.35;
  // Fraction of columns that get one infinite bound (never both unless free_frac).
  double infinite_bound_frac = 0.0;
  double free_col_frac = 0.0;
  double zero_obj_frac = 0.25;
  double fixed_col_frac = 0.0;
  bool integer_coefs = false;
};

// `witness`, when given, receives an interior point the feasible row bounds
// were built around (meaningful only with o.feasible).
inline LPProblem random_lp(Rng& rng, const RandomLpOptions& o,
                           std::vector<double>* witness = nullptr) {
  LPProblem lp;
  std::vector<double> x0(o.cols, 0.0);
  for (int j = 0; j < o.cols; ++j) {
    double lo = rng.uniform(-5.0, 2.0);
    double width = rng.uniform(0.5, 6.0);
    double hi = lo + width;
    if (rng.u01() < o.fixed_col_frac) hi = lo;
    double pick_lo = lo, pick_hi = hi;
    if (rng.u01() < o.free_col_frac) {
      lo = -kInfinity;
      hi = kInfinity;
    } else if (rng.u01() < o.infinite_bound_frac) {
      if (rng.bernoulli(0.5)) lo = -kInfinity;
      else hi = kInfinity;
    }
    double obj = rng.u01() < o.zero_obj_frac ? 0.0 : rng.uniform(-3.0, 3.0);
    lp.add_col(lo, hi, obj);
    x0[j] = rng.uniform(pick_lo, pick_hi);
  }
  for (int i = 0; i < o.rows; ++i) lp.add_row(-kInfinity, kInfinity);
  for (int i = 0; i < o.rows; ++i) {
    for (int j = 0; j < o.cols; ++j) {
      if (rng.u01() >= o.density) continue;
      double v;
      if (o.integer_coefs) {
        v = static_cast<double>(rng.uniform_int(1, 3));
        if (rng.bernoulli(0.5)) v = -v;
      } else {
        v = rng.uniform(0.5, 3.0);
        if (rng.bernoulli(0.5)) v = -v;
      }
      lp.set_coef(i, j, v);
    }
  }
  for (int i = 0; i < o.rows; ++i) {
    double act = 0.0;
    for (const MatrixEntry& e : lp.row(i)) act += e.value * x0[e.index];
    if (o.feasible) {
      double u = rng.u01();
      if (u < o.equality_frac) {
        lp.set_row_bounds(i, act, act);
      } else if (u < o.equality_frac + o.one_sided_frac) {
        if (rng.bernoulli(0.5)) lp.set_row_bounds(i, act - rng.uniform(0.0, 3.0), kInfinity);
        else lp.set_row_bounds(i, -kInfinity, act + rng.uniform(0.0, 3.0));
      } else {
        lp.set_row_bounds(i, act - rng.uniform(0.0, 3.0), act + rng.uniform(0.0, 3.0));
      }
    } else {
      double lb = rng.uniform(-6.0, 6.0);
      double u = rng.u01();
      if (u < 0.3) lp.set_row_bounds(i, lb, lb);
      else if (u < 0.6) lp.set_row_bounds(i, lb, lb + rng.uniform(0.0, 4.0));
      else if (u < 0.8) lp.set_row_bounds(i, lb, kInfinity);
      else lp.set_row_bounds(i, -kInfinity, lb);
    }
  }
  if (witness) *witness = x0;
  return lp;
}

// A feasible LP salted with the structures the presolve routines look for:
// duplicate rows and columns, fixed and implied-fixed columns, singleton
// rows, small equality rows, and redundant rows.
inline LPProblem structured_lp(Rng& rng, int base_rows = 8, int base_cols = 8) {
  RandomLpOptions o;
  o.rows = base_rows;
  o.cols = base_cols;
  o.density = 0.4;
  o.equality_frac = 0.35;
  o.one_sided_frac = 0.3;
  o.zero_obj_frac = 0.3;
  o.fixed_col_frac = 0.1;
  std::vector<double> x0;
  LPProblem lp = random_lp(rng, o, &x0);

  // Duplicate a few rows at a random scale.
  int dup_rows = 1 + rng.index(3);
  for (int d = 0; d < dup_rows; ++d) {
    int src = rng.index(base_rows);
    if (lp.row(src).empty()) continue;
    double scale = rng.bernoulli(0.5) ? rng.uniform(0.5, 2.0) : -rng.uniform(0.5, 2.0);
    int r = lp.add_row(-kInfinity, kInfinity);
    for (const MatrixEntry& e : lp.row(src)) lp.set_coef(r, e.index, scale * e.value);
    double lb = lp.row_lower(src), ub = lp.row_upper(src);
    double slack = rng.uniform(0.0, 2.0);
    double nlb = is_finite(lb) ? scale * lb : (scale > 0 ? -kInfinity : kInfinity);
    double nub = is_finite(ub) ? scale * ub : (scale > 0 ? kInfinity : -kInfinity);
    if (scale < 0) std::swap(nlb, nub);
    lp.set_row_bounds(r, is_finite(nlb) ? nlb - slack : nlb, is_finite(nub) ? nub + slack : nub);
  }

  // Duplicate a few columns with proportional cost so they are mergeable.
  // Their boxes contain zero, which keeps (x0, 0) feasible.
  int dup_cols = 1 + rng.index(2);
  for (int d = 0; d < dup_cols; ++d) {
    int src = rng.index(base_cols);
    if (lp.col(src).empty()) continue;
    double scale = rng.bernoulli(0.5) ? rng.uniform(0.5, 2.0) : -rng.uniform(0.5, 2.0);
    double lo = rng.uniform(-2.0, 0.0), hi = rng.uniform(0.0, 3.0);
    int c = lp.add_col(lo, hi, scale * lp.obj(src));
    for (const MatrixEntry& e : lp.col(src)) lp.set_coef(e.index, c, scale * e.value);
    x0.push_back(0.0);
  }

  // A singleton row built around the witness value of a random base column.
  if (rng.bernoulli(0.7)) {
    int j = rng.index(base_cols);
    double a = rng.uniform(0.5, 2.0);
    int r = lp.add_row(a * x0[j] - rng.uniform(0.5, 2.0), a * x0[j] + rng.uniform(0.5, 2.0));
    lp.set_coef(r, j, a);
  }

  // A costless singleton column whose box contains zero.
  if (rng.bernoulli(0.7)) {
    int i = rng.index(base_rows);
    int c = lp.add_col(0.0, rng.uniform(0.5, 3.0), 0.0);
    lp.set_coef(i, c, rng.bernoulli(0.5) ? 1.0 : -1.0);
    x0.push_back(0.0);
  }

  return lp;
}

}  // namespace lpkit::testing
