#pragma once

#include <cmath>

#include "lpkit/lp.hpp"

// Row activity interval arithmetic shared by the presolvers and the state
// featurizer. Activity of row i is sum_j a_ij x_j over the variable boxes;
// infinite bound contributions are tracked as counts so single-exclusion
// residuals stay exact.

namespace lpkit {

struct ActivityBounds {
  double finite_min = 0.0;  // sum of finite lower contributions
  double finite_max = 0.0;
  int inf_min = 0;  // number of -inf contributions to the minimum
  int inf_max = 0;

  double lo() const { return inf_min > 0 ? -kInfinity : finite_min; }
  double hi() const { return inf_max > 0 ? kInfinity : finite_max; }

  void add_term(double a, double lb, double ub) {
    if (a == 0.0) return;
    double at_min = a > 0 ? lb : ub;  // bound choice minimizing a*x
    double at_max = a > 0 ? ub : lb;
    if (is_finite(at_min)) finite_min += a * at_min;
    else ++inf_min;
    if (is_finite(at_max)) finite_max += a * at_max;
    else ++inf_max;
  }

  void remove_term(double a, double lb, double ub) {
    if (a == 0.0) return;
    double at_min = a > 0 ? lb : ub;
    double at_max = a > 0 ? ub : lb;
    if (is_finite(at_min)) finite_min -= a * at_min;
    else --inf_min;
    if (is_finite(at_max)) finite_max -= a * at_max;
    else --inf_max;
  }
};

inline ActivityBounds row_activity(const LPProblem& lp, int row) {
  ActivityBounds act;
  for (const MatrixEntry& e : lp.row(row))
    act.add_term(e.value, lp.col_lower(e.index), lp.col_upper(e.index));
  return act;
}

struct Interval {
  double lb = -kInfinity;
  double ub = kInfinity;
};

// Bounds on x_col implied by row `row` alone, given the activity of the row
// with the col term excluded. Requires coef != 0.
inline Interval implied_col_interval(const LPProblem& lp, int row, double coef,
                                     const ActivityBounds& residual) {
  double rlo = residual.lo(), rhi = residual.hi();
  double blo = lp.row_lower(row), bhi = lp.row_upper(row);
  // blo - rhi <= coef * x <= bhi - rlo, minded over infinities.
  double num_lo = (is_finite(blo) && is_finite(rhi)) ? blo - rhi : -kInfinity;
  double num_hi = (is_finite(bhi) && is_finite(rlo)) ? bhi - rlo : kInfinity;
  Interval out;
  if (coef > 0) {
    out.lb = is_finite(num_lo) ? num_lo / coef : -kInfinity;
    out.ub = is_finite(num_hi) ? num_hi / coef : kInfinity;
  } else {
    out.lb = is_finite(num_hi) ? num_hi / coef : -kInfinity;
    out.ub = is_finite(num_lo) ? num_lo / coef : kInfinity;
  }
  return out;
}

// A column is implied free w.r.t. a row when the interval the row forces on
// it is at least as tight as its own box, making the box redundant.
inline bool implies_free(const Interval& implied, double lb, double ub, double tol) {
  bool lo_ok = !is_finite(lb) || (is_finite(implied.lb) && implied.lb >= lb - tol);
  bool hi_ok = !is_finite(ub) || (is_finite(implied.ub) && implied.ub <= ub + tol);
  return lo_ok && hi_ok;
}

// Decreasing x_col can never violate a row iff every row where it appears
// with a positive coefficient has no lower row bound and every row where it
// appears negatively has no upper row bound. Mirrored for increases.
inline bool col_down_safe(const LPProblem& lp, int col) {
  for (const MatrixEntry& e : lp.col(col)) {
    if (e.value > 0 && is_finite(lp.row_lower(e.index))) return false;
    if (e.value < 0 && is_finite(lp.row_upper(e.index))) return false;
  }
  return true;
}

inline bool col_up_safe(const LPProblem& lp, int col) {
  for (const MatrixEntry& e : lp.col(col)) {
    if (e.value > 0 && is_finite(lp.row_upper(e.index))) return false;
    if (e.value < 0 && is_finite(lp.row_lower(e.index))) return false;
  }
  return true;
}

enum class RowClass {
  kInfeasible,    // activity interval misses the row bounds entirely
  kForcingAtMin,  // lowest achievable activity already meets the upper bound
  kForcingAtMax,  // highest achievable activity already meets the lower bound
  kRedundant,     // activity interval is contained in the row bounds
  kNearRedundant, // contained after relaxing each finite row bound by 10%
  kOrdinary,
};

inline RowClass classify_row(const LPProblem& lp, int row, double tol = 1e-9) {
  ActivityBounds act = row_activity(lp, row);
  double lo = act.lo(), hi = act.hi();
  double blo = lp.row_lower(row), bhi = lp.row_upper(row);
  double slo = tol * (1.0 + std::abs(blo));
  double shi = tol * (1.0 + std::abs(bhi));
  if ((is_finite(bhi) && lo > bhi + shi) || (is_finite(blo) && hi < blo - slo))
    return RowClass::kInfeasible;
  if (is_finite(bhi) && is_finite(lo) && lo >= bhi - shi) return RowClass::kForcingAtMin;
  if (is_finite(blo) && is_finite(hi) && hi <= blo + slo) return RowClass::kForcingAtMax;
  bool lo_in = !is_finite(blo) || (is_finite(lo) && lo >= blo - slo);
  bool hi_in = !is_finite(bhi) || (is_finite(hi) && hi <= bhi + shi);
  if (lo_in && hi_in) return RowClass::kRedundant;
  double rlo = blo - 0.1 * (1.0 + std::abs(blo));
  double rhi = bhi + 0.1 * (1.0 + std::abs(bhi));
  bool lo_near = !is_finite(blo) || (is_finite(lo) && lo >= rlo);
  bool hi_near = !is_finite(bhi) || (is_finite(hi) && hi <= rhi);
  if (lo_near && hi_near) return RowClass::kNearRedundant;
  return RowClass::kOrdinary;
}

inline bool is_equality_row(const LPProblem& lp, int row, double tol = 1e-9) {
  double lb = lp.row_lower(row), ub = lp.row_upper(row);
  return is_finite(lb) && is_finite(ub) && ub - lb <= tol * (1.0 + std::abs(lb));
}

}  // namespace lpkit
