#include "lpkit/presolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "lpkit/analysis.hpp"

namespace lpkit {

namespace {

constexpr double kTol = 1e-9;       // relative comparison tolerance
constexpr double kMinPivot = 1e-7;  // smallest coefficient used as a divisor

double scale_tol(double v) { return kTol * (1.0 + std::abs(v)); }

// lo/hi of the interval a * [lb, ub] on the extended line.
void term_range(double a, double lb, double ub, double& lo, double& hi) {
  if (a > 0) {
    lo = is_finite(lb) ? a * lb : -kInfinity;
    hi = is_finite(ub) ? a * ub : kInfinity;
  } else {
    lo = is_finite(ub) ? a * ub : -kInfinity;
    hi = is_finite(lb) ? a * lb : kInfinity;
  }
}

// Interval of x satisfying lo <= a x <= hi, a != 0.
Interval divide_interval(double lo, double hi, double a) {
  Interval out;
  if (a > 0) {
    out.lb = is_finite(lo) ? lo / a : -kInfinity;
    out.ub = is_finite(hi) ? hi / a : kInfinity;
  } else {
    out.lb = is_finite(hi) ? hi / a : -kInfinity;
    out.ub = is_finite(lo) ? lo / a : kInfinity;
  }
  return out;
}

bool proportional(const std::vector<MatrixEntry>& a, const std::vector<MatrixEntry>& b,
                  double ratio) {
  // Same sorted support is checked by the caller; verifies b = ratio * a.
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].index != b[k].index) return false;
    if (std::abs(b[k].value - ratio * a[k].value) > scale_tol(b[k].value)) return false;
  }
  return true;
}

std::size_t support_hash(const std::vector<MatrixEntry>& entries) {
  std::size_t h = entries.size();
  for (const MatrixEntry& e : entries)
    h = h * 1000003u + static_cast<std::size_t>(e.index) + 1u;
  return h;
}

// Net matrix entry change caused by eliminating `col` from every row other
// than pivot_row using the pivot row's remaining entries. Conservative: exact
// cancellations created by the update are not credited.
int fill_delta(const LPProblem& lp, int pivot_row, int col,
               const std::vector<MatrixEntry>& others) {
  int delta = 0;
  for (const MatrixEntry& ce : lp.col(col)) {
    if (ce.index == pivot_row) continue;
    delta -= 1;
    for (const MatrixEntry& oe : others)
      if (lp.coef(ce.index, oe.index) == 0.0) delta += 1;
  }
  return delta;
}

// Rewrites every row except pivot_row so that `col` disappears, using
// pivot * x_col + sum(others) = rhs. Also folds the column out of the
// objective. Does not touch pivot_row, bounds of col, or activity flags.
void substitute_out(LPProblem& lp, int pivot_row, int col, double pivot, double rhs,
                    const std::vector<MatrixEntry>& others) {
  double c = lp.obj(col);
  if (c != 0.0) {
    double f = c / pivot;
    lp.set_obj_offset(lp.obj_offset() + f * rhs);
    for (const MatrixEntry& oe : others) lp.set_obj(oe.index, lp.obj(oe.index) - f * oe.value);
    lp.set_obj(col, 0.0);
  }
  std::vector<MatrixEntry> col_rows = lp.col(col);
  for (const MatrixEntry& ce : col_rows) {
    int r = ce.index;
    if (r == pivot_row) continue;
    double f = ce.value / pivot;
    for (const MatrixEntry& oe : others)
      lp.set_coef(r, oe.index, lp.coef(r, oe.index) - f * oe.value);
    double lb = lp.row_lower(r), ub = lp.row_upper(r);
    lp.set_row_bounds(r, is_finite(lb) ? lb - f * rhs : lb,
                      is_finite(ub) ? ub - f * rhs : ub);
    lp.set_coef(r, col, 0.0);
  }
}

struct Pass {
  LPProblem& lp;
  PresolveStack& stack;
  ApplyOutcome out;

  void push(Reduction r) {
    stack.push(std::move(r));
    ++out.reductions;
  }
};

// id 0: delete columns whose box has collapsed to a point.
void run_make_fixed(Pass& p) {
  LPProblem& lp = p.lp;
  for (int j = 0; j < lp.col_limit(); ++j) {
    if (!lp.col_active(j)) continue;
    ++p.out.scanned;
    double lb = lp.col_lower(j), ub = lp.col_upper(j);
    if (!is_finite(lb) || !is_finite(ub)) continue;
    if (ub - lb > kDropTolerance * (1.0 + std::abs(lb))) continue;
    p.push(FixedVar{j, lb});
    lp.remove_col_fixed(j, lb);
  }
}

// id 1: drop rows the variable boxes already satisfy, flag rows they can
// never satisfy, and tighten variable bounds row by row.
void run_test_redundant(Pass& p) {
  LPProblem& lp = p.lp;
  for (int i = 0; i < lp.row_limit(); ++i) {
    if (!lp.row_active(i)) continue;
    ++p.out.scanned;
    ActivityBounds act = row_activity(lp, i);
    double blo = lp.row_lower(i), bhi = lp.row_upper(i);
    double lo = act.lo(), hi = act.hi();
    if ((is_finite(bhi) && lo > bhi + scale_tol(bhi)) ||
        (is_finite(blo) && hi < blo - scale_tol(blo))) {
      p.out.infeasible = true;
      return;
    }
    bool lo_in = !is_finite(blo) || (is_finite(lo) && lo >= blo - scale_tol(blo));
    bool hi_in = !is_finite(bhi) || (is_finite(hi) && hi <= bhi + scale_tol(bhi));
    if (lo_in && hi_in) {
      p.push(RemovedRow{i, blo, bhi, lp.row(i)});
      lp.remove_row(i);
      continue;
    }
    // Single row bound propagation. The activity cache is patched after each
    // tightening so later columns of the same row see the new box.
    for (const MatrixEntry& e : lp.row(i)) {
      int j = e.index;
      double clb = lp.col_lower(j), cub = lp.col_upper(j);
      ActivityBounds resid = act;
      resid.remove_term(e.value, clb, cub);
      Interval iv = implied_col_interval(lp, i, e.value, resid);
      if (is_finite(iv.lb) && iv.lb > cub + scale_tol(cub)) {
        p.out.infeasible = true;
        return;
      }
      if (is_finite(iv.ub) && iv.ub < clb - scale_tol(clb)) {
        p.out.infeasible = true;
        return;
      }
      double nlb = clb, nub = cub;
      if (is_finite(iv.lb) && iv.lb > clb + scale_tol(clb)) nlb = iv.lb;
      if (is_finite(iv.ub) && iv.ub < cub - scale_tol(cub)) nub = std::max(iv.ub, nlb);
      if (nlb == clb && nub == cub) continue;
      p.push(BoundTightened{false, j, clb, cub});
      lp.set_col_bounds(j, nlb, nub);
      act.remove_term(e.value, clb, cub);
      act.add_term(e.value, nlb, nub);
    }
  }
}

// id 2: merge parallel columns with proportional costs.
void run_dupcol(Pass& p) {
  LPProblem& lp = p.lp;
  std::unordered_map<std::size_t, std::vector<int>> buckets;
  for (int j = 0; j < lp.col_limit(); ++j) {
    if (!lp.col_active(j) || lp.col(j).empty()) continue;
    ++p.out.scanned;
    buckets[support_hash(lp.col(j))].push_back(j);
  }
  std::vector<std::size_t> keys;
  keys.reserve(buckets.size());
  for (const auto& kv : buckets)
    if (kv.second.size() > 1) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());

  for (std::size_t key : keys) {
    const std::vector<int>& group = buckets[key];
    std::vector<char> consumed(group.size(), 0);
    for (std::size_t a = 0; a < group.size(); ++a) {
      if (consumed[a]) continue;
      int kept = group[a];
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        if (consumed[b]) continue;
        int removed = group[b];
        const auto& ck = lp.col(kept);
        const auto& cr = lp.col(removed);
        if (ck.size() != cr.size()) continue;
        double ratio = cr[0].value / ck[0].value;
        if (!proportional(ck, cr, ratio)) continue;
        if (std::abs(lp.obj(removed) - ratio * lp.obj(kept)) > scale_tol(lp.obj(removed)))
          continue;
        double klb = lp.col_lower(kept), kub = lp.col_upper(kept);
        double rlb = lp.col_lower(removed), rub = lp.col_upper(removed);
        double add_lo, add_hi;
        term_range(ratio, rlb, rub, add_lo, add_hi);
        p.push(MergedDupCol{removed, kept, ratio, rlb, rub, klb, kub});
        lp.set_col_bounds(kept, ext_add(klb, add_lo), ext_add(kub, add_hi));
        lp.remove_col(removed);
        consumed[b] = 1;
      }
    }
  }
}

// id 4: collapse parallel rows onto one row with intersected bounds.
void run_duprow(Pass& p) {
  LPProblem& lp = p.lp;
  std::unordered_map<std::size_t, std::vector<int>> buckets;
  for (int i = 0; i < lp.row_limit(); ++i) {
    if (!lp.row_active(i) || lp.row(i).empty()) continue;
    ++p.out.scanned;
    buckets[support_hash(lp.row(i))].push_back(i);
  }
  std::vector<std::size_t> keys;
  keys.reserve(buckets.size());
  for (const auto& kv : buckets)
    if (kv.second.size() > 1) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());

  for (std::size_t key : keys) {
    const std::vector<int>& group = buckets[key];
    std::vector<char> consumed(group.size(), 0);
    for (std::size_t a = 0; a < group.size(); ++a) {
      if (consumed[a]) continue;
      int kept = group[a];
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        if (consumed[b]) continue;
        int removed = group[b];
        const auto& rk = lp.row(kept);
        const auto& rr = lp.row(removed);
        if (rk.size() != rr.size()) continue;
        double ratio = rr[0].value / rk[0].value;
        if (!proportional(rk, rr, ratio)) continue;
        // removed row demands: r_lb <= ratio * (kept activity) <= r_ub.
        Interval mapped = divide_interval(lp.row_lower(removed), lp.row_upper(removed), ratio);
        double klb = lp.row_lower(kept), kub = lp.row_upper(kept);
        double nlb = std::max(klb, mapped.lb);
        double nub = std::min(kub, mapped.ub);
        if (nlb > nub + scale_tol(nlb)) {
          p.out.infeasible = true;
          return;
        }
        nub = std::max(nub, nlb);
        p.push(RemovedRow{removed, lp.row_lower(removed), lp.row_upper(removed), rr});
        if (nlb != klb || nub != kub) {
          p.push(BoundTightened{true, kept, klb, kub});
          lp.set_row_bounds(kept, nlb, nub);
        }
        lp.remove_row(removed);
        consumed[b] = 1;
      }
    }
  }
}

// id 6: substitute out a variable whose box is made redundant by an equality
// row it sits on, as long as the elimination does not grow the matrix.
void run_implied_free(Pass& p) {
  LPProblem& lp = p.lp;
  for (int i = 0; i < lp.row_limit(); ++i) {
    if (!lp.row_active(i) || !is_equality_row(lp, i)) continue;
    if (lp.row(i).size() < 2) continue;
    ++p.out.scanned;
    ActivityBounds act = row_activity(lp, i);
    const std::vector<MatrixEntry> entries = lp.row(i);
    int row_nnz = static_cast<int>(entries.size());
    for (const MatrixEntry& e : entries) {
      if (std::abs(e.value) < kMinPivot) continue;
      int j = e.index;
      double clb = lp.col_lower(j), cub = lp.col_upper(j);
      ActivityBounds resid = act;
      resid.remove_term(e.value, clb, cub);
      Interval iv = implied_col_interval(lp, i, e.value, resid);
      double tol = kTol * (1.0 + std::max(std::abs(iv.lb), std::abs(iv.ub)));
      if (!implies_free(iv, clb, cub, tol)) continue;
      std::vector<MatrixEntry> others;
      others.reserve(entries.size() - 1);
      for (const MatrixEntry& oe : entries)
        if (oe.index != j) others.push_back(oe);
      if (fill_delta(lp, i, j, others) - row_nnz > 0) continue;
      double rhs = 0.5 * (lp.row_lower(i) + lp.row_upper(i));
      p.push(SubstitutedVar{j, i, e.value, rhs, others});
      substitute_out(lp, i, j, e.value, rhs, others);
      lp.remove_row(i);
      lp.remove_col(j);
      break;
    }
  }
}

// id 7: fold singleton rows into the bounds of their only variable.
void run_slack_doubleton(Pass& p) {
  LPProblem& lp = p.lp;
  for (int i = 0; i < lp.row_limit(); ++i) {
    if (!lp.row_active(i) || lp.row(i).size() != 1) continue;
    ++p.out.scanned;
    MatrixEntry e = lp.row(i)[0];
    int j = e.index;
    Interval iv = divide_interval(lp.row_lower(i), lp.row_upper(i), e.value);
    double clb = lp.col_lower(j), cub = lp.col_upper(j);
    double nlb = std::max(clb, iv.lb);
    double nub = std::min(cub, iv.ub);
    if (nlb > nub + scale_tol(nlb)) {
      p.out.infeasible = true;
      return;
    }
    nub = std::max(nub, nlb);
    p.push(RemovedRow{i, lp.row_lower(i), lp.row_upper(i), lp.row(i)});
    if (nlb != clb || nub != cub) {
      p.push(BoundTightened{false, j, clb, cub});
      lp.set_col_bounds(j, nlb, nub);
    }
    lp.remove_row(i);
  }
}

// id 8: pin costless columns whose movement in one direction can never hurt
// any row, at the finite bound in that direction.
void run_tighten_action(Pass& p) {
  LPProblem& lp = p.lp;
  for (int j = 0; j < lp.col_limit(); ++j) {
    if (!lp.col_active(j)) continue;
    ++p.out.scanned;
    if (std::abs(lp.obj(j)) > kDropTolerance) continue;
    double lb = lp.col_lower(j), ub = lp.col_upper(j);
    if (is_finite(lb) && col_down_safe(lp, j)) {
      p.push(FixedVar{j, lb});
      lp.remove_col_fixed(j, lb);
    } else if (is_finite(ub) && col_up_safe(lp, j)) {
      p.push(FixedVar{j, ub});
      lp.remove_col_fixed(j, ub);
    }
  }
}

// id 9: pin columns whose cost and rows both push the same way.
void run_remove_dual(Pass& p) {
  LPProblem& lp = p.lp;
  for (int j = 0; j < lp.col_limit(); ++j) {
    if (!lp.col_active(j)) continue;
    ++p.out.scanned;
    double c = lp.obj(j);
    if (std::abs(c) <= kDropTolerance) continue;
    double lb = lp.col_lower(j), ub = lp.col_upper(j);
    if (c > 0 && is_finite(lb) && col_down_safe(lp, j)) {
      p.push(FixedVar{j, lb});
      lp.remove_col_fixed(j, lb);
    } else if (c < 0 && is_finite(ub) && col_up_safe(lp, j)) {
      p.push(FixedVar{j, ub});
      lp.remove_col_fixed(j, ub);
    }
  }
}

// Shared by ids 10 and 11: bounds forced on the remaining terms when the
// pivot variable of an equality row is eliminated. The pivot's box turns into
// rhs - pivot * [lb, ub] on the rest of the row.
void pivot_residual_bounds(double pivot, double rhs, double lb, double ub, double& lo,
                           double& hi) {
  double plo, phi;
  term_range(pivot, lb, ub, plo, phi);
  lo = is_finite(phi) ? rhs - phi : -kInfinity;
  hi = is_finite(plo) ? rhs - plo : kInfinity;
}

// id 10: eliminate the pivot variable of two-entry equality rows.
void run_doubleton(Pass& p) {
  LPProblem& lp = p.lp;
  for (int i = 0; i < lp.row_limit(); ++i) {
    if (!lp.row_active(i) || !is_equality_row(lp, i) || lp.row(i).size() != 2) continue;
    ++p.out.scanned;
    const std::vector<MatrixEntry> entries = lp.row(i);
    int piv = std::abs(entries[0].value) >= std::abs(entries[1].value) ? 0 : 1;
    const MatrixEntry pe = entries[piv];
    const MatrixEntry oe = entries[1 - piv];
    if (std::abs(pe.value) < kMinPivot) continue;
    double rhs = 0.5 * (lp.row_lower(i) + lp.row_upper(i));

    double tlo, thi;
    pivot_residual_bounds(pe.value, rhs, lp.col_lower(pe.index), lp.col_upper(pe.index),
                          tlo, thi);
    Interval iv = divide_interval(tlo, thi, oe.value);
    double clb = lp.col_lower(oe.index), cub = lp.col_upper(oe.index);
    double nlb = std::max(clb, iv.lb);
    double nub = std::min(cub, iv.ub);
    if (nlb > nub + scale_tol(nlb)) {
      p.out.infeasible = true;
      return;
    }
    nub = std::max(nub, nlb);
    if (nlb != clb || nub != cub) {
      p.push(BoundTightened{false, oe.index, clb, cub});
      lp.set_col_bounds(oe.index, nlb, nub);
    }
    std::vector<MatrixEntry> others{oe};
    p.push(SubstitutedVar{pe.index, i, pe.value, rhs, others});
    substitute_out(lp, i, pe.index, pe.value, rhs, others);
    lp.remove_row(i);
    lp.remove_col(pe.index);
  }
}

// id 11: eliminate the pivot variable of three-entry equality rows, rewriting
// the row as a two-entry ranged row that carries the pivot's box.
void run_tripleton(Pass& p) {
  LPProblem& lp = p.lp;
  for (int i = 0; i < lp.row_limit(); ++i) {
    if (!lp.row_active(i) || !is_equality_row(lp, i) || lp.row(i).size() != 3) continue;
    ++p.out.scanned;
    const std::vector<MatrixEntry> entries = lp.row(i);
    int piv = 0;
    for (int k = 1; k < 3; ++k)
      if (std::abs(entries[k].value) > std::abs(entries[piv].value)) piv = k;
    const MatrixEntry pe = entries[piv];
    if (std::abs(pe.value) < kMinPivot) continue;
    double plb = lp.col_lower(pe.index), pub = lp.col_upper(pe.index);
    bool pivot_free = !is_finite(plb) && !is_finite(pub);

    std::vector<MatrixEntry> others;
    for (int k = 0; k < 3; ++k)
      if (k != piv) others.push_back(entries[k]);

    int delta = fill_delta(lp, i, pe.index, others) - (pivot_free ? 3 : 1);
    if (delta > 0) continue;

    double rhs = 0.5 * (lp.row_lower(i) + lp.row_upper(i));
    p.push(SubstitutedVar{pe.index, i, pe.value, rhs, others});
    substitute_out(lp, i, pe.index, pe.value, rhs, others);
    if (pivot_free) {
      p.push(RemovedRow{i, lp.row_lower(i), lp.row_upper(i), entries});
      lp.remove_row(i);
    } else {
      double nlo, nhi;
      pivot_residual_bounds(pe.value, rhs, plb, pub, nlo, nhi);
      p.push(BoundTightened{true, i, lp.row_lower(i), lp.row_upper(i)});
      lp.set_coef(i, pe.index, 0.0);
      lp.set_row_bounds(i, nlo, nhi);
    }
    lp.remove_col(pe.index);
  }
}

// id 12: rows whose weakest achievable activity already saturates a bound fix
// every variable they touch.
void run_forcing(Pass& p) {
  LPProblem& lp = p.lp;
  for (int i = 0; i < lp.row_limit(); ++i) {
    if (!lp.row_active(i) || lp.row(i).empty()) continue;
    ++p.out.scanned;
    ActivityBounds act = row_activity(lp, i);
    double blo = lp.row_lower(i), bhi = lp.row_upper(i);
    double lo = act.lo(), hi = act.hi();
    if ((is_finite(bhi) && lo > bhi + scale_tol(bhi)) ||
        (is_finite(blo) && hi < blo - scale_tol(blo))) {
      p.out.infeasible = true;
      return;
    }
    bool at_min = is_finite(bhi) && is_finite(lo) && lo >= bhi - scale_tol(bhi);
    bool at_max = is_finite(blo) && is_finite(hi) && hi <= blo + scale_tol(blo);
    if (!at_min && !at_max) continue;
    const std::vector<MatrixEntry> entries = lp.row(i);
    p.push(RemovedRow{i, blo, bhi, entries});
    for (const MatrixEntry& e : entries) {
      double v;
      if (at_min)
        v = e.value > 0 ? lp.col_lower(e.index) : lp.col_upper(e.index);
      else
        v = e.value > 0 ? lp.col_upper(e.index) : lp.col_lower(e.index);
      p.push(FixedVar{e.index, v});
      lp.remove_col_fixed(e.index, v);
    }
    lp.remove_row(i);
  }
}

// id 13: project out costless singleton columns, widening their row so any
// solution of the reduced row extends to one with a feasible column value.
void run_slack_singleton(Pass& p) {
  LPProblem& lp = p.lp;
  for (int j = 0; j < lp.col_limit(); ++j) {
    if (!lp.col_active(j) || lp.col(j).size() != 1) continue;
    ++p.out.scanned;
    if (std::abs(lp.obj(j)) > kDropTolerance) continue;
    MatrixEntry e = lp.col(j)[0];
    if (std::abs(e.value) < kMinPivot) continue;
    int i = e.index;
    double clb = lp.col_lower(j), cub = lp.col_upper(j);
    double tlo, thi;
    term_range(e.value, clb, cub, tlo, thi);
    double blo = lp.row_lower(i), bhi = lp.row_upper(i);
    double nlo = (is_finite(blo) && is_finite(thi)) ? blo - thi : -kInfinity;
    double nhi = (is_finite(bhi) && is_finite(tlo)) ? bhi - tlo : kInfinity;

    std::vector<MatrixEntry> others;
    for (const MatrixEntry& re : lp.row(i))
      if (re.index != j) others.push_back(re);
    p.push(SlackSingletonFreed{j, i, e.value, blo, bhi, clb, cub, others});
    lp.set_row_bounds(i, nlo, nhi);
    lp.set_coef(i, j, 0.0);
    lp.remove_col(j);
  }
}

}  // namespace

bool is_supported_presolver(int id) {
  for (int s : kSupportedPresolvers)
    if (s == id) return true;
  return false;
}

int presolver_slot(int id) {
  for (std::size_t k = 0; k < kSupportedPresolvers.size(); ++k)
    if (kSupportedPresolvers[k] == id) return static_cast<int>(k);
  return -1;
}

std::string_view presolver_name(int id) {
  switch (id) {
    case 0: return "make_fixed";
    case 1: return "test_redundant";
    case 2: return "dupcol";
    case 4: return "duprow";
    case 6: return "implied_free";
    case 7: return "slack_doubleton";
    case 8: return "tighten_action";
    case 9: return "remove_dual";
    case 10: return "doubleton";
    case 11: return "tripleton";
    case 12: return "forcing";
    case 13: return "slack_singleton";
    default: throw std::invalid_argument("unsupported presolver id " + std::to_string(id));
  }
}

std::vector<int> parse_chain(std::string_view text) {
  std::vector<int> ids;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ',' || text[pos] == ' ')) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ',' && text[end] != ' ') ++end;
    std::string token(text.substr(pos, end - pos));
    char* stop = nullptr;
    long v = std::strtol(token.c_str(), &stop, 10);
    if (stop == token.c_str() || *stop != '\0')
      throw std::invalid_argument("bad presolver id token '" + token + "'");
    if (!is_supported_presolver(static_cast<int>(v)))
      throw std::invalid_argument("unsupported presolver id " + token);
    ids.push_back(static_cast<int>(v));
    pos = end;
  }
  return ids;
}

double pick_in_interval(double lo, double hi) {
  if (is_finite(lo)) return lo;
  if (is_finite(hi)) return hi;
  return 0.0;
}

PresolveStack::PresolveStack(const LPProblem& origin)
    : original_col_limit_(origin.col_limit()) {}

std::vector<double> PresolveStack::postsolve(const std::vector<double>& reduced) const {
  std::vector<double> x = reduced;
  for (auto it = reductions_.rbegin(); it != reductions_.rend(); ++it) {
    if (const auto* f = std::get_if<FixedVar>(&*it)) {
      if (f->col >= static_cast<int>(x.size())) x.resize(f->col + 1, 0.0);
      x[f->col] = f->value;
    } else if (const auto* s = std::get_if<SubstitutedVar>(&*it)) {
      double acc = s->rhs;
      for (const MatrixEntry& e : s->others) acc -= e.value * x[e.index];
      if (s->col >= static_cast<int>(x.size())) x.resize(s->col + 1, 0.0);
      x[s->col] = acc / s->pivot;
    } else if (const auto* m = std::get_if<MergedDupCol>(&*it)) {
      double y = x[m->kept];
      double tlo = is_finite(m->kept_ub) ? y - m->kept_ub : -kInfinity;
      double thi = is_finite(m->kept_lb) ? y - m->kept_lb : kInfinity;
      Interval iv = divide_interval(tlo, thi, m->ratio);
      double lo = std::max(m->removed_lb, iv.lb);
      double hi = std::min(m->removed_ub, iv.ub);
      double v = pick_in_interval(lo, hi);
      v = std::min(std::max(v, m->removed_lb), m->removed_ub);
      if (m->removed >= static_cast<int>(x.size())) x.resize(m->removed + 1, 0.0);
      x[m->removed] = v;
      x[m->kept] = y - m->ratio * v;
    } else if (const auto* s = std::get_if<SlackSingletonFreed>(&*it)) {
      double acc = 0.0;
      for (const MatrixEntry& e : s->row_others) acc += e.value * x[e.index];
      double tlo = is_finite(s->row_lb) ? s->row_lb - acc : -kInfinity;
      double thi = is_finite(s->row_ub) ? s->row_ub - acc : kInfinity;
      Interval iv = divide_interval(tlo, thi, s->coef);
      double lo = std::max(s->col_lb, iv.lb);
      double hi = std::min(s->col_ub, iv.ub);
      double v = pick_in_interval(lo, hi);
      v = std::min(std::max(v, s->col_lb), s->col_ub);
      if (s->col >= static_cast<int>(x.size())) x.resize(s->col + 1, 0.0);
      x[s->col] = v;
    } else if (const auto* c = std::get_if<Compacted>(&*it)) {
      std::vector<double> expanded(c->old_col_limit, 0.0);
      for (std::size_t nj = 0; nj < c->col_of.size() && nj < x.size(); ++nj)
        expanded[c->col_of[nj]] = x[nj];
      x = std::move(expanded);
    }
    // RemovedRow and BoundTightened need no primal action.
  }
  if (static_cast<int>(x.size()) < original_col_limit_) x.resize(original_col_limit_, 0.0);
  return x;
}

ApplyOutcome apply_presolver(LPProblem& lp, int id, PresolveStack& stack) {
  Pass p{lp, stack, {}};
  switch (id) {
    case 0: run_make_fixed(p); break;
    case 1: run_test_redundant(p); break;
    case 2: run_dupcol(p); break;
    case 4: run_duprow(p); break;
    case 6: run_implied_free(p); break;
    case 7: run_slack_doubleton(p); break;
    case 8: run_tighten_action(p); break;
    case 9: run_remove_dual(p); break;
    case 10: run_doubleton(p); break;
    case 11: run_tripleton(p); break;
    case 12: run_forcing(p); break;
    case 13: run_slack_singleton(p); break;
    default: throw std::invalid_argument("unsupported presolver id " + std::to_string(id));
  }
  return p.out;
}

ApplyOutcome apply_chain(LPProblem& lp, const std::vector<int>& ids, PresolveStack& stack) {
  ApplyOutcome total;
  for (int id : ids) {
    total += apply_presolver(lp, id, stack);
    if (total.infeasible) break;
  }
  return total;
}

void compact_problem(LPProblem& lp, PresolveStack& stack) {
  LPProblem::CompactMaps maps = lp.compact();
  stack.push(Compacted{std::move(maps.row_of), std::move(maps.col_of), maps.old_row_limit,
                       maps.old_col_limit});
}

}  // namespace lpkit
