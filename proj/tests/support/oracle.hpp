#pragma once

#include <cmath>
#include <vector>

#include "lpkit/lp.hpp"

namespace lpkit::testing {

struct OracleResult {
  SolveStatus status = SolveStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> primal;
};

// Exhaustive reference solver: enumerates every basis of the augmented system
// [A | -I] and every bound assignment of the nonbasic variables, keeping the
// best feasible basic solution. Intended for problems with finite variable
// boxes and a handful of rows, where the optimum (if any) is attained at one
// of the enumerated points. Completely independent of the simplex
// implementation.
inline OracleResult enumerate_solve(const LPProblem& lp, double ftol = 1e-7) {
  std::vector<int> cols, rows;
  for (int j = 0; j < lp.col_limit(); ++j)
    if (lp.col_active(j)) cols.push_back(j);
  for (int i = 0; i < lp.row_limit(); ++i)
    if (lp.row_active(i)) rows.push_back(i);
  int n = static_cast<int>(cols.size());
  int m = static_cast<int>(rows.size());
  int nt = n + m;

  std::vector<int> row_local(lp.row_limit(), -1);
  for (int r = 0; r < m; ++r) row_local[rows[r]] = r;

  // Dense augmented matrix columns and bounds.
  std::vector<std::vector<double>> M(nt, std::vector<double>(m, 0.0));
  std::vector<double> lb(nt), ub(nt), cost(nt, 0.0);
  for (int k = 0; k < n; ++k) {
    for (const MatrixEntry& e : lp.col(cols[k])) M[k][row_local[e.index]] = e.value;
    lb[k] = lp.col_lower(cols[k]);
    ub[k] = lp.col_upper(cols[k]);
    cost[k] = lp.obj(cols[k]);
  }
  for (int r = 0; r < m; ++r) {
    M[n + r][r] = -1.0;
    lb[n + r] = lp.row_lower(rows[r]);
    ub[n + r] = lp.row_upper(rows[r]);
  }

  OracleResult best;
  best.status = SolveStatus::kInfeasible;
  bool found = false;

  if (m == 0) {
    // Box problem: each variable independently at its cheapest finite bound.
    std::vector<double> x(nt, 0.0);
    for (int k = 0; k < n; ++k) {
      if (cost[k] > 0) x[k] = lb[k];
      else if (cost[k] < 0) x[k] = ub[k];
      else x[k] = is_finite(lb[k]) ? lb[k] : (is_finite(ub[k]) ? ub[k] : 0.0);
      if (!is_finite(x[k])) {
        best.status = SolveStatus::kUnbounded;
        return best;
      }
    }
    best.status = SolveStatus::kOptimal;
    best.objective = lp.obj_offset();
    for (int k = 0; k < n; ++k) best.objective += cost[k] * x[k];
    best.primal.assign(lp.col_limit(), 0.0);
    for (int k = 0; k < n; ++k) best.primal[cols[k]] = x[k];
    return best;
  }

  // Iterate over all m-subsets of [0, nt).
  std::vector<int> subset(m);
  for (int i = 0; i < m; ++i) subset[i] = i;
  std::vector<double> lu(static_cast<std::size_t>(m) * m);
  std::vector<int> perm(m);
  std::vector<double> x(nt), rhs(m), xb(m);

  auto advance = [&]() {
    int i = m - 1;
    while (i >= 0 && subset[i] == nt - m + i) --i;
    if (i < 0) return false;
    ++subset[i];
    for (int k = i + 1; k < m; ++k) subset[k] = subset[k - 1] + 1;
    return true;
  };

  do {
    // LU factor the basis with partial pivoting.
    for (int pos = 0; pos < m; ++pos)
      for (int r = 0; r < m; ++r) lu[static_cast<std::size_t>(r) * m + pos] = M[subset[pos]][r];
    for (int r = 0; r < m; ++r) perm[r] = r;
    bool singular = false;
    for (int c = 0; c < m && !singular; ++c) {
      int piv = c;
      for (int r = c + 1; r < m; ++r)
        if (std::abs(lu[static_cast<std::size_t>(r) * m + c]) > std::abs(lu[static_cast<std::size_t>(piv) * m + c])) piv = r;
      if (std::abs(lu[static_cast<std::size_t>(piv) * m + c]) < 1e-9) {
        singular = true;
        break;
      }
      if (piv != c) {
        for (int j = 0; j < m; ++j) std::swap(lu[static_cast<std::size_t>(c) * m + j], lu[static_cast<std::size_t>(piv) * m + j]);
        std::swap(perm[c], perm[piv]);
      }
      double inv = 1.0 / lu[static_cast<std::size_t>(c) * m + c];
      for (int r = c + 1; r < m; ++r) {
        double f = lu[static_cast<std::size_t>(r) * m + c] * inv;
        lu[static_cast<std::size_t>(r) * m + c] = f;
        for (int j = c + 1; j < m; ++j)
          lu[static_cast<std::size_t>(r) * m + j] -= f * lu[static_cast<std::size_t>(c) * m + j];
      }
    }
    if (singular) continue;

    // Nonbasic variables and their bound choices.
    std::vector<int> nonbasic;
    std::vector<char> in_basis(nt, 0);
    for (int pos = 0; pos < m; ++pos) in_basis[subset[pos]] = 1;
    bool impossible = false;
    std::vector<int> two_sided;
    for (int k = 0; k < nt; ++k) {
      if (in_basis[k]) continue;
      nonbasic.push_back(k);
      bool lo = is_finite(lb[k]), hi = is_finite(ub[k]);
      if (!lo && !hi) {
        impossible = true;  // free variable must be basic
        break;
      }
      if (lo && hi && lb[k] != ub[k]) two_sided.push_back(k);
    }
    if (impossible) continue;

    int combos = 1 << two_sided.size();
    for (int mask = 0; mask < combos; ++mask) {
      for (int k : nonbasic) x[k] = is_finite(lb[k]) ? lb[k] : ub[k];
      for (std::size_t b = 0; b < two_sided.size(); ++b)
        if (mask & (1 << b)) x[two_sided[b]] = ub[two_sided[b]];

      for (int r = 0; r < m; ++r) rhs[r] = 0.0;
      for (int k : nonbasic) {
        if (x[k] == 0.0) continue;
        for (int r = 0; r < m; ++r) rhs[r] -= M[k][r] * x[k];
      }
      // Solve B xb = rhs via the LU factors.
      for (int r = 0; r < m; ++r) xb[r] = rhs[perm[r]];
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < r; ++c) xb[r] -= lu[static_cast<std::size_t>(r) * m + c] * xb[c];
      for (int r = m - 1; r >= 0; --r) {
        for (int c = r + 1; c < m; ++c) xb[r] -= lu[static_cast<std::size_t>(r) * m + c] * xb[c];
        xb[r] /= lu[static_cast<std::size_t>(r) * m + r];
      }
      bool feasible = true;
      for (int pos = 0; pos < m && feasible; ++pos) {
        int k = subset[pos];
        if (is_finite(lb[k]) && xb[pos] < lb[k] - ftol) feasible = false;
        if (is_finite(ub[k]) && xb[pos] > ub[k] + ftol) feasible = false;
      }
      if (!feasible) continue;
      for (int pos = 0; pos < m; ++pos) x[subset[pos]] = xb[pos];
      double obj = lp.obj_offset();
      for (int k = 0; k < n; ++k) obj += cost[k] * x[k];
      if (!found || obj < best.objective) {
        found = true;
        best.status = SolveStatus::kOptimal;
        best.objective = obj;
        best.primal.assign(lp.col_limit(), 0.0);
        for (int k = 0; k < n; ++k) best.primal[cols[k]] = x[k];
      }
    }
  } while (advance());

  return best;
}

}  // namespace lpkit::testing
