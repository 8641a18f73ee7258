#include "lpkit/lp.hpp"

#include <algorithm>
#include <cmath>

namespace lpkit {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

// Sorted-vector insert/erase keeping the view ordered by index.
std::vector<MatrixEntry>::iterator find_entry(std::vector<MatrixEntry>& v, int index) {
  return std::lower_bound(v.begin(), v.end(), index,
                          [](const MatrixEntry& e, int k) { return e.index < k; });
}

std::vector<MatrixEntry>::const_iterator find_entry(const std::vector<MatrixEntry>& v, int index) {
  return std::lower_bound(v.begin(), v.end(), index,
                          [](const MatrixEntry& e, int k) { return e.index < k; });
}

}  // namespace

void LPProblem::check_row(int i) const {
  if (i < 0 || i >= row_limit() || !row_active_[i]) throw std::out_of_range("bad row index");
}

void LPProblem::check_col(int j) const {
  if (j < 0 || j >= col_limit() || !col_active_[j]) throw std::out_of_range("bad col index");
}

int LPProblem::add_row(double lb, double ub) {
  rows_.emplace_back();
  row_lb_.push_back(lb);
  row_ub_.push_back(ub);
  row_active_.push_back(1);
  ++active_rows_;
  return row_limit() - 1;
}

int LPProblem::add_col(double lb, double ub, double obj) {
  cols_.emplace_back();
  col_lb_.push_back(lb);
  col_ub_.push_back(ub);
  obj_.push_back(obj);
  col_active_.push_back(1);
  ++active_cols_;
  return col_limit() - 1;
}

void LPProblem::set_coef(int row, int col, double v) {
  check_row(row);
  check_col(col);
  auto rit = find_entry(rows_[row], col);
  bool present = rit != rows_[row].end() && rit->index == col;
  if (std::abs(v) <= kDropTolerance) {
    if (present) {
      rows_[row].erase(rit);
      auto cit = find_entry(cols_[col], row);
      cols_[col].erase(cit);
      --nnz_;
    }
    return;
  }
  if (present) {
    rit->value = v;
    find_entry(cols_[col], row)->value = v;
  } else {
    rows_[row].insert(rit, MatrixEntry{col, v});
    auto cit = find_entry(cols_[col], row);
    cols_[col].insert(cit, MatrixEntry{row, v});
    ++nnz_;
  }
}

double LPProblem::coef(int row, int col) const {
  auto it = find_entry(rows_[row], col);
  if (it != rows_[row].end() && it->index == col) return it->value;
  return 0.0;
}

void LPProblem::set_row_bounds(int i, double lb, double ub) {
  check_row(i);
  row_lb_[i] = lb;
  row_ub_[i] = ub;
}

void LPProblem::set_col_bounds(int j, double lb, double ub) {
  check_col(j);
  col_lb_[j] = lb;
  col_ub_[j] = ub;
}

std::vector<int> LPProblem::remove_col_fixed(int j, double value) {
  check_col(j);
  std::vector<int> touched;
  touched.reserve(cols_[j].size());
  for (const MatrixEntry& e : cols_[j]) {
    int i = e.index;
    touched.push_back(i);
    double shift = e.value * value;
    if (is_finite(row_lb_[i])) row_lb_[i] -= shift;
    if (is_finite(row_ub_[i])) row_ub_[i] -= shift;
    auto rit = find_entry(rows_[i], j);
    rows_[i].erase(rit);
    --nnz_;
  }
  cols_[j].clear();
  obj_offset_ += obj_[j] * value;
  col_active_[j] = 0;
  --active_cols_;
  return touched;
}

void LPProblem::remove_col(int j) {
  check_col(j);
  for (const MatrixEntry& e : cols_[j]) {
    auto rit = find_entry(rows_[e.index], j);
    rows_[e.index].erase(rit);
    --nnz_;
  }
  cols_[j].clear();
  col_active_[j] = 0;
  --active_cols_;
}

void LPProblem::remove_row(int i) {
  check_row(i);
  for (const MatrixEntry& e : rows_[i]) {
    auto cit = find_entry(cols_[e.index], i);
    cols_[e.index].erase(cit);
    --nnz_;
  }
  rows_[i].clear();
  row_active_[i] = 0;
  --active_rows_;
}

LPProblem::CompactMaps LPProblem::compact() {
  CompactMaps maps;
  maps.old_row_limit = row_limit();
  maps.old_col_limit = col_limit();

  std::vector<int> new_row(row_limit(), -1);
  std::vector<int> new_col(col_limit(), -1);
  for (int i = 0; i < row_limit(); ++i) {
    if (row_active_[i]) {
      new_row[i] = static_cast<int>(maps.row_of.size());
      maps.row_of.push_back(i);
    }
  }
  for (int j = 0; j < col_limit(); ++j) {
    if (col_active_[j]) {
      new_col[j] = static_cast<int>(maps.col_of.size());
      maps.col_of.push_back(j);
    }
  }

  int nr = static_cast<int>(maps.row_of.size());
  int nc = static_cast<int>(maps.col_of.size());

  std::vector<std::vector<MatrixEntry>> rows(nr), cols(nc);
  std::vector<double> rlb(nr), rub(nr), clb(nc), cub(nc), obj(nc);
  for (int r = 0; r < nr; ++r) {
    int old = maps.row_of[r];
    rows[r] = std::move(rows_[old]);
    for (MatrixEntry& e : rows[r]) e.index = new_col[e.index];
    rlb[r] = row_lb_[old];
    rub[r] = row_ub_[old];
  }
  for (int c = 0; c < nc; ++c) {
    int old = maps.col_of[c];
    cols[c] = std::move(cols_[old]);
    for (MatrixEntry& e : cols[c]) e.index = new_row[e.index];
    clb[c] = col_lb_[old];
    cub[c] = col_ub_[old];
    obj[c] = obj_[old];
  }

  rows_ = std::move(rows);
  cols_ = std::move(cols);
  row_lb_ = std::move(rlb);
  row_ub_ = std::move(rub);
  col_lb_ = std::move(clb);
  col_ub_ = std::move(cub);
  obj_ = std::move(obj);
  row_active_.assign(nr, 1);
  col_active_.assign(nc, 1);
  active_rows_ = nr;
  active_cols_ = nc;
  return maps;
}

double LPProblem::objective_value(const std::vector<double>& x) const {
  double v = obj_offset_;
  for (int j = 0; j < col_limit(); ++j) {
    if (col_active_[j]) v += obj_[j] * x[j];
  }
  return v;
}

double max_violation(const LPProblem& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (int j = 0; j < lp.col_limit(); ++j) {
    if (!lp.col_active(j)) continue;
    if (is_finite(lp.col_lower(j))) worst = std::max(worst, lp.col_lower(j) - x[j]);
    if (is_finite(lp.col_upper(j))) worst = std::max(worst, x[j] - lp.col_upper(j));
  }
  for (int i = 0; i < lp.row_limit(); ++i) {
    if (!lp.row_active(i)) continue;
    double act = 0.0;
    for (const MatrixEntry& e : lp.row(i)) act += e.value * x[e.index];
    if (is_finite(lp.row_lower(i))) worst = std::max(worst, lp.row_lower(i) - act);
    if (is_finite(lp.row_upper(i))) worst = std::max(worst, act - lp.row_upper(i));
  }
  return worst;
}

}  // namespace lpkit
