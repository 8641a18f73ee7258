#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpkit {

// Bounds live on the extended real line; +/-infinity marks a missing bound.
constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Entries with magnitude at or below this are dropped from the matrix.
constexpr double kDropTolerance = 1e-12;

inline bool is_finite(double v) { return v > -kInfinity && v < kInfinity; }

// Infinity-aware addition. Adding opposite infinities has no meaning for
// bound arithmetic, so it is rejected loudly instead of producing NaN.
inline double ext_add(double a, double b) {
  if (a == kInfinity && b == -kInfinity) throw std::domain_error("ext_add: inf + -inf");
  if (a == -kInfinity && b == kInfinity) throw std::domain_error("ext_add: -inf + inf");
  if (!is_finite(a)) return a;
  if (!is_finite(b)) return b;
  return a + b;
}

// a * b where a is finite and nonzero; keeps the sign convention for b = +/-inf.
inline double ext_mul(double a, double b) {
  if (!is_finite(b)) return (a > 0) == (b > 0) ? kInfinity : -kInfinity;
  return a * b;
}

struct MatrixEntry {
  int index;     // column id in a row view, row id in a column view
  double value;
  bool operator==(const MatrixEntry&) const = default;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string to_string(SolveStatus s);

struct Solution {
  SolveStatus status = SolveStatus::kIterationLimit;
  double objective = 0.0;
  // Indexed by column slot (including tombstoned slots, which hold 0).
  std::vector<double> primal;
};

// Sparse LP in general form:
//   minimize  obj.x + obj_offset
//   subject to row_lower <= A x <= row_upper,  col_lower <= x <= col_upper.
//
// The matrix is stored twice, as rows and as columns, and the two views are
// kept in sync by every mutation. Removing a row or column tombstones the
// slot instead of renumbering, so indices stay stable while a presolve pass
// is recording reductions; compact() squeezes the tombstones out and reports
// the renumbering.
class LPProblem {
 public:
  LPProblem() = default;

  int add_row(double lb, double ub);
  int add_col(double lb, double ub, double obj);

  // v == 0 (or |v| <= kDropTolerance) erases the entry.
  void set_coef(int row, int col, double v);
  double coef(int row, int col) const;

  const std::vector<MatrixEntry>& row(int i) const { return rows_[i]; }
  const std::vector<MatrixEntry>& col(int j) const { return cols_[j]; }

  int num_rows() const { return active_rows_; }
  int num_cols() const { return active_cols_; }
  int row_limit() const { return static_cast<int>(rows_.size()); }
  int col_limit() const { return static_cast<int>(cols_.size()); }
  bool row_active(int i) const { return row_active_[i] != 0; }
  bool col_active(int j) const { return col_active_[j] != 0; }
  std::int64_t nnz() const { return nnz_; }

  double row_lower(int i) const { return row_lb_[i]; }
  double row_upper(int i) const { return row_ub_[i]; }
  double col_lower(int j) const { return col_lb_[j]; }
  double col_upper(int j) const { return col_ub_[j]; }
  double obj(int j) const { return obj_[j]; }
  double obj_offset() const { return obj_offset_; }

  void set_row_bounds(int i, double lb, double ub);
  void set_col_bounds(int j, double lb, double ub);
  void set_obj(int j, double v) { obj_[j] = v; }
  void set_obj_offset(double v) { obj_offset_ = v; }

  // Deletes column j at a fixed value: every row bound moves by a_ij * value
  // (infinite bounds stay infinite), the objective offset absorbs
  // obj_j * value, and the column entries are erased. Returns the rows that
  // held an entry.
  std::vector<int> remove_col_fixed(int j, double value);

  // Deletes column j without assigning a value. Used by substitutions, which
  // have already rewritten every row that mentioned the column.
  void remove_col(int j);

  // Deletes row i and its entries. Variable bounds are untouched.
  void remove_row(int i);

  // Renumbering produced by compact(): entry k holds the old index of the
  // item now living at index k.
  struct CompactMaps {
    std::vector<int> row_of;
    std::vector<int> col_of;
    int old_row_limit = 0;
    int old_col_limit = 0;
  };

  // Squeeze out tombstoned rows/columns, preserving relative order.
  CompactMaps compact();

  double objective_value(const std::vector<double>& x) const;

  bool operator==(const LPProblem&) const = default;

 private:
  std::vector<std::vector<MatrixEntry>> rows_;
  std::vector<std::vector<MatrixEntry>> cols_;
  std::vector<double> row_lb_, row_ub_;
  std::vector<double> col_lb_, col_ub_;
  std::vector<double> obj_;
  std::vector<char> row_active_, col_active_;
  int active_rows_ = 0;
  int active_cols_ = 0;
  std::int64_t nnz_ = 0;
  double obj_offset_ = 0.0;

  void check_row(int i) const;
  void check_col(int j) const;
};

// Largest violation of the problem's row activities and variable bounds at x;
// x is indexed by column slot. Used to check reconstructed solutions.
double max_violation(const LPProblem& lp, const std::vector<double>& x);

}  // namespace lpkit
