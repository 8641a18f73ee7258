#include "lpkit/features.hpp"

#include <algorithm>
#include <cmath>

#include "lpkit/analysis.hpp"

namespace lpkit {

namespace {

constexpr double kTol = 1e-9;       // relative comparison tolerance
constexpr double kMinPivot = 1e-7;  // smallest coefficient treated as usable

// True when some column of this equality row is freed by the row alone,
// the candidate test of the substitution pass.
bool row_implies_free_col(const LPProblem& lp, int row) {
  const std::vector<MatrixEntry>& entries = lp.row(row);
  if (entries.size() < 2) return false;
  ActivityBounds act = row_activity(lp, row);
  for (const MatrixEntry& e : entries) {
    if (std::abs(e.value) < kMinPivot) continue;
    double clb = lp.col_lower(e.index), cub = lp.col_upper(e.index);
    ActivityBounds resid = act;
    resid.remove_term(e.value, clb, cub);
    Interval iv = implied_col_interval(lp, row, e.value, resid);
    double tol = kTol * (1.0 + std::max(std::abs(iv.lb), std::abs(iv.ub)));
    if (implies_free(iv, clb, cub, tol)) return true;
  }
  return false;
}

double norm(double v, double denom) { return v / std::max(1.0, denom); }

}  // namespace

std::array<double, kBaseFeatureCount> base_features(const LPProblem& lp) {
  int num_eq = 0, num_ineq = 0, implied_free_rows = 0;
  std::array<int, 4> eq_degree{}, ineq_degree{};
  // forcing-at-min, forcing-at-max, redundant, near-redundant
  std::array<int, 4> row_class{};
  for (int i = 0; i < lp.row_limit(); ++i) {
    if (!lp.row_active(i)) continue;
    bool eq = is_equality_row(lp, i);
    (eq ? num_eq : num_ineq) += 1;
    int deg = static_cast<int>(lp.row(i).size());
    if (deg >= 1 && deg <= 4) (eq ? eq_degree : ineq_degree)[deg - 1] += 1;
    if (eq && row_implies_free_col(lp, i)) ++implied_free_rows;
    switch (classify_row(lp, i)) {
      case RowClass::kForcingAtMin: ++row_class[0]; break;
      case RowClass::kForcingAtMax: ++row_class[1]; break;
      case RowClass::kRedundant: ++row_class[2]; break;
      case RowClass::kNearRedundant: ++row_class[3]; break;
      default: break;
    }
  }
  // Zero-cost columns that one bound-moving pass could pin to a finite bound.
  int tighten = 0;
  for (int j = 0; j < lp.col_limit(); ++j) {
    if (!lp.col_active(j)) continue;
    if (std::abs(lp.obj(j)) > kDropTolerance) continue;
    if ((is_finite(lp.col_lower(j)) && col_down_safe(lp, j)) ||
        (is_finite(lp.col_upper(j)) && col_up_safe(lp, j)))
      ++tighten;
  }

  int rows = lp.num_rows(), cols = lp.num_cols();
  std::array<double, kBaseFeatureCount> f{};
  for (int k = 0; k < 4; ++k) {
    f[k] = norm(eq_degree[k], num_eq);
    f[5 + k] = norm(ineq_degree[k], num_ineq);
    f[13 + k] = norm(row_class[k], rows);
  }
  f[4] = norm(implied_free_rows, num_eq);
  f[9] = norm(tighten, cols);
  f[10] = norm(num_eq, rows);
  f[11] = norm(num_ineq, rows);
  f[12] = norm(cols, rows);
  f[17] = norm(static_cast<double>(lp.nnz()), static_cast<double>(rows) * cols);
  return f;
}

void FeatureTracker::reset(const LPProblem& lp) {
  initial_ = base_features(lp);
  executed_.fill(0.0);
}

void FeatureTracker::record(const std::vector<int>& ids) {
  for (int id : ids)
    if (id >= 0 && id < kActionSlots) executed_[id] += 1.0;
}

std::vector<double> FeatureTracker::extract(const LPProblem& lp) const {
  std::array<double, kBaseFeatureCount> now = base_features(lp);
  std::vector<double> out(kFeatureCount, 0.0);
  std::copy(now.begin(), now.end(), out.begin());
  for (int k = 0; k < kBaseFeatureCount; ++k)
    out[kHistoryOffset + k] = initial_[k] - now[k];
  for (int k = 0; k < kActionSlots; ++k) out[kActionCountOffset + k] = executed_[k];
  return out;
}

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = [] {
    std::array<std::string, kFeatureCount> n;
    const char* base[kBaseFeatureCount] = {
        "eq_degree_1",    "eq_degree_2",    "eq_degree_3",  "eq_degree_4",
        "eq_implied_free", "ineq_degree_1", "ineq_degree_2", "ineq_degree_3",
        "ineq_degree_4",  "tighten_candidates", "eq_share", "ineq_share",
        "var_share",      "forcing_at_min", "forcing_at_max", "redundant",
        "near_redundant", "density"};
    for (int k = 0; k < kBaseFeatureCount; ++k) n[k] = base[k];
    for (int k = 0; k < kBaseFeatureCount; ++k)
      n[kHistoryOffset + k] = std::string("delta_") + base[k];
    for (int k = 0; k < kActionSlots; ++k)
      n[kActionCountOffset + k] = "count_presolver_" + std::to_string(k);
    return n;
  }();
  return names;
}

}  // namespace lpkit
