#include "lpkit/simplex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

namespace lpkit {

namespace {

enum class VarState : char { kBasic, kAtLower, kAtUpper, kFreeNb };

// Bounded-variable primal simplex working on a compacted copy of the active
// part of the problem. Variables 0..n-1 are structural, n..n+m-1 are row
// logicals (row activity r_i minus logical i equals zero, logical bounds are
// the row bounds). The basis inverse is kept dense and updated per pivot,
// with periodic refactorization.
class Simplex {
 public:
  Simplex(const LPProblem& lp, const SolverOptions& opts) : lp_(lp), opts_(opts) {
    for (int j = 0; j < lp.col_limit(); ++j)
      if (lp.col_active(j)) cols_.push_back(j);
    for (int i = 0; i < lp.row_limit(); ++i)
      if (lp.row_active(i)) rows_.push_back(i);
    n_ = static_cast<int>(cols_.size());
    m_ = static_cast<int>(rows_.size());
    nt_ = n_ + m_;

    std::vector<int> row_local(lp.row_limit(), -1);
    for (int r = 0; r < m_; ++r) row_local[rows_[r]] = r;

    mat_.resize(n_);
    lb_.resize(nt_);
    ub_.resize(nt_);
    cost_.assign(nt_, 0.0);
    for (int k = 0; k < n_; ++k) {
      int j = cols_[k];
      for (const MatrixEntry& e : lp.col(j)) mat_[k].push_back({row_local[e.index], e.value});
      lb_[k] = lp.col_lower(j);
      ub_[k] = lp.col_upper(j);
      cost_[k] = lp.obj(j);
    }
    for (int r = 0; r < m_; ++r) {
      lb_[n_ + r] = lp.row_lower(rows_[r]);
      ub_[n_ + r] = lp.row_upper(rows_[r]);
    }
  }

  Solution run(int* iterations_out) {
    init_basis();
    Solution sol;
    sol.status = iterate();
    if (iterations_out) *iterations_out = iterations_;
    sol.primal.assign(lp_.col_limit(), 0.0);
    if (sol.status == SolveStatus::kOptimal) {
      for (int k = 0; k < n_; ++k) sol.primal[cols_[k]] = val_[k];
      double obj = lp_.obj_offset();
      for (int k = 0; k < n_; ++k) obj += cost_[k] * val_[k];
      sol.objective = obj;
    }
    return sol;
  }

 private:
  const LPProblem& lp_;
  SolverOptions opts_;
  std::vector<int> cols_, rows_;
  int n_ = 0, m_ = 0, nt_ = 0;
  std::vector<std::vector<MatrixEntry>> mat_;  // structural columns, local row ids
  std::vector<double> lb_, ub_, cost_;

  std::vector<int> basis_;
  std::vector<VarState> state_;
  std::vector<double> val_;
  std::vector<double> binv_;  // row pos*m_+r holds B^{-1}(pos, r)
  std::vector<double> ph_cost_;
  int iterations_ = 0;
  int since_refactor_ = 0;
  int degenerate_streak_ = 0;
  bool bland_mode_ = false;

  double at(const std::vector<double>& m, int pos, int r) const { return m[pos * m_ + r]; }

  void init_basis() {
    basis_.resize(m_);
    state_.assign(nt_, VarState::kAtLower);
    val_.assign(nt_, 0.0);
    for (int k = 0; k < n_; ++k) {
      if (is_finite(lb_[k]) && is_finite(ub_[k])) {
        if (std::abs(lb_[k]) <= std::abs(ub_[k])) { state_[k] = VarState::kAtLower; val_[k] = lb_[k]; }
        else { state_[k] = VarState::kAtUpper; val_[k] = ub_[k]; }
      } else if (is_finite(lb_[k])) {
        state_[k] = VarState::kAtLower;
        val_[k] = lb_[k];
      } else if (is_finite(ub_[k])) {
        state_[k] = VarState::kAtUpper;
        val_[k] = ub_[k];
      } else {
        state_[k] = VarState::kFreeNb;
        val_[k] = 0.0;
      }
    }
    for (int r = 0; r < m_; ++r) {
      basis_[r] = n_ + r;
      state_[n_ + r] = VarState::kBasic;
    }
    refactor();
    compute_basics();
  }

  // Dense Gauss-Jordan inverse of the basis matrix.
  bool refactor() {
    since_refactor_ = 0;
    if (m_ == 0) return true;
    std::vector<double> aug(static_cast<std::size_t>(m_) * 2 * m_, 0.0);
    auto a = [&](int i, int j) -> double& { return aug[static_cast<std::size_t>(i) * 2 * m_ + j]; };
    for (int pos = 0; pos < m_; ++pos) {
      int k = basis_[pos];
      if (k < n_) {
        for (const MatrixEntry& e : mat_[k]) a(e.index, pos) = e.value;
      } else {
        a(k - n_, pos) = -1.0;
      }
    }
    for (int i = 0; i < m_; ++i) a(i, m_ + i) = 1.0;
    for (int col = 0; col < m_; ++col) {
      int piv = col;
      for (int i = col + 1; i < m_; ++i)
        if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
      if (std::abs(a(piv, col)) < 1e-12) return false;
      if (piv != col)
        for (int j = 0; j < 2 * m_; ++j) std::swap(a(col, j), a(piv, j));
      double inv = 1.0 / a(col, col);
      for (int j = 0; j < 2 * m_; ++j) a(col, j) *= inv;
      for (int i = 0; i < m_; ++i) {
        if (i == col) continue;
        double f = a(i, col);
        if (f == 0.0) continue;
        for (int j = 0; j < 2 * m_; ++j) a(i, j) -= f * a(col, j);
      }
    }
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int pos = 0; pos < m_; ++pos)
      for (int r = 0; r < m_; ++r) binv_[pos * m_ + r] = a(pos, m_ + r);
    return true;
  }

  void compute_basics() {
    if (m_ == 0) return;
    std::vector<double> rhs(m_, 0.0);
    for (int k = 0; k < nt_; ++k) {
      if (state_[k] == VarState::kBasic || val_[k] == 0.0) continue;
      if (k < n_) {
        for (const MatrixEntry& e : mat_[k]) rhs[e.index] -= e.value * val_[k];
      } else {
        rhs[k - n_] += val_[k];
      }
    }
    for (int pos = 0; pos < m_; ++pos) {
      double v = 0.0;
      for (int r = 0; r < m_; ++r) v += binv_[pos * m_ + r] * rhs[r];
      val_[basis_[pos]] = v;
    }
  }

  // Column of the current tableau for variable k.
  void ftran(int k, std::vector<double>& alpha) const {
    alpha.assign(m_, 0.0);
    if (k < n_) {
      for (const MatrixEntry& e : mat_[k])
        for (int pos = 0; pos < m_; ++pos) alpha[pos] += binv_[pos * m_ + e.index] * e.value;
    } else {
      int r = k - n_;
      for (int pos = 0; pos < m_; ++pos) alpha[pos] -= binv_[pos * m_ + r];
    }
  }

  double infeasibility() const {
    double f = 0.0;
    for (int pos = 0; pos < m_; ++pos) {
      int k = basis_[pos];
      if (is_finite(lb_[k])) f += std::max(0.0, lb_[k] - val_[k]);
      if (is_finite(ub_[k])) f += std::max(0.0, val_[k] - ub_[k]);
    }
    return f;
  }

  // Phase 1 cost: slope of the infeasibility sum for each basic variable.
  void phase1_cost() {
    ph_cost_.assign(nt_, 0.0);
    double ftol = opts_.feasibility_tolerance;
    for (int pos = 0; pos < m_; ++pos) {
      int k = basis_[pos];
      if (is_finite(lb_[k]) && val_[k] < lb_[k] - ftol) ph_cost_[k] = -1.0;
      else if (is_finite(ub_[k]) && val_[k] > ub_[k] + ftol) ph_cost_[k] = 1.0;
    }
  }

  SolveStatus iterate() {
    const double ftol = opts_.feasibility_tolerance;
    const double dtol = 1e-9;
    const double ptol = opts_.pivot_tolerance;
    std::vector<double> y(m_), alpha(m_);
    int phase = 1;

    while (true) {
      if (iterations_ >= opts_.max_iterations) return SolveStatus::kIterationLimit;

      const std::vector<double>* cost = &cost_;
      if (phase == 1) {
        if (infeasibility() <= ftol) {
          phase = 2;
          refactor();
          compute_basics();
          continue;
        }
        phase1_cost();
        cost = &ph_cost_;
      }

      // Pricing: y = c_B^T B^{-1}.
      for (int r = 0; r < m_; ++r) {
        double v = 0.0;
        for (int pos = 0; pos < m_; ++pos) v += (*cost)[basis_[pos]] * binv_[pos * m_ + r];
        y[r] = v;
      }

      // Entering variable. Steepest reduced cost (ties to the lowest index)
      // until a long degenerate streak flips the solver into Bland's
      // lowest-index rule, whose termination guarantee then applies.
      int enter = -1, dir = 0;
      double best_score = dtol;
      for (int k = 0; k < nt_; ++k) {
        if (state_[k] == VarState::kBasic) continue;
        if (lb_[k] == ub_[k]) continue;  // fixed, never enters
        double d = (*cost)[k];
        if (k < n_) {
          for (const MatrixEntry& e : mat_[k]) d -= y[e.index] * e.value;
        } else {
          d += y[k - n_];
        }
        int k_dir = 0;
        if ((state_[k] == VarState::kAtLower || state_[k] == VarState::kFreeNb) && d < -dtol)
          k_dir = 1;
        else if ((state_[k] == VarState::kAtUpper || state_[k] == VarState::kFreeNb) && d > dtol)
          k_dir = -1;
        if (k_dir == 0) continue;
        if (bland_mode_) {
          enter = k;
          dir = k_dir;
          break;
        }
        if (std::abs(d) > best_score) {
          best_score = std::abs(d);
          enter = k;
          dir = k_dir;
        }
      }

      if (enter < 0) {
        if (phase == 1) return SolveStatus::kInfeasible;
        return SolveStatus::kOptimal;
      }

      ftran(enter, alpha);

      // Ratio test. The entering variable's own span is a bound-flip
      // candidate; in phase 1 an infeasible basic blocks at the bound it is
      // violating (where the cost slope changes).
      double best_t = kInfinity;
      int block_pos = -2;  // -1 means bound flip
      int block_var = nt_;
      if (is_finite(lb_[enter]) && is_finite(ub_[enter])) {
        best_t = ub_[enter] - lb_[enter];
        block_pos = -1;
        block_var = enter;
      }
      char block_side = 0;
      for (int pos = 0; pos < m_; ++pos) {
        if (std::abs(alpha[pos]) <= ptol) continue;
        int k = basis_[pos];
        double delta = -dir * alpha[pos];
        double t = kInfinity;
        char side = 0;
        bool below = is_finite(lb_[k]) && val_[k] < lb_[k] - ftol;
        bool above = is_finite(ub_[k]) && val_[k] > ub_[k] + ftol;
        if (phase == 1 && below) {
          if (delta > 0) { t = (lb_[k] - val_[k]) / delta; side = 'l'; }
        } else if (phase == 1 && above) {
          if (delta < 0) { t = (val_[k] - ub_[k]) / (-delta); side = 'u'; }
        } else if (delta > 0) {
          if (is_finite(ub_[k])) { t = (ub_[k] - val_[k]) / delta; side = 'u'; }
        } else {
          if (is_finite(lb_[k])) { t = (val_[k] - lb_[k]) / (-delta); side = 'l'; }
        }
        if (t == kInfinity) continue;
        t = std::max(t, 0.0);
        double tie = 1e-9 * (1.0 + std::abs(best_t));
        if (t < best_t - tie || (t <= best_t + tie && k < block_var)) {
          best_t = t;
          block_pos = pos;
          block_var = k;
          block_side = side;
        }
      }

      if (best_t == kInfinity) {
        if (phase == 2) return SolveStatus::kUnbounded;
        return SolveStatus::kIterationLimit;  // cannot happen with exact data
      }

      // Move.
      if (best_t <= 1e-12) {
        if (++degenerate_streak_ >= 100) bland_mode_ = true;
      } else {
        degenerate_streak_ = 0;
      }
      val_[enter] += dir * best_t;
      for (int pos = 0; pos < m_; ++pos) val_[basis_[pos]] -= dir * best_t * alpha[pos];

      if (block_pos == -1) {
        state_[enter] = dir > 0 ? VarState::kAtUpper : VarState::kAtLower;
        val_[enter] = dir > 0 ? ub_[enter] : lb_[enter];
      } else {
        int out = basis_[block_pos];
        state_[out] = block_side == 'u' ? VarState::kAtUpper : VarState::kAtLower;
        val_[out] = block_side == 'u' ? ub_[out] : lb_[out];
        basis_[block_pos] = enter;
        state_[enter] = VarState::kBasic;
        double piv = alpha[block_pos];
        for (int r = 0; r < m_; ++r) binv_[block_pos * m_ + r] /= piv;
        for (int pos = 0; pos < m_; ++pos) {
          if (pos == block_pos || alpha[pos] == 0.0) continue;
          double f = alpha[pos];
          for (int r = 0; r < m_; ++r) binv_[pos * m_ + r] -= f * binv_[block_pos * m_ + r];
        }
        if (++since_refactor_ >= opts_.refactor_interval) {
          refactor();
          compute_basics();
        }
      }
      ++iterations_;
    }
  }
};

}  // namespace

Solution solve(const LPProblem& lp, const SolverOptions& opts) {
  Simplex s(lp, opts);
  return s.run(nullptr);
}

SolveReport solve_report(const LPProblem& lp, const SolverOptions& opts) {
  auto start = std::chrono::steady_clock::now();
  SolveReport rep;
  Simplex s(lp, opts);
  rep.solution = s.run(&rep.iterations);
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace lpkit
