#pragma once

// Pricing layer turning raw work counters into the scalar cost the harness
// and the environment reward are built on. Work units are deterministic
// across machines; wall clock sits behind the same interface for timing
// studies.

namespace lpkit {

struct StepStats {
  long scanned = 0;      // presolver candidates examined
  long reductions = 0;   // transformation records applied
  long pivots = 0;       // simplex iterations
  int decisions = 0;     // policy invocations charged to this step
  double seconds = 0.0;  // wall clock of the work, used by kWallClock only

  StepStats& operator+=(const StepStats& o) {
    scanned += o.scanned;
    reductions += o.reductions;
    pivots += o.pivots;
    decisions += o.decisions;
    seconds += o.seconds;
    return *this;
  }
};

struct CostModel {
  enum class Kind { kWorkUnits, kWallClock };
  Kind kind = Kind::kWorkUnits;
  double scan_weight = 1.0;
  double apply_weight = 5.0;
  double pivot_weight = 200.0;
  double decision_cost = 50.0;  // per policy invocation
  double wall_scale = 1e6;      // seconds -> cost under kWallClock

  double presolve_cost(const StepStats& s) const {
    return s.scanned * scan_weight + s.reductions * apply_weight;
  }
  double solve_cost(const StepStats& s) const { return s.pivots * pivot_weight; }
  double decision_overhead(const StepStats& s) const { return s.decisions * decision_cost; }

  double total(const StepStats& s) const {
    if (kind == Kind::kWallClock) return s.seconds * wall_scale + decision_overhead(s);
    return presolve_cost(s) + solve_cost(s) + decision_overhead(s);
  }
};

}  // namespace lpkit
