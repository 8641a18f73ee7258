#pragma once

#include "lpkit/lp.hpp"

namespace lpkit {

struct SolverOptions {
  int max_iterations = 50000;
  // Entries smaller than this never pivot.
  double pivot_tolerance = 1e-9;
  // Bound/row violations below this count as feasible.
  double feasibility_tolerance = 1e-7;
  // Rebuild the basis inverse from scratch this often.
  int refactor_interval = 64;
};

struct SolveReport {
  Solution solution;
  int iterations = 0;
  double elapsed_seconds = 0.0;
};

// Bounded-variable primal simplex over the active rows/columns of lp.
// Phase 1 drives a composite infeasibility sum to zero, phase 2 optimizes.
// Entering variable: steepest reduced cost, switching permanently to Bland's
// lowest-index rule after a long degenerate streak; ties break towards the
// lowest variable index, so runs are deterministic and cycling is ruled out.
//
// solution.primal is indexed by column slot; tombstoned slots hold 0.
Solution solve(const LPProblem& lp, const SolverOptions& opts = {});
SolveReport solve_report(const LPProblem& lp, const SolverOptions& opts = {});

}  // namespace lpkit
