#pragma once

#include <string>
#include <vector>

#include "lpkit/cost.hpp"
#include "lpkit/features.hpp"
#include "lpkit/lp.hpp"
#include "lpkit/presolve.hpp"

namespace lpkit {

// A decision: the presolver ids to run next, in order. Empty means stop
// presolving, solve, and end the episode.
using ActionSequence = std::vector<int>;

struct StepResult {
  std::vector<double> features;  // state after the step; final state when done
  double reward = 0.0;
  bool done = false;
};

// One collected sample: state seen, sequence chosen, its log-probability
// under the behavior policy, and the reward observed.
struct StepRecord {
  std::vector<double> state;
  ActionSequence action;
  double behavior_logprob = 0.0;
  double reward = 0.0;
  bool done = false;
};

// One JSON object per record, single line, for offline episode traces.
std::string to_jsonl(const StepRecord& r);

// Episode interface shared by the presolve environment and test doubles.
class Env {
 public:
  virtual ~Env() = default;
  virtual std::vector<double> reset() = 0;
  virtual StepResult step(const ActionSequence& action) = 0;
  virtual int feature_count() const = 0;
  // Ids the policy may emit; its alphabet is this list plus the end token.
  virtual const std::vector<int>& action_ids() const = 0;
};

struct EnvConfig {
  CostModel cost;
  int max_steps = 100;              // decisions per episode before a forced stop
  int max_apply = kMaxChainLength;  // applications per step before a forced stop
};

// One LP episode. Non-empty actions run presolvers and pay their work plus a
// per-decision constant; the empty action (or a cap hit, or detected
// infeasibility) ends the episode, paying the solve where one happens. With
// discount 1 the negative episode return equals the accounted total cost.
class PresolveEnv : public Env {
 public:
  explicit PresolveEnv(LPProblem lp, EnvConfig cfg = {});

  std::vector<double> reset() override;
  StepResult step(const ActionSequence& action) override;
  int feature_count() const override { return kFeatureCount; }
  const std::vector<int>& action_ids() const override;

  bool done() const { return done_; }
  int steps() const { return steps_; }
  // Meaningful once done: solver verdict (kInfeasible when presolve proved it).
  SolveStatus status() const { return status_; }
  double total_cost() const { return total_cost_; }
  const StepStats& totals() const { return totals_; }
  const LPProblem& problem() const { return lp_; }
  const PresolveStack& stack() const { return stack_; }
  // Original-space optimum, filled when the final solve reports optimal.
  const std::vector<double>& primal() const { return primal_; }
  double objective() const { return objective_; }

 private:
  StepResult finish(StepStats& stats, bool solve_now);

  LPProblem original_;
  EnvConfig cfg_;
  LPProblem lp_;
  PresolveStack stack_;
  FeatureTracker tracker_;
  bool active_ = false;
  bool done_ = true;
  int steps_ = 0;
  StepStats totals_;
  double total_cost_ = 0.0;
  SolveStatus status_ = SolveStatus::kIterationLimit;
  std::vector<double> primal_;
  double objective_ = 0.0;
};

}  // namespace lpkit
