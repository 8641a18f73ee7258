#include "lpkit/env.hpp"

#include <chrono>
#include <stdexcept>

#include <json.hpp>

#include "lpkit/simplex.hpp"

namespace lpkit {

namespace {

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string to_jsonl(const StepRecord& r) {
  nlohmann::json j;
  j["state"] = r.state;
  j["action"] = r.action;
  j["behavior_logprob"] = r.behavior_logprob;
  j["reward"] = r.reward;
  j["done"] = r.done;
  return j.dump();
}

PresolveEnv::PresolveEnv(LPProblem lp, EnvConfig cfg)
    : original_(std::move(lp)), cfg_(cfg) {
  if (cfg_.max_steps < 1) throw std::invalid_argument("max_steps must be positive");
  if (cfg_.max_apply < 1) throw std::invalid_argument("max_apply must be positive");
}

const std::vector<int>& PresolveEnv::action_ids() const {
  static const std::vector<int> ids(kSupportedPresolvers.begin(),
                                    kSupportedPresolvers.end());
  return ids;
}

std::vector<double> PresolveEnv::reset() {
  lp_ = original_;
  stack_ = PresolveStack();
  tracker_.reset(lp_);
  active_ = true;
  done_ = false;
  steps_ = 0;
  totals_ = StepStats();
  total_cost_ = 0.0;
  status_ = SolveStatus::kIterationLimit;
  primal_.clear();
  objective_ = 0.0;
  return tracker_.extract(lp_);
}

// Close the episode: optionally run the solver, then price the step.
StepResult PresolveEnv::finish(StepStats& stats, bool solve_now) {
  if (solve_now) {
    SolveReport report = solve_report(lp_);
    stats.pivots += report.iterations;
    stats.seconds += report.elapsed_seconds;
    status_ = report.solution.status;
    if (status_ == SolveStatus::kOptimal) {
      primal_ = stack_.postsolve(report.solution.primal);
      objective_ = original_.objective_value(primal_);
    }
  }
  done_ = true;
  active_ = false;
  totals_ += stats;
  double cost = cfg_.cost.total(stats);
  total_cost_ += cost;
  return {tracker_.extract(lp_), -cost, true};
}

StepResult PresolveEnv::step(const ActionSequence& action) {
  if (!active_ || done_) throw std::logic_error("step called on a finished episode");
  ++steps_;
  StepStats stats;
  stats.decisions = 1;

  if (action.empty()) return finish(stats, /*solve_now=*/true);

  auto t0 = std::chrono::steady_clock::now();
  int applied = 0;
  bool infeasible = false;
  for (int id : action) {
    if (applied == cfg_.max_apply) break;
    ApplyOutcome out = apply_presolver(lp_, id, stack_);
    ++applied;
    tracker_.record({id});
    stats.scanned += out.scanned;
    stats.reductions += out.reductions;
    if (out.infeasible) {
      infeasible = true;
      break;
    }
  }
  stats.seconds = elapsed_since(t0);

  if (infeasible) {
    status_ = SolveStatus::kInfeasible;
    return finish(stats, /*solve_now=*/false);
  }
  // Oversized sequences and the episode step cap force the terminal solve.
  if (static_cast<int>(action.size()) > cfg_.max_apply || steps_ >= cfg_.max_steps)
    return finish(stats, /*solve_now=*/true);

  totals_ += stats;
  double cost = cfg_.cost.total(stats);
  total_cost_ += cost;
  return {tracker_.extract(lp_), -cost, false};
}

}  // namespace lpkit
