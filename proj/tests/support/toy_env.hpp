#pragma once

#include <stdexcept>
#include <vector>

#include "lpkit/env.hpp"

namespace lpkit::testing {

// Two-armed episode shaped like presolving: the single available presolver
// costs 1 per application and cuts the final solve cost from 5 to 1; the
// empty action solves and ends. Best play is one application, then stop,
// for a return of -2 against -5 for stopping immediately.
class ToyEnv : public lpkit::Env {
 public:
  std::vector<double> reset() override {
    active_ = true;
    improved_ = false;
    steps_ = 0;
    return state();
  }

  lpkit::StepResult step(const lpkit::ActionSequence& action) override {
    if (!active_) throw std::logic_error("step called on a finished episode");
    ++steps_;
    double work = static_cast<double>(action.size());
    if (action.empty() || steps_ >= kMaxSteps) {
      active_ = false;
      double solve_cost = improved_ ? 1.0 : 5.0;
      return {state(), -(work + solve_cost), true};
    }
    improved_ = true;
    return {state(), -work, false};
  }

  int feature_count() const override { return 3; }
  const std::vector<int>& action_ids() const override {
    static const std::vector<int> ids = {0};
    return ids;
  }

 private:
  static constexpr int kMaxSteps = 8;

  std::vector<double> state() const {
    return {1.0, improved_ ? 1.0 : 0.0,
            static_cast<double>(steps_) / kMaxSteps};
  }

  bool active_ = false;
  bool improved_ = false;
  int steps_ = 0;
};

}  // namespace lpkit::testing
