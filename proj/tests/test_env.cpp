#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include <json.hpp>

#include "lpkit/env.hpp"
#include "lpkit/rng.hpp"
#include "lpkit/simplex.hpp"
#include "support/random_lp.hpp"
#include "support/toy_env.hpp"

using namespace lpkit;
using lpkit::testing::random_lp;
using lpkit::testing::RandomLpOptions;
using lpkit::testing::structured_lp;
using lpkit::testing::ToyEnv;

namespace {

LPProblem small_box_lp() {
  LPProblem lp;
  for (int j = 0; j < 3; ++j) lp.add_col(0.0, 5.0, 1.0 + j);
  int r = lp.add_row(1.0, 4.0);
  lp.set_coef(r, 0, 1.0);
  lp.set_coef(r, 1, 1.0);
  lp.set_coef(r, 2, 1.0);
  return lp;
}

}  // namespace

TEST_CASE("reset returns raw-problem features with zeroed history") {
  Rng rng(81);
  LPProblem lp = structured_lp(rng);
  PresolveEnv env(lp);
  std::vector<double> s0 = env.reset();
  REQUIRE(s0.size() == static_cast<std::size_t>(kFeatureCount));

  FeatureTracker fresh;
  fresh.reset(lp);
  CHECK(s0 == fresh.extract(lp));
  for (int k = kHistoryOffset; k < kFeatureCount; ++k) CHECK(s0[k] == 0.0);

  std::vector<double> again = env.reset();
  CHECK(again == s0);
  CHECK(env.action_ids().size() == kSupportedPresolvers.size());
}

TEST_CASE("empty action solves immediately and pays solve plus decision cost") {
  LPProblem lp = small_box_lp();
  EnvConfig cfg;
  PresolveEnv env(lp, cfg);
  env.reset();
  StepResult r = env.step({});
  CHECK(r.done);
  CHECK(env.status() == SolveStatus::kOptimal);

  SolveReport direct = solve_report(lp);
  double want = direct.iterations * cfg.cost.pivot_weight + cfg.cost.decision_cost;
  CHECK(r.reward == -want);

  // With the decision constant zeroed the reward is the bare solve cost.
  EnvConfig bare = cfg;
  bare.cost.decision_cost = 0.0;
  PresolveEnv env2(lp, bare);
  env2.reset();
  StepResult r2 = env2.step({});
  CHECK(r2.reward == -(direct.iterations * bare.cost.pivot_weight));
}

TEST_CASE("a no-op pass moves only its action counter and pays its scan") {
  LPProblem lp = small_box_lp();  // nothing is fixed, pass 0 cannot fire
  PresolveEnv env(lp);
  std::vector<double> s0 = env.reset();
  StepResult r = env.step({0});
  CHECK_FALSE(r.done);
  for (int k = 0; k < kBaseFeatureCount; ++k) CHECK(r.features[k] == s0[k]);
  for (int k = kHistoryOffset; k < kActionCountOffset; ++k) CHECK(r.features[k] == 0.0);
  CHECK(r.features[kActionCountOffset + 0] == 1.0);

  EnvConfig cfg;
  double want = 3.0 * cfg.cost.scan_weight + cfg.cost.decision_cost;
  CHECK(r.reward == -want);
}

TEST_CASE("negative episode return equals the accounted total cost exactly") {
  Rng rng(82);
  std::vector<ActionSequence> script = {{1}, {7, 0}, {13, 10, 1}, {2, 4}, {}};
  for (int trial = 0; trial < 30; ++trial) {
    LPProblem lp = structured_lp(rng);
    PresolveEnv env(lp);
    env.reset();
    double ret = 0.0;
    for (const ActionSequence& a : script) {
      StepResult r = env.step(a);
      ret += r.reward;
      if (r.done) break;
    }
    CHECK(env.done());
    CHECK(-ret == env.total_cost());

    // Reprice the accumulated counters; integer-weighted sums are exact.
    const StepStats& t = env.totals();
    EnvConfig cfg;
    double repriced = t.scanned * cfg.cost.scan_weight +
                      t.reductions * cfg.cost.apply_weight +
                      t.pivots * cfg.cost.pivot_weight +
                      t.decisions * cfg.cost.decision_cost;
    CHECK(repriced == env.total_cost());
    CHECK(t.decisions == env.steps());
  }
}

TEST_CASE("episodes are deterministic under work units") {
  Rng rng(83);
  LPProblem lp = structured_lp(rng);
  std::vector<ActionSequence> script = {{1, 7}, {0, 13}, {}};
  PresolveEnv env(lp);

  std::vector<double> rewards1, rewards2;
  std::vector<double> final1, final2;
  env.reset();
  for (const ActionSequence& a : script) {
    StepResult r = env.step(a);
    rewards1.push_back(r.reward);
    if (r.done) final1 = r.features;
  }
  env.reset();
  for (const ActionSequence& a : script) {
    StepResult r = env.step(a);
    rewards2.push_back(r.reward);
    if (r.done) final2 = r.features;
  }
  CHECK(rewards1 == rewards2);
  CHECK(final1 == final2);
}

TEST_CASE("infeasibility detected mid-sequence ends the episode") {
  LPProblem lp;
  lp.add_col(0.0, 1.0, 1.0);
  lp.add_col(0.0, 1.0, 1.0);
  int r = lp.add_row(10.0, 11.0);  // activity tops out at 2
  lp.set_coef(r, 0, 1.0);
  lp.set_coef(r, 1, 1.0);

  PresolveEnv env(lp);
  env.reset();
  StepResult out = env.step({1, 7, 0});
  CHECK(out.done);
  CHECK(env.status() == SolveStatus::kInfeasible);
  CHECK(out.reward < 0.0);  // the work done up to detection is still paid
  CHECK(solve(lp).status == SolveStatus::kInfeasible);
  CHECK_THROWS_AS(env.step({}), std::logic_error);
}

TEST_CASE("the step cap forces termination with a solve") {
  Rng rng(84);
  LPProblem lp = structured_lp(rng);
  EnvConfig cfg;
  cfg.max_steps = 5;
  PresolveEnv env(lp, cfg);
  env.reset();
  StepResult r;
  int steps = 0;
  do {
    r = env.step({1});  // a policy that never chooses to stop
    ++steps;
  } while (!r.done);
  CHECK(steps == cfg.max_steps);
  CHECK(env.steps() == cfg.max_steps);
  CHECK(env.status() == SolveStatus::kOptimal);
}

TEST_CASE("an oversized sequence is truncated and forces termination") {
  Rng rng(85);
  LPProblem lp = structured_lp(rng);
  EnvConfig cfg;
  cfg.max_apply = 6;
  PresolveEnv env(lp, cfg);
  env.reset();
  ActionSequence too_long(cfg.max_apply + 3, 1);
  StepResult r = env.step(too_long);
  CHECK(r.done);
  double executed = 0.0;
  for (int k = kActionCountOffset; k < kFeatureCount; ++k) executed += r.features[k];
  CHECK(executed == static_cast<double>(cfg.max_apply));
}

TEST_CASE("a solved episode postsolves to a feasible original-space optimum") {
  Rng rng(86);
  int solved = 0;
  for (int trial = 0; trial < 25; ++trial) {
    LPProblem lp = structured_lp(rng);
    Solution direct = solve(lp);
    PresolveEnv env(lp);
    env.reset();
    env.step({1, 7, 0, 13});
    StepResult r = env.step({10, 2, 4});
    if (!r.done) r = env.step({});
    REQUIRE(r.done);
    REQUIRE(env.status() == direct.status);
    if (direct.status != SolveStatus::kOptimal) continue;
    ++solved;
    double scale = 1.0 + std::max(std::abs(direct.objective), std::abs(env.objective()));
    CHECK(std::abs(env.objective() - direct.objective) <= 1e-6 * scale);
    const std::vector<double>& x = env.primal();
    REQUIRE(x.size() == static_cast<std::size_t>(lp.col_limit()));
    for (int j = 0; j < lp.col_limit(); ++j) {
      CHECK(x[j] >= lp.col_lower(j) - 1e-6);
      CHECK(x[j] <= lp.col_upper(j) + 1e-6);
    }
    for (int i = 0; i < lp.row_limit(); ++i) {
      double act = 0.0;
      for (const MatrixEntry& e : lp.row(i)) act += e.value * x[e.index];
      if (is_finite(lp.row_lower(i))) CHECK(act >= lp.row_lower(i) - 1e-6);
      if (is_finite(lp.row_upper(i))) CHECK(act <= lp.row_upper(i) + 1e-6);
    }
  }
  CHECK(solved > 0);
}

TEST_CASE("step records serialize to one-line json and read back") {
  StepRecord rec;
  rec.state = {0.5, 0.0, 1.0};
  rec.action = {1, 7};
  rec.behavior_logprob = -0.25;
  rec.reward = -56.0;
  rec.done = false;
  std::string line = to_jsonl(rec);
  CHECK(line.find('\n') == std::string::npos);
  nlohmann::json j = nlohmann::json::parse(line);
  CHECK(j["state"].get<std::vector<double>>() == rec.state);
  CHECK(j["action"].get<std::vector<int>>() == rec.action);
  CHECK(j["behavior_logprob"].get<double>() == rec.behavior_logprob);
  CHECK(j["reward"].get<double>() == rec.reward);
  CHECK(j["done"].get<bool>() == rec.done);
}

TEST_CASE("the toy episode pays 2 for the smart play and 5 for stopping cold") {
  ToyEnv env;
  env.reset();
  StepResult a = env.step({0});
  CHECK_FALSE(a.done);
  CHECK(a.reward == -1.0);
  StepResult b = env.step({});
  CHECK(b.done);
  CHECK(b.reward == -1.0);

  env.reset();
  StepResult cold = env.step({});
  CHECK(cold.done);
  CHECK(cold.reward == -5.0);

  env.reset();
  StepResult wasteful = env.step({0, 0, 0});
  CHECK(wasteful.reward == -3.0);
  CHECK(env.step({}).reward == -1.0);
  CHECK_THROWS_AS(env.step({}), std::logic_error);
}
