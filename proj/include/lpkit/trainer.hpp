#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpkit/env.hpp"
#include "lpkit/policy.hpp"
#include "lpkit/tinynn.hpp"

namespace lpkit {

struct TrainerConfig {
  double lr_actor = 1e-4;
  double lr_critic = 1e-4;
  double gamma = 1.0;
  int epochs_per_iter = 12;   // ascent epochs per collected buffer
  int samples_per_iter = 16;  // step records gathered per iteration
  int minibatch = 16;
  double entropy_coef = 1e-2;
  double clip_eps = 0.2;  // not given by the source tables; PPO's usual value
  int workers = 4;
  int total_iters = 100;
  int lr_half_every = 1000;
  int validate_every = 10;
  std::uint64_t seed = 0;
  std::vector<int> hidden = {64, 64};
};

void to_json(nlohmann::json& j, const TrainerConfig& c);
void from_json(const nlohmann::json& j, TrainerConfig& c);

// Stepped halving schedule: base * 0.5^floor(iter / half_every).
double lr_at(double base, int iter, int half_every);

// Builds one fresh episode for a given episode index; must be deterministic
// in the index. Called serially; the episodes themselves run concurrently.
using EnvFactory = std::function<std::unique_ptr<Env>(int index)>;

struct BufferEntry {
  StepRecord record;
  double ret = 0.0;  // discounted suffix sum of raw rewards (return-to-go)
};

struct TrajectoryBuffer {
  std::vector<BufferEntry> entries;
  std::vector<int> action_ids;  // alphabet shared by every episode
  long forward_passes = 0;      // actor inferences spent collecting
  long env_steps = 0;
  long presolvers_executed = 0;
  int episodes = 0;
};

// Runs whole episodes against an immutable actor snapshot until at least
// cfg.samples_per_iter records exist. Episodes are dealt to cfg.workers
// threads in waves and appended in episode-index order, so the result is
// bit-identical across runs and thread schedules. stream_base separates the
// RNG streams of different iterations.
TrajectoryBuffer collect(const MLP& actor, const RunningNormalizer& state_norm,
                         const EnvFactory& envs, const TrainerConfig& cfg,
                         std::uint64_t stream_base);

// Clipped-objective contribution with the three-case rule: clamp to
// (1+eps)*adv when adv > 0 and the ratio has risen past 1+eps, clamp to
// (1-eps)*adv when adv < 0 and the ratio has fallen past 1-eps, otherwise
// ratio*adv. *clamped reports the zero-gradient regimes.
double ppo_term(double new_logprob, double old_logprob, double advantage,
                double eps, bool* clamped = nullptr);

struct UpdateMetrics {
  double mean_return = 0.0;
  double mean_ratio = 0.0;
  double clip_fraction = 0.0;
  double actor_objective = 0.0;  // mean clipped term, pre-entropy
  double critic_loss = 0.0;
  double entropy = 0.0;
};

// One PPO iteration over a collected buffer: epochs_per_iter passes of
// minibatch ascent on the clipped objective plus entropy bonus, and descent
// on the squared critic error. Normalizers must be the same frozen snapshots
// used during collection. iter selects the learning-rate step.
UpdateMetrics update(const TrajectoryBuffer& buffer, MLP& actor, Adam& actor_opt,
                     MLP& critic, Adam& critic_opt,
                     const RunningNormalizer& state_norm,
                     const RunningNormalizer& return_norm, const TrainerConfig& cfg,
                     int iter);

struct TrainMetrics {
  int iteration = 0;
  UpdateMetrics update;
  double validation_cost = 0.0;  // NaN when no validation ran this iteration
};

std::string metrics_csv(const std::vector<TrainMetrics>& rows);

struct TrainResult {
  MLP actor, critic;
  RunningNormalizer state_norm, return_norm;
  std::vector<TrainMetrics> metrics;
  int best_iteration = -1;
  double best_validation = 0.0;
  nlohmann::json best_checkpoint;
};

nlohmann::json make_checkpoint(const MLP& actor, const MLP& critic,
                               const RunningNormalizer& state_norm,
                               const RunningNormalizer& return_norm, int iteration);

// Mean episode cost (negative return) of the sampled policy over episode
// indices [0, episodes) of the factory; deterministic in cfg.seed.
double evaluate_policy(const MLP& actor, const RunningNormalizer& state_norm,
                       const EnvFactory& envs, int episodes,
                       const TrainerConfig& cfg);

// Full training run: per-iteration frozen normalizer snapshots, collection,
// PPO update, normalizer refresh, periodic validation, and retention of the
// best-on-validation checkpoint (ties keep the earlier iteration).
TrainResult train(const EnvFactory& train_envs, const EnvFactory& val_envs,
                  int val_episodes, const TrainerConfig& cfg);

}  // namespace lpkit
