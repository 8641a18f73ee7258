#include "lpkit/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace lpkit {

namespace {

// Keeps the per-episode RNG streams of different iterations disjoint.
constexpr std::uint64_t kCollectStride = 1ull << 20;
constexpr std::uint64_t kValidationStream = 0xE0000000ull;
constexpr std::uint64_t kShuffleStream = 0xAB000000ull;
constexpr std::uint64_t kInitStream = 0x111ull;

struct EpisodeOut {
  std::vector<BufferEntry> entries;
  long forwards = 0;
  long steps = 0;
  long executed = 0;
};

EpisodeOut run_episode(const MLP& actor, const RunningNormalizer& state_norm,
                       Env& env, Rng rng, double gamma) {
  EpisodeOut out;
  std::vector<double> s = env.reset();
  bool done = false;
  while (!done) {
    ChainDistribution dist = chain_distribution(actor, state_norm.normalize(s));
    ++out.forwards;
    SampledSequence seq = sample_sequence(dist, rng);
    std::vector<int> ids = slots_to_ids(seq.slots, env.action_ids());
    StepResult res = env.step(ids);
    ++out.steps;
    out.executed += static_cast<long>(ids.size());
    BufferEntry e;
    e.record.state = s;  // raw; normalization happens at every use site
    e.record.action = std::move(ids);
    e.record.behavior_logprob = seq.logprob;
    e.record.reward = res.reward;
    e.record.done = res.done;
    out.entries.push_back(std::move(e));
    done = res.done;
    s = std::move(res.features);
  }
  double run = 0.0;
  for (int i = static_cast<int>(out.entries.size()) - 1; i >= 0; --i) {
    run = out.entries[i].record.reward + gamma * run;
    out.entries[i].ret = run;
  }
  return out;
}

}  // namespace

void to_json(nlohmann::json& j, const TrainerConfig& c) {
  j = nlohmann::json{{"lr_actor", c.lr_actor},
                     {"lr_critic", c.lr_critic},
                     {"gamma", c.gamma},
                     {"epochs_per_iter", c.epochs_per_iter},
                     {"samples_per_iter", c.samples_per_iter},
                     {"minibatch", c.minibatch},
                     {"entropy_coef", c.entropy_coef},
                     {"clip_eps", c.clip_eps},
                     {"workers", c.workers},
                     {"total_iters", c.total_iters},
                     {"lr_half_every", c.lr_half_every},
                     {"validate_every", c.validate_every},
                     {"seed", c.seed},
                     {"hidden", c.hidden}};
}

void from_json(const nlohmann::json& j, TrainerConfig& c) {
  TrainerConfig defaults;
  c.lr_actor = j.value("lr_actor", defaults.lr_actor);
  c.lr_critic = j.value("lr_critic", defaults.lr_critic);
  c.gamma = j.value("gamma", defaults.gamma);
  c.epochs_per_iter = j.value("epochs_per_iter", defaults.epochs_per_iter);
  c.samples_per_iter = j.value("samples_per_iter", defaults.samples_per_iter);
  c.minibatch = j.value("minibatch", defaults.minibatch);
  c.entropy_coef = j.value("entropy_coef", defaults.entropy_coef);
  c.clip_eps = j.value("clip_eps", defaults.clip_eps);
  c.workers = j.value("workers", defaults.workers);
  c.total_iters = j.value("total_iters", defaults.total_iters);
  c.lr_half_every = j.value("lr_half_every", defaults.lr_half_every);
  c.validate_every = j.value("validate_every", defaults.validate_every);
  c.seed = j.value("seed", defaults.seed);
  c.hidden = j.value("hidden", defaults.hidden);
}

double lr_at(double base, int iter, int half_every) {
  if (half_every < 1) return base;
  return base * std::pow(0.5, static_cast<double>(iter / half_every));
}

TrajectoryBuffer collect(const MLP& actor, const RunningNormalizer& state_norm,
                         const EnvFactory& envs, const TrainerConfig& cfg,
                         std::uint64_t stream_base) {
  if (cfg.samples_per_iter < 1)
    throw std::invalid_argument("collect needs a positive sample budget");
  TrajectoryBuffer buf;
  int next_index = 0;
  while (static_cast<int>(buf.entries.size()) < cfg.samples_per_iter) {
    int wave = std::max(1, cfg.workers);
    std::vector<std::unique_ptr<Env>> wave_envs;
    wave_envs.reserve(wave);
    for (int w = 0; w < wave; ++w) wave_envs.push_back(envs(next_index + w));
    std::vector<EpisodeOut> outs(wave);
    std::vector<std::thread> threads;
    threads.reserve(wave);
    for (int w = 0; w < wave; ++w) {
      Rng rng = Rng::child(cfg.seed, stream_base + next_index + w);
      Env* env = wave_envs[w].get();
      threads.emplace_back([&actor, &state_norm, &outs, env, rng, w, &cfg]() mutable {
        outs[w] = run_episode(actor, state_norm, *env, rng, cfg.gamma);
      });
    }
    for (std::thread& t : threads) t.join();
    for (int w = 0; w < wave; ++w) {
      if (static_cast<int>(buf.entries.size()) >= cfg.samples_per_iter) break;
      if (buf.action_ids.empty()) buf.action_ids = wave_envs[w]->action_ids();
      ++buf.episodes;
      buf.forward_passes += outs[w].forwards;
      buf.env_steps += outs[w].steps;
      buf.presolvers_executed += outs[w].executed;
      for (BufferEntry& e : outs[w].entries) buf.entries.push_back(std::move(e));
    }
    next_index += wave;
  }
  return buf;
}

double ppo_term(double new_logprob, double old_logprob, double advantage,
                double eps, bool* clamped) {
  double r = std::exp(new_logprob - old_logprob);
  if (clamped) *clamped = false;
  if (advantage > 0.0 && r >= 1.0 + eps) {
    if (clamped) *clamped = true;
    return (1.0 + eps) * advantage;
  }
  if (advantage < 0.0 && r <= 1.0 - eps) {
    if (clamped) *clamped = true;
    return (1.0 - eps) * advantage;
  }
  return r * advantage;
}

UpdateMetrics update(const TrajectoryBuffer& buffer, MLP& actor, Adam& actor_opt,
                     MLP& critic, Adam& critic_opt,
                     const RunningNormalizer& state_norm,
                     const RunningNormalizer& return_norm, const TrainerConfig& cfg,
                     int iter) {
  int n = static_cast<int>(buffer.entries.size());
  if (n == 0) throw std::invalid_argument("update on an empty buffer");
  int actions = static_cast<int>(buffer.action_ids.size());
  double a_lr = lr_at(cfg.lr_actor, iter, cfg.lr_half_every);
  double c_lr = lr_at(cfg.lr_critic, iter, cfg.lr_half_every);

  // Fixed per-iteration quantities: normalized states and targets, slot
  // sequences, and advantages against the pre-update critic.
  std::vector<std::vector<double>> sn(n);
  std::vector<std::vector<int>> slots(n);
  std::vector<double> target(n), adv(n);
  UpdateMetrics m;
  for (int i = 0; i < n; ++i) {
    const BufferEntry& e = buffer.entries[i];
    sn[i] = state_norm.normalize(e.record.state);
    slots[i] = ids_to_slots(e.record.action, buffer.action_ids);
    target[i] = return_norm.normalize({e.ret})[0];
    adv[i] = target[i] - critic.forward(sn[i])[0];
    m.mean_return += e.ret;
  }
  m.mean_return /= n;

  long ratio_count = 0, clip_count = 0, obs = 0;
  double ratio_sum = 0.0, obj_sum = 0.0, closs_sum = 0.0, ent_sum = 0.0;

  Rng shuffle_rng = Rng::child(cfg.seed, kShuffleStream + static_cast<std::uint64_t>(iter));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs_per_iter; ++epoch) {
    shuffle_rng.shuffle(order);
    for (int start = 0; start < n; start += cfg.minibatch) {
      int end = std::min(n, start + cfg.minibatch);
      int bsz = end - start;

      // Advantage normalization needs at least two samples to have a scale.
      std::vector<double> a_hat(bsz);
      for (int b = 0; b < bsz; ++b) a_hat[b] = adv[order[start + b]];
      if (bsz >= 2) {
        double mean = 0.0;
        for (double v : a_hat) mean += v;
        mean /= bsz;
        double var = 0.0;
        for (double v : a_hat) var += (v - mean) * (v - mean);
        double sd = std::sqrt(var / bsz);
        for (double& v : a_hat) v = (v - mean) / (sd + 1e-8);
      }

      Grads agrad = actor.zero_grads();
      Grads cgrad = critic.zero_grads();
      double batch_obj = 0.0, batch_closs = 0.0, batch_ent = 0.0;
      for (int b = 0; b < bsz; ++b) {
        int i = order[start + b];
        const BufferEntry& e = buffer.entries[i];

        Tape atape;
        std::vector<double> logits = actor.forward(sn[i], atape);
        ChainDistribution dist = chain_from_logits(logits, actions);
        double new_lp = sequence_log_prob(dist, slots[i]);
        double r = std::exp(new_lp - e.record.behavior_logprob);
        bool clamped = false;
        double term =
            ppo_term(new_lp, e.record.behavior_logprob, a_hat[b], cfg.clip_eps, &clamped);
        ratio_sum += r;
        ++ratio_count;
        if (clamped) ++clip_count;

        std::vector<double> hgrad;
        double ent = realized_entropy(dist, slots[i], &hgrad);
        batch_obj += term;
        batch_ent += ent;

        // Ascent on clipped term + entropy bonus: clamped samples contribute
        // no policy gradient, only the entropy bonus.
        std::vector<double> up(logits.size(), 0.0);
        if (!clamped && a_hat[b] != 0.0) {
          std::vector<double> lp_grad = sequence_log_prob_grad(dist, slots[i]);
          double scale = r * a_hat[b];
          for (std::size_t j = 0; j < up.size(); ++j) up[j] += scale * lp_grad[j];
        }
        for (std::size_t j = 0; j < up.size(); ++j) {
          up[j] += cfg.entropy_coef * hgrad[j];
          up[j] = -up[j] / bsz;
        }
        agrad.add_scaled(actor.backward(atape, up), 1.0);

        Tape ctape;
        double v = critic.forward(sn[i], ctape)[0];
        double err = v - target[i];
        batch_closs += 0.5 * err * err;
        cgrad.add_scaled(critic.backward(ctape, {err / bsz}), 1.0);
      }
      if (!std::isfinite(batch_obj) || !std::isfinite(batch_closs))
        throw std::runtime_error("ppo update hit a non-finite loss; iteration aborted");
      actor_opt.step(actor, agrad, a_lr);
      critic_opt.step(critic, cgrad, c_lr);
      obj_sum += batch_obj;
      closs_sum += batch_closs;
      ent_sum += batch_ent;
      obs += bsz;
    }
  }

  m.mean_ratio = ratio_sum / static_cast<double>(ratio_count);
  m.clip_fraction = static_cast<double>(clip_count) / static_cast<double>(ratio_count);
  m.actor_objective = obj_sum / static_cast<double>(obs);
  m.critic_loss = closs_sum / static_cast<double>(obs);
  m.entropy = ent_sum / static_cast<double>(obs);
  return m;
}

std::string metrics_csv(const std::vector<TrainMetrics>& rows) {
  std::ostringstream out;
  out.precision(12);
  out << "iteration,mean_return,mean_ratio,clip_fraction,actor_objective,"
         "critic_loss,entropy,validation_cost\n";
  for (const TrainMetrics& r : rows) {
    out << r.iteration << ',' << r.update.mean_return << ',' << r.update.mean_ratio
        << ',' << r.update.clip_fraction << ',' << r.update.actor_objective << ','
        << r.update.critic_loss << ',' << r.update.entropy << ',';
    if (std::isfinite(r.validation_cost)) out << r.validation_cost;
    out << '\n';
  }
  return out.str();
}

nlohmann::json make_checkpoint(const MLP& actor, const MLP& critic,
                               const RunningNormalizer& state_norm,
                               const RunningNormalizer& return_norm, int iteration) {
  return nlohmann::json{{"actor", actor},
                        {"critic", critic},
                        {"state_norm", state_norm},
                        {"return_norm", return_norm},
                        {"iteration", iteration}};
}

double evaluate_policy(const MLP& actor, const RunningNormalizer& state_norm,
                       const EnvFactory& envs, int episodes,
                       const TrainerConfig& cfg) {
  if (episodes < 1) throw std::invalid_argument("evaluation needs episodes");
  double total = 0.0;
  for (int idx = 0; idx < episodes; ++idx) {
    std::unique_ptr<Env> env = envs(idx);
    Rng rng = Rng::child(cfg.seed, kValidationStream + static_cast<std::uint64_t>(idx));
    std::vector<double> s = env->reset();
    bool done = false;
    double ret = 0.0;
    while (!done) {
      ChainDistribution dist = chain_distribution(actor, state_norm.normalize(s));
      SampledSequence seq = sample_sequence(dist, rng);
      StepResult res = env->step(slots_to_ids(seq.slots, env->action_ids()));
      ret += res.reward;
      done = res.done;
      s = std::move(res.features);
    }
    total += -ret;
  }
  return total / episodes;
}

TrainResult train(const EnvFactory& train_envs, const EnvFactory& val_envs,
                  int val_episodes, const TrainerConfig& cfg) {
  std::unique_ptr<Env> probe = train_envs(0);
  int features = probe->feature_count();
  int actions = static_cast<int>(probe->action_ids().size());
  probe.reset();

  Rng init_rng = Rng::child(cfg.seed, kInitStream);
  TrainResult res;
  res.actor = MLP(features, cfg.hidden, chain_logit_count(actions), init_rng, 0.01);
  res.critic = MLP(features, cfg.hidden, 1, init_rng, 1.0);
  res.state_norm = RunningNormalizer(features);
  res.return_norm = RunningNormalizer(1);
  Adam actor_opt(res.actor, {cfg.lr_actor, 0.9, 0.999, 1e-8});
  Adam critic_opt(res.critic, {cfg.lr_critic, 0.9, 0.999, 1e-8});

  res.best_validation = std::numeric_limits<double>::infinity();
  res.best_checkpoint =
      make_checkpoint(res.actor, res.critic, res.state_norm, res.return_norm, -1);

  int episode_base = 0;
  for (int iter = 0; iter < cfg.total_iters; ++iter) {
    // Frozen snapshots make collection-time and update-time normalization
    // identical, so every ratio starts the iteration at exactly one.
    RunningNormalizer snap_state = res.state_norm;
    RunningNormalizer snap_return = res.return_norm;

    EnvFactory offset_envs = [&train_envs, episode_base](int idx) {
      return train_envs(episode_base + idx);
    };
    TrajectoryBuffer buf =
        collect(res.actor, snap_state, offset_envs,
                cfg, static_cast<std::uint64_t>(iter) * kCollectStride);
    episode_base += buf.episodes;

    UpdateMetrics um = update(buf, res.actor, actor_opt, res.critic, critic_opt,
                              snap_state, snap_return, cfg, iter);

    for (const BufferEntry& e : buf.entries) {
      res.state_norm.observe(e.record.state);
      res.return_norm.observe({e.ret});
    }

    TrainMetrics tm;
    tm.iteration = iter;
    tm.update = um;
    tm.validation_cost = std::numeric_limits<double>::quiet_NaN();
    bool last = iter + 1 == cfg.total_iters;
    if ((iter + 1) % cfg.validate_every == 0 || last) {
      double v = evaluate_policy(res.actor, res.state_norm, val_envs, val_episodes, cfg);
      tm.validation_cost = v;
      if (v < res.best_validation) {
        res.best_validation = v;
        res.best_iteration = iter;
        res.best_checkpoint = make_checkpoint(res.actor, res.critic, res.state_norm,
                                              res.return_norm, iter);
      }
    }
    res.metrics.push_back(tm);
  }
  return res;
}

}  // namespace lpkit
