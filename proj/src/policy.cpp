#include "lpkit/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpkit {

namespace {

void softmax_into(const double* z, int n, std::vector<double>& out) {
  double zmax = *std::max_element(z, z + n);
  out.assign(n, 0.0);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    out[i] = std::exp(z[i] - zmax);
    total += out[i];
  }
  for (double& v : out) v /= total;
}

int draw(const std::vector<double>& probs, Rng& rng) {
  double u = rng.u01();
  double acc = 0.0;
  int last_positive = static_cast<int>(probs.size()) - 1;
  for (int k = 0; k < static_cast<int>(probs.size()); ++k) {
    if (probs[k] <= 0.0) continue;
    last_positive = k;
    acc += probs[k];
    if (u < acc) return k;
  }
  return last_positive;  // u landed in roundoff slack past the cumulative sum
}

double row_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

void check_slots(const ChainDistribution& d, const std::vector<int>& slots,
                 int max_len) {
  if (static_cast<int>(slots.size()) > max_len)
    throw std::invalid_argument("sequence longer than the cap");
  for (int k : slots)
    if (k < 0 || k >= d.actions)
      throw std::invalid_argument("sequence slot out of range");
}

// Entropy gradient of one softmax row through its logits:
// dH/dz_k = -p_k (log p_k + H).
void add_row_entropy_grad(const std::vector<double>& p, double* grad) {
  double h = row_entropy(p);
  for (std::size_t k = 0; k < p.size(); ++k) {
    double logp = p[k] > 0.0 ? std::log(p[k]) : 0.0;
    grad[k] += -p[k] * (logp + h);
  }
}

}  // namespace

int chain_logit_count(int actions) { return (actions + 1) * (actions + 1); }

ChainDistribution chain_from_logits(const std::vector<double>& logits, int actions) {
  if (actions < 1) throw std::invalid_argument("chain needs at least one action");
  int width = actions + 1;
  if (static_cast<int>(logits.size()) != chain_logit_count(actions))
    throw std::invalid_argument("logit vector does not match the alphabet");
  ChainDistribution d;
  d.actions = actions;
  softmax_into(logits.data(), width, d.initial);
  d.rows.resize(actions);
  for (int i = 0; i < actions; ++i)
    softmax_into(logits.data() + static_cast<std::size_t>(width) * (i + 1), width,
                 d.rows[i]);
  return d;
}

ChainDistribution chain_distribution(const MLP& actor, const std::vector<double>& state) {
  int width_sq = actor.output_size();
  int width = static_cast<int>(std::lround(std::sqrt(static_cast<double>(width_sq))));
  if (width * width != width_sq || width < 2)
    throw std::invalid_argument("actor head is not a chain logit block");
  return chain_from_logits(actor.forward(state), width - 1);
}

SampledSequence sample_sequence(const ChainDistribution& d, Rng& rng, int max_len) {
  SampledSequence out;
  const std::vector<double>* row = &d.initial;
  for (;;) {
    int k = draw(*row, rng);
    out.logprob += std::log((*row)[k]);
    if (k == d.actions) return out;  // end token
    out.slots.push_back(k);
    if (static_cast<int>(out.slots.size()) >= max_len) {
      out.truncated = true;
      return out;
    }
    row = &d.rows[k];
  }
}

double sequence_log_prob(const ChainDistribution& d, const std::vector<int>& slots,
                         int max_len) {
  check_slots(d, slots, max_len);
  double lp = 0.0;
  const std::vector<double>* row = &d.initial;
  for (int k : slots) {
    lp += std::log((*row)[k]);
    row = &d.rows[k];
  }
  if (static_cast<int>(slots.size()) < max_len) lp += std::log((*row)[d.actions]);
  return lp;
}

std::vector<double> sequence_log_prob_grad(const ChainDistribution& d,
                                           const std::vector<int>& slots,
                                           int max_len) {
  check_slots(d, slots, max_len);
  int width = d.actions + 1;
  std::vector<double> grad(chain_logit_count(d.actions), 0.0);
  // d log softmax(z)[k] / dz_j = onehot(k)[j] - p_j, accumulated per factor.
  auto add_factor = [&](int row_index, const std::vector<double>& p, int chosen) {
    double* g = grad.data() + static_cast<std::size_t>(width) * row_index;
    for (int j = 0; j < width; ++j) g[j] -= p[j];
    g[chosen] += 1.0;
  };
  const std::vector<double>* row = &d.initial;
  int row_index = 0;
  for (int k : slots) {
    add_factor(row_index, *row, k);
    row = &d.rows[k];
    row_index = k + 1;
  }
  if (static_cast<int>(slots.size()) < max_len)
    add_factor(row_index, *row, d.actions);
  return grad;
}

double chain_entropy(const ChainDistribution& d, int max_len) {
  double h = row_entropy(d.initial);
  std::vector<double> occ(d.initial.begin(), d.initial.end() - 1);
  // One transition draw per position 2..max_len while the chain is alive.
  for (int pos = 2; pos <= max_len; ++pos) {
    double alive = 0.0;
    for (double v : occ) alive += v;
    if (alive <= 1e-300) break;
    for (int i = 0; i < d.actions; ++i)
      if (occ[i] > 0.0) h += occ[i] * row_entropy(d.rows[i]);
    std::vector<double> next(d.actions, 0.0);
    for (int i = 0; i < d.actions; ++i) {
      if (occ[i] <= 0.0) continue;
      for (int j = 0; j < d.actions; ++j) next[j] += occ[i] * d.rows[i][j];
    }
    occ = std::move(next);
  }
  return h;
}

double realized_entropy(const ChainDistribution& d, const std::vector<int>& slots,
                        std::vector<double>* grad, int max_len) {
  check_slots(d, slots, max_len);
  int width = d.actions + 1;
  if (grad) grad->assign(chain_logit_count(d.actions), 0.0);
  double h = row_entropy(d.initial);
  if (grad) add_row_entropy_grad(d.initial, grad->data());
  // Rows consulted after the first draw: predecessors of later elements, and
  // the final element's row only when an end-token draw actually happened.
  int n = static_cast<int>(slots.size());
  int consulted = n < max_len ? n : n - 1;
  for (int i = 0; i < consulted; ++i) {
    int r = slots[i];
    h += row_entropy(d.rows[r]);
    if (grad)
      add_row_entropy_grad(d.rows[r],
                           grad->data() + static_cast<std::size_t>(width) * (r + 1));
  }
  return h;
}

std::vector<int> slots_to_ids(const std::vector<int>& slots,
                              const std::vector<int>& action_ids) {
  std::vector<int> ids;
  ids.reserve(slots.size());
  for (int k : slots) {
    if (k < 0 || k >= static_cast<int>(action_ids.size()))
      throw std::invalid_argument("slot outside the action alphabet");
    ids.push_back(action_ids[k]);
  }
  return ids;
}

std::vector<int> ids_to_slots(const std::vector<int>& ids,
                              const std::vector<int>& action_ids) {
  std::vector<int> slots;
  slots.reserve(ids.size());
  for (int id : ids) {
    auto it = std::find(action_ids.begin(), action_ids.end(), id);
    if (it == action_ids.end())
      throw std::invalid_argument("id missing from the action alphabet");
    slots.push_back(static_cast<int>(it - action_ids.begin()));
  }
  return slots;
}

void to_json(nlohmann::json& j, const ChainDistribution& d) {
  j = nlohmann::json{{"actions", d.actions}, {"initial", d.initial}, {"rows", d.rows}};
}

void from_json(const nlohmann::json& j, ChainDistribution& d) {
  j.at("actions").get_to(d.actions);
  j.at("initial").get_to(d.initial);
  j.at("rows").get_to(d.rows);
}

}  // namespace lpkit
