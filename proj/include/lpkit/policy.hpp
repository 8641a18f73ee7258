#pragma once

#include <vector>

#include <json.hpp>

#include "lpkit/presolve.hpp"
#include "lpkit/rng.hpp"
#include "lpkit/tinynn.hpp"

namespace lpkit {

// State-conditioned Markov chain over an action alphabet plus an end token.
// Slot k < actions is the k-th selectable action; slot == actions is the end
// token. A sequence is drawn slot by slot: the first from `initial`, each
// further one from the row of its predecessor, until the end token or the
// length cap. The empty sequence (end token first) stops presolving.
struct ChainDistribution {
  int actions = 0;
  std::vector<double> initial;             // length actions+1
  std::vector<std::vector<double>> rows;   // actions rows, each actions+1
};

// Logits the actor must emit for an alphabet of `actions` symbols:
// one initial row plus one transition row per action, each actions+1 wide.
int chain_logit_count(int actions);

// Per-row softmax over the actor's flat logit vector. One actor forward pass
// yields the whole sequence distribution for this state.
ChainDistribution chain_from_logits(const std::vector<double>& logits, int actions);
ChainDistribution chain_distribution(const MLP& actor, const std::vector<double>& state);

struct SampledSequence {
  std::vector<int> slots;  // alphabet positions, not presolver ids
  double logprob = 0.0;
  bool truncated = false;  // hit the cap, so no end-token factor
};

SampledSequence sample_sequence(const ChainDistribution& d, Rng& rng,
                                int max_len = kMaxChainLength);

// Exact log-probability of a slot sequence: the initial factor, one
// transition factor per later element, and the end-token factor unless the
// sequence sits at the cap.
double sequence_log_prob(const ChainDistribution& d, const std::vector<int>& slots,
                         int max_len = kMaxChainLength);

// d(sequence_log_prob)/d(logits), laid out like the actor output.
std::vector<double> sequence_log_prob_grad(const ChainDistribution& d,
                                           const std::vector<int>& slots,
                                           int max_len = kMaxChainLength);

// Entropy of the sequence distribution: initial-row entropy plus each
// transition row's entropy weighted by the chance the chain consults it,
// truncated at the cap.
double chain_entropy(const ChainDistribution& d, int max_len = kMaxChainLength);

// Entropy of the factor rows one sequence actually consulted; its mean over
// sampled sequences is chain_entropy. grad, when given, receives
// d(realized entropy)/d(logits) in actor-output layout.
double realized_entropy(const ChainDistribution& d, const std::vector<int>& slots,
                        std::vector<double>* grad = nullptr,
                        int max_len = kMaxChainLength);

// Alphabet slots <-> presolver ids, via the environment's action list.
std::vector<int> slots_to_ids(const std::vector<int>& slots,
                              const std::vector<int>& action_ids);
std::vector<int> ids_to_slots(const std::vector<int>& ids,
                              const std::vector<int>& action_ids);

void to_json(nlohmann::json& j, const ChainDistribution& d);
void from_json(const nlohmann::json& j, ChainDistribution& d);

}  // namespace lpkit
