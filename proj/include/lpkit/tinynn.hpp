#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "lpkit/rng.hpp"

namespace lpkit {

// One dense layer, row-major weights: w[o * in + i].
struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> w;
  std::vector<double> b;
};

// Parameter gradients, mirroring the layer shapes of the net they came from.
struct Grads {
  std::vector<DenseLayer> layers;

  void add_scaled(const Grads& o, double s);
  void scale(double s);
};

// Activations recorded by a caching forward pass, consumed by backward().
struct Tape {
  std::vector<std::vector<double>> inputs;  // vector seen by each layer
  std::vector<std::vector<double>> acts;    // each layer's post-activation output
  bool valid = false;
};

// Feed-forward net with Tanh hidden layers and a linear output head.
class MLP {
 public:
  MLP() = default;
  // Scaled-uniform init (range sqrt(6/(in+out)) per layer), zero biases.
  // head_gain shrinks the output layer so initial outputs sit near zero.
  MLP(int input, const std::vector<int>& hidden, int output, Rng& rng,
      double head_gain = 1.0);

  std::vector<double> forward(const std::vector<double>& x) const;
  std::vector<double> forward(const std::vector<double>& x, Tape& tape) const;
  // d(loss)/d(parameters) given d(loss)/d(output). Requires a valid tape
  // recorded by forward() on this net.
  Grads backward(const Tape& tape, const std::vector<double>& upstream) const;

  Grads zero_grads() const;
  int input_size() const { return layers_.empty() ? 0 : layers_.front().in; }
  int output_size() const { return layers_.empty() ? 0 : layers_.back().out; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

 private:
  std::vector<DenseLayer> layers_;  // hidden layers, then the head
};

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Standard Adam with bias correction, moments shaped like the net.
class Adam {
 public:
  Adam() = default;
  explicit Adam(const MLP& net, AdamConfig cfg = {});

  // lr < 0 uses the configured rate; pass the schedule's rate otherwise.
  void step(MLP& net, const Grads& g, double lr = -1.0);
  long step_count() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

  friend void to_json(nlohmann::json& j, const Adam& a);
  friend void from_json(const nlohmann::json& j, Adam& a);

 private:
  AdamConfig cfg_;
  long t_ = 0;
  std::vector<DenseLayer> m_, v_;  // moment accumulators, parameter shapes
};

// Online per-dimension mean/variance (Welford). normalize() applies
// (x - mean) / sqrt(variance + 1e-8) once two observations exist and is the
// identity before that.
class RunningNormalizer {
 public:
  RunningNormalizer() = default;
  explicit RunningNormalizer(int dim)
      : mean_(dim, 0.0), m2_(dim, 0.0) {}

  void observe(const std::vector<double>& x);
  std::vector<double> normalize(const std::vector<double>& x) const;

  std::int64_t count() const { return count_; }
  int dim() const { return static_cast<int>(mean_.size()); }
  const std::vector<double>& mean() const { return mean_; }
  std::vector<double> variance() const;  // population variance

  friend void to_json(nlohmann::json& j, const RunningNormalizer& n);
  friend void from_json(const nlohmann::json& j, RunningNormalizer& n);

 private:
  std::int64_t count_ = 0;
  std::vector<double> mean_, m2_;
};

void to_json(nlohmann::json& j, const DenseLayer& l);
void from_json(const nlohmann::json& j, DenseLayer& l);
void to_json(nlohmann::json& j, const MLP& net);
void from_json(const nlohmann::json& j, MLP& net);

}  // namespace lpkit
