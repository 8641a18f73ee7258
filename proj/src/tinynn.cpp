#include "lpkit/tinynn.hpp"

#include <cmath>
#include <stdexcept>

namespace lpkit {

namespace {

void check_same_shape(const DenseLayer& a, const DenseLayer& b, const char* what) {
  if (a.in != b.in || a.out != b.out)
    throw std::invalid_argument(std::string(what) + ": layer shape mismatch");
}

void apply_layer(const DenseLayer& l, const std::vector<double>& x,
                 std::vector<double>& z) {
  z.assign(l.out, 0.0);
  for (int o = 0; o < l.out; ++o) {
    double acc = l.b[o];
    const double* row = l.w.data() + static_cast<std::size_t>(o) * l.in;
    for (int i = 0; i < l.in; ++i) acc += row[i] * x[i];
    z[o] = acc;
  }
}

}  // namespace

void Grads::add_scaled(const Grads& o, double s) {
  if (layers.size() != o.layers.size())
    throw std::invalid_argument("add_scaled: layer count mismatch");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    check_same_shape(layers[k], o.layers[k], "add_scaled");
    for (std::size_t i = 0; i < layers[k].w.size(); ++i)
      layers[k].w[i] += s * o.layers[k].w[i];
    for (std::size_t i = 0; i < layers[k].b.size(); ++i)
      layers[k].b[i] += s * o.layers[k].b[i];
  }
}

void Grads::scale(double s) {
  for (DenseLayer& l : layers) {
    for (double& v : l.w) v *= s;
    for (double& v : l.b) v *= s;
  }
}

MLP::MLP(int input, const std::vector<int>& hidden, int output, Rng& rng,
         double head_gain) {
  if (input < 1 || output < 1) throw std::invalid_argument("MLP: empty shape");
  std::vector<int> sizes;
  sizes.push_back(input);
  for (int h : hidden) {
    if (h < 1) throw std::invalid_argument("MLP: empty hidden layer");
    sizes.push_back(h);
  }
  sizes.push_back(output);
  for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
    DenseLayer l;
    l.in = sizes[k];
    l.out = sizes[k + 1];
    bool head = (k + 2 == sizes.size());
    double gain = head ? head_gain : 1.0;
    double r = gain * std::sqrt(6.0 / (l.in + l.out));
    l.w.resize(static_cast<std::size_t>(l.in) * l.out);
    for (double& v : l.w) v = rng.uniform(-r, r);
    l.b.assign(l.out, 0.0);
    layers_.push_back(std::move(l));
  }
}

std::vector<double> MLP::forward(const std::vector<double>& x) const {
  Tape scratch;
  return forward(x, scratch);
}

std::vector<double> MLP::forward(const std::vector<double>& x, Tape& tape) const {
  if (layers_.empty()) throw std::logic_error("forward on an empty net");
  if (static_cast<int>(x.size()) != input_size())
    throw std::invalid_argument("forward: input length mismatch");
  tape.inputs.assign(layers_.size(), {});
  tape.acts.assign(layers_.size(), {});
  std::vector<double> cur = x, z;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    tape.inputs[k] = cur;
    apply_layer(layers_[k], cur, z);
    if (k + 1 < layers_.size())
      for (double& v : z) v = std::tanh(v);
    tape.acts[k] = z;
    cur = z;
  }
  tape.valid = true;
  return cur;
}

Grads MLP::backward(const Tape& tape, const std::vector<double>& upstream) const {
  if (!tape.valid) throw std::logic_error("backward without a cached forward");
  if (tape.inputs.size() != layers_.size())
    throw std::invalid_argument("backward: tape does not match this net");
  if (static_cast<int>(upstream.size()) != output_size())
    throw std::invalid_argument("backward: upstream length mismatch");

  Grads g = zero_grads();
  std::vector<double> delta = upstream, prev;
  for (int k = static_cast<int>(layers_.size()) - 1; k >= 0; --k) {
    const DenseLayer& l = layers_[k];
    // Hidden outputs passed through tanh; the head is linear.
    if (k + 1 < static_cast<int>(layers_.size()))
      for (int o = 0; o < l.out; ++o)
        delta[o] *= 1.0 - tape.acts[k][o] * tape.acts[k][o];
    const std::vector<double>& x = tape.inputs[k];
    DenseLayer& gl = g.layers[k];
    for (int o = 0; o < l.out; ++o) {
      double d = delta[o];
      gl.b[o] = d;
      double* grow = gl.w.data() + static_cast<std::size_t>(o) * l.in;
      for (int i = 0; i < l.in; ++i) grow[i] = d * x[i];
    }
    if (k > 0) {
      prev.assign(l.in, 0.0);
      for (int o = 0; o < l.out; ++o) {
        double d = delta[o];
        const double* row = l.w.data() + static_cast<std::size_t>(o) * l.in;
        for (int i = 0; i < l.in; ++i) prev[i] += row[i] * d;
      }
      delta = prev;
    }
  }
  return g;
}

Grads MLP::zero_grads() const {
  Grads g;
  for (const DenseLayer& l : layers_) {
    DenseLayer z;
    z.in = l.in;
    z.out = l.out;
    z.w.assign(l.w.size(), 0.0);
    z.b.assign(l.b.size(), 0.0);
    g.layers.push_back(std::move(z));
  }
  return g;
}

Adam::Adam(const MLP& net, AdamConfig cfg) : cfg_(cfg) {
  Grads z = net.zero_grads();
  m_ = z.layers;
  v_ = z.layers;
}

void Adam::step(MLP& net, const Grads& g, double lr) {
  if (g.layers.size() != m_.size())
    throw std::invalid_argument("adam step: gradient shape mismatch");
  double rate = lr < 0 ? cfg_.lr : lr;
  ++t_;
  double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < m_.size(); ++k) {
    DenseLayer& p = net.layers()[k];
    check_same_shape(p, g.layers[k], "adam step");
    auto update = [&](std::vector<double>& params, const std::vector<double>& grad,
                      std::vector<double>& m, std::vector<double>& v) {
      for (std::size_t i = 0; i < params.size(); ++i) {
        m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * grad[i];
        v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
        double mhat = m[i] / c1;
        double vhat = v[i] / c2;
        params[i] -= rate * mhat / (std::sqrt(vhat) + cfg_.eps);
      }
    };
    update(p.w, g.layers[k].w, m_[k].w, v_[k].w);
    update(p.b, g.layers[k].b, m_[k].b, v_[k].b);
  }
}

void RunningNormalizer::observe(const std::vector<double>& x) {
  if (x.size() != mean_.size())
    throw std::invalid_argument("normalizer observe: dimension mismatch");
  ++count_;
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    double delta = x[i] - mean_[i];
    mean_[i] += delta / static_cast<double>(count_);
    m2_[i] += delta * (x[i] - mean_[i]);
  }
}

std::vector<double> RunningNormalizer::normalize(const std::vector<double>& x) const {
  if (x.size() != mean_.size())
    throw std::invalid_argument("normalizer: dimension mismatch");
  if (count_ < 2) return x;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double var = m2_[i] / static_cast<double>(count_);
    out[i] = (x[i] - mean_[i]) / std::sqrt(var + 1e-8);
  }
  return out;
}

std::vector<double> RunningNormalizer::variance() const {
  std::vector<double> out(mean_.size(), 0.0);
  if (count_ > 0)
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = m2_[i] / static_cast<double>(count_);
  return out;
}

void to_json(nlohmann::json& j, const DenseLayer& l) {
  j = nlohmann::json{{"in", l.in}, {"out", l.out}, {"w", l.w}, {"b", l.b}};
}

void from_json(const nlohmann::json& j, DenseLayer& l) {
  j.at("in").get_to(l.in);
  j.at("out").get_to(l.out);
  j.at("w").get_to(l.w);
  j.at("b").get_to(l.b);
  if (l.w.size() != static_cast<std::size_t>(l.in) * l.out ||
      l.b.size() != static_cast<std::size_t>(l.out))
    throw std::invalid_argument("dense layer: stored sizes disagree with shape");
}

void to_json(nlohmann::json& j, const MLP& net) {
  j = nlohmann::json{{"layers", net.layers()}};
}

void from_json(const nlohmann::json& j, MLP& net) {
  j.at("layers").get_to(net.layers());
}

void to_json(nlohmann::json& j, const Adam& a) {
  j = nlohmann::json{{"lr", a.cfg_.lr},
                     {"beta1", a.cfg_.beta1},
                     {"beta2", a.cfg_.beta2},
                     {"eps", a.cfg_.eps},
                     {"t", a.t_},
                     {"m", a.m_},
                     {"v", a.v_}};
}

void from_json(const nlohmann::json& j, Adam& a) {
  j.at("lr").get_to(a.cfg_.lr);
  j.at("beta1").get_to(a.cfg_.beta1);
  j.at("beta2").get_to(a.cfg_.beta2);
  j.at("eps").get_to(a.cfg_.eps);
  j.at("t").get_to(a.t_);
  j.at("m").get_to(a.m_);
  j.at("v").get_to(a.v_);
}

void to_json(nlohmann::json& j, const RunningNormalizer& n) {
  j = nlohmann::json{{"count", n.count_}, {"mean", n.mean_}, {"m2", n.m2_}};
}

void from_json(const nlohmann::json& j, RunningNormalizer& n) {
  j.at("count").get_to(n.count_);
  j.at("mean").get_to(n.mean_);
  j.at("m2").get_to(n.m2_);
  if (n.mean_.size() != n.m2_.size())
    throw std::invalid_argument("normalizer: stored sizes disagree");
}

}  // namespace lpkit
