#include "humanoid/intent/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "humanoid/error.hpp"

namespace humanoid::intent {
namespace {

DenseLayer make_layer(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
  DenseLayer layer{Matrix(fan_in, fan_out), std::vector<double>(fan_out, 0.0)};
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (auto& w : layer.weights.data) w = dist(rng);
  return layer;
}

// out = bias + weightsᵀ·in, skipping zero inputs (bag-of-words input is sparse).
std::vector<double> affine(const DenseLayer& layer, std::span<const double> in) {
  std::vector<double> out(layer.bias);
  for (std::size_t i = 0; i < layer.fan_in(); ++i) {
    const double v = in[i];
    if (v == 0.0) continue;
    const auto w = layer.weights.row(i);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += v * w[j];
  }
  return out;
}

std::vector<double> relu(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  for (auto& v : out) v = std::max(v, 0.0);
  return out;
}

std::vector<double> dropout_mask(std::size_t n, Mode mode, double rate, std::mt19937_64& rng) {
  std::vector<double> mask(n, 1.0);
  if (mode == Mode::Infer || rate <= 0.0) return mask;
  const double scale = 1.0 / (1.0 - rate);
  std::bernoulli_distribution keep(1.0 - rate);
  for (auto& m : mask) m = keep(rng) ? scale : 0.0;
  return mask;
}

// Gradient w.r.t. the input of a layer, given the gradient w.r.t. its output.
std::vector<double> back_through(const DenseLayer& layer, std::span<const double> grad_out) {
  std::vector<double> grad_in(layer.fan_in(), 0.0);
  for (std::size_t i = 0; i < layer.fan_in(); ++i) {
    const auto w = layer.weights.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < grad_out.size(); ++j) s += w[j] * grad_out[j];
    grad_in[i] = s;
  }
  return grad_in;
}

void add_outer(DenseLayer& grad, std::span<const double> in, std::span<const double> grad_out) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double v = in[i];
    if (v == 0.0) continue;
    auto row = grad.weights.row(i);
    for (std::size_t j = 0; j < grad_out.size(); ++j) row[j] += v * grad_out[j];
  }
  for (std::size_t j = 0; j < grad_out.size(); ++j) grad.bias[j] += grad_out[j];
}

bool shapes_match(const NetworkParameters& params, const ForwardCache& cache) {
  const auto& l = params.layers;
  return cache.input.size() == l[0].fan_in() && cache.pre1.size() == l[0].fan_out() &&
         cache.mask1.size() == cache.pre1.size() && cache.dropped1.size() == cache.pre1.size() &&
         l[1].fan_in() == cache.pre1.size() && cache.pre2.size() == l[1].fan_out() &&
         cache.mask2.size() == cache.pre2.size() && cache.dropped2.size() == cache.pre2.size() &&
         l[2].fan_in() == cache.pre2.size() && cache.probabilities.size() == l[2].fan_out();
}

}  // namespace

std::size_t NetworkParameters::scalar_count() const noexcept {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.weights.data.size() + layer.bias.size();
  return n;
}

NetworkParameters NetworkParameters::zeros_like() const {
  NetworkParameters z;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    z.layers[k] = DenseLayer{Matrix(layers[k].fan_in(), layers[k].fan_out()),
                             std::vector<double>(layers[k].fan_out(), 0.0)};
  }
  return z;
}

std::size_t count_parameters(std::size_t vocab_size, std::size_t tag_count) {
  if (vocab_size < 1 || tag_count < 2) {
    throw Error(Errc::PreconditionViolation,
                "count_parameters needs V >= 1 and T >= 2 (got V=" + std::to_string(vocab_size) +
                    ", T=" + std::to_string(tag_count) + ")");
  }
  return kHidden1 * vocab_size + kHidden1 + kHidden1 * kHidden2 + kHidden2 +
         kHidden2 * tag_count + tag_count;
}

NetworkParameters init_network(std::size_t vocab_size, std::size_t tag_count, std::uint64_t seed) {
  count_parameters(vocab_size, tag_count);  // precondition check
  std::mt19937_64 rng(seed);
  NetworkParameters params;
  params.layers[0] = make_layer(vocab_size, kHidden1, rng);
  params.layers[1] = make_layer(kHidden1, kHidden2, rng);
  params.layers[2] = make_layer(kHidden2, tag_count, rng);
  return params;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double peak = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (auto& v : out) {
    v = std::exp(v - peak);
    sum += v;
  }
  for (auto& v : out) v /= sum;
  return out;
}

ForwardResult forward(const NetworkParameters& params, std::span<const double> x, Mode mode,
                      std::mt19937_64& rng, double dropout_rate) {
  if (x.size() != params.input_size()) {
    throw Error(Errc::DimensionMismatch, "feature vector has length " + std::to_string(x.size()) +
                                             ", network expects " +
                                             std::to_string(params.input_size()));
  }
  ForwardResult result;
  auto& c = result.cache;
  c.input.assign(x.begin(), x.end());

  c.pre1 = affine(params.layers[0], x);
  c.mask1 = dropout_mask(c.pre1.size(), mode, dropout_rate, rng);
  c.dropped1 = relu(c.pre1);
  for (std::size_t i = 0; i < c.dropped1.size(); ++i) c.dropped1[i] *= c.mask1[i];

  c.pre2 = affine(params.layers[1], c.dropped1);
  c.mask2 = dropout_mask(c.pre2.size(), mode, dropout_rate, rng);
  c.dropped2 = relu(c.pre2);
  for (std::size_t i = 0; i < c.dropped2.size(); ++i) c.dropped2[i] *= c.mask2[i];

  c.probabilities = softmax(affine(params.layers[2], c.dropped2));
  result.probabilities = c.probabilities;
  return result;
}

std::vector<double> infer(const NetworkParameters& params, std::span<const double> x) {
  std::mt19937_64 unused;
  return forward(params, x, Mode::Infer, unused).probabilities;
}

double cross_entropy(std::span<const double> probabilities, std::size_t target) {
  return -std::log(std::max(probabilities[target], kProbabilityFloor));
}

void accumulate_gradients(const NetworkParameters& params, const ForwardCache& cache,
                          std::size_t target, Gradients& acc) {
  if (!shapes_match(params, cache) || target >= params.tag_count()) {
    throw Error(Errc::StaleCache, "forward cache does not match the network shapes");
  }
  // softmax + cross-entropy: dL/dlogits = p - onehot(target)
  std::vector<double> grad3(cache.probabilities);
  grad3[target] -= 1.0;
  add_outer(acc.layers[2], cache.dropped2, grad3);

  auto grad2 = back_through(params.layers[2], grad3);
  for (std::size_t i = 0; i < grad2.size(); ++i) {
    grad2[i] *= cache.pre2[i] > 0.0 ? cache.mask2[i] : 0.0;
  }
  add_outer(acc.layers[1], cache.dropped1, grad2);

  auto grad1 = back_through(params.layers[1], grad2);
  for (std::size_t i = 0; i < grad1.size(); ++i) {
    grad1[i] *= cache.pre1[i] > 0.0 ? cache.mask1[i] : 0.0;
  }
  add_outer(acc.layers[0], cache.input, grad1);
}

Gradients backward(const NetworkParameters& params, const ForwardCache& cache,
                   std::size_t target) {
  Gradients grads = params.zeros_like();
  accumulate_gradients(params, cache, target, grads);
  return grads;
}

void sgd_step(NetworkParameters& params, NetworkParameters& velocity, const Gradients& gradients,
              const SgdSettings& settings, std::uint64_t step) {
  const double lr =
      settings.learning_rate / (1.0 + settings.decay * static_cast<double>(step));
  const double mu = settings.momentum;
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    auto update = [&](std::vector<double>& theta, std::vector<double>& v,
                      const std::vector<double>& g) {
      for (std::size_t i = 0; i < theta.size(); ++i) {
        v[i] = mu * v[i] - lr * g[i];
        theta[i] += settings.nesterov ? mu * v[i] - lr * g[i] : v[i];
      }
    };
    update(params.layers[k].weights.data, velocity.layers[k].weights.data,
           gradients.layers[k].weights.data);
    update(params.layers[k].bias, velocity.layers[k].bias, gradients.layers[k].bias);
  }
}

}  // namespace humanoid::intent
