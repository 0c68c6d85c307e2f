#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace humanoid::intent {

inline constexpr std::size_t kHidden1 = 128;
inline constexpr std::size_t kHidden2 = 64;

/// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Fully connected layer, out = weightsᵀ·in + bias. Weights are fan_in × fan_out.
struct DenseLayer {
  Matrix weights;
  std::vector<double> bias;

  std::size_t fan_in() const noexcept { return weights.rows; }
  std::size_t fan_out() const noexcept { return weights.cols; }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// The three dense layers: V→128 (ReLU), 128→64 (ReLU), 64→T (softmax).
struct NetworkParameters {
  std::array<DenseLayer, 3> layers;

  std::size_t input_size() const noexcept { return layers[0].fan_in(); }
  std::size_t tag_count() const noexcept { return layers[2].fan_out(); }
  std::size_t scalar_count() const noexcept;

  /// Same shapes, every entry zero. Used for gradients and velocities.
  NetworkParameters zeros_like() const;

  template <typename F>
  void for_each_tensor(F&& f) {
    for (auto& layer : layers) {
      f(std::span<double>(layer.weights.data));
      f(std::span<double>(layer.bias));
    }
  }

  friend bool operator==(const NetworkParameters&, const NetworkParameters&) = default;
};

using Gradients = NetworkParameters;

/// 128V + 128 + 128·64 + 64 + 64T + T. Throws PreconditionViolation for V < 1 or T < 2.
std::size_t count_parameters(std::size_t vocab_size, std::size_t tag_count);

/// Glorot-uniform weights from a generator seeded with `seed`; zero biases.
NetworkParameters init_network(std::size_t vocab_size, std::size_t tag_count, std::uint64_t seed);

enum class Mode { Train, Infer };

/// Everything backward() needs from one forward pass.
struct ForwardCache {
  std::vector<double> input;
  std::vector<double> pre1, pre2;        // pre-activations of the hidden layers
  std::vector<double> mask1, mask2;      // 0 or 1/(1-rate); all 1 in infer mode
  std::vector<double> dropped1, dropped2;  // relu(pre) * mask
  std::vector<double> probabilities;
};

struct ForwardResult {
  std::vector<double> probabilities;
  ForwardCache cache;
};

/// In Train mode hidden activations go through inverted dropout at
/// `dropout_rate`, drawing masks from `rng`. Infer mode is deterministic and
/// never touches `rng`. Throws DimensionMismatch when x.size() != V.
ForwardResult forward(const NetworkParameters& params, std::span<const double> x, Mode mode,
                      std::mt19937_64& rng, double dropout_rate = 0.5);

/// Inference-only forward pass.
std::vector<double> infer(const NetworkParameters& params, std::span<const double> x);

/// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> logits);

inline constexpr double kProbabilityFloor = 1e-12;

/// Categorical cross-entropy for a one-hot target given by index.
double cross_entropy(std::span<const double> probabilities, std::size_t target);

/// Exact gradients of cross_entropy(forward(x), target) w.r.t. all
/// parameters, using the cached dropout masks. Throws StaleCache when the
/// cache shapes do not match `params`.
Gradients backward(const NetworkParameters& params, const ForwardCache& cache,
                   std::size_t target);

/// Adds backward() into `accumulator` without allocating a fresh gradient set.
void accumulate_gradients(const NetworkParameters& params, const ForwardCache& cache,
                          std::size_t target, Gradients& accumulator);

struct SgdSettings {
  double learning_rate = 0.01;
  double decay = 1e-6;
  double momentum = 0.9;
  bool nesterov = true;
};

/// One momentum-SGD update at global step `step`:
///   lr   = learning_rate / (1 + decay * step)
///   v    = momentum * v - lr * g
///   θ   += momentum * v - lr * g     (nesterov)
///   θ   += v                         (classical)
/// `params` holds the lookahead point in the nesterov case.
void sgd_step(NetworkParameters& params, NetworkParameters& velocity, const Gradients& gradients,
              const SgdSettings& settings, std::uint64_t step);

}  // namespace humanoid::intent
