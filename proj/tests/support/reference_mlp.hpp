#pragma once

// Straight-line reimplementation of the classifier's forward pass and loss,
// written without sharing any code with humanoid::intent. Gradient checks
// differentiate this with central differences.

#include <algorithm>
#include <cmath>
#include <vector>

#include "humanoid/intent/network.hpp"

namespace reference {

inline std::vector<double> dense(const humanoid::intent::DenseLayer& layer,
                                 const std::vector<double>& in) {
  const std::size_t n_in = layer.weights.rows;
  const std::size_t n_out = layer.weights.cols;
  std::vector<double> out(n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    double s = layer.bias[j];
    for (std::size_t i = 0; i < n_in; ++i) s += layer.weights.data[i * n_out + j] * in[i];
    out[j] = s;
  }
  return out;
}

inline std::vector<double> probabilities(const humanoid::intent::NetworkParameters& p,
                                         const std::vector<double>& x) {
  auto h1 = dense(p.layers[0], x);
  for (auto& v : h1) v = v > 0 ? v : 0;
  auto h2 = dense(p.layers[1], h1);
  for (auto& v : h2) v = v > 0 ? v : 0;
  auto z = dense(p.layers[2], h2);
  double m = z[0];
  for (double v : z) m = std::max(m, v);
  double s = 0;
  for (auto& v : z) s += (v = std::exp(v - m));
  for (auto& v : z) v /= s;
  return z;
}

inline double loss(const humanoid::intent::NetworkParameters& p, const std::vector<double>& x,
                   std::size_t target) {
  return -std::log(std::max(probabilities(p, x)[target], 1e-12));
}

}  // namespace reference
