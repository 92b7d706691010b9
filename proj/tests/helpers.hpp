#pragma once

// Shared test fixtures: deterministic random networks, vectors and panels.

#include <string>
#include <vector>

#include <Eigen/Core>

#include "deepfactor/net.hpp"
#include "deepfactor/rng.hpp"

namespace testutil {

inline Eigen::VectorXd random_vector(deepfactor::Rng& rng, int n, double lo = -1.0,
                                     double hi = 1.0) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

inline Eigen::MatrixXd random_matrix(deepfactor::Rng& rng, int rows, int cols, double lo = -1.0,
                                     double hi = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform(lo, hi);
  }
  return m;
}

// He-initialized network with randomized biases, so bias handling is
// exercised too.
inline deepfactor::net::Network random_network(std::uint64_t seed, int input_dim,
                                               std::vector<int> hidden, int output_dim = 1,
                                               double bias_scale = 0.1) {
  deepfactor::net::NetworkSpec spec;
  spec.input_dim = input_dim;
  spec.hidden_dims = std::move(hidden);
  spec.output_dim = output_dim;
  spec.seed = seed;
  deepfactor::net::Network net = deepfactor::net::init_network(spec);
  if (bias_scale != 0.0) {
    deepfactor::Rng rng(seed ^ 0xb1a5b1a5ULL);
    for (auto& layer : net.layers()) {
      for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
        layer.bias(i) = rng.uniform(-bias_scale, bias_scale);
      }
    }
  }
  return net;
}

inline bool networks_identical(const deepfactor::net::Network& a,
                               const deepfactor::net::Network& b) {
  if (a.depth() != b.depth()) return false;
  for (int l = 0; l < a.depth(); ++l) {
    if (a.layers()[l].weights != b.layers()[l].weights) return false;
    if (a.layers()[l].bias != b.layers()[l].bias) return false;
  }
  return true;
}

}  // namespace testutil
