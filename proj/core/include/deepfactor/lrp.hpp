#pragma once

#include <Eigen/Core>

#include "deepfactor/net.hpp"

namespace deepfactor::lrp {

// Relevance scores for one layer's neurons.
using LayerRelevance = Eigen::VectorXd;

inline constexpr double kDefaultStabilizer = 1e-9;

// Per-input decomposition of one prediction. The conservation audit is
// sum(per_input) + bias_absorbed == predicted (within 1e-8 at 64-bit).
struct RelevanceVector {
  Eigen::VectorXd per_input;
  double predicted = 0.0;
  double bias_absorbed = 0.0;
};

struct PropagatedRelevance {
  LayerRelevance lower;
  double bias_leak = 0.0;
};

// Redistributes upper-layer relevance onto the lower layer through one dense
// layer: message z_ij = w_ij * z_i, denominator d_j = sum_k z_kj + b_j,
// share_i = z_ij / (d_j + stabilizer * sign(d_j)) * R_j. bias_leak collects
// the bias share of each denominator plus whatever the stabilizer destroys,
// so lower.sum() + bias_leak == upper.sum() up to rounding. Throws
// ZeroDenominatorError when stabilizer is 0 and some d_j is exactly 0.
PropagatedRelevance propagate_layer(const Eigen::MatrixXd& weights,
                                    const Eigen::VectorXd& bias,
                                    const Eigen::VectorXd& lower_activations,
                                    const LayerRelevance& upper_relevance,
                                    double stabilizer);

// Top-to-bottom relevance propagation over a forward trace. The top relevance
// is the raw (signed) prediction; bias_absorbed accumulates every layer's
// bias leak.
RelevanceVector relevance(const net::Network& net, const net::ForwardTrace& trace,
                          double stabilizer = kDefaultStabilizer);

}  // namespace deepfactor::lrp
