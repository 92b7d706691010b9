#include "deepfactor/lrp.hpp"

#include <cmath>
#include <string>

#include "deepfactor/error.hpp"

namespace deepfactor::lrp {

PropagatedRelevance propagate_layer(const Eigen::MatrixXd& weights,
                                    const Eigen::VectorXd& bias,
                                    const Eigen::VectorXd& lower_activations,
                                    const LayerRelevance& upper_relevance,
                                    double stabilizer) {
  if (weights.cols() != lower_activations.size()) {
    throw DimensionError("propagate_layer: weights cols != lower activation length");
  }
  if (weights.rows() != upper_relevance.size() || weights.rows() != bias.size()) {
    throw DimensionError("propagate_layer: weights rows != upper relevance / bias length");
  }
  if (!(stabilizer >= 0.0)) {
    throw std::invalid_argument("propagate_layer: stabilizer must be >= 0");
  }
  if (!upper_relevance.allFinite()) {
    throw std::invalid_argument("propagate_layer: non-finite upper relevance");
  }

  PropagatedRelevance out;
  out.lower = Eigen::VectorXd::Zero(lower_activations.size());
  for (Eigen::Index j = 0; j < weights.rows(); ++j) {
    const double rel = upper_relevance(j);
    Eigen::ArrayXd messages = weights.row(j).transpose().array() * lower_activations.array();
    const double denom_raw = messages.sum() + bias(j);
    if (denom_raw == 0.0 && stabilizer == 0.0) {
      throw ZeroDenominatorError(
          "propagate_layer: denominator of upper neuron " + std::to_string(j) +
          " is exactly 0; pass stabilizer > 0");
    }
    const double denom = denom_raw + (denom_raw >= 0.0 ? stabilizer : -stabilizer);
    const Eigen::ArrayXd shares = messages * (rel / denom);
    out.lower.array() += shares;
    // Bias share plus stabilizer destruction, accounted as the exact
    // complement of what reached the lower layer.
    out.bias_leak += rel - shares.sum();
  }
  return out;
}

RelevanceVector relevance(const net::Network& net, const net::ForwardTrace& trace,
                          double stabilizer) {
  const int depth = net.depth();
  if (static_cast<int>(trace.pre_activations.size()) != depth ||
      static_cast<int>(trace.activations.size()) != depth + 1) {
    throw DimensionError("relevance: trace does not match network depth");
  }

  // Eq-style initialization: the decomposed quantity is the raw prediction.
  LayerRelevance rel = trace.activations.back();
  double bias_absorbed = 0.0;
  for (int l = depth - 1; l >= 0; --l) {
    PropagatedRelevance step = propagate_layer(net.layers()[l].weights, net.layers()[l].bias,
                                               trace.activations[l], rel, stabilizer);
    rel = std::move(step.lower);
    bias_absorbed += step.bias_leak;
  }

  RelevanceVector result;
  result.per_input = std::move(rel);
  result.predicted = trace.activations.back().sum();
  result.bias_absorbed = bias_absorbed;
  return result;
}

}  // namespace deepfactor::lrp
