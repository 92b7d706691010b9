#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "deepfactor/sample.hpp"

namespace deepfactor::net {

enum class Activation { ReLU };

// Architecture of a dense feed-forward regression network. Hidden layers use
// the configured activation; the output layer is always identity (returns are
// signed).
struct NetworkSpec {
  int input_dim = 0;
  std::vector<int> hidden_dims;
  int output_dim = 1;
  Activation activation = Activation::ReLU;
  std::uint64_t seed = 0;
};

struct Layer {
  Eigen::MatrixXd weights;  // rows = fan-out, cols = fan-in
  Eigen::VectorXd bias;     // length = fan-out
};

class Network {
 public:
  Network() = default;
  // Validates shape chaining against the spec; spec.hidden_dims may be empty
  // here (a bare affine map), unlike init_network which requires at least one
  // hidden layer.
  Network(NetworkSpec spec, std::vector<Layer> layers);

  const NetworkSpec& spec() const { return spec_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& layers() { return layers_; }
  int depth() const { return static_cast<int>(layers_.size()); }
  int input_dim() const { return spec_.input_dim; }
  int output_dim() const { return spec_.output_dim; }

  // Re-checks dimension chaining and parameter finiteness; throws
  // DimensionError / Error. Called on construction and after training.
  void validate() const;

 private:
  NetworkSpec spec_;
  std::vector<Layer> layers_;
};

// Per-layer intermediate values of one forward pass.
// activations[0] is the input; activations[l + 1] applies layer l's
// activation to pre_activations[l]; the last activation equals the last
// pre-activation (identity output).
struct ForwardTrace {
  std::vector<Eigen::VectorXd> pre_activations;
  std::vector<Eigen::VectorXd> activations;
  double output = 0.0;  // first component of the final layer (output_dim 1)
};

// Parameter-shaped gradient container.
struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> bias;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon_adam = 1e-8;
  int epochs = 100;
  int batch_size = 64;
  std::uint64_t seed = 0;  // mini-batch shuffling
};

// Adam first/second moment estimates, one slot per parameter.
struct AdamState {
  explicit AdamState(const Network& net);
  std::vector<Eigen::MatrixXd> m_weights, v_weights;
  std::vector<Eigen::VectorXd> m_bias, v_bias;
  long step_count = 0;
};

// He-uniform weights (bound sqrt(6/fan_in)), zero biases; deterministic for a
// fixed spec.seed. Requires a non-empty hidden stack and positive dims.
Network init_network(const NetworkSpec& spec);

// Affine map y = W x + b as a hidden-layer-free Network; used by relevance
// analysis of linear models.
Network make_affine_network(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias);

// Pure forward pass; throws DimensionError if x does not match input_dim or
// std::invalid_argument on non-finite input.
ForwardTrace forward(const Network& net, const Eigen::VectorXd& x);

// Mean of squared differences. Throws std::invalid_argument when empty or on
// length mismatch.
double loss_mse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& targets);

// Gradient of the per-sample squared error (output - target)^2 with respect
// to every parameter. ReLU subgradient at exactly 0 is taken as 0.
Gradients backward(const Network& net, const ForwardTrace& trace, double target);

// One Adam update in place. Shared by train() and exposed for tests (a zero
// gradient must leave parameters unchanged).
void adam_step(Network& net, const Gradients& grads, AdamState& state,
               const TrainConfig& config);

// Mini-batch Adam on a private copy of net; deterministic for fixed seeds.
// Batches are formed from a fresh shuffle each epoch; the batch loss is the
// mean per-sample squared error. Throws NonFiniteLossError if the loss leaves
// the reals, std::invalid_argument on empty samples or bad config.
Network train(const Network& net, const std::vector<Sample>& samples,
              const TrainConfig& config);

}  // namespace deepfactor::net
