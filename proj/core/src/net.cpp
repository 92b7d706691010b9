#include "deepfactor/net.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "deepfactor/error.hpp"
#include "deepfactor/rng.hpp"

namespace deepfactor::net {

namespace {

void check_spec(const NetworkSpec& spec, bool require_hidden) {
  if (spec.input_dim <= 0) throw std::invalid_argument("NetworkSpec: input_dim must be positive");
  if (spec.output_dim <= 0) throw std::invalid_argument("NetworkSpec: output_dim must be positive");
  if (require_hidden && spec.hidden_dims.empty()) {
    throw std::invalid_argument("NetworkSpec: hidden_dims must be non-empty");
  }
  for (int h : spec.hidden_dims) {
    if (h <= 0) throw std::invalid_argument("NetworkSpec: hidden dims must be positive");
  }
}

void check_train_config(const TrainConfig& c) {
  if (!(c.learning_rate > 0)) throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
  if (!(c.beta1 > 0 && c.beta1 < 1)) throw std::invalid_argument("TrainConfig: beta1 must be in (0,1)");
  if (!(c.beta2 > 0 && c.beta2 < 1)) throw std::invalid_argument("TrainConfig: beta2 must be in (0,1)");
  if (!(c.epsilon_adam > 0)) throw std::invalid_argument("TrainConfig: epsilon_adam must be > 0");
  if (c.epochs <= 0) throw std::invalid_argument("TrainConfig: epochs must be positive");
  if (c.batch_size <= 0) throw std::invalid_argument("TrainConfig: batch_size must be positive");
}

}  // namespace

Network::Network(NetworkSpec spec, std::vector<Layer> layers)
    : spec_(std::move(spec)), layers_(std::move(layers)) {
  check_spec(spec_, /*require_hidden=*/false);
  validate();
}

void Network::validate() const {
  if (layers_.empty()) throw DimensionError("Network: no layers");
  const std::size_t n_hidden = spec_.hidden_dims.size();
  if (layers_.size() != n_hidden + 1) {
    throw DimensionError("Network: layer count does not match spec");
  }
  int fan_in = spec_.input_dim;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const int fan_out =
        l < n_hidden ? spec_.hidden_dims[l] : spec_.output_dim;
    const auto& layer = layers_[l];
    if (layer.weights.rows() != fan_out || layer.weights.cols() != fan_in ||
        layer.bias.size() != fan_out) {
      std::ostringstream msg;
      msg << "Network: layer " << l << " shape mismatch, want " << fan_out << "x" << fan_in
          << ", got " << layer.weights.rows() << "x" << layer.weights.cols() << " with bias "
          << layer.bias.size();
      throw DimensionError(msg.str());
    }
    if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
      throw Error("Network: non-finite parameter in layer " + std::to_string(l));
    }
    fan_in = fan_out;
  }
}

Network init_network(const NetworkSpec& spec) {
  check_spec(spec, /*require_hidden=*/true);
  Rng rng(spec.seed);
  std::vector<Layer> layers;
  layers.reserve(spec.hidden_dims.size() + 1);
  int fan_in = spec.input_dim;
  for (std::size_t l = 0; l <= spec.hidden_dims.size(); ++l) {
    const int fan_out =
        l < spec.hidden_dims.size() ? spec.hidden_dims[l] : spec.output_dim;
    Layer layer;
    layer.weights.resize(fan_out, fan_in);
    const double bound = std::sqrt(6.0 / fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        layer.weights(r, c) = rng.uniform(-bound, bound);
      }
    }
    layer.bias = Eigen::VectorXd::Zero(fan_out);
    layers.push_back(std::move(layer));
    fan_in = fan_out;
  }
  return Network(spec, std::move(layers));
}

Network make_affine_network(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias) {
  if (weights.rows() != bias.size()) {
    throw DimensionError("make_affine_network: weight rows must match bias length");
  }
  NetworkSpec spec;
  spec.input_dim = static_cast<int>(weights.cols());
  spec.output_dim = static_cast<int>(weights.rows());
  return Network(spec, {Layer{weights, bias}});
}

ForwardTrace forward(const Network& net, const Eigen::VectorXd& x) {
  if (x.size() != net.input_dim()) {
    throw DimensionError("forward: input length " + std::to_string(x.size()) +
                         " does not match input_dim " + std::to_string(net.input_dim()));
  }
  if (!x.allFinite()) throw std::invalid_argument("forward: non-finite input");

  ForwardTrace trace;
  trace.activations.reserve(net.depth() + 1);
  trace.pre_activations.reserve(net.depth());
  trace.activations.push_back(x);
  for (int l = 0; l < net.depth(); ++l) {
    const auto& layer = net.layers()[l];
    Eigen::VectorXd z = layer.weights * trace.activations.back() + layer.bias;
    trace.pre_activations.push_back(z);
    if (l + 1 < net.depth()) {
      trace.activations.push_back(z.cwiseMax(0.0));  // ReLU hidden
    } else {
      trace.activations.push_back(std::move(z));  // identity output
    }
  }
  trace.output = trace.activations.back()(0);
  return trace;
}

double loss_mse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& targets) {
  if (predictions.size() == 0) throw std::invalid_argument("loss_mse: empty input");
  if (predictions.size() != targets.size()) {
    throw std::invalid_argument("loss_mse: length mismatch");
  }
  return (predictions - targets).squaredNorm() / static_cast<double>(predictions.size());
}

Gradients backward(const Network& net, const ForwardTrace& trace, double target) {
  const int depth = net.depth();
  if (static_cast<int>(trace.pre_activations.size()) != depth ||
      static_cast<int>(trace.activations.size()) != depth + 1) {
    throw DimensionError("backward: trace does not match network depth");
  }
  for (int l = 0; l < depth; ++l) {
    if (trace.pre_activations[l].size() != net.layers()[l].weights.rows() ||
        trace.activations[l].size() != net.layers()[l].weights.cols()) {
      throw DimensionError("backward: trace shapes do not match network layer " +
                           std::to_string(l));
    }
  }

  Gradients grads;
  grads.weights.resize(depth);
  grads.bias.resize(depth);

  // d(output - target)^2 / d pre_activation of the output layer.
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(net.output_dim());
  delta(0) = 2.0 * (trace.output - target);

  for (int l = depth - 1; l >= 0; --l) {
    grads.weights[l] = delta * trace.activations[l].transpose();
    grads.bias[l] = delta;
    if (l > 0) {
      Eigen::VectorXd upstream = net.layers()[l].weights.transpose() * delta;
      // ReLU subgradient, 0 at exactly 0.
      delta = (trace.pre_activations[l - 1].array() > 0.0)
                  .select(upstream.array(), 0.0)
                  .matrix();
    }
  }
  return grads;
}

AdamState::AdamState(const Network& net) {
  for (const auto& layer : net.layers()) {
    m_weights.push_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
    v_weights.push_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
    m_bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
    v_bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
}

void adam_step(Network& net, const Gradients& grads, AdamState& state,
               const TrainConfig& config) {
  if (grads.weights.size() != net.layers().size()) {
    throw DimensionError("adam_step: gradient layer count mismatch");
  }
  state.step_count += 1;
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step_count));
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    auto& layer = net.layers()[l];
    auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
      m = config.beta1 * m + (1.0 - config.beta1) * grad;
      v = config.beta2 * v.array() + (1.0 - config.beta2) * grad.array().square();
      param.array() -= config.learning_rate * (m.array() / bc1) /
                       ((v.array() / bc2).sqrt() + config.epsilon_adam);
    };
    update(layer.weights, grads.weights[l], state.m_weights[l], state.v_weights[l]);
    update(layer.bias, grads.bias[l], state.m_bias[l], state.v_bias[l]);
  }
}

namespace {

// Row-major batch forward over all layers; Z[l] holds pre-activations,
// A[l] the layer inputs (A[0] = batch rows).
struct BatchTrace {
  std::vector<Eigen::MatrixXd> pre;  // depth entries, batch x fan_out
  std::vector<Eigen::MatrixXd> act;  // depth + 1 entries, batch x width
};

BatchTrace batch_forward(const Network& net, const Eigen::MatrixXd& batch) {
  BatchTrace t;
  t.act.reserve(net.depth() + 1);
  t.pre.reserve(net.depth());
  t.act.push_back(batch);
  for (int l = 0; l < net.depth(); ++l) {
    const auto& layer = net.layers()[l];
    Eigen::MatrixXd z = t.act.back() * layer.weights.transpose();
    z.rowwise() += layer.bias.transpose();
    t.pre.push_back(z);
    if (l + 1 < net.depth()) {
      t.act.push_back(z.cwiseMax(0.0));
    } else {
      t.act.push_back(std::move(z));
    }
  }
  return t;
}

}  // namespace

Network train(const Network& net, const std::vector<Sample>& samples,
              const TrainConfig& config) {
  check_train_config(config);
  if (samples.empty()) throw std::invalid_argument("train: empty sample list");
  if (net.output_dim() != 1) {
    throw std::invalid_argument("train: scalar targets need output_dim 1");
  }
  const int n = static_cast<int>(samples.size());
  const int dim = net.input_dim();
  Eigen::MatrixXd inputs(n, dim);
  Eigen::VectorXd targets(n);
  for (int i = 0; i < n; ++i) {
    if (samples[i].input.size() != dim) {
      throw DimensionError("train: sample " + std::to_string(i) + " input length " +
                           std::to_string(samples[i].input.size()) + " != input_dim " +
                           std::to_string(dim));
    }
    inputs.row(i) = samples[i].input.transpose();
    targets(i) = samples[i].target;
  }
  if (!inputs.allFinite() || !targets.allFinite()) {
    throw std::invalid_argument("train: non-finite sample data");
  }

  Network model = net;
  AdamState state(model);
  Rng rng(config.seed);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  const int batch_size = std::min(config.batch_size, n);
  Eigen::MatrixXd batch(batch_size, dim);
  Eigen::VectorXd batch_targets(batch_size);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (int begin = 0; begin < n; begin += batch_size) {
      const int b = std::min(batch_size, n - begin);
      for (int i = 0; i < b; ++i) {
        batch.row(i) = inputs.row(order[begin + i]);
        batch_targets(i) = targets(order[begin + i]);
      }
      auto rows = batch.topRows(b);
      BatchTrace trace = batch_forward(model, rows);
      Eigen::VectorXd out = trace.act.back().col(0);
      Eigen::VectorXd err = out - batch_targets.head(b);
      const double loss = err.squaredNorm() / b;
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "train: loss became non-finite (" << loss << ") at epoch " << epoch
            << ", batch offset " << begin << "; lower the learning rate or rescale inputs";
        throw NonFiniteLossError(msg.str());
      }

      // Batch gradient of the mean per-sample squared error.
      Gradients grads;
      grads.weights.resize(model.depth());
      grads.bias.resize(model.depth());
      Eigen::MatrixXd delta = (2.0 / b) * err;
      for (int l = model.depth() - 1; l >= 0; --l) {
        grads.weights[l] = delta.transpose() * trace.act[l];
        grads.bias[l] = delta.colwise().sum().transpose();
        if (l > 0) {
          Eigen::MatrixXd upstream = delta * model.layers()[l].weights;
          delta = (trace.pre[l - 1].array() > 0.0).select(upstream.array(), 0.0).matrix();
        }
      }
      adam_step(model, grads, state, config);
    }
  }
  model.validate();
  return model;
}

}  // namespace deepfactor::net
