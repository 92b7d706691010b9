// Microbenchmarks for the hot paths: forward/backward passes, training
// epochs, relevance propagation, the OLS solve, and panel generation.

#include <benchmark/benchmark.h>

#include <vector>

#include "deepfactor/backtest.hpp"
#include "deepfactor/baseline.hpp"
#include "deepfactor/data.hpp"
#include "deepfactor/factors.hpp"
#include "deepfactor/lrp.hpp"
#include "deepfactor/net.hpp"
#include "deepfactor/rng.hpp"

using namespace deepfactor;

namespace {

net::Network paper_network(backtest::ModelKind kind) {
  net::NetworkSpec spec;
  spec.input_dim = kInputDim;
  spec.hidden_dims = backtest::hidden_dims_for(kind);
  spec.seed = 42;
  return net::init_network(spec);
}

Eigen::VectorXd standard_input(std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd x(kInputDim);
  for (int i = 0; i < kInputDim; ++i) x(i) = rng.normal();
  return x;
}

std::vector<Sample> training_samples(int n) {
  Rng rng(7);
  std::vector<Sample> samples(n);
  for (auto& s : samples) {
    s.input.resize(kInputDim);
    for (int i = 0; i < kInputDim; ++i) s.input(i) = rng.normal();
    s.target = 0.05 * rng.normal();
  }
  return samples;
}

void BM_ForwardDeep1(benchmark::State& state) {
  const net::Network network = paper_network(backtest::ModelKind::Deep1);
  const Eigen::VectorXd x = standard_input(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net::forward(network, x).output);
  }
}
BENCHMARK(BM_ForwardDeep1);

void BM_BackwardDeep1(benchmark::State& state) {
  const net::Network network = paper_network(backtest::ModelKind::Deep1);
  const Eigen::VectorXd x = standard_input(2);
  const net::ForwardTrace trace = net::forward(network, x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net::backward(network, trace, 0.01));
  }
}
BENCHMARK(BM_BackwardDeep1);

void BM_TrainEpochDeep1(benchmark::State& state) {
  const net::Network network = paper_network(backtest::ModelKind::Deep1);
  const auto samples = training_samples(2048);
  net::TrainConfig config;
  config.epochs = 1;
  config.batch_size = 128;
  for (auto _ : state) {
    benchmark::DoNotOptimize(net::train(network, samples, config));
  }
  state.SetItemsProcessed(state.iterations() * samples.size());
}
BENCHMARK(BM_TrainEpochDeep1)->Unit(benchmark::kMillisecond);

void BM_RelevanceDeep1(benchmark::State& state) {
  const net::Network network = paper_network(backtest::ModelKind::Deep1);
  const Eigen::VectorXd x = standard_input(3);
  const net::ForwardTrace trace = net::forward(network, x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lrp::relevance(network, trace));
  }
}
BENCHMARK(BM_RelevanceDeep1);

void BM_RelevanceDeep2(benchmark::State& state) {
  const net::Network network = paper_network(backtest::ModelKind::Deep2);
  const Eigen::VectorXd x = standard_input(4);
  const net::ForwardTrace trace = net::forward(network, x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lrp::relevance(network, trace));
  }
}
BENCHMARK(BM_RelevanceDeep2);

void BM_OlsFit(benchmark::State& state) {
  const auto samples = training_samples(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(baseline::ols_fit(samples, 0.0));
  }
}
BENCHMARK(BM_OlsFit)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_QuantileAssign(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(9);
  std::vector<std::string> ids(n);
  std::vector<double> predictions(n);
  for (int i = 0; i < n; ++i) {
    ids[i] = "S" + std::to_string(100000 + i);
    predictions[i] = rng.normal();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(backtest::quantile_assign(ids, predictions, 5));
  }
}
BENCHMARK(BM_QuantileAssign)->Arg(500)->Arg(2000);

void BM_GenerateSynthetic(benchmark::State& state) {
  data::SynthSpec spec;
  spec.n_stocks = 100;
  spec.n_months = 80;
  spec.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(data::generate_synthetic(spec));
  }
}
BENCHMARK(BM_GenerateSynthetic)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
