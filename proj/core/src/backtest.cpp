#include "deepfactor/backtest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "deepfactor/baseline.hpp"
#include "deepfactor/error.hpp"
#include "deepfactor/factors.hpp"
#include "deepfactor/rng.hpp"

namespace deepfactor::backtest {

std::vector<int> hidden_dims_for(ModelKind kind, const std::vector<int>& custom) {
  switch (kind) {
    case ModelKind::Deep1:
      return {80, 50, 10};
    case ModelKind::Deep2:
      return {80, 80, 50, 50, 10, 10};
    case ModelKind::CustomDeep:
      if (custom.empty()) {
        throw std::invalid_argument("hidden_dims_for: CustomDeep needs explicit hidden dims");
      }
      return custom;
    case ModelKind::Linear:
      throw std::invalid_argument("hidden_dims_for: linear model has no hidden layers");
  }
  throw std::invalid_argument("hidden_dims_for: unknown model kind");
}

std::vector<int> quantile_assign(const std::vector<std::string>& stock_ids,
                                 const std::vector<double>& predictions, int q) {
  if (q < 2) throw std::invalid_argument("quantile_assign: need q >= 2");
  const int n = static_cast<int>(stock_ids.size());
  if (static_cast<int>(predictions.size()) != n) {
    throw DimensionError("quantile_assign: ids and predictions differ in length");
  }
  if (n < q) {
    throw Error("quantile_assign: " + std::to_string(n) + " stocks cannot fill " +
                std::to_string(q) + " buckets");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (predictions[a] != predictions[b]) return predictions[a] > predictions[b];
    return stock_ids[a] < stock_ids[b];  // deterministic tie rule
  });

  // Sizes as equal as possible, remainder to the top buckets first.
  std::vector<int> buckets(n);
  const int base = n / q;
  const int remainder = n % q;
  int pos = 0;
  for (int b = 1; b <= q; ++b) {
    const int size = base + (b <= remainder ? 1 : 0);
    for (int i = 0; i < size; ++i) buckets[order[pos++]] = b;
  }
  return buckets;
}

double long_short_return(const MonthResult& month) {
  if (month.bucket.empty()) throw std::invalid_argument("long_short_return: buckets not assigned");
  const int q = *std::max_element(month.bucket.begin(), month.bucket.end());
  double top_sum = 0.0, bottom_sum = 0.0;
  int top_n = 0, bottom_n = 0;
  for (std::size_t i = 0; i < month.bucket.size(); ++i) {
    if (month.bucket[i] == 1) {
      top_sum += month.realized[i];
      ++top_n;
    } else if (month.bucket[i] == q) {
      bottom_sum += month.realized[i];
      ++bottom_n;
    }
  }
  return top_sum / top_n - bottom_sum / bottom_n;
}

BacktestReport summarize(std::vector<MonthResult> months) {
  if (months.empty()) throw std::invalid_argument("summarize: need at least 1 month");

  BacktestReport report;
  for (auto& m : months) {
    if (!m.stock_ids.empty()) {
      const int n = static_cast<int>(m.stock_ids.size());
      double abs_sum = 0.0, sq_sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const double e = m.predicted[i] - m.realized[i];
        abs_sum += std::abs(e);
        sq_sum += e * e;
      }
      m.mae = abs_sum / n;
      m.rmse = std::sqrt(sq_sum / n);
      m.long_short_return = long_short_return(m);
    }
  }

  const int n_months = static_cast<int>(months.size());
  double mae_sum = 0.0, rmse_sum = 0.0, ls_sum = 0.0;
  for (const auto& m : months) {
    mae_sum += m.mae;
    rmse_sum += m.rmse;
    ls_sum += m.long_short_return;
  }
  report.mae = mae_sum / n_months;
  report.rmse = rmse_sum / n_months;
  const double ls_mean = ls_sum / n_months;
  report.ann_return = 12.0 * ls_mean;

  if (n_months >= 2) {
    double ss = 0.0;
    for (const auto& m : months) {
      const double d = m.long_short_return - ls_mean;
      ss += d * d;
    }
    const double ann_vol = std::sqrt(12.0) * std::sqrt(ss / (n_months - 1));
    report.ann_vol = ann_vol;
    if (ann_vol == 0.0) {
      throw ZeroVolatilityError("summarize: zero long/short volatility, Sharpe undefined");
    }
    report.sharpe = report.ann_return / ann_vol;
  }

  for (const auto& m : months) {
    for (std::size_t i = 0; i < m.stock_ids.size(); ++i) {
      report.residuals.push_back(m.predicted[i] - m.realized[i]);
    }
  }
  report.months = std::move(months);
  return report;
}

namespace {

// Model fit + predict for one walk-forward month, seeded by the month itself
// so results do not depend on the evaluation range or thread schedule.
std::vector<double> fit_and_predict(const WalkForwardConfig& config,
                                    const std::vector<Sample>& train_samples,
                                    const std::vector<factors::InputRow>& predict_rows,
                                    Month month) {
  std::vector<double> predictions;
  predictions.reserve(predict_rows.size());
  if (config.model_kind == ModelKind::Linear) {
    const baseline::LinearModel model = baseline::ols_fit(train_samples, config.ridge_lambda);
    for (const auto& row : predict_rows) {
      predictions.push_back(baseline::linear_predict(model, row.input));
    }
    return predictions;
  }

  net::NetworkSpec spec;
  spec.input_dim = static_cast<int>(train_samples.front().input.size());
  spec.hidden_dims = hidden_dims_for(config.model_kind, config.custom_hidden);
  spec.output_dim = 1;
  spec.seed = mix_seed(config.seed, static_cast<std::uint64_t>(month.ordinal()) * 2);
  net::TrainConfig train_config = config.train;
  train_config.seed = mix_seed(config.seed, static_cast<std::uint64_t>(month.ordinal()) * 2 + 1);

  const net::Network model = net::train(net::init_network(spec), train_samples, train_config);
  for (const auto& row : predict_rows) {
    predictions.push_back(net::forward(model, row.input).output);
  }
  return predictions;
}

}  // namespace

BacktestReport walk_forward(const data::PanelDataset& panel, const WalkForwardConfig& config,
                            int n_jobs) {
  if (config.train_window < 1) {
    throw std::invalid_argument("walk_forward: train_window must be >= 1");
  }
  if (config.quantiles < 2) throw std::invalid_argument("walk_forward: quantiles must be >= 2");
  if (config.start_month > config.end_month) {
    throw std::invalid_argument("walk_forward: start_month must be <= end_month");
  }
  if (n_jobs < 1) throw std::invalid_argument("walk_forward: n_jobs must be >= 1");

  const auto& months = panel.months();
  // Sample sets for every panel month, index-aligned with panel.months().
  // Built once, shared read-only by all workers.
  std::vector<factors::BuiltSamples> sample_sets(months.size());
  std::vector<bool> has_samples(months.size(), false);
  for (std::size_t i = 0; i < months.size(); ++i) {
    sample_sets[i] = factors::build_samples(panel, months[i]);
    has_samples[i] = !sample_sets[i].samples.empty();
  }

  // First feasible month: enough non-empty sample months before it and a
  // scorable cross-section at it.
  std::vector<int> prediction_indices;
  std::optional<Month> first_feasible;
  int sets_before = 0;
  for (std::size_t i = 0; i < months.size(); ++i) {
    const bool feasible = sets_before >= config.train_window && has_samples[i];
    if (feasible && !first_feasible) first_feasible = months[i];
    if (feasible && months[i] >= config.start_month && months[i] <= config.end_month) {
      prediction_indices.push_back(static_cast<int>(i));
    }
    if (has_samples[i]) ++sets_before;
  }
  if (!first_feasible || config.start_month < *first_feasible) {
    throw InsufficientHistoryError(
        "walk_forward: insufficient history before " + config.start_month.str() +
            (first_feasible ? "; first feasible month is " + first_feasible->str()
                            : "; no feasible month in this panel"),
        first_feasible ? first_feasible->str() : "");
  }
  if (prediction_indices.empty()) {
    throw Error("walk_forward: no feasible prediction months in [" +
                config.start_month.str() + ", " + config.end_month.str() + "]");
  }

  std::vector<MonthResult> results(prediction_indices.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= prediction_indices.size()) return;
      try {
        const int idx = prediction_indices[slot];
        const Month month = months[idx];

        // The train_window most recent non-empty sample months strictly
        // before the prediction month.
        std::vector<int> train_months;
        for (int j = idx - 1; j >= 0 && static_cast<int>(train_months.size()) < config.train_window;
             --j) {
          if (has_samples[j]) train_months.push_back(j);
        }
        std::reverse(train_months.begin(), train_months.end());
        std::vector<Sample> train_samples;
        for (int j : train_months) {
          train_samples.insert(train_samples.end(), sample_sets[j].samples.begin(),
                               sample_sets[j].samples.end());
        }

        const auto& month_samples = sample_sets[idx].samples;
        std::vector<factors::InputRow> rows;
        rows.reserve(month_samples.size());
        for (const auto& s : month_samples) rows.push_back({s.stock_id, s.input});

        MonthResult result;
        result.month = month;
        result.predicted = fit_and_predict(config, train_samples, rows, month);
        for (const auto& s : month_samples) {
          result.stock_ids.push_back(s.stock_id);
          result.realized.push_back(s.target);
        }
        result.bucket = quantile_assign(result.stock_ids, result.predicted, config.quantiles);
        results[slot] = std::move(result);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int workers = std::min<int>(n_jobs, static_cast<int>(prediction_indices.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  return summarize(std::move(results));
}

}  // namespace deepfactor::backtest
