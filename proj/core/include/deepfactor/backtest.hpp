#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deepfactor/data.hpp"
#include "deepfactor/month.hpp"
#include "deepfactor/net.hpp"

namespace deepfactor::backtest {

enum class ModelKind { Deep1, Deep2, Linear, CustomDeep };

// Table-style architectures: Deep1 = {80,50,10}, Deep2 = {80,80,50,50,10,10}.
std::vector<int> hidden_dims_for(ModelKind kind, const std::vector<int>& custom = {});

struct WalkForwardConfig {
  int train_window = 60;  // months of training sets
  Month start_month;
  Month end_month;
  ModelKind model_kind = ModelKind::Linear;
  std::vector<int> custom_hidden;  // CustomDeep only
  int quantiles = 5;
  std::uint64_t seed = 0;
  net::TrainConfig train;     // deep models
  double ridge_lambda = 0.0;  // linear model
};

// One prediction month: aligned per-stock arrays sorted by stock id.
struct MonthResult {
  Month month;
  std::vector<std::string> stock_ids;
  std::vector<double> predicted;
  std::vector<double> realized;
  std::vector<int> bucket;  // 1 = top quantile
  double long_short_return = 0.0;
  double mae = 0.0;
  double rmse = 0.0;
};

struct BacktestReport {
  std::vector<MonthResult> months;
  double mae = 0.0;   // monthly MAE averaged over months
  double rmse = 0.0;  // monthly RMSE averaged over months
  double ann_return = 0.0;
  std::optional<double> ann_vol;  // needs >= 2 months
  std::optional<double> sharpe;   // needs ann_vol
  std::vector<double> residuals;  // predicted - realized, month-major
};

// Buckets 1..q by descending prediction; equal sizes with the remainder going
// to the top buckets; ties broken by ascending stock id. Returns one bucket
// per input position. Throws Error when fewer than q stocks.
std::vector<int> quantile_assign(const std::vector<std::string>& stock_ids,
                                 const std::vector<double>& predictions, int q);

// Equal-weight mean realized return of bucket 1 minus bucket q.
double long_short_return(const MonthResult& month);

// Aggregates monthly results: ann_return = 12 * mean, ann_vol = sqrt(12) *
// sample stddev, sharpe = ann_return / ann_vol (throws ZeroVolatilityError
// when ann_vol is exactly 0). MAE/RMSE are averaged per month then across
// months.
BacktestReport summarize(std::vector<MonthResult> months);

// Rolling evaluation: for each month m in [start, end], train a fresh model
// on the train_window most recent monthly sample sets strictly before m
// (deterministically seeded per month), predict the cross-section at m and
// form quantile portfolios. No information from panel rows dated >= m enters
// training. n_jobs > 1 evaluates months in parallel with identical output.
BacktestReport walk_forward(const data::PanelDataset& panel, const WalkForwardConfig& config,
                            int n_jobs = 1);

}  // namespace deepfactor::backtest
