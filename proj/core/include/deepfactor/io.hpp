#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "deepfactor/attribution.hpp"
#include "deepfactor/backtest.hpp"
#include "deepfactor/baseline.hpp"
#include "deepfactor/data.hpp"
#include "deepfactor/lrp.hpp"
#include "deepfactor/net.hpp"

// JSON/CSV serialization. All floating-point output uses shortest
// round-trip decimals, so save/load is lossless and repeated runs diff clean.
namespace deepfactor::io {

// Flat network document: {"spec": {...}, "layers": [{"w": [[...]], "b": [...]}]}.
std::string network_json(const net::Network& net);
void save_network(const net::Network& net, const std::filesystem::path& path);
net::Network parse_network_json(const std::string& text);
net::Network load_network(const std::filesystem::path& path);

// {"intercept": ..., "coefficients": [...]}.
std::string linear_model_json(const baseline::LinearModel& model);
void save_linear_model(const baseline::LinearModel& model, const std::filesystem::path& path);
baseline::LinearModel parse_linear_model_json(const std::string& text);
baseline::LinearModel load_linear_model(const std::filesystem::path& path);

// Loads either model document and presents it as a network for relevance
// analysis (a linear model becomes a single affine layer whose intercept is
// the bias).
net::Network load_model_as_network(const std::filesystem::path& path);

// Backtest report: full JSON plus the two CSV views (per-month rows and the
// headline summary whose headers follow the usual metric names).
std::string report_json(const backtest::BacktestReport& report);
void save_report(const backtest::BacktestReport& report, const std::filesystem::path& path);
backtest::BacktestReport parse_report_json(const std::string& text);
backtest::BacktestReport load_report(const std::filesystem::path& path);
std::string report_monthly_csv(const backtest::BacktestReport& report);
std::string report_summary_csv(const backtest::BacktestReport& report);

// Relevance rows: stock_id, predicted, bias_absorbed, then one column per
// (descriptor, lag) cell in sample layout order.
std::string relevance_csv_header();
std::string relevance_csv_row(const std::string& stock_id, const lrp::RelevanceVector& rel);

// Attribution as JSON and as plot-ready (factor, percentage) CSV.
std::string attribution_json(const attribution::FactorAttribution& attribution);
std::string attribution_csv(const attribution::FactorAttribution& attribution);

// Factor correlation table (factor, spearman, kendall), empty cells for
// factors with no usable descriptor.
std::string correlation_json(const attribution::FactorCorrelation& corr);
std::string correlation_csv(const attribution::FactorCorrelation& corr);

// Ground-truth sidecar for synthetic panels.
std::string ground_truth_json(const data::GroundTruth& truth, const data::SynthSpec& spec);

// Shortest-round-trip decimal for a double (the CSV number format).
std::string format_double(double value);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace deepfactor::io
