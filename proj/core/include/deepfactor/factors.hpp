#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deepfactor/descriptors.hpp"
#include "deepfactor/sample.hpp"

namespace deepfactor::data {
class PanelDataset;
}

namespace deepfactor::factors {

// Raw per-stock inputs for descriptor computation. The three series share one
// monthly index starting at first_month; fundamentals are the latest reported
// values.
struct RawStockSeries {
  std::string stock_id;
  Month first_month;
  std::vector<double> monthly_returns;  // simple returns
  std::vector<double> market_returns;   // market risk premium, aligned
  std::vector<double> trading_volume;   // shares per month, aligned

  double net_income = 0.0;
  double net_assets = 0.0;
  double operating_profit = 0.0;
  double total_assets = 0.0;
  double operating_cashflow = 0.0;
  double total_liabilities = 0.0;
  double sales = 0.0;
  double market_value = 0.0;

  // Throws std::invalid_argument if the series lengths disagree.
  void check_aligned() const;
  // Index of as_of in the series; nullopt when outside.
  std::optional<int> index_of(Month as_of) const;
};

// One descriptor value from data available at as_of only. Returns nullopt
// ("missing") when the trailing window is incomplete or a denominator is 0.
// Window conventions: trailing 60-month statistics use returns at
// as_of-59..as_of; 12-1MOM compounds as_of-11..as_of-1 (skipping the latest
// month and requiring 12 months of history); ILLIQ averages |return|/volume
// over the trailing 12 months.
std::optional<double> compute_descriptor(Descriptor kind, const RawStockSeries& series,
                                         Month as_of);

// All 16 descriptors at once; missing entries flagged in the mask.
DescriptorVector compute_descriptors(const RawStockSeries& series, Month as_of);

// Cross-sectional standardization of one month's slice, in place. Per
// descriptor: winsorize at median +- 3 scaled-MAD units (skipped when the MAD
// is 0), then z-score to mean 0 / sample stddev 1 over non-missing entries;
// missing entries become 0 and stay flagged. Throws DegenerateColumnError
// when a descriptor is constant across stocks, std::invalid_argument when
// fewer than 2 non-missing values exist for some descriptor.
void standardize_cross_section(std::vector<DescriptorVector>& slice);

// Input vector without a target, for prediction-time cross-sections.
struct InputRow {
  std::string stock_id;
  Eigen::VectorXd input;
};

struct BuiltInputs {
  std::vector<InputRow> rows;
  int skipped = 0;  // stocks lacking an observation at some lag month
};

struct BuiltSamples {
  std::vector<Sample> samples;
  int skipped = 0;  // incomplete lags or unknown next-month return
};

// Stacks the five lagged descriptor vectors (lags 0,3,6,9,12 months, most
// recent first) into 80-dim inputs for every stock with full history at
// as_of. Requires a standardized panel.
BuiltInputs build_inputs(const data::PanelDataset& panel, Month as_of);

// build_inputs joined with the next-month return; stocks with unknown
// forward return are skipped and counted.
BuiltSamples build_samples(const data::PanelDataset& panel, Month as_of);

}  // namespace deepfactor::factors
