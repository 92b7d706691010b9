#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "deepfactor/descriptors.hpp"
#include "deepfactor/lrp.hpp"

namespace deepfactor::attribution {

// Factor-level share of one prediction's relevance, in percent. Entries are
// non-negative and sum to 100.
struct FactorAttribution {
  std::array<double, kNumFactors> per_factor{};
  std::string scope;  // stock id or "portfolio:Q1"

  double pct(Factor f) const { return per_factor[static_cast<int>(f)]; }
};

// Per-factor rank correlations between descriptors and predictions. A factor
// entry is empty when every member descriptor was constant.
struct FactorCorrelation {
  std::array<std::optional<double>, kNumFactors> spearman;
  std::array<std::optional<double>, kNumFactors> kendall;
  std::vector<std::string> excluded;  // constant descriptors, by name
};

// Sums |relevance| over every (descriptor, lag) cell of each factor and
// normalizes to percentages. Throws DimensionError unless the relevance
// length is kInputDim, DegenerateTotalError when total mass is 0.
FactorAttribution aggregate_stock(const lrp::RelevanceVector& relevance,
                                  const FactorMap& factor_map);

// Element-wise mean of the relevance vectors, then aggregate_stock.
FactorAttribution aggregate_portfolio(const std::vector<lrp::RelevanceVector>& relevances,
                                      const FactorMap& factor_map);

// Spearman rank and Kendall tau-b correlation of each descriptor against the
// predictions, averaged per factor. Constant descriptors are excluded from
// their factor's mean and reported. Requires >= 3 stocks.
FactorCorrelation factor_correlations(const std::vector<double>& predictions,
                                      const std::vector<DescriptorVector>& descriptors,
                                      const FactorMap& factor_map);

// Rank-based correlation primitives (average ranks for ties; tau-b tie
// correction). Return nullopt when either input is constant.
std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y);
std::optional<double> kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace deepfactor::attribution
