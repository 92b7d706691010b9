#include "deepfactor/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "deepfactor/error.hpp"

namespace deepfactor::attribution {

FactorAttribution aggregate_stock(const lrp::RelevanceVector& relevance,
                                  const FactorMap& factor_map) {
  if (relevance.per_input.size() != kInputDim) {
    throw DimensionError("aggregate_stock: relevance length " +
                         std::to_string(relevance.per_input.size()) + " != " +
                         std::to_string(kInputDim));
  }
  std::array<double, kNumFactors> mass{};
  for (int cell = 0; cell < kInputDim; ++cell) {
    const Factor f = factor_map.factor_of(cell_descriptor(cell));
    mass[static_cast<int>(f)] += std::abs(relevance.per_input(cell));
  }
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (total == 0.0) {
    throw DegenerateTotalError("aggregate_stock: total relevance mass is 0");
  }
  FactorAttribution out;
  for (int f = 0; f < kNumFactors; ++f) out.per_factor[f] = 100.0 * mass[f] / total;
  return out;
}

FactorAttribution aggregate_portfolio(const std::vector<lrp::RelevanceVector>& relevances,
                                      const FactorMap& factor_map) {
  if (relevances.empty()) {
    throw std::invalid_argument("aggregate_portfolio: empty relevance list");
  }
  const Eigen::Index dim = relevances.front().per_input.size();
  lrp::RelevanceVector mean;
  mean.per_input = Eigen::VectorXd::Zero(dim);
  for (const auto& r : relevances) {
    if (r.per_input.size() != dim) {
      throw DimensionError("aggregate_portfolio: relevance lengths differ");
    }
    mean.per_input += r.per_input;
    mean.predicted += r.predicted;
    mean.bias_absorbed += r.bias_absorbed;
  }
  const double n = static_cast<double>(relevances.size());
  mean.per_input /= n;
  mean.predicted /= n;
  mean.bias_absorbed /= n;
  return aggregate_stock(mean, factor_map);
}

namespace {

// Average ranks, ties sharing the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = 0.5 * (i + j) + 1.0;  // 1-based average rank
    for (int k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double pearson_or_nan(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nan("");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionError("spearman: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("spearman: need at least 2 pairs");
  const double r = pearson_or_nan(average_ranks(x), average_ranks(y));
  if (std::isnan(r)) return std::nullopt;
  return r;
}

std::optional<double> kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionError("kendall_tau_b: length mismatch");
  const int n = static_cast<int>(x.size());
  if (n < 2) throw std::invalid_argument("kendall_tau_b: need at least 2 pairs");
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) {
        ++ties_x;
        ++ties_y;
      } else if (dx == 0.0) {
        ++ties_x;
      } else if (dy == 0.0) {
        ++ties_y;
      } else if ((dx > 0.0) == (dy > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const long long n0 = static_cast<long long>(n) * (n - 1) / 2;
  const double denom = std::sqrt(static_cast<double>(n0 - ties_x)) *
                       std::sqrt(static_cast<double>(n0 - ties_y));
  if (denom == 0.0) return std::nullopt;
  return (concordant - discordant) / denom;
}

FactorCorrelation factor_correlations(const std::vector<double>& predictions,
                                      const std::vector<DescriptorVector>& descriptors,
                                      const FactorMap& factor_map) {
  if (predictions.size() != descriptors.size()) {
    throw DimensionError("factor_correlations: predictions and descriptors differ in length");
  }
  if (predictions.size() < 3) {
    throw std::invalid_argument("factor_correlations: need at least 3 stocks");
  }

  FactorCorrelation out;
  std::array<double, kNumFactors> spearman_sum{};
  std::array<double, kNumFactors> kendall_sum{};
  std::array<int, kNumFactors> counted{};

  for (int d = 0; d < kNumDescriptors; ++d) {
    const auto kind = static_cast<Descriptor>(d);
    std::vector<double> xs, ys;
    for (std::size_t s = 0; s < descriptors.size(); ++s) {
      if (descriptors[s].is_missing(kind)) continue;
      xs.push_back(descriptors[s].value(kind));
      ys.push_back(predictions[s]);
    }
    std::optional<double> sp, kt;
    if (xs.size() >= 3) {
      sp = spearman(xs, ys);
      kt = kendall_tau_b(xs, ys);
    }
    if (!sp || !kt) {
      out.excluded.emplace_back(descriptor_name(kind));
      continue;
    }
    const int f = static_cast<int>(factor_map.factor_of(kind));
    spearman_sum[f] += *sp;
    kendall_sum[f] += *kt;
    ++counted[f];
  }

  for (int f = 0; f < kNumFactors; ++f) {
    if (counted[f] > 0) {
      out.spearman[f] = spearman_sum[f] / counted[f];
      out.kendall[f] = kendall_sum[f] / counted[f];
    }
  }
  return out;
}

}  // namespace deepfactor::attribution
