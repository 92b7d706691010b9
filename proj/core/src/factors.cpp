#include "deepfactor/factors.hpp"

#include <algorithm>
#include <cmath>

#include "deepfactor/data.hpp"
#include "deepfactor/error.hpp"

namespace deepfactor::factors {

namespace {

constexpr int kLongWindow = 60;   // volatility, beta, skew, 60MOM
constexpr int kIlliqWindow = 12;  // trailing |return|/volume average

double mean_of(const double* begin, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += begin[i];
  return s / n;
}

// Sample standard deviation (n - 1 denominator).
double sample_stddev(const double* begin, int n) {
  const double m = mean_of(begin, n);
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = begin[i] - m;
    ss += d * d;
  }
  return std::sqrt(ss / (n - 1));
}

// Exact degenerate-window detection; accumulated means make the computed
// variance of a constant window a nonzero rounding residue.
bool constant_window(const double* begin, int n) {
  for (int i = 1; i < n; ++i) {
    if (begin[i] != begin[0]) return false;
  }
  return true;
}

double median_inplace(std::vector<double>& v) {
  const std::size_t n = v.size();
  auto mid = v.begin() + n / 2;
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

std::optional<double> ratio(double numerator, double denominator) {
  if (denominator == 0.0) return std::nullopt;
  return numerator / denominator;
}

// Compounded return over returns[first..last] inclusive.
double compound(const std::vector<double>& returns, int first, int last) {
  double growth = 1.0;
  for (int i = first; i <= last; ++i) growth *= 1.0 + returns[i];
  return growth - 1.0;
}

}  // namespace

void RawStockSeries::check_aligned() const {
  if (market_returns.size() != monthly_returns.size() ||
      trading_volume.size() != monthly_returns.size()) {
    throw std::invalid_argument("RawStockSeries '" + stock_id +
                                "': series must share one monthly index");
  }
}

std::optional<int> RawStockSeries::index_of(Month as_of) const {
  const int t = as_of.diff(first_month);
  if (t < 0 || t >= static_cast<int>(monthly_returns.size())) return std::nullopt;
  return t;
}

std::optional<double> compute_descriptor(Descriptor kind, const RawStockSeries& series,
                                         Month as_of) {
  series.check_aligned();
  const auto idx = series.index_of(as_of);
  if (!idx) throw std::invalid_argument("compute_descriptor: as_of outside the series index");
  const int t = *idx;
  const auto& r = series.monthly_returns;

  switch (kind) {
    case Descriptor::Vol60: {
      if (t < kLongWindow - 1) return std::nullopt;
      const double* y = r.data() + t - kLongWindow + 1;
      if (constant_window(y, kLongWindow)) return 0.0;
      return sample_stddev(y, kLongWindow);
    }
    case Descriptor::Beta: {
      if (t < kLongWindow - 1) return std::nullopt;
      const double* x = series.market_returns.data() + t - kLongWindow + 1;
      const double* y = r.data() + t - kLongWindow + 1;
      if (constant_window(x, kLongWindow)) return std::nullopt;
      const double mx = mean_of(x, kLongWindow);
      const double my = mean_of(y, kLongWindow);
      double sxx = 0.0, sxy = 0.0;
      for (int i = 0; i < kLongWindow; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
      }
      return sxy / sxx;
    }
    case Descriptor::Skew: {
      if (t < kLongWindow - 1) return std::nullopt;
      const double* y = r.data() + t - kLongWindow + 1;
      // zero-variance window: skewness undefined
      if (constant_window(y, kLongWindow)) return std::nullopt;
      const double m = mean_of(y, kLongWindow);
      double m2 = 0.0, m3 = 0.0;
      for (int i = 0; i < kLongWindow; ++i) {
        const double d = y[i] - m;
        m2 += d * d;
        m3 += d * d * d;
      }
      m2 /= kLongWindow;
      m3 /= kLongWindow;
      return m3 / std::pow(m2, 1.5);
    }
    case Descriptor::Roe:
      return ratio(series.net_income, series.net_assets);
    case Descriptor::Roa:
      return ratio(series.operating_profit, series.total_assets);
    case Descriptor::Accruals:
      return series.operating_cashflow - series.operating_profit;
    case Descriptor::Leverage:
      return ratio(series.total_liabilities, series.total_assets);
    case Descriptor::Mom12_1: {
      if (t < 11) return std::nullopt;  // full 12-month window required
      return compound(r, t - 11, t - 1);
    }
    case Descriptor::Mom1:
      return r[t];
    case Descriptor::Mom60: {
      if (t < kLongWindow - 1) return std::nullopt;
      return compound(r, t - kLongWindow + 1, t);
    }
    case Descriptor::Psr:
      return ratio(series.sales, series.market_value);
    case Descriptor::Per:
      return ratio(series.net_income, series.market_value);
    case Descriptor::Pbr:
      return ratio(series.net_assets, series.market_value);
    case Descriptor::Pcfr:
      return ratio(series.operating_cashflow, series.market_value);
    case Descriptor::Cap: {
      if (series.market_value <= 0.0) return std::nullopt;
      return std::log(series.market_value);
    }
    case Descriptor::Illiq: {
      if (t < kIlliqWindow - 1) return std::nullopt;
      double acc = 0.0;
      for (int i = t - kIlliqWindow + 1; i <= t; ++i) {
        if (series.trading_volume[i] == 0.0) return std::nullopt;
        acc += std::abs(r[i]) / series.trading_volume[i];
      }
      return acc / kIlliqWindow;
    }
  }
  throw std::invalid_argument("compute_descriptor: unknown descriptor");
}

DescriptorVector compute_descriptors(const RawStockSeries& series, Month as_of) {
  DescriptorVector out;
  out.as_of = as_of;
  for (int d = 0; d < kNumDescriptors; ++d) {
    const auto kind = static_cast<Descriptor>(d);
    if (auto v = compute_descriptor(kind, series, as_of)) {
      out.set(kind, *v);
    } else {
      out.set(kind, 0.0);
      out.set_missing(kind);
    }
  }
  return out;
}

void standardize_cross_section(std::vector<DescriptorVector>& slice) {
  for (int d = 0; d < kNumDescriptors; ++d) {
    const auto kind = static_cast<Descriptor>(d);
    std::vector<std::size_t> present;
    std::vector<double> values;
    present.reserve(slice.size());
    values.reserve(slice.size());
    for (std::size_t s = 0; s < slice.size(); ++s) {
      if (!slice[s].is_missing(kind)) {
        present.push_back(s);
        values.push_back(slice[s].value(kind));
      }
    }
    if (values.size() < 2) {
      throw std::invalid_argument(std::string("standardize_cross_section: descriptor ") +
                                  std::string(descriptor_name(kind)) +
                                  " has fewer than 2 non-missing values");
    }

    // Winsorize at median +- 3 scaled-MAD units. A zero MAD (majority of
    // values identical) would clip everything to the median, so clipping is
    // skipped in that case.
    std::vector<double> work = values;
    const double med = median_inplace(work);
    for (std::size_t i = 0; i < values.size(); ++i) work[i] = std::abs(values[i] - med);
    const double mad = median_inplace(work);
    if (mad > 0.0) {
      const double half_width = 3.0 * 1.4826 * mad;
      const double lo = med - half_width;
      const double hi = med + half_width;
      for (double& v : values) v = std::clamp(v, lo, hi);
    }

    const double mean = mean_of(values.data(), static_cast<int>(values.size()));
    const double sd = sample_stddev(values.data(), static_cast<int>(values.size()));
    if (sd == 0.0) {
      throw DegenerateColumnError(std::string("standardize_cross_section: descriptor ") +
                                  std::string(descriptor_name(kind)) +
                                  " is constant across the cross-section");
    }
    for (std::size_t i = 0; i < present.size(); ++i) {
      slice[present[i]].set(kind, (values[i] - mean) / sd);
    }
    // Missing entries: impute 0 (the cross-sectional mean), flag kept.
    for (auto& row : slice) {
      if (row.is_missing(kind)) row.set(kind, 0.0);
    }
  }
}

namespace {

// Collects the five lagged descriptor vectors for one stock; nullopt when an
// observation is absent at some lag month.
std::optional<Eigen::VectorXd> stacked_input(const data::PanelDataset& panel,
                                             const std::string& stock, Month as_of) {
  Eigen::VectorXd input(kInputDim);
  for (int li = 0; li < kNumLags; ++li) {
    const Month lag_month = as_of.plus_months(-kLagMonths[li]);
    const data::Observation* obs = panel.find(lag_month, stock);
    if (obs == nullptr) return std::nullopt;
    for (int d = 0; d < kNumDescriptors; ++d) {
      input(sample_cell(li, static_cast<Descriptor>(d))) = obs->descriptors.values[d];
    }
  }
  return input;
}

}  // namespace

BuiltInputs build_inputs(const data::PanelDataset& panel, Month as_of) {
  if (!panel.standardized()) {
    throw std::invalid_argument("build_inputs: panel must be standardized");
  }
  BuiltInputs out;
  for (const auto& stock : panel.stocks()) {
    auto input = stacked_input(panel, stock, as_of);
    if (!input) {
      ++out.skipped;
      continue;
    }
    out.rows.push_back(InputRow{stock, std::move(*input)});
  }
  return out;
}

BuiltSamples build_samples(const data::PanelDataset& panel, Month as_of) {
  if (!panel.standardized()) {
    throw std::invalid_argument("build_samples: panel must be standardized");
  }
  BuiltSamples out;
  for (const auto& stock : panel.stocks()) {
    const data::Observation* at = panel.find(as_of, stock);
    if (at == nullptr || !at->fwd_return.has_value()) {
      ++out.skipped;
      continue;
    }
    auto input = stacked_input(panel, stock, as_of);
    if (!input) {
      ++out.skipped;
      continue;
    }
    out.samples.push_back(Sample{stock, as_of, std::move(*input), *at->fwd_return});
  }
  return out;
}

}  // namespace deepfactor::factors
