#include "deepfactor/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "deepfactor/error.hpp"
#include "deepfactor/factors.hpp"
#include "deepfactor/io.hpp"
#include "deepfactor/rng.hpp"

namespace deepfactor::data {

const Observation* PanelDataset::find(Month month, const std::string& stock) const {
  auto it = observations_.find({month.ordinal(), stock});
  return it == observations_.end() ? nullptr : &it->second;
}

void PanelDataset::add_observation(Month month, const std::string& stock, Observation obs) {
  auto [it, inserted] = observations_.emplace(std::make_pair(month.ordinal(), stock), std::move(obs));
  if (!inserted) {
    throw Error("duplicate row for (" + month.str() + ", " + stock + ")");
  }
  auto m_it = std::lower_bound(months_.begin(), months_.end(), month);
  if (m_it == months_.end() || *m_it != month) months_.insert(m_it, month);
  auto s_it = std::lower_bound(stocks_.begin(), stocks_.end(), stock);
  if (s_it == stocks_.end() || *s_it != stock) stocks_.insert(s_it, stock);
}

double GroundTruth::operator()(const Eigen::VectorXd& input) const {
  if (input.size() != kInputDim) {
    throw DimensionError("GroundTruth: input length must be " + std::to_string(kInputDim));
  }
  if (kind == TruthKind::Linear) {
    return intercept + coefficients.dot(input);
  }
  const double value = input(sample_cell(0, Descriptor::Pbr));
  const double momentum = input(sample_cell(0, Descriptor::Mom12_1));
  const double quality = input(sample_cell(0, Descriptor::Roe));
  const double risk = input(sample_cell(0, Descriptor::Vol60));
  return c1 * std::tanh(2.0 * value) + c2 * momentum * quality - c3 * risk * risk;
}

GroundTruth ground_truth(TruthKind kind) {
  GroundTruth truth;
  truth.kind = kind;
  if (kind == TruthKind::Linear) {
    truth.coefficients = Eigen::VectorXd::Zero(kInputDim);
    truth.coefficients(sample_cell(0, Descriptor::Pbr)) = 0.020;
    truth.coefficients(sample_cell(0, Descriptor::Mom12_1)) = 0.015;
    truth.coefficients(sample_cell(0, Descriptor::Roe)) = 0.012;
    truth.coefficients(sample_cell(0, Descriptor::Vol60)) = -0.010;
    truth.coefficients(sample_cell(1, Descriptor::Per)) = 0.008;
    truth.coefficients(sample_cell(4, Descriptor::Cap)) = -0.006;
    truth.intercept = 0.004;
  } else {
    // Weighted so the interaction and curvature terms, which no linear fit
    // can rank, carry most of the signal.
    truth.c1 = 0.01;
    truth.c2 = 0.08;
    truth.c3 = 0.04;
  }
  return truth;
}

namespace {

// All synthetic panels start at a fixed anchor month.
const Month kSynthStart(2000, 1);
constexpr double kArCoefficient = 0.9;

std::string synth_stock_id(int index, int n_stocks) {
  int width = 1;
  for (int n = n_stocks; n >= 10; n /= 10) ++width;
  width = std::max(width, 4);
  std::ostringstream os;
  os << 'S';
  std::string digits = std::to_string(index + 1);
  os << std::string(width - digits.size(), '0') << digits;
  return os.str();
}

}  // namespace

PanelDataset generate_synthetic(const SynthSpec& spec) {
  if (spec.n_stocks < 2) {
    throw std::invalid_argument("generate_synthetic: need at least 2 stocks");
  }
  if (spec.n_months < kMinSynthMonths) {
    throw std::invalid_argument("generate_synthetic: n_months must be >= " +
                                std::to_string(kMinSynthMonths) +
                                " (60 training sets + 12 months of lags + 1 target)");
  }
  if (!(spec.noise_sigma >= 0.0)) {
    throw std::invalid_argument("generate_synthetic: noise_sigma must be >= 0");
  }

  Rng rng(spec.seed);
  const int s_count = spec.n_stocks;
  const int t_count = spec.n_months;

  // Persistent AR(1) descriptor paths with unit stationary variance.
  // Generation order (stock, descriptor, month) is part of the seed contract.
  std::vector<std::vector<DescriptorVector>> raw(t_count,
                                                 std::vector<DescriptorVector>(s_count));
  const double innovation_scale = std::sqrt(1.0 - kArCoefficient * kArCoefficient);
  for (int s = 0; s < s_count; ++s) {
    for (int d = 0; d < kNumDescriptors; ++d) {
      double x = rng.normal();
      raw[0][s].values[d] = x;
      for (int t = 1; t < t_count; ++t) {
        x = kArCoefficient * x + innovation_scale * rng.normal();
        raw[t][s].values[d] = x;
      }
    }
  }

  // Cross-sectional standardization per month, as the factors module would
  // apply to real data.
  for (int t = 0; t < t_count; ++t) {
    for (int s = 0; s < s_count; ++s) raw[t][s].as_of = kSynthStart.plus_months(t);
    factors::standardize_cross_section(raw[t]);
  }

  PanelDataset panel;
  panel.set_standardized(true);
  for (int t = 0; t < t_count; ++t) {
    const Month month = kSynthStart.plus_months(t);
    for (int s = 0; s < s_count; ++s) {
      panel.add_observation(month, synth_stock_id(s, s_count), Observation{raw[t][s], std::nullopt});
    }
  }

  // Forward returns wherever the full lag stack exists. Noise is drawn in
  // (month, stock) order after all descriptor draws.
  const GroundTruth truth = ground_truth(spec.ground_truth);
  const int max_lag = kLagMonths.back();
  for (int t = max_lag; t < t_count; ++t) {
    const Month month = kSynthStart.plus_months(t);
    for (int s = 0; s < s_count; ++s) {
      Eigen::VectorXd input(kInputDim);
      for (int li = 0; li < kNumLags; ++li) {
        const auto& obs = raw[t - kLagMonths[li]][s];
        for (int d = 0; d < kNumDescriptors; ++d) {
          input(li * kNumDescriptors + d) = obs.values[d];
        }
      }
      const double noise = spec.noise_sigma > 0.0 ? spec.noise_sigma * rng.normal() : 0.0;
      auto it = panel.observations().find({month.ordinal(), synth_stock_id(s, s_count)});
      it->second.fwd_return = truth(input) + noise;
    }
  }
  return panel;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

std::string expected_header() {
  std::string h = "date,stock_id";
  for (int d = 0; d < kNumDescriptors; ++d) {
    h += ',';
    h += descriptor_name(static_cast<Descriptor>(d));
  }
  h += ",fwd_return";
  return h;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_double_field(const std::string& field, int line_no) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + field + "'");
  }
  return v;
}

}  // namespace

std::string panel_csv(const PanelDataset& panel) {
  std::string out = expected_header();
  out += '\n';
  // std::map iteration is already (month, stock) sorted: the normalized order.
  for (const auto& [key, obs] : panel.observations()) {
    out += Month::from_ordinal(key.first).str();
    out += ',';
    out += key.second;
    for (int d = 0; d < kNumDescriptors; ++d) {
      out += ',';
      if (!obs.descriptors.is_missing(static_cast<Descriptor>(d))) {
        out += io::format_double(obs.descriptors.values[d]);
      }
    }
    out += ',';
    if (obs.fwd_return) out += io::format_double(*obs.fwd_return);
    out += '\n';
  }
  return out;
}

void emit_panel(const PanelDataset& panel, const std::filesystem::path& path) {
  io::write_text_file(path, panel_csv(panel));
}

PanelDataset parse_panel_csv(const std::string& text, bool assume_standardized) {
  PanelDataset panel;
  panel.set_standardized(assume_standardized);

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("line 1: empty panel file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header()) {
    // Report which columns differ so schema drift is obvious.
    auto got = split_csv_line(line);
    auto want = split_csv_line(expected_header());
    std::string unexpected;
    for (const auto& col : got) {
      if (std::find(want.begin(), want.end(), col) == want.end()) {
        unexpected += unexpected.empty() ? "" : ", ";
        unexpected += "'" + col + "'";
      }
    }
    throw Error("panel schema mismatch: unexpected columns [" + unexpected + "], expected '" +
                expected_header() + "'");
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 2 + kNumDescriptors + 1) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(2 + kNumDescriptors + 1) + " fields, got " +
                       std::to_string(fields.size()));
    }
    Month month;
    try {
      month = Month::parse(fields[0]);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string& stock = fields[1];
    if (stock.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty stock_id");
    }

    Observation obs;
    obs.descriptors.as_of = month;
    for (int d = 0; d < kNumDescriptors; ++d) {
      const std::string& f = fields[2 + d];
      if (f.empty()) {
        obs.descriptors.set_missing(static_cast<Descriptor>(d));
      } else {
        obs.descriptors.values[d] = parse_double_field(f, line_no);
      }
    }
    const std::string& fwd = fields[2 + kNumDescriptors];
    if (!fwd.empty()) obs.fwd_return = parse_double_field(fwd, line_no);

    panel.add_observation(month, stock, std::move(obs));
  }

  // Gaps are allowed but worth flagging.
  const auto& months = panel.months();
  for (std::size_t i = 1; i < months.size(); ++i) {
    if (months[i].diff(months[i - 1]) > 1) {
      panel.add_warning("month gap between " + months[i - 1].str() + " and " + months[i].str());
    }
  }
  return panel;
}

PanelDataset load_panel(const std::filesystem::path& path, bool assume_standardized) {
  return parse_panel_csv(io::read_text_file(path), assume_standardized);
}

void standardize_panel(PanelDataset& panel) {
  if (panel.standardized()) {
    throw std::invalid_argument("standardize_panel: panel is already standardized");
  }
  for (const Month& month : panel.months()) {
    std::vector<std::string> present;
    std::vector<DescriptorVector> slice;
    for (const auto& stock : panel.stocks()) {
      if (const Observation* obs = panel.find(month, stock)) {
        present.push_back(stock);
        slice.push_back(obs->descriptors);
      }
    }
    factors::standardize_cross_section(slice);
    for (std::size_t i = 0; i < present.size(); ++i) {
      panel.observations().at({month.ordinal(), present[i]}).descriptors = slice[i];
    }
  }
  panel.set_standardized(true);
}

}  // namespace deepfactor::data
