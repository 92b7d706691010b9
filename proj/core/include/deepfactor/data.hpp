#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deepfactor/descriptors.hpp"

namespace deepfactor::data {

// One (month, stock) cell: descriptor vector plus the return realized over
// the following month, when known.
struct Observation {
  DescriptorVector descriptors;
  std::optional<double> fwd_return;
};

// Stock x month panel. Months are kept strictly increasing; every
// observation's key is registered.
class PanelDataset {
 public:
  const std::vector<Month>& months() const { return months_; }
  const std::vector<std::string>& stocks() const { return stocks_; }

  bool standardized() const { return standardized_; }
  void set_standardized(bool value) { standardized_ = value; }

  // nullptr when the cell is absent.
  const Observation* find(Month month, const std::string& stock) const;

  // Throws Error naming the key on duplicate insertion.
  void add_observation(Month month, const std::string& stock, Observation obs);

  std::size_t size() const { return observations_.size(); }
  const std::map<std::pair<int, std::string>, Observation>& observations() const {
    return observations_;
  }
  // Mutable access for standardization passes.
  std::map<std::pair<int, std::string>, Observation>& observations() { return observations_; }

  // Month-gap reports and other non-fatal findings from loading.
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 private:
  std::vector<Month> months_;   // sorted unique
  std::vector<std::string> stocks_;  // sorted unique
  std::map<std::pair<int, std::string>, Observation> observations_;
  bool standardized_ = false;
  std::vector<std::string> warnings_;
};

enum class TruthKind { Linear, Nonlinear };

// Synthetic panel recipe. 73 months is the floor for any walk-forward run
// (60 training sets + 12 months of lags + 1 target).
struct SynthSpec {
  int n_stocks = 500;
  int n_months = 120;
  TruthKind ground_truth = TruthKind::Linear;
  double noise_sigma = 0.05;  // return units, monthly
  std::uint64_t seed = 0;
};

inline constexpr int kMinSynthMonths = 73;

// The exported data-generating function g over 80-dim standardized inputs.
// Constants are fixed and published; the generator and all oracles share this
// object.
struct GroundTruth {
  TruthKind kind = TruthKind::Linear;
  // Linear: r = intercept + coefficients . input (sparse coefficients).
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  // Nonlinear: r = c1*tanh(2*value) + c2*momentum*quality - c3*risk^2 using
  // the lag-0 PBR / 12-1MOM / ROE / 60VOL cells.
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;

  double operator()(const Eigen::VectorXd& input) const;
};

GroundTruth ground_truth(TruthKind kind);

// Deterministic synthetic panel: persistent AR(1) descriptors (autocorrelation
// 0.9) standardized cross-sectionally per month; forward returns
// g(input) + noise for every month with full lags. Throws
// std::invalid_argument on an invalid spec.
PanelDataset generate_synthetic(const SynthSpec& spec);

// Panel CSV: header `date,stock_id,<16 descriptor names>,fwd_return`, one row
// per (month, stock), missing cells empty, full round-trip precision, rows
// sorted by (date, stock_id).
void emit_panel(const PanelDataset& panel, const std::filesystem::path& path);
std::string panel_csv(const PanelDataset& panel);

// Loads and validates a panel CSV. Throws ParseError with a line number,
// Error on duplicate rows, Error listing unexpected columns on schema
// mismatch. Month gaps are allowed but reported via warnings().
PanelDataset load_panel(const std::filesystem::path& path, bool assume_standardized = true);
PanelDataset parse_panel_csv(const std::string& text, bool assume_standardized = true);

// Applies cross-sectional standardization to every month of a raw panel.
void standardize_panel(PanelDataset& panel);

}  // namespace deepfactor::data
