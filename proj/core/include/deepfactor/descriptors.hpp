#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "deepfactor/month.hpp"

namespace deepfactor {

// The 16 descriptors, in the fixed column order used everywhere (CSV columns,
// DescriptorVector entries, sample layout).
enum class Descriptor : int {
  Vol60 = 0,   // 60VOL
  Beta,        // BETA
  Skew,        // SKEW
  Roe,         // ROE
  Roa,         // ROA
  Accruals,    // ACCRUALS
  Leverage,    // LEVERAGE
  Mom12_1,     // 12-1MOM
  Mom1,        // 1MOM
  Mom60,       // 60MOM
  Psr,         // PSR
  Per,         // PER
  Pbr,         // PBR
  Pcfr,        // PCFR
  Cap,         // CAP
  Illiq,       // ILLIQ
};

enum class Factor : int { Risk = 0, Quality, Momentum, Value, Size };

inline constexpr int kNumDescriptors = 16;
inline constexpr int kNumFactors = 5;
inline constexpr int kNumLags = 5;
inline constexpr std::array<int, kNumLags> kLagMonths = {0, 3, 6, 9, 12};
// One model input: 5 lagged descriptor blocks of 16.
inline constexpr int kInputDim = kNumDescriptors * kNumLags;

std::string_view descriptor_name(Descriptor d);
std::string_view factor_name(Factor f);
// Throws std::invalid_argument on unknown names.
Descriptor descriptor_from_name(std::string_view name);
Factor factor_from_name(std::string_view name);

// Input-cell layout: lag-0 block first, then lags 3, 6, 9, 12; within a
// block, descriptor column order. sample_cell and its inverse are the
// (lag, descriptor) <-> flat-index bijection.
inline constexpr int sample_cell(int lag_index, Descriptor d) {
  return lag_index * kNumDescriptors + static_cast<int>(d);
}
inline constexpr int cell_lag_index(int cell) { return cell / kNumDescriptors; }
inline constexpr Descriptor cell_descriptor(int cell) {
  return static_cast<Descriptor>(cell % kNumDescriptors);
}

// Descriptor -> factor assignment. The default map groups 3/4/3/4/2 into
// Risk, Quality, Momentum, Value, Size.
class FactorMap {
 public:
  FactorMap();  // default grouping

  Factor factor_of(Descriptor d) const { return map_[static_cast<int>(d)]; }
  int group_size(Factor f) const;

 private:
  std::array<Factor, kNumDescriptors> map_;
};

// One stock's descriptor values at one month. Entries are finite or flagged
// missing; missing entries hold 0 after standardization-imputation.
struct DescriptorVector {
  std::array<double, kNumDescriptors> values{};
  std::uint16_t missing_mask = 0;
  Month as_of;

  bool is_missing(Descriptor d) const {
    return (missing_mask >> static_cast<int>(d)) & 1u;
  }
  void set_missing(Descriptor d) { missing_mask |= (1u << static_cast<int>(d)); }
  void clear_missing(Descriptor d) {
    missing_mask &= static_cast<std::uint16_t>(~(1u << static_cast<int>(d)));
  }
  double value(Descriptor d) const { return values[static_cast<int>(d)]; }
  void set(Descriptor d, double v) { values[static_cast<int>(d)] = v; }
};

}  // namespace deepfactor
