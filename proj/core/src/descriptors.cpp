#include "deepfactor/descriptors.hpp"

#include <stdexcept>

namespace deepfactor {

namespace {

constexpr std::array<std::string_view, kNumDescriptors> kDescriptorNames = {
    "60VOL", "BETA", "SKEW",   "ROE", "ROA", "ACCRUALS", "LEVERAGE", "12-1MOM",
    "1MOM",  "60MOM", "PSR",   "PER", "PBR", "PCFR",     "CAP",      "ILLIQ"};

constexpr std::array<std::string_view, kNumFactors> kFactorNames = {
    "Risk", "Quality", "Momentum", "Value", "Size"};

}  // namespace

std::string_view descriptor_name(Descriptor d) {
  return kDescriptorNames[static_cast<int>(d)];
}

std::string_view factor_name(Factor f) { return kFactorNames[static_cast<int>(f)]; }

Descriptor descriptor_from_name(std::string_view name) {
  for (int i = 0; i < kNumDescriptors; ++i) {
    if (kDescriptorNames[i] == name) return static_cast<Descriptor>(i);
  }
  throw std::invalid_argument("unknown descriptor name: " + std::string(name));
}

Factor factor_from_name(std::string_view name) {
  for (int i = 0; i < kNumFactors; ++i) {
    if (kFactorNames[i] == name) return static_cast<Factor>(i);
  }
  throw std::invalid_argument("unknown factor name: " + std::string(name));
}

FactorMap::FactorMap() {
  auto assign = [&](Descriptor d, Factor f) { map_[static_cast<int>(d)] = f; };
  assign(Descriptor::Vol60, Factor::Risk);
  assign(Descriptor::Beta, Factor::Risk);
  assign(Descriptor::Skew, Factor::Risk);
  assign(Descriptor::Roe, Factor::Quality);
  assign(Descriptor::Roa, Factor::Quality);
  assign(Descriptor::Accruals, Factor::Quality);
  assign(Descriptor::Leverage, Factor::Quality);
  assign(Descriptor::Mom12_1, Factor::Momentum);
  assign(Descriptor::Mom1, Factor::Momentum);
  assign(Descriptor::Mom60, Factor::Momentum);
  assign(Descriptor::Psr, Factor::Value);
  assign(Descriptor::Per, Factor::Value);
  assign(Descriptor::Pbr, Factor::Value);
  assign(Descriptor::Pcfr, Factor::Value);
  assign(Descriptor::Cap, Factor::Size);
  assign(Descriptor::Illiq, Factor::Size);
}

int FactorMap::group_size(Factor f) const {
  int n = 0;
  for (auto g : map_) {
    if (g == f) ++n;
  }
  return n;
}

}  // namespace deepfactor
