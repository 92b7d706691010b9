#pragma once

#include <compare>
#include <iosfwd>
#include <string>

namespace deepfactor {

// Calendar month, the panel's time key. Parsed from / formatted as "YYYY-MM".
class Month {
 public:
  Month() = default;
  Month(int year, int month);

  // Throws deepfactor::ParseError on anything that is not strict YYYY-MM.
  static Month parse(const std::string& text);

  int year() const { return ordinal_ / 12; }
  int month() const { return ordinal_ % 12 + 1; }

  // Months since 0000-01; the panel index key.
  int ordinal() const { return ordinal_; }
  static Month from_ordinal(int ordinal);

  std::string str() const;

  Month plus_months(int n) const { return from_ordinal(ordinal_ + n); }
  // this - other, in months.
  int diff(const Month& other) const { return ordinal_ - other.ordinal_; }

  auto operator<=>(const Month&) const = default;

 private:
  int ordinal_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Month& m);

}  // namespace deepfactor
