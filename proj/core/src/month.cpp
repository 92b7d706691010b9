#include "deepfactor/month.hpp"

#include <cctype>
#include <charconv>
#include <ostream>

#include "deepfactor/error.hpp"

namespace deepfactor {

Month::Month(int year, int month) {
  if (year < 0 || month < 1 || month > 12) {
    throw std::invalid_argument("Month: year must be >= 0 and month in 1..12, got " +
                                std::to_string(year) + "/" + std::to_string(month));
  }
  ordinal_ = year * 12 + (month - 1);
}

Month Month::parse(const std::string& text) {
  auto fail = [&] { throw ParseError("expected YYYY-MM, got '" + text + "'"); };
  if (text.size() != 7 || text[4] != '-') fail();
  for (int i : {0, 1, 2, 3, 5, 6}) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) fail();
  }
  int year = 0, month = 0;
  std::from_chars(text.data(), text.data() + 4, year);
  std::from_chars(text.data() + 5, text.data() + 7, month);
  if (month < 1 || month > 12) fail();
  return Month(year, month);
}

Month Month::from_ordinal(int ordinal) {
  if (ordinal < 0) throw std::invalid_argument("Month: negative ordinal");
  Month m;
  m.ordinal_ = ordinal;
  return m;
}

std::string Month::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year(), month());
  return buf;
}

std::ostream& operator<<(std::ostream& os, const Month& m) { return os << m.str(); }

}  // namespace deepfactor
