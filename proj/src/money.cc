#include "infomarket/money.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace infomarket {

Money Money::FromDouble(double units) {
  if (!std::isfinite(units))
    throw std::invalid_argument("money amount must be finite");
  return Money(std::llround(units * kMicrosPerUnit));
}

std::optional<Money> Money::Parse(std::string_view text) {
  if (text.empty())
    return std::nullopt;
  bool negative = false;
  size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  int64_t whole = 0;
  size_t whole_digits = 0;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
    if (whole > (INT64_MAX / kMicrosPerUnit) / 10)
      return std::nullopt;
    whole = whole * 10 + (text[i] - '0');
    ++i;
    ++whole_digits;
  }
  int64_t frac = 0;
  size_t frac_digits = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
      if (frac_digits == 6)
        return std::nullopt;
      frac = frac * 10 + (text[i] - '0');
      ++i;
      ++frac_digits;
    }
  }
  if (i != text.size() || (whole_digits == 0 && frac_digits == 0))
    return std::nullopt;
  for (size_t d = frac_digits; d < 6; ++d)
    frac *= 10;
  int64_t micros = whole * kMicrosPerUnit + frac;
  return Money(negative ? -micros : micros);
}

std::string Money::ToString() const {
  int64_t abs = micros_ < 0 ? -micros_ : micros_;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%s%lld.%06lld", micros_ < 0 ? "-" : "",
                static_cast<long long>(abs / kMicrosPerUnit),
                static_cast<long long>(abs % kMicrosPerUnit));
  return buf;
}

}  // namespace infomarket
