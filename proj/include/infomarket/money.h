#ifndef INFOMARKET_MONEY_H_
#define INFOMARKET_MONEY_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace infomarket {

// Fixed-point amount in millionths of a currency unit. All ledger arithmetic
// is integral, so sums and equalities are exact.
class Money {
 public:
  static constexpr int64_t kMicrosPerUnit = 1'000'000;

  constexpr Money() = default;
  static constexpr Money FromMicros(int64_t micros) { return Money(micros); }
  // Rounds to the nearest micro-unit (half away from zero).
  static Money FromDouble(double units);
  static constexpr Money Zero() { return Money(0); }

  // Parses "12", "-0.5", "3.141593". At most six fractional digits.
  static std::optional<Money> Parse(std::string_view text);

  constexpr int64_t micros() const { return micros_; }
  double ToDouble() const {
    return static_cast<double>(micros_) / kMicrosPerUnit;
  }
  // Always six fractional digits, e.g. "1.500000".
  std::string ToString() const;

  constexpr Money operator+(Money o) const { return Money(micros_ + o.micros_); }
  constexpr Money operator-(Money o) const { return Money(micros_ - o.micros_); }
  constexpr Money operator-() const { return Money(-micros_); }
  constexpr Money operator*(int64_t n) const { return Money(micros_ * n); }
  Money& operator+=(Money o) {
    micros_ += o.micros_;
    return *this;
  }
  Money& operator-=(Money o) {
    micros_ -= o.micros_;
    return *this;
  }

  constexpr auto operator<=>(const Money&) const = default;

 private:
  constexpr explicit Money(int64_t micros) : micros_(micros) {}
  int64_t micros_ = 0;
};

}  // namespace infomarket

#endif  // INFOMARKET_MONEY_H_
