#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace balcast {

/// Exact currency amount in integer cents.
class Cents {
 public:
  constexpr Cents() = default;
  constexpr explicit Cents(std::int64_t cents) : value_(cents) {}

  /// Parses decimal text such as "-1000", "20.5", "-0.01", "700.00".
  /// More than two fractional digits are accepted only when the extra digits are zero.
  static Cents parse(std::string_view text);
  /// Rounds half away from zero.
  static Cents from_double(double amount);

  [[nodiscard]] constexpr std::int64_t value() const { return value_; }
  [[nodiscard]] constexpr double to_double() const { return static_cast<double>(value_) / 100.0; }
  /// Shortest decimal form: "20", "-0.01", "12.5".
  [[nodiscard]] std::string str() const;

  constexpr Cents operator-() const { return Cents(-value_); }
  constexpr Cents operator+(Cents o) const { return Cents(value_ + o.value_); }
  constexpr Cents operator-(Cents o) const { return Cents(value_ - o.value_); }
  constexpr Cents& operator+=(Cents o) { value_ += o.value_; return *this; }
  constexpr Cents& operator-=(Cents o) { value_ -= o.value_; return *this; }

  constexpr auto operator<=>(const Cents&) const = default;

 private:
  std::int64_t value_ = 0;
};

}  // namespace balcast
