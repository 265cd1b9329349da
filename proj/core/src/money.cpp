#include "balcast/money.hpp"

#include <cmath>
#include <limits>

#include "balcast/error.hpp"

namespace balcast {

Cents Cents::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '"' || s.back() == '\r')) s.remove_suffix(1);
  auto fail = [&] { return DataError("invalid amount '" + std::string(text) + "'"); };
  if (s.empty()) throw fail();

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw fail();

  std::int64_t whole = 0;
  std::int64_t frac = 0;
  int frac_digits = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (char c : s) {
    if (c == '.' && !seen_point) {
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') throw fail();
    any_digit = true;
    const int digit = c - '0';
    if (!seen_point) {
      if (whole > (std::numeric_limits<std::int64_t>::max() / 100 - digit) / 10) throw fail();
      whole = whole * 10 + digit;
    } else if (frac_digits < 2) {
      frac = frac * 10 + digit;
      ++frac_digits;
    } else if (digit != 0) {
      throw fail();
    }
  }
  if (!any_digit) throw fail();
  if (frac_digits == 1) frac *= 10;
  const std::int64_t cents = whole * 100 + frac;
  return Cents(negative ? -cents : cents);
}

Cents Cents::from_double(double amount) {
  if (!std::isfinite(amount)) throw DataError("non-finite amount");
  return Cents(static_cast<std::int64_t>(std::llround(amount * 100.0)));
}

std::string Cents::str() const {
  const bool negative = value_ < 0;
  const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-(value_ + 1)) + 1 : static_cast<std::uint64_t>(value_);
  std::string out = negative ? "-" : "";
  out += std::to_string(mag / 100);
  const auto frac = mag % 100;
  if (frac != 0) {
    out += '.';
    out += static_cast<char>('0' + frac / 10);
    if (frac % 10 != 0) out += static_cast<char>('0' + frac % 10);
  }
  return out;
}

}  // namespace balcast
