#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace balcast {

/// Calendar date with day resolution, stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}

  /// Throws DataError when the triple is not a valid calendar date.
  static Date from_ymd(int year, unsigned month, unsigned day);
  static constexpr Date from_serial(int serial) {
    return Date(std::chrono::sys_days(std::chrono::days(serial)));
  }

  /// YYYY-MM-DD
  static Date parse_iso(std::string_view text);
  /// M/D/YYYY (leading zeros optional)
  static Date parse_mdy(std::string_view text);
  /// YYMMDD with a 19xx century, as in the PKDD'99 files.
  static Date parse_yymmdd(std::string_view text);
  /// Accepts either ISO or M/D/YYYY.
  static Date parse(std::string_view text);

  [[nodiscard]] std::string iso() const;
  [[nodiscard]] std::string mdy() const;

  [[nodiscard]] constexpr int serial() const { return static_cast<int>(days_.time_since_epoch().count()); }
  [[nodiscard]] constexpr std::chrono::sys_days sys_days() const { return days_; }
  [[nodiscard]] std::chrono::year_month_day ymd() const { return std::chrono::year_month_day(days_); }

  /// 1 = Monday ... 7 = Sunday.
  [[nodiscard]] unsigned iso_weekday() const;
  /// The Sunday closing this date's ISO week (the date itself if it is a Sunday).
  [[nodiscard]] Date week_end() const;

  /// Calendar-month addition; the day clamps to the end of the target month.
  [[nodiscard]] Date add_months(int months) const;

  constexpr Date operator+(int days) const { return from_serial(serial() + days); }
  constexpr Date operator-(int days) const { return from_serial(serial() - days); }
  constexpr int operator-(Date other) const { return serial() - other.serial(); }
  constexpr Date& operator+=(int days) { return *this = *this + days; }

  constexpr auto operator<=>(const Date&) const = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace balcast
