#include "balcast/date.hpp"

#include <charconv>
#include <cstdio>

#include "balcast/error.hpp"

namespace balcast {

namespace {

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw DataError("invalid date '" + std::string(whole) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '"' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) {
    throw DataError("invalid calendar date " + std::to_string(year) + "-" + std::to_string(month) +
                    "-" + std::to_string(day));
  }
  return Date(std::chrono::sys_days(ymd));
}

Date Date::parse_iso(std::string_view text) {
  const auto s = trim(text);
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
    throw DataError("invalid ISO date '" + std::string(text) + "'");
  }
  return from_ymd(parse_int(s.substr(0, 4), text), static_cast<unsigned>(parse_int(s.substr(5, 2), text)),
                  static_cast<unsigned>(parse_int(s.substr(8, 2), text)));
}

Date Date::parse_mdy(std::string_view text) {
  const auto s = trim(text);
  const auto a = s.find('/');
  const auto b = a == std::string_view::npos ? a : s.find('/', a + 1);
  if (a == std::string_view::npos || b == std::string_view::npos) {
    throw DataError("invalid M/D/YYYY date '" + std::string(text) + "'");
  }
  const int month = parse_int(s.substr(0, a), text);
  const int day = parse_int(s.substr(a + 1, b - a - 1), text);
  const auto year_text = s.substr(b + 1);
  if (year_text.size() != 4) {
    throw DataError("invalid M/D/YYYY date '" + std::string(text) + "'");
  }
  if (month <= 0 || day <= 0) {
    throw DataError("invalid M/D/YYYY date '" + std::string(text) + "'");
  }
  return from_ymd(parse_int(year_text, text), static_cast<unsigned>(month), static_cast<unsigned>(day));
}

Date Date::parse_yymmdd(std::string_view text) {
  const auto s = trim(text);
  if (s.size() != 6) {
    throw DataError("invalid YYMMDD date '" + std::string(text) + "'");
  }
  return from_ymd(1900 + parse_int(s.substr(0, 2), text), static_cast<unsigned>(parse_int(s.substr(2, 2), text)),
                  static_cast<unsigned>(parse_int(s.substr(4, 2), text)));
}

Date Date::parse(std::string_view text) {
  const auto s = trim(text);
  if (s.find('/') != std::string_view::npos) return parse_mdy(s);
  return parse_iso(s);
}

std::string Date::iso() const {
  const auto d = ymd();
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

std::string Date::mdy() const {
  const auto d = ymd();
  return std::to_string(static_cast<unsigned>(d.month())) + "/" + std::to_string(static_cast<unsigned>(d.day())) +
         "/" + std::to_string(static_cast<int>(d.year()));
}

unsigned Date::iso_weekday() const { return std::chrono::weekday(days_).iso_encoding(); }

Date Date::week_end() const { return *this + static_cast<int>(7 - iso_weekday()); }

Date Date::add_months(int months) const {
  auto target = ymd() + std::chrono::months{months};
  if (!target.ok()) {
    target = std::chrono::year_month_day_last(target.year(), std::chrono::month_day_last(target.month()));
  }
  return Date(std::chrono::sys_days(target));
}

}  // namespace balcast
