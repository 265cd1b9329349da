#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace balcast::csv {

/// RFC-4180 record reader. Quoted fields may contain delimiters, doubled quotes and newlines.
class Reader {
 public:
  explicit Reader(std::istream& in, char delimiter = ',') : in_(in), delimiter_(delimiter) {}

  /// Next record, or nullopt at end of input. Throws DataError on an unterminated quote.
  std::optional<std::vector<std::string>> next();
  /// 1-based line number where the last returned record started.
  [[nodiscard]] std::size_t record_line() const { return record_line_; }

 private:
  std::istream& in_;
  char delimiter_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

/// Quotes a field only when it needs quoting.
std::string escape(std::string_view field, char delimiter = ',');
void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter = ',');

/// Column lookup by header name; throws DataError when a required column is missing.
class Header {
 public:
  explicit Header(std::vector<std::string> names);
  [[nodiscard]] std::size_t index(std::string_view name) const;
  [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;
  [[nodiscard]] std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
};

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace balcast::csv
