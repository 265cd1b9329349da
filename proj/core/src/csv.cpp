#include "balcast/csv.hpp"

#include <algorithm>
#include <charconv>
#include <system_error>

#include "balcast/error.hpp"

namespace balcast::csv {

std::optional<std::vector<std::string>> Reader::next() {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  bool field_was_quoted = false;
  record_line_ = line_;

  int ch;
  while ((ch = in_.get()) != std::char_traits<char>::eof()) {
    any = true;
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line_;
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty() && !field_was_quoted) {
      in_quotes = true;
      field_was_quoted = true;
    } else if (c == delimiter_) {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (c == '\r') {
      if (in_.peek() == '\n') continue;
      ++line_;
      fields.push_back(std::move(field));
      return fields;
    } else if (c == '\n') {
      ++line_;
      fields.push_back(std::move(field));
      return fields;
    } else {
      field += c;
    }
  }
  if (in_quotes) {
    throw DataError("unterminated quoted field starting on line " + std::to_string(record_line_));
  }
  if (!any) return std::nullopt;
  fields.push_back(std::move(field));
  return fields;
}

std::string escape(std::string_view field, char delimiter) {
  const bool needs = field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string_view::npos ||
                     (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << delimiter;
    out << escape(fields[i], delimiter);
  }
  out << '\n';
}

Header::Header(std::vector<std::string> names) : names_(std::move(names)) {
  for (auto& n : names_) {
    // Strip a UTF-8 byte-order mark and surrounding blanks.
    if (n.rfind("\xEF\xBB\xBF", 0) == 0) n.erase(0, 3);
    while (!n.empty() && n.back() == ' ') n.pop_back();
    while (!n.empty() && n.front() == ' ') n.erase(0, 1);
  }
}

std::optional<std::size_t> Header::find(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t Header::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw DataError("missing column '" + std::string(name) + "'");
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf, ptr);
}

}  // namespace balcast::csv
