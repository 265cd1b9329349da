#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "balcast/forecast.hpp"
#include "balcast/textsim.hpp"
#include "balcast/tuning.hpp"

namespace balcast::cli {

/// `key=value` lines; blank lines and `#` comments are skipped. Later keys replace earlier ones.
class ParamFile {
 public:
  ParamFile() = default;
  static ParamFile parse(std::istream& in);
  static ParamFile load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  [[nodiscard]] std::optional<std::string> get(const std::string& key) const;
  [[nodiscard]] const std::map<std::string, std::string>& values() const { return values_; }
  /// Sorted by key, so equal contents serialise identically.
  void write(std::ostream& out) const;

 private:
  std::map<std::string, std::string> values_;
};

/// Layered parameters: command-line flags win over the config file, which wins over defaults.
/// For M and tau a class-specific key (`M.paycheck`) beats the plain key; for lambda an
/// account-specific key (`lambda.<account>`) does.
class Parameters {
 public:
  Parameters(ParamFile file, std::map<std::string, std::string> flags)
      : file_(std::move(file)), flags_(std::move(flags)) {}

  [[nodiscard]] std::optional<std::string> raw(const std::string& key) const;
  [[nodiscard]] double number(const std::string& key, double fallback) const;
  [[nodiscard]] std::size_t count(const std::string& key, std::size_t fallback) const;

  [[nodiscard]] ForecastConfig forecast(const std::optional<AccountId>& account = std::nullopt,
                                        std::optional<AccountClass> cls = std::nullopt) const;
  [[nodiscard]] SimilarityConfig similarity() const;
  [[nodiscard]] std::optional<AccountClass> account_class(const AccountId& account) const;
  [[nodiscard]] TuningGrids grids(std::size_t S) const;

 private:
  [[nodiscard]] std::optional<std::string> layered(const std::string& key, const std::string& specific) const;

  ParamFile file_;
  std::map<std::string, std::string> flags_;
};

double parse_number(const std::string& key, const std::string& text);
std::size_t parse_count(const std::string& key, const std::string& text);
std::vector<std::string> split_list(const std::string& text);

}  // namespace balcast::cli
