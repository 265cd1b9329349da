#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "balcast/model.hpp"

namespace balcast {

enum class Step { Daily, Weekly };

constexpr int step_days(Step s) { return s == Step::Daily ? 1 : 7; }

/// Evenly spaced end-of-step balances. values[i] is the balance at date_at(i).
struct BalanceSeries {
  AccountId account;
  Date start_date;
  Step step = Step::Daily;
  std::vector<double> values;

  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] Date date_at(std::size_t i) const {
    return start_date + static_cast<int>(i) * step_days(step);
  }
  [[nodiscard]] Date end_date() const { return date_at(values.empty() ? 0 : values.size() - 1); }
  /// Index of the step containing `d`; nullopt when outside the series.
  [[nodiscard]] std::optional<std::size_t> index_of(Date d) const;
  /// Leading part of the series whose steps end on or before `cutoff`.
  [[nodiscard]] BalanceSeries prefix_until(Date cutoff) const;
};

/// Reconstructs balances backward from the account's current balance.
///
/// Daily steps run from `range_start` (default: first transaction date) to the balance's as-of
/// date. Weekly steps are end-of-ISO-week snapshots; the last step holds the as-of balance.
/// Same-day transactions act as one net delta. Throws NotFoundError for an unknown account and
/// DataError when the account has no transactions or its as-of date precedes its last transaction.
BalanceSeries build_balance_series(const Ledger& ledger, std::string_view account, Step step,
                                   std::optional<Date> range_start = std::nullopt);

/// Z-scored copy with the parameters needed to invert it.
struct Standardized {
  std::vector<double> values;
  double mean = 0.0;
  double stdev = 0.0;  // sample (n-1); 0 for a constant input
};

/// Throws InvalidArgument when fewer than two values are given.
Standardized standardize(std::span<const double> series);
std::vector<double> destandardize(std::span<const double> z, double mean, double stdev);

double mean(std::span<const double> x);
/// Sample standard deviation (n-1 denominator); 0 for fewer than two values.
double sample_stdev(std::span<const double> x);
/// Linear-interpolation percentile, p in [0, 100]. Empty input gives 0.
double percentile(std::vector<double> x, double p);

}  // namespace balcast
