#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "balcast/model.hpp"
#include "balcast/textsim.hpp"

namespace balcast {

enum class FrequencyKind { Monthly, Semimonthly, Biweekly, Weekly };

/// Backtrack distance and matching window of one recurrence frequency.
struct Frequency {
  FrequencyKind kind = FrequencyKind::Monthly;
  int backtrack_days = 31;
  int window_days = 7;

  static constexpr Frequency of(FrequencyKind kind) {
    switch (kind) {
      case FrequencyKind::Monthly: return {kind, 31, 7};
      case FrequencyKind::Semimonthly: return {kind, 15, 7};
      case FrequencyKind::Biweekly: return {kind, 14, 2};
      case FrequencyKind::Weekly: return {kind, 7, 2};
    }
    return {};
  }
  static constexpr Frequency monthly() { return of(FrequencyKind::Monthly); }
  static constexpr Frequency semimonthly() { return of(FrequencyKind::Semimonthly); }
  static constexpr Frequency biweekly() { return of(FrequencyKind::Biweekly); }
  static constexpr Frequency weekly() { return of(FrequencyKind::Weekly); }

  /// Average length of one period in days (a calendar month for Monthly).
  [[nodiscard]] double nominal_days() const;
  [[nodiscard]] std::string_view name() const;

  bool operator==(const Frequency&) const = default;
};

inline constexpr std::array<FrequencyKind, 4> kAllFrequencies = {
    FrequencyKind::Monthly, FrequencyKind::Semimonthly, FrequencyKind::Biweekly, FrequencyKind::Weekly};

std::optional<FrequencyKind> parse_frequency(std::string_view name);

/// One step forward by the frequency's period: a calendar month, or 15/14/7 days.
Date advance(Date from, Frequency frequency);

/// A mined cyclic charge or deposit.
struct RecurringTransaction {
  AccountId account;
  Frequency frequency;
  std::string description;
  Category category = Category::Unlabeled;
  /// Arithmetic mean of the support amounts (outflow-positive).
  double mean_amount = 0.0;
  Date last_date;
  /// Matched transactions, oldest first; at least four.
  std::vector<Transaction> support;

  /// (last - first) / (n - 1) over the support dates.
  [[nodiscard]] double mean_gap_days() const;
};

struct NextOccurrence {
  RecurringTransaction recurring;
  Date predicted_date;
  double predicted_amount = 0.0;
};

struct LargeExpense {
  std::string description;
  double approximate_cost = 0.0;
  UserId source_user;
};

/// Minimum number of windows a chain must fill.
inline constexpr std::size_t kMinRecurringWindows = 4;

/// Backtracking window procedure for one frequency.
///
/// Seeds are the transactions of the most recent period ending at `as_of`. From each seed the
/// chain steps back `backtrack_days` and keeps the same-category transaction within
/// `window_days` of that point whose description matches a chain member; it stops at the
/// first empty window. Chains shorter than four windows are dropped, as are chains where more
/// than half the gaps contain another occurrence of the same biller (the charge is really
/// more frequent). Input order within a day does not affect the output.
std::vector<RecurringTransaction> extract_recurring(std::span<const Transaction> transactions, Date as_of,
                                                    Frequency frequency, const SimilarityConfig& config = {});

/// Union over the four frequencies. Chains sharing a transaction are one charge; the one whose
/// mean gap best fits its nominal period is kept (ties go to the longer period).
std::vector<RecurringTransaction> extract_all_recurring(std::span<const Transaction> transactions, Date as_of,
                                                        const SimilarityConfig& config = {});

NextOccurrence predict_next(const RecurringTransaction& recurring);

/// Future occurrences in (after, until], iterating predict_next from the last observed date.
std::vector<NextOccurrence> occurrences_between(const RecurringTransaction& recurring, Date after, Date until);

/// True when `t` looks like an occurrence of any of `recurrings` (same category, same sign,
/// similar description).
bool matches_recurring(const Transaction& t, std::span<const RecurringTransaction> recurrings,
                       const SimilarityConfig& config = {});

/// Outflows strictly above the given percentile of `amounts`.
double top_share_threshold(std::vector<double> amounts, double top_share = 0.10);

/// Per user: drop recurring transactions, keep outflows above the 90th percentile of what
/// remains, keep one per similar-description class; results pooled across users.
std::vector<LargeExpense> unexpected_large_expenses(const Ledger& ledger, const SimilarityConfig& config = {});

}  // namespace balcast
