#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "balcast/recurring.hpp"
#include "balcast/series.hpp"

namespace balcast {

/// Sparse payday marks over a window of `length` steps; magnitudes are paycheck sizes.
struct LandmarkTemplate {
  std::size_t length = 0;
  std::vector<std::pair<std::size_t, double>> marks;  // (step index, magnitude), index-ordered

  [[nodiscard]] bool empty() const { return marks.empty(); }
  /// Dense indicator with the marks scaled to unit maximum.
  [[nodiscard]] std::vector<double> unit_indicator() const;
};

struct Payday {
  Date date;
  double amount = 0.0;  // positive deposit size
};

/// The account's salary stream: the recurring inflow in Transfer/Payment or with a payroll-like
/// description that has the largest mean deposit.
std::optional<RecurringTransaction> find_paycheck(std::span<const RecurringTransaction> recurrings);

/// Observed deposits that belong to the paycheck stream.
std::vector<Payday> paycheck_deposits(const RecurringTransaction& paycheck, std::span<const Transaction> transactions,
                                      const SimilarityConfig& config = {});

/// Marks for paydays falling in the `length` steps that end at date_of_first + (length-1) steps.
LandmarkTemplate template_from_paydays(std::span<const Payday> paydays, Date first_step_date, std::size_t length,
                                       Step step);

/// Target template over [t-L+1, t+S]: observed paycheck deposits up to `origin`, then
/// predicted paydays after it. No paycheck gives an empty template.
LandmarkTemplate build_payday_template(std::span<const RecurringTransaction> recurrings,
                                       std::span<const Transaction> account_transactions, Date origin,
                                       std::size_t history_steps, std::size_t horizon_steps, Step step,
                                       const SimilarityConfig& config = {});

/// Warps `raw` so that the source window's paydays line up with the target's. The payday
/// indicators are aligned by DTW with a band of ceil(n/4); each target step receives the mean
/// of the raw values matched to it. Identity when either template has no marks.
std::vector<double> align_to_template(std::span<const double> raw, const LandmarkTemplate& source,
                                      const LandmarkTemplate& target);

}  // namespace balcast
