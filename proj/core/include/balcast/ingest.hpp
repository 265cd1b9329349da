#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <utility>
#include <variant>

#include "balcast/model.hpp"
#include "balcast/series.hpp"

namespace balcast {

/// One row of the current-balances file: `account_id,balance,as_of[,user_id[,kind]]`.
struct BalanceEntry {
  Cents balance;
  Date as_of;
  std::optional<UserId> user;
  AccountKind kind = AccountKind::Other;
};

using BalanceTable = std::map<AccountId, BalanceEntry>;

struct IngestResult {
  Ledger ledger;
  /// Rows whose category label was not recognised (stored as Unlabeled).
  std::size_t unrecognized_categories = 0;
};

BalanceTable read_balances_csv(std::istream& in);
BalanceTable load_balances_csv(const std::filesystem::path& path);

/// Parses `account_id,date,description,amount,category` (dates M/D/YYYY, outflow-positive
/// amounts). Throws DataError naming the row for malformed rows and naming the account when it
/// has no balance entry.
IngestResult read_wagegoal_csv(std::istream& in, const BalanceTable& balances,
                               std::optional<Date> train_end = std::nullopt);
IngestResult load_wagegoal_csv(const std::filesystem::path& path, const BalanceTable& balances,
                               std::optional<Date> train_end = std::nullopt);

void write_wagegoal_csv(const Ledger& ledger, std::ostream& out);
void write_balances_csv(const Ledger& ledger, std::ostream& out);

struct Pkdd99Options {
  /// Accounts whose (last - first) transaction span is shorter are dropped.
  int min_span_days = 1461;
  /// Share of the global date range used for training (4.5 of 6 years).
  double train_fraction = 0.75;
};

/// Reads the PKDD'99 `trans` table (semicolon-delimited, header row, YYMMDD dates, unsigned
/// amounts with a credit/debit type). Credits become negative amounts. Balances start at 0.
Ledger read_pkdd99(std::istream& in, const Pkdd99Options& options = {});
Ledger load_pkdd99(const std::filesystem::path& path, const Pkdd99Options& options = {});

/// Balance series that begins one step before the account's first transaction, so the first
/// value is the opening balance.
BalanceSeries build_series_from_opening(const Ledger& ledger, std::string_view account, Step step);

/// A training fraction in (0, 1) or an explicit last training date.
using SplitPoint = std::variant<double, Date>;

/// Training view holds transactions dated on or before the split with balances restated to
/// that date; the test view holds the rest. Throws DataError when the split leaves either
/// side empty.
std::pair<Ledger, Ledger> split_train_test(const Ledger& ledger, SplitPoint split);

Date resolve_split(const Ledger& ledger, SplitPoint split);

}  // namespace balcast
