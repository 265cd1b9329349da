#pragma once

#include <cstddef>
#include <map>
#include <string_view>
#include <vector>

#include "balcast/forecast.hpp"

namespace balcast {

enum class AccountClass { Paycheck, NonPaycheck };

std::string_view account_class_name(AccountClass c);

/// Paycheck when a semimonthly or biweekly inflow recurring has a mean magnitude at or above
/// the account's 75th-percentile inflow.
AccountClass classify_account(const Ledger& ledger, std::string_view account, const SimilarityConfig& similarity = {});

struct TuningGrids {
  std::vector<std::size_t> M{5, 10, 15, 20, 25};
  std::vector<double> lambda{0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  std::vector<std::size_t> tau = default_taus(31);

  static std::vector<std::size_t> default_taus(std::size_t S);
  /// Throws InvalidArgument for an empty grid or values that the forecast config rejects.
  void validate(std::size_t S) const;
};

struct TuningOptions {
  TuningGrids grids;
  ForecastConfig base;
  Step step = Step::Daily;
  /// Held-out windows per account. The last one ends on the final training date and each
  /// earlier origin sits `stride` steps before the next, so origins cover different phases of
  /// the pay cycle.
  std::size_t windows = 8;
  std::size_t stride = 4;
  std::size_t threads = 1;
  SimilarityConfig similarity;
  bool mine_recurring = true;
};

struct TunedParameters {
  std::size_t M = 10;
  std::size_t tau = 3;
  std::map<AccountId, double> lambda;
  /// Held-out MAE of the chosen setting (variance-100 scale).
  double mae = 0.0;
  std::size_t windows_used = 0;
};

/// Grid search minimising held-out MAE over windows inside the training ledger. lambda is
/// chosen per account, M and tau jointly for the whole group of `accounts`. Throws DataError
/// when fewer than three held-out windows fit or no window can be forecast.
TunedParameters tune_parameters(const Ledger& training, const std::vector<AccountId>& accounts,
                                const TuningOptions& options);

}  // namespace balcast
