#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "balcast/forecast.hpp"
#include "balcast/recurring.hpp"

namespace balcast {

/// Uniform integer in [0, bound) from raw 64-bit draws, identical on every platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// `count` distinct indices from [0, n) by partial Fisher-Yates, in draw order.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::mt19937_64& rng);

// ---------------------------------------------------------------------------------------------
// Scaling

/// Factor 10 / sigma of the values dated on or before `train_end` (sample stdev), so the
/// training part has variance 100. Nullopt when sigma is zero or fewer than two values exist.
std::optional<double> variance100_factor(const BalanceSeries& series, Date train_end);

struct ScaledSet {
  std::vector<BalanceSeries> series;
  std::map<AccountId, double> factors;
  std::vector<AccountId> excluded;
};

ScaledSet scale_accounts(const std::vector<BalanceSeries>& series, Date train_end);

// ---------------------------------------------------------------------------------------------
// Test windows

struct TestWindow {
  AccountId account;
  Date origin;
  auto operator<=>(const TestWindow&) const = default;
};

struct WindowSample {
  std::vector<TestWindow> windows;
  /// Fewer feasible windows than requested; all of them were returned.
  bool short_of_count = false;
  std::size_t feasible = 0;
};

struct WindowOptions {
  std::size_t count = 25;
  std::size_t length = 31;
  /// Steps of history required before the origin.
  std::size_t min_history = 31;
  std::uint64_t seed = 0;
};

/// Uniform sample without replacement over (account, origin) pairs whose horizon
/// (origin, origin + length steps] lies inside (test_start, series end]. Returned sorted.
WindowSample sample_test_windows(const std::vector<BalanceSeries>& series, Date test_start,
                                 const WindowOptions& options);

// ---------------------------------------------------------------------------------------------
// Forecast evaluation

struct ForecastMetrics {
  double mae = 0.0;
  /// Absent when the true balance never goes below zero in any evaluated step.
  std::optional<double> negative_balance_error;
  std::vector<double> per_step_mae;
  std::size_t windows = 0;
  std::size_t missing = 0;
};

/// Metrics from per-window truth and predictions (same units). Empty prediction vectors count
/// as missing windows.
ForecastMetrics score_windows(const std::vector<std::vector<double>>& truth,
                              const std::vector<std::vector<double>>& predictions);

struct ExternalPrediction {
  std::string method;
  AccountId account;
  Date origin;
  std::size_t step = 0;
  double value = 0.0;
};

/// Rows `account_id,method,origin_date,step,predicted_balance` (the forecast CSV format).
std::vector<ExternalPrediction> read_predictions_csv(std::istream& in);
void write_forecast_csv(std::ostream& out, const std::vector<ForecastResult>& results);

struct EvalConfig {
  ForecastConfig base;
  std::map<AccountId, ForecastConfig> per_account;
  Step step = Step::Daily;
  /// Matching corpus cut-off; each window uses min(cutoff, origin). Default: the ledger's
  /// training end.
  std::optional<Date> corpus_cutoff;
  /// Accounts the corpus draws from; empty means all.
  std::vector<AccountId> corpus_accounts;
  SimilarityConfig similarity;
  bool mine_recurring = true;
  std::size_t threads = 1;

  [[nodiscard]] const ForecastConfig& config_for(const AccountId& account) const;
};

struct MethodScore {
  std::string method;
  ForecastMetrics metrics;
  std::vector<std::string> failures;  // one message per missing window
};

struct EvaluationReport {
  std::vector<TestWindow> windows;
  std::vector<MethodScore> methods;
  /// Predictions in original units, per method then per window (empty when missing).
  std::vector<std::vector<ForecastResult>> forecasts;
};

/// Runs each method on each window from a ledger view truncated at the window origin and
/// scores on the variance-100 scale fixed by the training period. External predictions are
/// scored as extra methods.
EvaluationReport evaluate_forecasts(const Ledger& ledger, const std::vector<TestWindow>& windows,
                                    const std::vector<Method>& methods, const EvalConfig& config,
                                    const std::vector<ExternalPrediction>& external = {});

void write_metrics_csv(std::ostream& out, const EvaluationReport& report);
void write_per_step_csv(std::ostream& out, const EvaluationReport& report);

struct PkddExperimentOptions {
  std::size_t iterations = 2;
  std::size_t accounts = 20;
  WindowOptions windows;
  EvalConfig eval;
  std::vector<Method> methods{Method::SubseqLS, Method::NearestNeighbor, Method::HistAvg, Method::KNN};
};

struct PkddIteration {
  std::vector<AccountId> accounts;
  EvaluationReport report;
};

/// Repeated evaluation on random account subsets (weekly steps, no recurring mining). Each
/// iteration draws `accounts` accounts and `windows.count` windows among them.
std::vector<PkddIteration> run_pkdd_experiment(const Ledger& ledger, const PkddExperimentOptions& options);

// ---------------------------------------------------------------------------------------------
// Recurring evaluation

/// One planted occurrence of a ground-truth recurring stream.
struct RecurringLabel {
  AccountId account;
  std::string stream;
  FrequencyKind frequency = FrequencyKind::Monthly;
  Date date;
  std::string description;
  Cents amount;
};

std::vector<RecurringLabel> read_labels_csv(std::istream& in);
std::vector<RecurringLabel> load_labels_csv(const std::string& path);
void write_labels_csv(std::ostream& out, const std::vector<RecurringLabel>& labels);

/// A predicted next occurrence together with the history it was inferred from.
struct PredictedRecurring {
  AccountId account;
  std::string description;
  std::vector<Transaction> support;
  Date predicted_date;
  double predicted_amount = 0.0;
};

/// Extractor under test: account history (dated before `as_of + 1`) to predictions.
using RecurringExtractor =
    std::function<std::vector<PredictedRecurring>(std::span<const Transaction> history, Date as_of)>;

RecurringExtractor proposed_extractor(const SimilarityConfig& similarity = {});
RecurringExtractor keyword_extractor(const SimilarityConfig& similarity = {});

/// Case-insensitive keyword rules: description contains "recurring", or the category label
/// contains "bill pay", "payroll", "service - insurance" or "service - subscription".
bool keyword_flagged(const Transaction& t);
std::vector<Transaction> keyword_baseline_recurring(std::span<const Transaction> transactions);

struct RecurringMetrics {
  double avg_extracted_per_user = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double mean_day_error = 0.0;
  std::size_t extracted = 0;
  std::size_t correct = 0;
  std::size_t dates = 0;
};

struct RecurringEvalOptions {
  std::size_t dates = 25;
  int tolerance_days = 5;
  /// Dates are drawn from [first + burn_in_days, last - tail_days].
  int burn_in_days = 180;
  int tail_days = 35;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

/// For each sampled date: extract from the history before it, predict next occurrences, and
/// score them against the labels. A prediction is attributed to the stream owning most of its
/// support and is correct when that stream's next occurrence after the support lies within
/// the tolerance. Recall counts streams active at the date (four or more past occurrences and
/// one still to come) that received a correct prediction.
RecurringMetrics evaluate_recurring(const Ledger& ledger, const std::vector<RecurringLabel>& labels,
                                    const RecurringExtractor& extractor, const RecurringEvalOptions& options);

void write_recurring_metrics_csv(std::ostream& out, const std::vector<std::pair<std::string, RecurringMetrics>>& rows);

}  // namespace balcast
