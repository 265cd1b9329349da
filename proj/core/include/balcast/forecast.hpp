#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "balcast/landmark.hpp"
#include "balcast/nnls.hpp"
#include "balcast/recurring.hpp"
#include "balcast/search.hpp"
#include "balcast/series.hpp"

namespace balcast {

enum class Method { HistAvg, SubseqLS, Hybrid, NearestNeighbor, KNN };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

/// How SubseqLS covers the horizon: one fit evaluated at every step, or a one-step-ahead fit
/// repeated with each prediction appended to the query.
enum class HorizonMode { SingleFit, Rolling };

struct ForecastConfig {
  std::size_t L = 31;   // query length
  std::size_t L1 = 20;  // matched prefix
  std::size_t S = 31;   // horizon
  std::size_t M = 10;   // matches
  double lambda = 0.0;
  std::size_t tau = 3;  // hybrid switch step
  std::size_t knn_k = 10;
  DtwConfig dtw;
  HorizonMode horizon_mode = HorizonMode::SingleFit;
  bool align = true;

  /// Throws InvalidArgument unless 0 < L1 <= L, S >= 1, M >= 1, lambda >= 0, tau <= S.
  void validate() const;
  /// Regression weight of query position ell (1-based): 1 up to L1, 5 before L, 10 at L.
  [[nodiscard]] double weight(std::size_t ell) const;
  [[nodiscard]] Eigen::VectorXd weights() const;
};

struct ForecastDiagnostics {
  std::size_t matches_used = 0;
  bool shortfall = false;
  double fit_objective = 0.0;
  double beta0 = 0.0;
  std::vector<double> beta;
  std::string note;
};

struct ForecastResult {
  AccountId account;
  Method method = Method::HistAvg;
  Date origin;
  Step step = Step::Daily;
  /// Balances at origin + 1..S steps, in account currency.
  std::vector<double> predictions;
  ForecastDiagnostics diagnostics;
};

/// Everything a forecaster may see about one account at its origin.
struct AccountSnapshot {
  AccountId account;
  Date origin;
  Step step = Step::Daily;
  BalanceSeries history;                  // ends at origin
  std::vector<Transaction> transactions;  // dated on or before origin
  std::vector<RecurringTransaction> recurrings;
};

/// Cuts the account at `origin`. Recurring charges are mined as of the origin unless
/// `mine_recurring` is false (ledgers without descriptions).
AccountSnapshot make_snapshot(const Ledger& ledger, std::string_view account, Date origin, Step step,
                              const SimilarityConfig& similarity = {}, bool mine_recurring = true);

/// Candidate pool shared by the matching forecasters: every account's balance history up to
/// `cutoff`, plus observed paydays for landmark alignment.
struct ForecastCorpus {
  Corpus windows;
  std::map<AccountId, std::vector<Payday>> paydays;
  Date cutoff;
};

ForecastCorpus build_forecast_corpus(const Ledger& ledger, Date cutoff, Step step,
                                     const SimilarityConfig& similarity = {}, bool mine_paydays = true);

/// Daily basic spending from the last 90 days (recurring matches and top-decile outflows
/// removed) plus scheduled recurring amounts. Throws DataError when the 90-day window is empty.
ForecastResult hist_avg_forecast(const AccountSnapshot& snapshot, std::size_t horizon);

/// D[i][j] = |aligned_i[index] - aligned_j[index]|.
Eigen::MatrixXd build_anomaly_penalty(const std::vector<MatchedSequence>& matches, std::size_t index);

/// Matching and alignment done once; fits for different (M, lambda) reuse it.
struct SubseqPreparation {
  Standardized query;              // last L balances
  std::vector<MatchedSequence> matches;  // aligned, best first
  LandmarkTemplate target;
  bool shortfall = false;
};

SubseqPreparation prepare_subseq(const AccountSnapshot& snapshot, const ForecastConfig& config,
                                 const ForecastCorpus& corpus);

/// Fits on the first `M` prepared matches and predicts all S steps.
ForecastResult fit_subseq(const AccountSnapshot& snapshot, const SubseqPreparation& prep,
                          const ForecastConfig& config);

/// Throws DataError when the history is shorter than L or no match exists.
ForecastResult subseq_ls_forecast(const AccountSnapshot& snapshot, const ForecastConfig& config,
                                  const ForecastCorpus& corpus);

/// Steps 1..tau from HistAvg, the rest from SubseqLS.
ForecastResult hybrid_forecast(const AccountSnapshot& snapshot, const ForecastConfig& config,
                               const ForecastCorpus& corpus);

/// Splices two full-horizon forecasts at tau.
ForecastResult combine_hybrid(const ForecastResult& hist_avg, const ForecastResult& subseq, std::size_t tau);

/// Iterated one-step prediction from the best match of the trailing L1 values.
ForecastResult nearest_neighbor_forecast(const AccountSnapshot& snapshot, const ForecastConfig& config,
                                         const ForecastCorpus& corpus);

/// As nearest_neighbor_forecast, averaging the next values of the k best matches.
ForecastResult knn_forecast(const AccountSnapshot& snapshot, const ForecastConfig& config,
                            const ForecastCorpus& corpus, std::size_t k);

ForecastResult run_forecast(Method method, const AccountSnapshot& snapshot, const ForecastConfig& config,
                            const ForecastCorpus& corpus);

}  // namespace balcast
