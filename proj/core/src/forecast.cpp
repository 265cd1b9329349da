#include "balcast/forecast.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "balcast/error.hpp"
#include "balcast/ingest.hpp"

namespace balcast {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::erase_if(out, [](char c) { return c == '-' || c == '_'; });
  return out;
}

Ledger single_account(const Ledger& ledger, std::string_view account) {
  const auto txns = ledger.transactions_of(account);
  return Ledger({ledger.account(account)}, {txns.begin(), txns.end()});
}

// 1-based horizon step that contains `d`, for d after `origin`.
std::size_t horizon_step(Date origin, Date d, Step step) {
  const int width = step_days(step);
  return static_cast<std::size_t>((d - origin + width - 1) / width);
}

ForecastResult empty_result(const AccountSnapshot& snapshot, Method method) {
  ForecastResult r;
  r.account = snapshot.account;
  r.method = method;
  r.origin = snapshot.origin;
  r.step = snapshot.step;
  return r;
}

struct PaycheckInfo {
  std::optional<RecurringTransaction> paycheck;
  std::vector<Payday> observed;
};

PaycheckInfo paycheck_info(const AccountSnapshot& snapshot) {
  PaycheckInfo info;
  info.paycheck = find_paycheck(snapshot.recurrings);
  if (info.paycheck) info.observed = paycheck_deposits(*info.paycheck, snapshot.transactions);
  return info;
}

// Observed paydays up to the origin, predicted ones after it, over `length` steps from `first`.
LandmarkTemplate target_template(const AccountSnapshot& snapshot, const PaycheckInfo& info, Date first,
                                 std::size_t length) {
  if (!info.paycheck) return LandmarkTemplate{length, {}};
  std::vector<Payday> days;
  for (const auto& p : info.observed) {
    if (p.date <= snapshot.origin) days.push_back(p);
  }
  const Date last = first + static_cast<int>(length - 1) * step_days(snapshot.step);
  if (last > snapshot.origin) {
    for (const auto& n : occurrences_between(*info.paycheck, snapshot.origin, last)) {
      days.push_back({n.predicted_date, std::abs(n.predicted_amount)});
    }
  }
  return template_from_paydays(days, first, length, snapshot.step);
}

void align_matches(std::vector<MatchedSequence>& matches, const ForecastCorpus& corpus, const LandmarkTemplate& target,
                   Step step) {
  if (target.empty()) return;
  for (auto& m : matches) {
    const auto it = corpus.paydays.find(m.source_account);
    if (it == corpus.paydays.end()) continue;
    const auto source = template_from_paydays(it->second, m.source_start, m.raw.size(), step);
    m.aligned = align_to_template(m.raw, source, target);
  }
}

SubseqPreparation prepare_window(const AccountSnapshot& snapshot, std::span<const double> history,
                                 const ForecastConfig& config, std::size_t horizon, std::size_t count,
                                 const ForecastCorpus& corpus, const PaycheckInfo& info, Date query_end) {
  if (history.size() < config.L) {
    throw DataError("account '" + snapshot.account + "' has " + std::to_string(history.size()) +
                    " steps of history; the query needs " + std::to_string(config.L));
  }
  if (corpus.windows.empty()) throw DataError("the matching corpus is empty");
  SubseqPreparation prep;
  prep.query = standardize(history.subspan(history.size() - config.L));

  const int width = step_days(snapshot.step);
  const Date first = query_end - static_cast<int>(config.L - 1) * width;
  SearchOptions options;
  options.shape = {config.L1, config.L, config.L + horizon};
  options.count = count;
  options.cutoff = corpus.cutoff;
  options.dtw = config.dtw;
  // The account's own windows overlapping the query span are the query itself, not history.
  options.exclusions.push_back({snapshot.account, first - (width - 1), query_end});
  auto found = subsequence_search(std::span<const double>(prep.query.values).first(config.L1), corpus.windows, options);
  if (found.matches.empty()) {
    throw DataError("no matching sequences for account '" + snapshot.account + "'; use HistAvg instead");
  }
  prep.matches = std::move(found.matches);
  prep.shortfall = found.shortfall;

  prep.target = config.align ? target_template(snapshot, info, first, config.L + horizon)
                             : LandmarkTemplate{config.L + horizon, {}};
  align_matches(prep.matches, corpus, prep.target, snapshot.step);
  return prep;
}

// Fits on the first `m` matches; returns standardized predictions for `horizon` steps.
std::vector<double> fit_standardized(const SubseqPreparation& prep, const ForecastConfig& config, std::size_t m,
                                     std::size_t horizon, ForecastDiagnostics& diag) {
  m = std::min(m, prep.matches.size());
  const std::size_t L = config.L;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t l = 0; l < L; ++l) {
      X(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = prep.matches[j].aligned[l];
    }
  }
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(prep.query.values.data(), static_cast<Eigen::Index>(L));
  const std::vector<MatchedSequence> used(prep.matches.begin(), prep.matches.begin() + static_cast<std::ptrdiff_t>(m));
  const Eigen::MatrixXd D = build_anomaly_penalty(used, L);
  const RegressionFit fit = fit_weighted_penalized_nnls(y, X, config.weights(), D, config.lambda);

  std::vector<double> z(horizon);
  for (std::size_t s = 0; s < horizon; ++s) {
    double v = fit.beta0;
    for (std::size_t j = 0; j < m; ++j) v += prep.matches[j].aligned[L + s] * fit.beta[static_cast<Eigen::Index>(j)];
    z[s] = v;
  }
  diag.matches_used = m;
  diag.shortfall = m < config.M;
  diag.fit_objective = fit.objective;
  diag.beta0 = fit.beta0;
  diag.beta.assign(fit.beta.data(), fit.beta.data() + fit.beta.size());
  return z;
}

ForecastResult neighbor_forecast(const AccountSnapshot& snapshot, const ForecastConfig& config,
                                 const ForecastCorpus& corpus, std::size_t k, Method method) {
  config.validate();
  if (k == 0) throw InvalidArgument("k must be positive");
  if (corpus.windows.empty()) throw DataError("the matching corpus is empty");
  const std::size_t n = config.L1;
  if (n < 2) throw InvalidArgument("neighbour matching needs L1 >= 2");
  if (snapshot.history.size() < n) {
    throw DataError("account '" + snapshot.account + "' has too little history for a length-" + std::to_string(n) +
                    " query");
  }
  ForecastResult result = empty_result(snapshot, method);
  std::vector<double> buffer(snapshot.history.values.end() - static_cast<std::ptrdiff_t>(n),
                             snapshot.history.values.end());
  SearchOptions options;
  options.shape = {n, n, n + 1};
  options.count = k;
  options.cutoff = corpus.cutoff;
  options.dtw = config.dtw;
  const int width = step_days(snapshot.step);
  options.exclusions.push_back(
      {snapshot.account, snapshot.origin - static_cast<int>(n) * width + 1, snapshot.origin});
  for (std::size_t s = 0; s < config.S; ++s) {
    const auto q = standardize(std::span<const double>(buffer).last(n));
    const auto found = subsequence_search(q.values, corpus.windows, options);
    if (found.matches.empty()) throw DataError("no candidate windows in the corpus");
    double z = 0.0;
    for (const auto& m : found.matches) z += m.raw[n];
    z /= static_cast<double>(found.matches.size());
    const double v = q.mean + q.stdev * z;
    buffer.push_back(v);
    result.predictions.push_back(v);
    result.diagnostics.shortfall = result.diagnostics.shortfall || found.shortfall;
    result.diagnostics.matches_used = std::max(result.diagnostics.matches_used, found.matches.size());
  }
  return result;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::HistAvg: return "HistAvg";
    case Method::SubseqLS: return "SubseqLS";
    case Method::Hybrid: return "HistAvg-SubseqLS";
    case Method::NearestNeighbor: return "NearestNeighbor";
    case Method::KNN: return "KNN";
  }
  return "";
}

std::optional<Method> parse_method(std::string_view name) {
  const auto key = lower(name);
  if (key == "histavg") return Method::HistAvg;
  if (key == "subseqls" || key == "subseq") return Method::SubseqLS;
  if (key == "hybrid" || key == "histavgsubseqls") return Method::Hybrid;
  if (key == "nearestneighbor" || key == "nn") return Method::NearestNeighbor;
  if (key == "knn") return Method::KNN;
  return std::nullopt;
}

void ForecastConfig::validate() const {
  if (L1 == 0 || L1 > L) throw InvalidArgument("L1 must satisfy 0 < L1 <= L");
  if (L < 2) throw InvalidArgument("L must be at least 2");
  if (S == 0) throw InvalidArgument("S must be at least 1");
  if (M == 0) throw InvalidArgument("M must be at least 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be finite and >= 0");
  if (tau > S) throw InvalidArgument("tau must lie in [0, S]");
}

double ForecastConfig::weight(std::size_t ell) const {
  if (ell <= L1) return 1.0;
  if (ell < L) return 5.0;
  return 10.0;
}

Eigen::VectorXd ForecastConfig::weights() const {
  Eigen::VectorXd w(static_cast<Eigen::Index>(L));
  for (std::size_t l = 0; l < L; ++l) w[static_cast<Eigen::Index>(l)] = weight(l + 1);
  return w;
}

AccountSnapshot make_snapshot(const Ledger& ledger, std::string_view account, Date origin, Step step,
                              const SimilarityConfig& similarity, bool mine_recurring) {
  const Ledger cut = single_account(ledger, account).truncated(origin);
  AccountSnapshot snap;
  snap.account = std::string(account);
  snap.step = step;
  snap.history = build_series_from_opening(cut, account, step).prefix_until(origin);
  if (snap.history.values.empty()) throw DataError("account '" + snap.account + "' has no history at the origin");
  snap.origin = step == Step::Daily ? origin : snap.history.end_date();
  const auto txns = cut.transactions_of(account);
  snap.transactions.assign(txns.begin(), txns.end());
  if (mine_recurring) snap.recurrings = extract_all_recurring(snap.transactions, snap.origin, similarity);
  return snap;
}

ForecastCorpus build_forecast_corpus(const Ledger& ledger, Date cutoff, Step step, const SimilarityConfig& similarity,
                                     bool mine_paydays) {
  ForecastCorpus corpus;
  corpus.cutoff = cutoff;
  const Ledger cut = ledger.truncated(cutoff);
  std::vector<BalanceSeries> series;
  for (const auto& account : cut.accounts()) {
    const auto txns = cut.transactions_of(account.id);
    if (txns.empty()) continue;
    auto s = build_series_from_opening(cut, account.id, step).prefix_until(cutoff);
    if (s.values.empty()) continue;
    series.push_back(std::move(s));
    if (mine_paydays) {
      const auto recurrings = extract_all_recurring(txns, cutoff, similarity);
      if (const auto paycheck = find_paycheck(recurrings)) {
        corpus.paydays[account.id] = paycheck_deposits(*paycheck, txns, similarity);
      }
    }
  }
  corpus.windows = Corpus(std::move(series));
  return corpus;
}

ForecastResult hist_avg_forecast(const AccountSnapshot& snapshot, std::size_t horizon) {
  if (horizon == 0) throw InvalidArgument("horizon must be at least 1");
  if (snapshot.history.values.empty()) throw DataError("account '" + snapshot.account + "' has no balance history");
  const Date t = snapshot.origin;
  const Date window_start = t - 90;

  std::vector<const Transaction*> window;
  for (const auto& tx : snapshot.transactions) {
    if (tx.date > window_start && tx.date <= t) window.push_back(&tx);
  }
  if (window.empty()) {
    throw DataError("account '" + snapshot.account + "' has no transactions in the 90 days before " + t.iso());
  }

  std::vector<const Transaction*> kept;
  std::vector<double> outflows;
  for (const auto* tx : window) {
    if (matches_recurring(*tx, snapshot.recurrings)) continue;
    kept.push_back(tx);
    if (tx->amount.value() > 0) outflows.push_back(tx->amount.to_double());
  }
  const double cut = top_share_threshold(outflows);
  std::int64_t basic_cents = 0;
  for (const auto* tx : kept) {
    if (tx->amount.value() > 0 && tx->amount.to_double() > cut) continue;
    basic_cents += tx->amount.value();
  }
  const double basic_per_day = static_cast<double>(basic_cents) / 100.0 / 90.0;

  const int width = step_days(snapshot.step);
  std::vector<double> scheduled(horizon + 1, 0.0);
  const Date end = t + static_cast<int>(horizon) * width;
  for (const auto& r : snapshot.recurrings) {
    for (const auto& n : occurrences_between(r, t, end)) {
      scheduled[horizon_step(t, n.predicted_date, snapshot.step)] += n.predicted_amount;
    }
  }

  ForecastResult result = empty_result(snapshot, Method::HistAvg);
  double balance = snapshot.history.values.back();
  for (std::size_t s = 1; s <= horizon; ++s) {
    balance -= basic_per_day * width + scheduled[s];
    result.predictions.push_back(balance);
  }
  return result;
}

Eigen::MatrixXd build_anomaly_penalty(const std::vector<MatchedSequence>& matches, std::size_t index) {
  const auto m = static_cast<Eigen::Index>(matches.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& a = matches[static_cast<std::size_t>(i)].aligned;
    if (index >= a.size()) throw InvalidArgument("match shorter than the penalty index");
    for (Eigen::Index j = 0; j < i; ++j) {
      const double d = std::abs(a[index] - matches[static_cast<std::size_t>(j)].aligned[index]);
      D(i, j) = d;
      D(j, i) = d;
    }
  }
  return D;
}

SubseqPreparation prepare_subseq(const AccountSnapshot& snapshot, const ForecastConfig& config,
                                 const ForecastCorpus& corpus) {
  config.validate();
  return prepare_window(snapshot, snapshot.history.values, config, config.S, config.M, corpus, paycheck_info(snapshot),
                        snapshot.origin);
}

ForecastResult fit_subseq(const AccountSnapshot& snapshot, const SubseqPreparation& prep,
                          const ForecastConfig& config) {
  config.validate();
  ForecastResult result = empty_result(snapshot, Method::SubseqLS);
  const auto z = fit_standardized(prep, config, config.M, config.S, result.diagnostics);
  result.predictions = destandardize(z, prep.query.mean, prep.query.stdev);
  return result;
}

ForecastResult subseq_ls_forecast(const AccountSnapshot& snapshot, const ForecastConfig& config,
                                  const ForecastCorpus& corpus) {
  config.validate();
  if (config.horizon_mode == HorizonMode::SingleFit) return fit_subseq(snapshot, prepare_subseq(snapshot, config, corpus), config);

  // Rolling: one-step fits, each prediction appended to the query.
  ForecastResult result = empty_result(snapshot, Method::SubseqLS);
  const auto info = paycheck_info(snapshot);
  std::vector<double> history = snapshot.history.values;
  const int width = step_days(snapshot.step);
  for (std::size_t s = 0; s < config.S; ++s) {
    const Date query_end = snapshot.origin + static_cast<int>(s) * width;
    const auto prep = prepare_window(snapshot, history, config, 1, config.M, corpus, info, query_end);
    ForecastDiagnostics diag;
    const auto z = fit_standardized(prep, config, config.M, 1, diag);
    const double v = prep.query.mean + prep.query.stdev * z[0];
    history.push_back(v);
    result.predictions.push_back(v);
    result.diagnostics.shortfall = result.diagnostics.shortfall || diag.shortfall;
    result.diagnostics.matches_used = diag.matches_used;
    result.diagnostics.fit_objective = diag.fit_objective;
    result.diagnostics.beta0 = diag.beta0;
    result.diagnostics.beta = diag.beta;
  }
  return result;
}

ForecastResult combine_hybrid(const ForecastResult& hist_avg, const ForecastResult& subseq, std::size_t tau) {
  if (hist_avg.predictions.size() != subseq.predictions.size()) {
    throw InvalidArgument("constituent forecasts differ in length");
  }
  if (tau > hist_avg.predictions.size()) throw InvalidArgument("tau exceeds the horizon");
  ForecastResult out = subseq;
  out.method = Method::Hybrid;
  std::copy_n(hist_avg.predictions.begin(), tau, out.predictions.begin());
  return out;
}

ForecastResult hybrid_forecast(const AccountSnapshot& snapshot, const ForecastConfig& config,
                               const ForecastCorpus& corpus) {
  config.validate();
  if (config.tau == config.S) {
    auto r = hist_avg_forecast(snapshot, config.S);
    r.method = Method::Hybrid;
    return r;
  }
  if (config.tau == 0) {
    auto r = subseq_ls_forecast(snapshot, config, corpus);
    r.method = Method::Hybrid;
    return r;
  }
  return combine_hybrid(hist_avg_forecast(snapshot, config.S), subseq_ls_forecast(snapshot, config, corpus),
                        config.tau);
}

ForecastResult nearest_neighbor_forecast(const AccountSnapshot& snapshot, const ForecastConfig& config,
                                         const ForecastCorpus& corpus) {
  return neighbor_forecast(snapshot, config, corpus, 1, Method::NearestNeighbor);
}

ForecastResult knn_forecast(const AccountSnapshot& snapshot, const ForecastConfig& config,
                            const ForecastCorpus& corpus, std::size_t k) {
  return neighbor_forecast(snapshot, config, corpus, k, Method::KNN);
}

ForecastResult run_forecast(Method method, const AccountSnapshot& snapshot, const ForecastConfig& config,
                            const ForecastCorpus& corpus) {
  switch (method) {
    case Method::HistAvg: config.validate(); return hist_avg_forecast(snapshot, config.S);
    case Method::SubseqLS: return subseq_ls_forecast(snapshot, config, corpus);
    case Method::Hybrid: return hybrid_forecast(snapshot, config, corpus);
    case Method::NearestNeighbor: return nearest_neighbor_forecast(snapshot, config, corpus);
    case Method::KNN: return knn_forecast(snapshot, config, corpus, config.knn_k);
  }
  throw InvalidArgument("unknown method");
}

}  // namespace balcast
