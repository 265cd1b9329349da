#include "balcast/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <tuple>

#include "balcast/csv.hpp"
#include "balcast/error.hpp"
#include "balcast/ingest.hpp"
#include "balcast/parallel.hpp"

namespace balcast {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("uniform_below needs a positive bound");
  // Rejection sampling on the largest multiple of bound.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  count = std::min(count, n);
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

std::optional<double> variance100_factor(const BalanceSeries& series, Date train_end) {
  const auto train = series.prefix_until(train_end);
  if (train.values.size() < 2) return std::nullopt;
  const double sd = sample_stdev(train.values);
  if (!(sd > 0.0)) return std::nullopt;
  return 10.0 / sd;
}

ScaledSet scale_accounts(const std::vector<BalanceSeries>& series, Date train_end) {
  ScaledSet out;
  for (const auto& s : series) {
    const auto factor = variance100_factor(s, train_end);
    if (!factor) {
      out.excluded.push_back(s.account);
      continue;
    }
    BalanceSeries scaled = s;
    for (auto& v : scaled.values) v *= *factor;
    out.factors[s.account] = *factor;
    out.series.push_back(std::move(scaled));
  }
  return out;
}

WindowSample sample_test_windows(const std::vector<BalanceSeries>& series, Date test_start,
                                 const WindowOptions& options) {
  if (options.length == 0) throw InvalidArgument("window length must be at least 1");
  std::vector<const BalanceSeries*> ordered;
  for (const auto& s : series) ordered.push_back(&s);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const BalanceSeries* a, const BalanceSeries* b) { return a->account < b->account; });
  std::vector<TestWindow> feasible;
  for (const auto* s : ordered) {
    const std::size_t first = std::max<std::size_t>(options.min_history, 1) - 1;
    for (std::size_t i = first; i + options.length < s->size(); ++i) {
      if (s->date_at(i) >= test_start) feasible.push_back({s->account, s->date_at(i)});
    }
  }
  WindowSample out;
  out.feasible = feasible.size();
  out.short_of_count = feasible.size() < options.count;
  std::mt19937_64 rng(options.seed);
  for (auto i : sample_indices(feasible.size(), options.count, rng)) out.windows.push_back(feasible[i]);
  std::sort(out.windows.begin(), out.windows.end());
  return out;
}

ForecastMetrics score_windows(const std::vector<std::vector<double>>& truth,
                              const std::vector<std::vector<double>>& predictions) {
  if (truth.size() != predictions.size()) throw InvalidArgument("truth and prediction counts differ");
  ForecastMetrics m;
  std::size_t steps = 0;
  for (const auto& t : truth) steps = std::max(steps, t.size());
  m.per_step_mae.assign(steps, 0.0);
  double total = 0.0;
  double negative = 0.0;
  std::size_t negative_count = 0;
  for (std::size_t w = 0; w < truth.size(); ++w) {
    if (predictions[w].empty()) {
      ++m.missing;
      continue;
    }
    if (predictions[w].size() != truth[w].size() || truth[w].size() != steps) {
      throw InvalidArgument("prediction length does not match the horizon");
    }
    ++m.windows;
    for (std::size_t s = 0; s < steps; ++s) {
      const double e = std::abs(truth[w][s] - predictions[w][s]);
      m.per_step_mae[s] += e;
      total += e;
      if (truth[w][s] < 0.0) {
        negative += e;
        ++negative_count;
      }
    }
  }
  if (m.windows > 0) {
    for (auto& v : m.per_step_mae) v /= static_cast<double>(m.windows);
    m.mae = total / static_cast<double>(m.windows * steps);
  }
  if (negative_count > 0) m.negative_balance_error = negative / static_cast<double>(negative_count);
  return m;
}

std::vector<ExternalPrediction> read_predictions_csv(std::istream& in) {
  csv::Reader reader(in);
  const auto head = reader.next();
  if (!head) return {};
  const csv::Header header(*head);
  const auto ia = header.index("account_id");
  const auto im = header.index("method");
  const auto io = header.index("origin_date");
  const auto is = header.index("step");
  const auto iv = header.index("predicted_balance");
  std::vector<ExternalPrediction> out;
  while (auto row = reader.next()) {
    if (row->size() == 1 && row->front().empty()) continue;
    if (row->size() < header.size()) {
      throw DataError("predictions row " + std::to_string(reader.record_line()) + ": too few fields");
    }
    try {
      ExternalPrediction p;
      p.account = (*row)[ia];
      p.method = (*row)[im];
      p.origin = Date::parse((*row)[io]);
      p.step = static_cast<std::size_t>(std::stoul((*row)[is]));
      p.value = std::stod((*row)[iv]);
      out.push_back(std::move(p));
    } catch (const std::logic_error&) {
      throw DataError("predictions row " + std::to_string(reader.record_line()) + ": malformed number");
    }
  }
  return out;
}

void write_forecast_csv(std::ostream& out, const std::vector<ForecastResult>& results) {
  csv::write_row(out, {"account_id", "method", "origin_date", "step", "predicted_balance"});
  for (const auto& r : results) {
    for (std::size_t s = 0; s < r.predictions.size(); ++s) {
      csv::write_row(out, {r.account, std::string(method_name(r.method)), r.origin.iso(), std::to_string(s + 1),
                           csv::format_double(r.predictions[s])});
    }
  }
}

const ForecastConfig& EvalConfig::config_for(const AccountId& account) const {
  const auto it = per_account.find(account);
  return it == per_account.end() ? base : it->second;
}

namespace {

Ledger restrict_accounts(const Ledger& ledger, const std::vector<AccountId>& ids) {
  if (ids.empty()) return ledger;
  std::vector<Account> accounts;
  std::vector<Transaction> txns;
  for (const auto& id : ids) {
    accounts.push_back(ledger.account(id));
    const auto t = ledger.transactions_of(id);
    txns.insert(txns.end(), t.begin(), t.end());
  }
  return Ledger(std::move(accounts), std::move(txns));
}

}  // namespace

EvaluationReport evaluate_forecasts(const Ledger& ledger, const std::vector<TestWindow>& windows,
                                    const std::vector<Method>& methods, const EvalConfig& config,
                                    const std::vector<ExternalPrediction>& external) {
  config.base.validate();
  const std::size_t S = config.base.S;
  for (const auto& [id, c] : config.per_account) {
    c.validate();
    if (c.S != S) throw InvalidArgument("per-account configs must share the horizon S");
  }
  const Date cutoff = config.corpus_cutoff.value_or(ledger.train_end());

  // Truth on the variance-100 scale.
  const std::size_t nw = windows.size();
  std::vector<std::vector<double>> truth(nw);
  std::vector<double> factor(nw, 0.0);
  std::vector<std::string> window_error(nw);
  std::map<AccountId, BalanceSeries> series;
  for (std::size_t w = 0; w < nw; ++w) {
    const auto& win = windows[w];
    auto it = series.find(win.account);
    if (it == series.end()) {
      it = series.emplace(win.account, build_series_from_opening(ledger, win.account, config.step)).first;
    }
    const auto& s = it->second;
    const auto f = variance100_factor(s, ledger.train_end());
    const auto at = s.index_of(win.origin);
    if (!f) {
      window_error[w] = "zero training variance";
    } else if (!at || s.date_at(*at) != win.origin || *at + S >= s.size()) {
      window_error[w] = "window outside the account's balance series";
    } else {
      factor[w] = *f;
      for (std::size_t k = 1; k <= S; ++k) truth[w].push_back(s.values[*at + k] * *f);
    }
  }

  // One corpus per distinct cut-off date.
  const Ledger corpus_ledger = restrict_accounts(ledger, config.corpus_accounts);
  std::map<Date, ForecastCorpus> corpora;
  for (const auto& win : windows) corpora.try_emplace(std::min(cutoff, win.origin));
  std::vector<Date> cut_dates;
  for (const auto& [d, c] : corpora) cut_dates.push_back(d);
  std::vector<ForecastCorpus> built(cut_dates.size());
  parallel_for(cut_dates.size(), config.threads, [&](std::size_t i) {
    built[i] = build_forecast_corpus(corpus_ledger, cut_dates[i], config.step, config.similarity, config.mine_recurring);
  });
  for (std::size_t i = 0; i < cut_dates.size(); ++i) corpora[cut_dates[i]] = std::move(built[i]);

  std::vector<std::optional<AccountSnapshot>> snapshots(nw);
  std::vector<std::string> snapshot_error(nw);
  parallel_for(nw, config.threads, [&](std::size_t w) {
    if (!window_error[w].empty()) return;
    try {
      snapshots[w] = make_snapshot(ledger, windows[w].account, windows[w].origin, config.step, config.similarity,
                                   config.mine_recurring);
    } catch (const std::exception& e) {
      snapshot_error[w] = e.what();
    }
  });

  EvaluationReport report;
  report.windows = windows;
  report.forecasts.assign(methods.size(), std::vector<ForecastResult>(nw));
  std::vector<std::string> errors(methods.size() * nw);
  parallel_for(methods.size() * nw, config.threads, [&](std::size_t task) {
    const std::size_t mi = task / nw;
    const std::size_t w = task % nw;
    if (!window_error[w].empty()) {
      errors[task] = window_error[w];
      return;
    }
    if (!snapshots[w]) {
      errors[task] = snapshot_error[w];
      return;
    }
    try {
      const auto& corpus = corpora.at(std::min(cutoff, windows[w].origin));
      report.forecasts[mi][w] = run_forecast(methods[mi], *snapshots[w], config.config_for(windows[w].account), corpus);
    } catch (const std::exception& e) {
      errors[task] = e.what();
    }
  });

  auto score = [&](const std::string& name, const std::vector<std::vector<double>>& predictions,
                   std::vector<std::string> failures) {
    std::vector<std::vector<double>> scaled(nw);
    std::vector<std::vector<double>> kept_truth(nw);
    for (std::size_t w = 0; w < nw; ++w) {
      kept_truth[w] = truth[w].empty() ? std::vector<double>(S, 0.0) : truth[w];
      if (truth[w].empty() || predictions[w].size() != S) continue;
      for (double v : predictions[w]) scaled[w].push_back(v * factor[w]);
    }
    MethodScore ms{name, score_windows(kept_truth, scaled), {}};
    for (auto& f : failures) {
      if (!f.empty()) ms.failures.push_back(std::move(f));
    }
    report.methods.push_back(std::move(ms));
  };

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    std::vector<std::vector<double>> predictions(nw);
    std::vector<std::string> failures(nw);
    for (std::size_t w = 0; w < nw; ++w) {
      predictions[w] = report.forecasts[mi][w].predictions;
      failures[w] = errors[mi * nw + w];
    }
    score(std::string(method_name(methods[mi])), predictions, failures);
  }

  std::map<std::string, std::map<std::pair<AccountId, Date>, std::map<std::size_t, double>>> by_method;
  for (const auto& p : external) by_method[p.method][{p.account, p.origin}][p.step] = p.value;
  for (const auto& [name, table] : by_method) {
    std::vector<std::vector<double>> predictions(nw);
    std::vector<std::string> failures(nw);
    for (std::size_t w = 0; w < nw; ++w) {
      const auto it = table.find({windows[w].account, windows[w].origin});
      bool complete = it != table.end();
      for (std::size_t k = 1; complete && k <= S; ++k) complete = it->second.count(k) > 0;
      if (!complete) {
        failures[w] = "no external prediction for the full horizon";
        continue;
      }
      for (std::size_t k = 1; k <= S; ++k) predictions[w].push_back(it->second.at(k));
    }
    score(name, predictions, failures);
  }
  return report;
}

void write_metrics_csv(std::ostream& out, const EvaluationReport& report) {
  csv::write_row(out, {"method", "mae", "negative_balance_error", "windows", "missing"});
  for (const auto& m : report.methods) {
    csv::write_row(out, {m.method, csv::format_double(m.metrics.mae),
                         m.metrics.negative_balance_error ? csv::format_double(*m.metrics.negative_balance_error) : "",
                         std::to_string(m.metrics.windows), std::to_string(m.metrics.missing)});
  }
}

void write_per_step_csv(std::ostream& out, const EvaluationReport& report) {
  csv::write_row(out, {"method", "step", "mae"});
  for (const auto& m : report.methods) {
    for (std::size_t s = 0; s < m.metrics.per_step_mae.size(); ++s) {
      csv::write_row(out, {m.method, std::to_string(s + 1), csv::format_double(m.metrics.per_step_mae[s])});
    }
  }
}

std::vector<PkddIteration> run_pkdd_experiment(const Ledger& ledger, const PkddExperimentOptions& options) {
  std::mt19937_64 rng(options.windows.seed);
  EvalConfig eval = options.eval;
  eval.step = Step::Weekly;
  eval.mine_recurring = false;

  std::vector<AccountId> ids;
  for (const auto& a : ledger.accounts()) {
    if (!ledger.transactions_of(a.id).empty()) ids.push_back(a.id);
  }
  std::vector<PkddIteration> out;
  for (std::size_t it = 0; it < options.iterations; ++it) {
    PkddIteration iteration;
    for (auto i : sample_indices(ids.size(), options.accounts, rng)) iteration.accounts.push_back(ids[i]);
    std::sort(iteration.accounts.begin(), iteration.accounts.end());
    std::vector<BalanceSeries> series;
    for (const auto& id : iteration.accounts) series.push_back(build_series_from_opening(ledger, id, Step::Weekly));
    WindowOptions wopt = options.windows;
    wopt.seed = rng();
    const auto sample = sample_test_windows(series, ledger.train_end(), wopt);
    iteration.report = evaluate_forecasts(ledger, sample.windows, options.methods, eval);
    out.push_back(std::move(iteration));
  }
  return out;
}

// ---------------------------------------------------------------------------------------------

namespace {

std::string lowered(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::vector<RecurringLabel> read_labels_csv(std::istream& in) {
  csv::Reader reader(in);
  const auto head = reader.next();
  if (!head) return {};
  const csv::Header header(*head);
  const auto ia = header.index("account_id");
  const auto is = header.index("stream_id");
  const auto iff = header.index("frequency");
  const auto id = header.index("date");
  const auto idesc = header.index("description");
  const auto iamt = header.index("amount");
  std::vector<RecurringLabel> out;
  while (auto row = reader.next()) {
    if (row->size() == 1 && row->front().empty()) continue;
    if (row->size() < header.size()) throw DataError("labels row " + std::to_string(reader.record_line()) + ": too few fields");
    const auto freq = parse_frequency((*row)[iff]);
    if (!freq) throw DataError("labels row " + std::to_string(reader.record_line()) + ": unknown frequency");
    out.push_back({(*row)[ia], (*row)[is], *freq, Date::parse((*row)[id]), (*row)[idesc], Cents::parse((*row)[iamt])});
  }
  return out;
}

std::vector<RecurringLabel> load_labels_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open labels file '" + path + "'");
  return read_labels_csv(in);
}

void write_labels_csv(std::ostream& out, const std::vector<RecurringLabel>& labels) {
  csv::write_row(out, {"account_id", "stream_id", "frequency", "date", "description", "amount"});
  for (const auto& l : labels) {
    csv::write_row(out, {l.account, l.stream, std::string(Frequency::of(l.frequency).name()), l.date.iso(),
                         l.description, l.amount.str()});
  }
}

bool keyword_flagged(const Transaction& t) {
  if (lowered(t.description).find("recurring") != std::string::npos) return true;
  const auto label = lowered(t.category_label);
  for (const char* key : {"bill pay", "payroll", "service - insurance", "service - subscription"}) {
    if (label.find(key) != std::string::npos) return true;
  }
  return false;
}

std::vector<Transaction> keyword_baseline_recurring(std::span<const Transaction> transactions) {
  std::vector<Transaction> out;
  for (const auto& t : transactions) {
    if (keyword_flagged(t)) out.push_back(t);
  }
  return out;
}

RecurringExtractor proposed_extractor(const SimilarityConfig& similarity) {
  return [similarity](std::span<const Transaction> history, Date as_of) {
    std::vector<PredictedRecurring> out;
    for (const auto& r : extract_all_recurring(history, as_of, similarity)) {
      const auto next = predict_next(r);
      out.push_back({r.account, r.description, r.support, next.predicted_date, next.predicted_amount});
    }
    return out;
  };
}

RecurringExtractor keyword_extractor(const SimilarityConfig& similarity) {
  return [similarity](std::span<const Transaction> history, Date) {
    std::vector<std::vector<Transaction>> groups;
    for (const auto& t : keyword_baseline_recurring(history)) {
      auto it = std::find_if(groups.begin(), groups.end(), [&](const std::vector<Transaction>& g) {
        return g.front().account == t.account && (g.front().amount.value() < 0) == (t.amount.value() < 0) &&
               is_same_biller(g.front().description, t.description, similarity);
      });
      if (it == groups.end()) {
        groups.push_back({t});
      } else {
        it->push_back(t);
      }
    }
    std::vector<PredictedRecurring> out;
    for (auto& g : groups) {
      if (g.size() < 2) continue;
      std::stable_sort(g.begin(), g.end(), [](const Transaction& a, const Transaction& b) { return a.date < b.date; });
      std::vector<int> gaps;
      double sum = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        sum += g[i].amount.to_double();
        if (i > 0) gaps.push_back(g[i].date - g[i - 1].date);
      }
      std::sort(gaps.begin(), gaps.end());
      const std::size_t h = gaps.size() / 2;
      const double median = gaps.size() % 2 ? gaps[h] : 0.5 * (gaps[h - 1] + gaps[h]);
      const Date next = g.back().date + static_cast<int>(std::lround(median));
      out.push_back({g.front().account, g.front().description, g, next, sum / static_cast<double>(g.size())});
    }
    return out;
  };
}

RecurringMetrics evaluate_recurring(const Ledger& ledger, const std::vector<RecurringLabel>& labels,
                                    const RecurringExtractor& extractor, const RecurringEvalOptions& options) {
  if (ledger.empty()) throw DataError("the ledger is empty");
  using Key = std::tuple<AccountId, int, std::string, std::int64_t>;
  std::map<Key, std::string> owner;
  std::map<std::pair<AccountId, std::string>, std::vector<Date>> streams;
  for (const auto& l : labels) {
    owner[{l.account, l.date.serial(), l.description, l.amount.value()}] = l.stream;
    streams[{l.account, l.stream}].push_back(l.date);
  }
  for (auto& [k, dates] : streams) std::sort(dates.begin(), dates.end());

  const Date lo = ledger.first_date() + options.burn_in_days;
  const Date hi = ledger.last_date() - options.tail_days;
  if (hi < lo) throw DataError("ledger too short for recurring evaluation");
  std::mt19937_64 rng(options.seed);
  std::vector<Date> dates;
  for (auto i : sample_indices(static_cast<std::size_t>(hi - lo + 1), options.dates, rng)) {
    dates.push_back(lo + static_cast<int>(i));
  }
  std::sort(dates.begin(), dates.end());

  struct PerDate {
    std::size_t extracted = 0;
    std::size_t correct = 0;
    double day_error = 0.0;
    std::size_t active = 0;
    std::size_t found = 0;
  };
  std::vector<PerDate> per(dates.size());
  parallel_for(dates.size(), options.threads, [&](std::size_t di) {
    const Date d = dates[di];
    PerDate& out = per[di];
    std::set<std::pair<AccountId, std::string>> found;
    for (const auto& account : ledger.accounts()) {
      const auto txns = ledger.transactions_of(account.id);
      const auto end = std::lower_bound(txns.begin(), txns.end(), d,
                                        [](const Transaction& t, Date x) { return t.date < x; });
      const std::span<const Transaction> history(txns.begin(), end);
      if (history.empty()) continue;
      for (const auto& p : extractor(history, d - 1)) {
        ++out.extracted;
        std::map<std::string, std::size_t> votes;
        Date last_support = p.support.front().date;
        for (const auto& t : p.support) {
          last_support = std::max(last_support, t.date);
          const auto it = owner.find({t.account, t.date.serial(), t.description, t.amount.value()});
          if (it != owner.end()) ++votes[it->second];
        }
        std::string stream;
        std::size_t best = 0;
        for (const auto& [s, n] : votes) {
          if (n > best) {
            best = n;
            stream = s;
          }
        }
        if (2 * best <= p.support.size()) continue;
        const auto& occ = streams.at({p.account, stream});
        const auto next = std::upper_bound(occ.begin(), occ.end(), last_support);
        if (next == occ.end()) continue;
        const int err = std::abs(p.predicted_date - *next);
        if (err > options.tolerance_days) continue;
        ++out.correct;
        out.day_error += err;
        found.insert({p.account, stream});
      }
    }
    for (const auto& [key, occ] : streams) {
      const auto past = std::lower_bound(occ.begin(), occ.end(), d) - occ.begin();
      if (past >= static_cast<std::ptrdiff_t>(kMinRecurringWindows) && past < static_cast<std::ptrdiff_t>(occ.size())) {
        ++out.active;
        if (found.count(key)) ++out.found;
      }
    }
  });

  RecurringMetrics m;
  m.dates = dates.size();
  std::size_t active = 0;
  std::size_t found = 0;
  double day_error = 0.0;
  for (const auto& p : per) {
    m.extracted += p.extracted;
    m.correct += p.correct;
    day_error += p.day_error;
    active += p.active;
    found += p.found;
  }
  const auto users = ledger.users().size();
  if (m.dates > 0 && users > 0) {
    m.avg_extracted_per_user = static_cast<double>(m.extracted) / static_cast<double>(m.dates * users);
  }
  m.precision = m.extracted ? static_cast<double>(m.correct) / static_cast<double>(m.extracted) : 0.0;
  m.recall = active ? static_cast<double>(found) / static_cast<double>(active) : 0.0;
  m.mean_day_error = m.correct ? day_error / static_cast<double>(m.correct) : 0.0;
  return m;
}

void write_recurring_metrics_csv(std::ostream& out,
                                 const std::vector<std::pair<std::string, RecurringMetrics>>& rows) {
  csv::write_row(out, {"extractor", "avg_extracted_per_user", "precision", "recall", "mean_day_error", "extracted",
                       "correct", "dates"});
  for (const auto& [name, m] : rows) {
    csv::write_row(out, {name, csv::format_double(m.avg_extracted_per_user), csv::format_double(m.precision),
                         csv::format_double(m.recall), csv::format_double(m.mean_day_error),
                         std::to_string(m.extracted), std::to_string(m.correct), std::to_string(m.dates)});
  }
}

}  // namespace balcast
