#include "balcast_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "balcast/cluster.hpp"
#include "balcast/csv.hpp"
#include "balcast/error.hpp"
#include "balcast/eval.hpp"
#include "balcast/forecast.hpp"
#include "balcast/ingest.hpp"
#include "balcast/recurring.hpp"
#include "balcast/tuning.hpp"
#include "balcast_cli/params.hpp"

namespace fs = std::filesystem;

namespace balcast::cli {

namespace {

/// Failure to read or write a file; reported with the data-error exit code.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string input;
  std::string balances;
  std::string format = "wagegoal";
  std::string out = ".";
  std::string config;
  std::string split;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct Loaded {
  Ledger ledger;
  bool pkdd = false;
  std::size_t unrecognized_categories = 0;
};

std::ofstream open_output(const Common& common, const std::string& name) {
  const fs::path dir(common.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw IoError("cannot write '" + (dir / name).string() + "'");
  return out;
}

void finish(std::ofstream& out, const std::string& name) {
  out.flush();
  if (!out) throw IoError("write failed for '" + name + "'");
}

Date parse_date_arg(const std::string& flag, const std::string& text) {
  try {
    return Date::parse(text);
  } catch (const DataError&) {
    throw InvalidArgument(flag + ": '" + text + "' is not a date (YYYY-MM-DD or M/D/YYYY)");
  }
}

SplitPoint parse_split(const std::string& text) {
  if (text.find('-') != std::string::npos || text.find('/') != std::string::npos) {
    return parse_date_arg("--split", text);
  }
  const double f = parse_number("split", text);
  if (!(f > 0.0 && f < 1.0)) throw InvalidArgument("--split fraction must lie in (0, 1)");
  return f;
}

Loaded load_ledger(const Common& common, const Parameters& params) {
  Loaded loaded;
  if (common.format == "pkdd99") {
    Pkdd99Options opt;
    opt.min_span_days = static_cast<int>(params.count("min_span_days", static_cast<std::size_t>(opt.min_span_days)));
    opt.train_fraction = params.number("train_fraction", opt.train_fraction);
    loaded.ledger = load_pkdd99(common.input, opt);
    loaded.pkdd = true;
  } else {
    fs::path balances = common.balances;
    if (balances.empty()) {
      balances = fs::path(common.input).parent_path() / "balances.csv";
      if (!fs::exists(balances)) throw InvalidArgument("--balances is required for the wagegoal format");
    }
    auto result = load_wagegoal_csv(common.input, load_balances_csv(balances));
    loaded.ledger = std::move(result.ledger);
    loaded.unrecognized_categories = result.unrecognized_categories;
  }
  if (loaded.ledger.empty()) throw DataError("'" + common.input + "' contains no transactions");
  if (!common.split.empty()) {
    loaded.ledger = loaded.ledger.with_train_end(resolve_split(loaded.ledger, parse_split(common.split)));
  } else if (auto v = params.raw("split")) {
    loaded.ledger = loaded.ledger.with_train_end(resolve_split(loaded.ledger, parse_split(*v)));
  }
  return loaded;
}

Step step_for(const Loaded& loaded, const Parameters& params) {
  const auto v = params.raw("step");
  if (!v) return loaded.pkdd ? Step::Weekly : Step::Daily;
  if (*v == "daily") return Step::Daily;
  if (*v == "weekly") return Step::Weekly;
  throw InvalidArgument("step must be 'daily' or 'weekly'");
}

std::vector<AccountId> accounts_with_transactions(const Ledger& ledger) {
  std::vector<AccountId> ids;
  for (const auto& a : ledger.accounts()) {
    if (!ledger.transactions_of(a.id).empty()) ids.push_back(a.id);
  }
  return ids;
}

/// Class from the parameter file when tuned, else mined from `ledger`. PKDD'99 ledgers carry no
/// descriptions, so every account is treated as non-paycheck there.
AccountClass class_of(const Loaded& loaded, const Ledger& ledger, const AccountId& id, const Parameters& params,
                      const SimilarityConfig& sim) {
  if (auto c = params.account_class(id)) return *c;
  if (loaded.pkdd) return AccountClass::NonPaycheck;
  return classify_account(ledger, id, sim);
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  for (const auto& name : split_list(text)) {
    const auto m = parse_method(name);
    if (!m) throw InvalidArgument("unknown method '" + name + "'");
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  if (out.empty()) throw InvalidArgument("no forecasting method given");
  return out;
}

std::string fmt(double v) { return csv::format_double(v); }

// ---------------------------------------------------------------------------------------------

void cmd_ingest(const Common& common, const Parameters& params, std::ostream& out) {
  const auto loaded = load_ledger(common, params);
  const auto& ledger = loaded.ledger;
  {
    auto f = open_output(common, "ledger.csv");
    write_wagegoal_csv(ledger, f);
    finish(f, "ledger.csv");
  }
  {
    auto f = open_output(common, "balances.csv");
    write_balances_csv(ledger, f);
    finish(f, "balances.csv");
  }
  const std::vector<std::pair<std::string, std::string>> summary{
      {"accounts", std::to_string(ledger.accounts().size())},
      {"users", std::to_string(ledger.users().size())},
      {"transactions", std::to_string(ledger.transactions().size())},
      {"first_date", ledger.first_date().iso()},
      {"last_date", ledger.last_date().iso()},
      {"train_end", ledger.train_end().iso()},
      {"unrecognized_categories", std::to_string(loaded.unrecognized_categories)},
  };
  auto f = open_output(common, "summary.csv");
  csv::write_row(f, {"field", "value"});
  for (const auto& [k, v] : summary) {
    csv::write_row(f, {k, v});
    out << k << ": " << v << '\n';
  }
  finish(f, "summary.csv");
}

void cmd_recurring(const Common& common, const Parameters& params, const std::string& as_of_text,
                   std::ostream& out) {
  auto loaded = load_ledger(common, params);
  const auto sim = params.similarity();
  std::optional<Date> as_of;
  if (!as_of_text.empty()) {
    as_of = parse_date_arg("--as-of", as_of_text);
    loaded.ledger = loaded.ledger.truncated(*as_of);
  }
  const auto& ledger = loaded.ledger;

  auto f = open_output(common, "recurring.csv");
  csv::write_row(f, {"account_id", "frequency", "description", "mean_amount", "last_date", "next_date"});
  std::size_t rows = 0;
  for (const auto& id : accounts_with_transactions(ledger)) {
    const auto txns = ledger.transactions_of(id);
    const Date when = as_of.value_or(txns.back().date);
    for (const auto& r : extract_all_recurring(txns, when, sim)) {
      const auto next = predict_next(r);
      csv::write_row(f, {r.account, std::string(r.frequency.name()), r.description, fmt(std::round(r.mean_amount * 1e4) / 1e4),
                         r.last_date.iso(), next.predicted_date.iso()});
      ++rows;
    }
  }
  finish(f, "recurring.csv");

  auto g = open_output(common, "large_expenses.csv");
  csv::write_row(g, {"description", "approximate_cost", "source_user"});
  const auto large = unexpected_large_expenses(ledger, sim);
  for (const auto& e : large) csv::write_row(g, {e.description, fmt(e.approximate_cost), e.source_user});
  finish(g, "large_expenses.csv");

  out << "recurring charges: " << rows << '\n' << "large expenses: " << large.size() << '\n';
}

void cmd_forecast(const Common& common, const Parameters& params, const std::vector<std::string>& accounts,
                  const std::string& origin_text, const std::string& method_text, std::ostream& out) {
  const auto method = parse_method(method_text);
  if (!method) throw InvalidArgument("unknown method '" + method_text + "'");
  const auto loaded = load_ledger(common, params);
  const auto sim = params.similarity();
  const auto step = step_for(loaded, params);
  (void)params.forecast();  // reject out-of-range overrides before any work

  const Date origin = origin_text.empty() ? loaded.ledger.last_date() : parse_date_arg("--origin", origin_text);
  const Ledger view = loaded.ledger.truncated(origin);
  std::vector<AccountId> ids = accounts;
  if (ids.empty()) ids = accounts_with_transactions(view);
  for (const auto& id : ids) {
    if (!view.has_account(id)) throw NotFoundError("unknown account '" + id + "'");
  }
  std::sort(ids.begin(), ids.end());

  ForecastCorpus corpus;
  if (*method != Method::HistAvg) corpus = build_forecast_corpus(view, origin, step, sim, !loaded.pkdd);

  std::vector<ForecastResult> results;
  for (const auto& id : ids) {
    const auto cfg = params.forecast(id, class_of(loaded, view, id, params, sim));
    const auto snapshot = make_snapshot(view, id, origin, step, sim, !loaded.pkdd);
    try {
      results.push_back(run_forecast(*method, snapshot, cfg, corpus));
    } catch (const DataError& e) {
      throw DataError("account " + id + ": " + e.what());
    }
    const auto& r = results.back();
    out << id << ": " << r.predictions.size() << " steps from " << r.origin.iso() << " by " << method_name(r.method);
    if (r.diagnostics.shortfall) out << " (only " << r.diagnostics.matches_used << " matches)";
    out << '\n';
  }
  auto f = open_output(common, "forecast.csv");
  write_forecast_csv(f, results);
  finish(f, "forecast.csv");
}

struct EvaluateArgs {
  std::string methods = "histavg,subseqls,hybrid,nn,knn";
  std::string external;
  std::string labels;
  std::size_t windows = 25;
  std::size_t iterations = 2;
  std::size_t accounts = 20;
};

EvalConfig eval_config(const Loaded& loaded, const Ledger& training, const std::vector<AccountId>& ids,
                       const Parameters& params, const Common& common) {
  EvalConfig config;
  config.similarity = params.similarity();
  config.step = step_for(loaded, params);
  config.base = params.forecast();
  config.mine_recurring = !loaded.pkdd;
  config.threads = common.threads;
  for (const auto& id : ids) {
    config.per_account[id] = params.forecast(id, class_of(loaded, training, id, params, config.similarity));
  }
  return config;
}

void write_windows(const Common& common, const std::vector<TestWindow>& windows,
                   const std::optional<std::size_t>& iteration, std::ofstream& f) {
  (void)common;
  for (const auto& w : windows) {
    std::vector<std::string> row;
    if (iteration) row.push_back(std::to_string(*iteration));
    row.push_back(w.account);
    row.push_back(w.origin.iso());
    csv::write_row(f, row);
  }
}

void cmd_evaluate_pkdd(const Common& common, const Parameters& params, const EvaluateArgs& args,
                       const Loaded& loaded, std::ostream& out) {
  PkddExperimentOptions opt;
  opt.iterations = args.iterations;
  opt.accounts = args.accounts;
  opt.methods = parse_methods(args.methods);
  const Ledger training = loaded.ledger.truncated(loaded.ledger.train_end());
  opt.eval = eval_config(loaded, training, {}, params, common);
  opt.windows.count = args.windows;
  opt.windows.length = opt.eval.base.S;
  opt.windows.min_history = opt.eval.base.L;
  opt.windows.seed = common.seed;
  const auto iterations = run_pkdd_experiment(loaded.ledger, opt);

  auto metrics = open_output(common, "metrics.csv");
  auto per_step = open_output(common, "per_step.csv");
  auto windows = open_output(common, "windows.csv");
  csv::write_row(metrics, {"iteration", "method", "mae", "negative_balance_error", "windows", "missing"});
  csv::write_row(per_step, {"iteration", "method", "step", "mae"});
  csv::write_row(windows, {"iteration", "account_id", "origin_date"});
  std::map<std::string, std::vector<double>> maes;
  for (std::size_t i = 0; i < iterations.size(); ++i) {
    const auto& rep = iterations[i].report;
    for (const auto& m : rep.methods) {
      const auto& mm = m.metrics;
      csv::write_row(metrics, {std::to_string(i + 1), m.method, fmt(mm.mae),
                               mm.negative_balance_error ? fmt(*mm.negative_balance_error) : "",
                               std::to_string(mm.windows), std::to_string(mm.missing)});
      for (std::size_t s = 0; s < mm.per_step_mae.size(); ++s) {
        csv::write_row(per_step, {std::to_string(i + 1), m.method, std::to_string(s + 1), fmt(mm.per_step_mae[s])});
      }
      maes[m.method].push_back(mm.mae);
    }
    write_windows(common, rep.windows, i + 1, windows);
  }
  finish(metrics, "metrics.csv");
  finish(per_step, "per_step.csv");
  finish(windows, "windows.csv");
  for (const auto& [name, v] : maes) {
    double sum = 0.0;
    for (double x : v) sum += x;
    out << name << ": mean MAE " << fmt(v.empty() ? 0.0 : sum / static_cast<double>(v.size())) << " over "
        << v.size() << " iterations\n";
  }
}

void cmd_evaluate(const Common& common, const Parameters& params, const EvaluateArgs& args, std::ostream& out) {
  const auto loaded = load_ledger(common, params);
  if (loaded.pkdd) {
    cmd_evaluate_pkdd(common, params, args, loaded, out);
    return;
  }
  const auto& ledger = loaded.ledger;
  const auto methods = parse_methods(args.methods);
  std::vector<ExternalPrediction> external;
  if (!args.external.empty()) {
    std::ifstream in(args.external);
    if (!in) throw IoError("cannot open '" + args.external + "'");
    external = read_predictions_csv(in);
  }

  const auto ids = accounts_with_transactions(ledger);
  const Ledger training = ledger.truncated(ledger.train_end());
  const auto config = eval_config(loaded, training, ids, params, common);

  std::vector<BalanceSeries> series;
  for (const auto& id : ids) series.push_back(build_series_from_opening(ledger, id, config.step));
  WindowOptions wopt;
  wopt.count = args.windows;
  wopt.length = config.base.S;
  wopt.min_history = config.base.L;
  wopt.seed = common.seed;
  const auto sample = sample_test_windows(series, ledger.train_end(), wopt);
  if (sample.windows.empty()) throw DataError("no feasible test window after the training period");
  if (sample.short_of_count) {
    out << "only " << sample.feasible << " feasible test windows; using all of them\n";
  }

  const auto report = evaluate_forecasts(ledger, sample.windows, methods, config, external);
  {
    auto f = open_output(common, "metrics.csv");
    write_metrics_csv(f, report);
    finish(f, "metrics.csv");
  }
  {
    auto f = open_output(common, "per_step.csv");
    write_per_step_csv(f, report);
    finish(f, "per_step.csv");
  }
  {
    auto f = open_output(common, "windows.csv");
    csv::write_row(f, {"account_id", "origin_date"});
    write_windows(common, report.windows, std::nullopt, f);
    finish(f, "windows.csv");
  }
  {
    std::vector<ForecastResult> all;
    for (const auto& per_method : report.forecasts) {
      for (const auto& r : per_method) {
        if (!r.predictions.empty()) all.push_back(r);
      }
    }
    auto f = open_output(common, "forecasts.csv");
    write_forecast_csv(f, all);
    finish(f, "forecasts.csv");
  }
  for (const auto& m : report.methods) {
    out << m.method << ": MAE " << fmt(m.metrics.mae);
    if (m.metrics.missing > 0) out << " (" << m.metrics.missing << " windows missing)";
    out << '\n';
  }

  if (!args.labels.empty()) {
    const auto labels = load_labels_csv(args.labels);
    RecurringEvalOptions ropt;
    ropt.seed = common.seed;
    ropt.threads = common.threads;
    ropt.tolerance_days = static_cast<int>(params.count("tolerance_days", static_cast<std::size_t>(ropt.tolerance_days)));
    std::vector<std::pair<std::string, RecurringMetrics>> rows;
    rows.emplace_back("proposed", evaluate_recurring(ledger, labels, proposed_extractor(config.similarity), ropt));
    rows.emplace_back("keyword", evaluate_recurring(ledger, labels, keyword_extractor(config.similarity), ropt));
    auto f = open_output(common, "recurring_metrics.csv");
    write_recurring_metrics_csv(f, rows);
    finish(f, "recurring_metrics.csv");
    for (const auto& [name, m] : rows) {
      out << "recurring " << name << ": precision " << fmt(m.precision) << " recall " << fmt(m.recall) << '\n';
    }
  }
}

void cmd_tune(const Common& common, const Parameters& params, std::size_t windows, std::size_t stride,
              std::ostream& out) {
  const auto loaded = load_ledger(common, params);
  const Ledger training = loaded.ledger.truncated(loaded.ledger.train_end());
  TuningOptions opt;
  opt.base = params.forecast();
  opt.grids = params.grids(opt.base.S);
  opt.step = step_for(loaded, params);
  opt.windows = windows;
  opt.stride = stride;
  opt.threads = common.threads;
  opt.similarity = params.similarity();
  opt.mine_recurring = !loaded.pkdd;

  std::map<AccountClass, std::vector<AccountId>> by_class;
  for (const auto& id : accounts_with_transactions(training)) {
    by_class[class_of(loaded, training, id, params, opt.similarity)].push_back(id);
  }

  ParamFile result;
  result.set("L", std::to_string(opt.base.L));
  result.set("L1", std::to_string(opt.base.L1));
  result.set("S", std::to_string(opt.base.S));
  result.set("window", std::to_string(opt.base.dtw.window));
  result.set("threshold", fmt(opt.similarity.threshold));
  result.set("knn_k", std::to_string(opt.base.knn_k));
  result.set("step", opt.step == Step::Daily ? "daily" : "weekly");
  for (const auto& [cls, ids] : by_class) {
    const std::string name(account_class_name(cls));
    const auto tuned = tune_parameters(training, ids, opt);
    result.set("M." + name, std::to_string(tuned.M));
    result.set("tau." + name, std::to_string(tuned.tau));
    for (const auto& [id, lambda] : tuned.lambda) result.set("lambda." + id, fmt(lambda));
    for (const auto& id : ids) result.set("class." + id, name);
    out << name << ": " << ids.size() << " accounts, M=" << tuned.M << " tau=" << tuned.tau << " MAE "
        << fmt(tuned.mae) << " over " << tuned.windows_used << " windows\n";
  }
  auto f = open_output(common, "params.txt");
  result.write(f);
  finish(f, "params.txt");
}

void cmd_cluster(const Common& common, const Parameters& params, std::size_t k, const std::string& linkage_text,
                 const std::string& from_text, const std::string& to_text, std::ostream& out) {
  const auto linkage = parse_linkage(linkage_text);
  if (!linkage) throw InvalidArgument("unknown linkage '" + linkage_text + "'");
  const auto loaded = load_ledger(common, params);
  const auto& ledger = loaded.ledger;
  const Date to = to_text.empty() ? ledger.last_date() : parse_date_arg("--to", to_text);
  const Date from = from_text.empty() ? to - 29 : parse_date_arg("--from", from_text);

  ClusterOptions opt;
  opt.k = k;
  opt.linkage = *linkage;
  opt.threads = common.threads;
  opt.dtw.window = params.count("window", opt.dtw.window);
  const auto result = cluster_balances(ledger, from, to, opt);

  auto f = open_output(common, "assignments.csv");
  csv::write_row(f, {"user_id", "cluster"});
  for (const auto& [user, c] : result.assignments) csv::write_row(f, {user, std::to_string(c)});
  finish(f, "assignments.csv");

  auto g = open_output(common, "profiles.csv");
  csv::write_row(g, {"cluster", "category", "mean_amount"});
  for (const auto& [c, totals] : result.category_profiles) {
    for (std::size_t i = 0; i < totals.size(); ++i) {
      csv::write_row(g, {std::to_string(c), std::string(category_name(static_cast<Category>(i))), fmt(totals[i])});
    }
  }
  finish(g, "profiles.csv");

  std::map<std::size_t, std::size_t> sizes;
  for (const auto& [user, c] : result.assignments) ++sizes[c];
  out << result.users.size() << " users in " << result.k << " clusters (" << linkage_name(result.linkage)
      << " linkage, " << from.iso() << " to " << to.iso() << ")\n";
  for (const auto& [c, n] : sizes) out << "cluster " << c << ": " << n << " users\n";
}

void add_common(CLI::App* app, Common& common) {
  app->add_option("--input,-i", common.input, "Transactions file")->required()->check(CLI::ExistingFile);
  app->add_option("--balances", common.balances, "Current balances CSV (wagegoal format)")->check(CLI::ExistingFile);
  app->add_option("--format", common.format, "Input format")->check(CLI::IsMember({"wagegoal", "pkdd99"}));
  app->add_option("--out,-o", common.out, "Output directory");
  app->add_option("--config,-c", common.config, "key=value parameter file")->check(CLI::ExistingFile);
  app->add_option("--split", common.split, "Last training date or training fraction");
  app->add_option("--seed", common.seed, "Random seed");
  app->add_option("--threads", common.threads, "Worker threads (0 = all cores)");
}

void add_overrides(CLI::App* app, std::map<std::string, std::string>& flags) {
  const std::vector<std::pair<std::string, std::string>> keys{
      {"L", "Query length"},
      {"L1", "Matched history length within the query"},
      {"S", "Forecast horizon in steps"},
      {"M", "Number of matched subsequences"},
      {"lambda", "Anomaly penalty weight"},
      {"tau", "Hybrid switch step"},
      {"threshold", "Description similarity threshold"},
      {"window", "DTW band half-width"},
      {"knn-k", "Neighbours averaged by KNN"},
  };
  for (const auto& [key, help] : keys) {
    std::string stored = key == "knn-k" ? "knn_k" : key;
    std::string names = "--" + key;
    if (key == "S") names += ",--horizon";
    app->add_option_function<std::string>(names, [&flags, stored](const std::string& v) { flags[stored] = v; },
                                          help);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Account balance forecasting and transaction analysis", "balcast"};
  app.require_subcommand(1);

  Common common;
  std::map<std::string, std::string> flags;

  auto* ingest = app.add_subcommand("ingest", "Normalise a transaction file to the canonical ledger CSV");
  auto* recurring = app.add_subcommand("recurring", "Mine recurring charges and unexpected large expenses");
  auto* forecast = app.add_subcommand("forecast", "Forecast account balances from an origin date");
  auto* evaluate = app.add_subcommand("evaluate", "Score forecasting methods on sampled test windows");
  auto* tune = app.add_subcommand("tune", "Grid-search M, tau and lambda on the training period");
  auto* cluster = app.add_subcommand("cluster", "Cluster users by the shape of their balance");
  for (auto* sub : {ingest, recurring, forecast, evaluate, tune, cluster}) {
    add_common(sub, common);
    add_overrides(sub, flags);
  }

  std::string as_of;
  recurring->add_option("--as-of", as_of, "Mine as of this date (default: each account's last transaction)");

  std::vector<std::string> accounts;
  std::string origin;
  std::string method = "hybrid";
  forecast->add_option("--account,-a", accounts, "Account ids (default: all)");
  forecast->add_option("--origin", origin, "Forecast origin (default: last transaction date)");
  forecast->add_option("--method,-m", method, "histavg | subseqls | hybrid | nn | knn");

  EvaluateArgs eargs;
  evaluate->add_option("--methods", eargs.methods, "Comma-separated methods");
  evaluate->add_option("--external", eargs.external, "Predictions CSV from another system")->check(CLI::ExistingFile);
  evaluate->add_option("--labels", eargs.labels, "Recurring ground-truth labels CSV")->check(CLI::ExistingFile);
  evaluate->add_option("--windows", eargs.windows, "Test windows per run");
  evaluate->add_option("--iterations", eargs.iterations, "PKDD'99 mode: repetitions");
  evaluate->add_option("--accounts", eargs.accounts, "PKDD'99 mode: accounts sampled per repetition");

  std::size_t tune_windows = 8;
  std::size_t tune_stride = 4;
  tune->add_option("--tune-windows", tune_windows, "Held-out windows per account");
  tune->add_option("--stride", tune_stride, "Steps between held-out windows");

  std::size_t k = 5;
  std::string linkage = "complete";
  std::string from;
  std::string to;
  cluster->add_option("--k,-k", k, "Number of clusters");
  cluster->add_option("--linkage", linkage, "complete | average");
  cluster->add_option("--from", from, "First day (default: 29 days before --to)");
  cluster->add_option("--to", to, "Last day (default: last transaction date)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    const Parameters params(common.config.empty() ? ParamFile{} : ParamFile::load(common.config), flags);
    if (common.threads == 0) common.threads = std::max(1u, std::thread::hardware_concurrency());
    if (ingest->parsed()) {
      cmd_ingest(common, params, out);
    } else if (recurring->parsed()) {
      cmd_recurring(common, params, as_of, out);
    } else if (forecast->parsed()) {
      cmd_forecast(common, params, accounts, origin, method, out);
    } else if (evaluate->parsed()) {
      cmd_evaluate(common, params, eargs, out);
    } else if (tune->parsed()) {
      cmd_tune(common, params, tune_windows, tune_stride, out);
    } else if (cluster->parsed()) {
      cmd_cluster(common, params, k, linkage, from, to, out);
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kSuccess;
}

}  // namespace balcast::cli
