#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "balcast/error.hpp"
#include "balcast/eval.hpp"
#include "balcast/ingest.hpp"
#include "balcast/synthetic.hpp"
#include "helpers.hpp"

using namespace balcast;
using testutil::d;
using testutil::tx;

namespace {

BalanceSeries series_of(const std::string& id, Date start, std::vector<double> v) {
  return BalanceSeries{id, start, Step::Daily, std::move(v)};
}

// Values with sample standard deviation exactly `sd` (alternating mean +- a).
std::vector<double> with_stdev(std::size_t n, double sd) {
  const double a = sd * std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n));
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 50.0 + (i % 2 ? a : -a);
  return v;
}

}  // namespace

TEST(Scaling, Examples) {
  const Date start = d(2016, 1, 1);
  const auto s10 = series_of("a", start, with_stdev(100, 10.0));
  const auto s5 = series_of("b", start, with_stdev(100, 5.0));
  EXPECT_NEAR(*variance100_factor(s10, start + 99), 1.0, 1e-12);
  EXPECT_NEAR(*variance100_factor(s5, start + 99), 2.0, 1e-12);
  const auto flat = series_of("c", start, std::vector<double>(100, 3.0));
  EXPECT_FALSE(variance100_factor(flat, start + 99).has_value());

  const auto scaled = scale_accounts({s10, s5, flat}, start + 99);
  EXPECT_EQ(scaled.excluded, std::vector<AccountId>{"c"});
  ASSERT_EQ(scaled.series.size(), 2u);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_NEAR(scaled.series[1].values[i], 2.0 * s5.values[i], 1e-12);
}

TEST(Scaling, TrainingVarianceIsOneHundredProperty) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 37.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(200);
    double x = 0;
    for (auto& y : v) y = (x += g(rng));
    const Date start = d(2016, 1, 1);
    const Date train_end = start + 149;
    const auto scaled = scale_accounts({series_of("a", start, v)}, train_end);
    const auto train = scaled.series[0].prefix_until(train_end);
    const double sd = sample_stdev(train.values);
    EXPECT_NEAR(sd * sd, 100.0, 1e-6);
  }
}

TEST(TestWindows, DeterministicFeasibleAndFlagged) {
  const Date start = d(2016, 1, 1);
  std::vector<BalanceSeries> s{series_of("b", start, std::vector<double>(200, 1.0)),
                               series_of("a", start + 20, std::vector<double>(150, 1.0))};
  const Date test_start = start + 120;
  WindowOptions opt;
  opt.count = 25;
  opt.seed = 7;
  const auto w1 = sample_test_windows(s, test_start, opt);
  const auto w2 = sample_test_windows(s, test_start, opt);
  EXPECT_EQ(w1.windows, w2.windows);
  ASSERT_EQ(w1.windows.size(), 25u);
  EXPECT_FALSE(w1.short_of_count);
  EXPECT_TRUE(std::is_sorted(w1.windows.begin(), w1.windows.end()));
  EXPECT_EQ(std::adjacent_find(w1.windows.begin(), w1.windows.end()), w1.windows.end());
  for (const auto& w : w1.windows) {
    const auto& ser = w.account == "a" ? s[1] : s[0];
    EXPECT_GE(w.origin, test_start);
    EXPECT_LE(w.origin + static_cast<int>(opt.length), ser.end_date());
    EXPECT_GE(*ser.index_of(w.origin) + 1, opt.min_history);
  }
  // b: origins 120..168 (49), a: origins 120..138 (19) relative to the first series start.
  EXPECT_EQ(w1.feasible, 68u);
  opt.seed = 8;
  EXPECT_NE(sample_test_windows(s, test_start, opt).windows, w1.windows);

  opt.count = 500;
  const auto all = sample_test_windows(s, test_start, opt);
  EXPECT_TRUE(all.short_of_count);
  EXPECT_EQ(all.windows.size(), 68u);
}

TEST(Metrics, PerfectPredictorAndExamples) {
  const std::vector<std::vector<double>> truth{{1, 2, 3}, {4, 5, 6}};
  auto m = score_windows(truth, truth);
  EXPECT_EQ(m.mae, 0.0);
  EXPECT_EQ(m.windows, 2u);
  EXPECT_FALSE(m.negative_balance_error.has_value());

  const std::vector<std::vector<double>> truth2{{-1, 2, 3}, {4, -5, 6}};
  const std::vector<std::vector<double>> pred{{0, 2, 5}, {4, -4, 2}};
  m = score_windows(truth2, pred);
  EXPECT_DOUBLE_EQ(m.mae, (1 + 0 + 2 + 0 + 1 + 4) / 6.0);
  EXPECT_EQ(m.per_step_mae, (std::vector<double>{0.5, 0.5, 3.0}));
  ASSERT_TRUE(m.negative_balance_error.has_value());
  EXPECT_DOUBLE_EQ(*m.negative_balance_error, 1.0);  // |(-1)-0| and |(-5)-(-4)|
}

TEST(Metrics, MissingWindowsExcluded) {
  const std::vector<std::vector<double>> truth{{1, 2}, {3, 4}};
  const std::vector<std::vector<double>> pred{{2, 2}, {}};
  const auto m = score_windows(truth, pred);
  EXPECT_EQ(m.missing, 1u);
  EXPECT_EQ(m.windows, 1u);
  EXPECT_DOUBLE_EQ(m.mae, 0.5);
  EXPECT_THROW(score_windows(truth, {{1, 2}}), InvalidArgument);
}

TEST(Metrics, PermutationInvariantAndPerStepAveragesProperty) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> truth(12, std::vector<double>(31));
    auto pred = truth;
    for (std::size_t w = 0; w < truth.size(); ++w) {
      for (std::size_t s = 0; s < 31; ++s) {
        truth[w][s] = g(rng);
        pred[w][s] = g(rng);
      }
    }
    const auto m = score_windows(truth, pred);
    std::vector<std::size_t> order(truth.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<double>> t2;
    std::vector<std::vector<double>> p2;
    for (auto i : order) {
      t2.push_back(truth[i]);
      p2.push_back(pred[i]);
    }
    const auto m2 = score_windows(t2, p2);
    EXPECT_NEAR(m.mae, m2.mae, 1e-12);
    EXPECT_NEAR(*m.negative_balance_error, *m2.negative_balance_error, 1e-12);
    EXPECT_NEAR(std::accumulate(m.per_step_mae.begin(), m.per_step_mae.end(), 0.0) / 31.0, m.mae, 1e-12);
    for (double v : m.per_step_mae) EXPECT_GE(v, 0.0);
  }
}

TEST(Keyword, Rules) {
  EXPECT_TRUE(keyword_flagged(tx("a", d(2016, 1, 1), "RECURRING PYMT GYM", 30, "Recreation")));
  EXPECT_TRUE(keyword_flagged(tx("a", d(2016, 1, 1), "NETFLIX", 12, "Service - Subscription")));
  EXPECT_TRUE(keyword_flagged(tx("a", d(2016, 1, 1), "ACME", -900, "Transfer - Payroll")));
  EXPECT_TRUE(keyword_flagged(tx("a", d(2016, 1, 1), "CITY WATER", 50, "Payment - Bill Pay")));
  EXPECT_TRUE(keyword_flagged(tx("a", d(2016, 1, 1), "GEICO", 90, "Service - Insurance")));
  EXPECT_FALSE(keyword_flagged(tx("a", d(2016, 1, 1), "GYM MEMBERSHIP", 30, "Shops")));
  const std::vector<Transaction> t{tx("a", d(2016, 1, 1), "recurring x", 1, "Shops"),
                                   tx("a", d(2016, 1, 2), "y", 1, "Shops")};
  EXPECT_EQ(keyword_baseline_recurring(t).size(), 1u);
}

TEST(ExternalPredictions, CsvRows) {
  std::istringstream in(
      "account_id,method,origin_date,step,predicted_balance\n"
      "a1,ARMA,2016-06-01,1,10.5\n"
      "a1,ARMA,2016-06-01,2,-3\n");
  const auto rows = read_predictions_csv(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].account, "a1");
  EXPECT_EQ(rows[0].method, "ARMA");
  EXPECT_EQ(rows[0].origin, d(2016, 6, 1));
  EXPECT_EQ(rows[1].step, 2u);
  EXPECT_EQ(rows[1].value, -3.0);

  std::istringstream bad("account_id,method,origin_date,step,predicted_balance\na1,ARMA,2016-06-01,x,1\n");
  EXPECT_THROW(read_predictions_csv(bad), DataError);

  ForecastResult r;
  r.account = "z";
  r.method = Method::KNN;
  r.origin = d(2016, 2, 29);
  r.predictions = {1.25, 2.5};
  std::ostringstream out;
  write_forecast_csv(out, {r});
  std::istringstream back(out.str());
  const auto again = read_predictions_csv(back);
  ASSERT_EQ(again.size(), 2u);
  EXPECT_EQ(again[1].value, 2.5);
  EXPECT_EQ(again[1].origin, r.origin);
  EXPECT_EQ(again[0].method, "KNN");
}

namespace {

struct PeriodicFixture {
  Ledger ledger;
  std::vector<RecurringLabel> labels;
};

PeriodicFixture periodic_fixture() {
  const Date end = d(2017, 6, 30);
  std::vector<Transaction> t;
  std::vector<RecurringLabel> labels;
  auto add = [&](Date day, const std::string& desc, double amount, const std::string& cat, const std::string& stream,
                 FrequencyKind f) {
    t.push_back(tx("a", day, desc, amount, cat));
    if (!stream.empty()) labels.push_back({"a", stream, f, day, desc, Cents::from_double(amount)});
  };
  for (Date m = d(2016, 1, 5); m <= end; m = m.add_months(1)) add(m, "RENT", 900, "Payment", "rent", FrequencyKind::Monthly);
  for (Date w = d(2016, 1, 4); w <= end; w = w + 7) add(w, "GYM CLASS", 15, "Recreation", "gym", FrequencyKind::Weekly);
  // Looks like a bill for two months only.
  add(d(2016, 9, 12), "STREAMING TRIAL", 9.99, "Service", "", FrequencyKind::Monthly);
  add(d(2016, 10, 12), "STREAMING TRIAL", 9.99, "Service", "", FrequencyKind::Monthly);
  // Each shop recurs every 52 days, which fits no frequency window.
  const char* shops[] = {"HARDWARE", "BOOKSTORE", "PHARMACY", "FLORIST"};
  for (int k = 0; k < 40; ++k) add(d(2016, 1, 2) + 13 * k, shops[k % 4], 20 + k, "Shops", "", FrequencyKind::Monthly);
  return {Ledger({testutil::account("a", "u", 100, end)}, t), labels};
}

}  // namespace

TEST(RecurringEval, ExactPeriodicFixture) {
  const auto f = periodic_fixture();
  RecurringEvalOptions opt;
  opt.dates = 10;
  const auto m = evaluate_recurring(f.ledger, f.labels, proposed_extractor(), opt);
  EXPECT_EQ(m.dates, 10u);
  EXPECT_GT(m.extracted, 0u);
  EXPECT_DOUBLE_EQ(m.precision, 1.0);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
  EXPECT_DOUBLE_EQ(m.mean_day_error, 0.0);
  EXPECT_DOUBLE_EQ(m.avg_extracted_per_user, 2.0);
  const auto again = evaluate_recurring(f.ledger, f.labels, proposed_extractor(), opt);
  EXPECT_EQ(again.correct, m.correct);
}

TEST(RecurringEval, LabelsCsvRoundTrip) {
  const auto f = periodic_fixture();
  std::ostringstream out;
  write_labels_csv(out, f.labels);
  std::istringstream in(out.str());
  const auto back = read_labels_csv(in);
  ASSERT_EQ(back.size(), f.labels.size());
  EXPECT_EQ(back[3].stream, f.labels[3].stream);
  EXPECT_EQ(back[3].date, f.labels[3].date);
  EXPECT_EQ(back[3].amount, f.labels[3].amount);
  EXPECT_EQ(back.back().frequency, FrequencyKind::Weekly);
}

namespace {

const SyntheticData& synthetic() {
  static const SyntheticData data = [] {
    SyntheticOptions opt;
    opt.accounts = 6;
    opt.users = 6;
    opt.seed = 11;
    return generate_synthetic(opt);
  }();
  return data;
}

}  // namespace

// A large transaction dated after each origin, with the current balance adjusted so that every
// balance up to the origin is unchanged, must not move any forecast.
TEST(EvaluateForecasts, CanaryAfterOriginHasNoEffect) {
  const Ledger& ledger = synthetic().ledger;
  std::vector<BalanceSeries> series;
  for (const auto& a : ledger.accounts()) series.push_back(build_series_from_opening(ledger, a.id, Step::Daily));
  WindowOptions wo;
  wo.count = 4;
  wo.seed = 2;
  const auto windows = sample_test_windows(series, ledger.train_end(), wo).windows;
  ASSERT_EQ(windows.size(), 4u);

  std::vector<Transaction> txns = ledger.transactions();
  std::vector<Account> accounts = ledger.accounts();
  // One canary per account, after the account's latest origin.
  std::map<AccountId, Date> latest;
  for (const auto& w : windows) latest[w.account] = std::max(latest[w.account], w.origin);
  for (const auto& [id, origin] : latest) {
    txns.push_back(tx(id, origin + 1, "CANARY", 50000, "Shops"));
    for (auto& a : accounts) {
      if (a.id == id) a.current_balance = Cents(a.current_balance.value() - 5000000);
    }
  }
  const Ledger poisoned(accounts, txns, ledger.train_end());

  EvalConfig cfg;
  cfg.base.M = 5;
  const std::vector<Method> methods{Method::HistAvg, Method::SubseqLS, Method::Hybrid, Method::KNN};
  const auto clean = evaluate_forecasts(ledger, windows, methods, cfg);
  const auto dirty = evaluate_forecasts(poisoned, windows, methods, cfg);
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t w = 0; w < windows.size(); ++w) {
      ASSERT_FALSE(clean.forecasts[m][w].predictions.empty()) << m << " " << w;
      EXPECT_EQ(clean.forecasts[m][w].predictions, dirty.forecasts[m][w].predictions) << m << " " << w;
    }
  }
}

TEST(EvaluateForecasts, ExternalAndDeterministic) {
  const Ledger& ledger = synthetic().ledger;
  std::vector<BalanceSeries> series;
  for (const auto& a : ledger.accounts()) series.push_back(build_series_from_opening(ledger, a.id, Step::Daily));
  WindowOptions wo;
  wo.count = 3;
  const auto windows = sample_test_windows(series, ledger.train_end(), wo).windows;

  EvalConfig cfg;
  cfg.threads = 2;
  // An external "method" that knows the truth scores zero; one missing a step counts as missing.
  std::vector<ExternalPrediction> ext;
  for (const auto& w : windows) {
    const auto& s = *std::find_if(series.begin(), series.end(), [&](const auto& x) { return x.account == w.account; });
    const auto at = *s.index_of(w.origin);
    for (std::size_t k = 1; k <= 31; ++k) ext.push_back({"Oracle", w.account, w.origin, k, s.values[at + k]});
    if (&w == &windows.front()) continue;
    for (std::size_t k = 1; k <= 30; ++k) ext.push_back({"Partial", w.account, w.origin, k, 0.0});
  }
  const auto r1 = evaluate_forecasts(ledger, windows, {Method::HistAvg}, cfg, ext);
  ASSERT_EQ(r1.methods.size(), 3u);
  EXPECT_EQ(r1.methods[0].method, "HistAvg");
  const auto& oracle = *std::find_if(r1.methods.begin(), r1.methods.end(), [](const auto& m) { return m.method == "Oracle"; });
  EXPECT_NEAR(oracle.metrics.mae, 0.0, 1e-9);
  const auto& partial = *std::find_if(r1.methods.begin(), r1.methods.end(), [](const auto& m) { return m.method == "Partial"; });
  EXPECT_EQ(partial.metrics.missing, 3u);

  cfg.threads = 1;
  const auto r2 = evaluate_forecasts(ledger, windows, {Method::HistAvg}, cfg, ext);
  EXPECT_EQ(r2.methods[0].metrics.mae, r1.methods[0].metrics.mae);
  std::ostringstream a;
  std::ostringstream b;
  write_metrics_csv(a, r1);
  write_metrics_csv(b, r2);
  EXPECT_EQ(a.str(), b.str());
}
