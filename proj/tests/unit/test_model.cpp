#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "balcast/csv.hpp"
#include "balcast/error.hpp"
#include "balcast/model.hpp"
#include "balcast/series.hpp"
#include "helpers.hpp"

using namespace balcast;
using testutil::d;
using testutil::tx;

TEST(Date, ParsesBothFormats) {
  EXPECT_EQ(Date::parse("6/22/2016"), d(2016, 6, 22));
  EXPECT_EQ(Date::parse("2016-06-22"), d(2016, 6, 22));
  EXPECT_EQ(Date::parse_yymmdd("930105"), d(1993, 1, 5));
  EXPECT_EQ(d(2016, 6, 22).mdy(), "6/22/2016");
  EXPECT_THROW(Date::parse("2/30/2016"), DataError);
  EXPECT_THROW(Date::parse("yesterday"), DataError);
}

TEST(Date, MonthAdditionClamps) {
  EXPECT_EQ(d(2017, 1, 31).add_months(1), d(2017, 2, 28));
  EXPECT_EQ(d(2016, 1, 31).add_months(1), d(2016, 2, 29));
  EXPECT_EQ(d(2016, 12, 15).add_months(1), d(2017, 1, 15));
}

TEST(Date, WeekEndIsSunday) {
  EXPECT_EQ(d(2016, 6, 22).week_end(), d(2016, 6, 26));  // Wednesday -> Sunday
  EXPECT_EQ(d(2016, 6, 26).week_end(), d(2016, 6, 26));
  EXPECT_EQ(d(2016, 6, 26).iso_weekday(), 7u);
}

TEST(Cents, ParseAndPrint) {
  EXPECT_EQ(Cents::parse("-1000").value(), -100000);
  EXPECT_EQ(Cents::parse("20.5").value(), 2050);
  EXPECT_EQ(Cents::parse("-0.01").value(), -1);
  EXPECT_EQ(Cents::parse("700.00").value(), 70000);
  EXPECT_THROW(Cents::parse("1.234"), DataError);
  EXPECT_THROW(Cents::parse("abc"), DataError);
  EXPECT_EQ(Cents(2050).str(), "20.5");
  EXPECT_EQ(Cents(-1).str(), "-0.01");
  EXPECT_EQ(Cents::from_double(-0.005).value(), -1);
}

TEST(Csv, QuotedFieldsRoundTrip) {
  std::ostringstream out;
  csv::write_row(out, {"a,b", "say \"hi\"", "line\nbreak", "plain"});
  std::istringstream in(out.str());
  csv::Reader reader(in);
  const auto row = reader.next();
  ASSERT_TRUE(row);
  EXPECT_EQ(*row, (std::vector<std::string>{"a,b", "say \"hi\"", "line\nbreak", "plain"}));
  EXPECT_FALSE(reader.next());
}

TEST(Csv, UnterminatedQuoteThrows) {
  std::istringstream in("\"open,1\n");
  csv::Reader reader(in);
  EXPECT_THROW(reader.next(), DataError);
}

TEST(Category, ParsesHierarchicalLabels) {
  EXPECT_EQ(parse_category("Shops"), Category::Shops);
  EXPECT_EQ(parse_category("Service - Subscription"), Category::Service);
  EXPECT_EQ(parse_category("NA"), Category::Unlabeled);
  EXPECT_EQ(parse_category(""), Category::Unlabeled);
  EXPECT_FALSE(parse_category("Astrology"));
}

TEST(Ledger, SortsAndIndexes) {
  const Ledger ledger({testutil::account("b", "u", 0, d(2016, 7, 1)), testutil::account("a", "u", 0, d(2016, 7, 1))},
                      {tx("b", d(2016, 6, 3), "x", 1), tx("a", d(2016, 6, 2), "y", 2), tx("a", d(2016, 6, 1), "z", 3)});
  ASSERT_EQ(ledger.transactions().size(), 3u);
  EXPECT_EQ(ledger.transactions()[0].description, "z");
  EXPECT_EQ(ledger.transactions()[1].description, "y");
  EXPECT_EQ(ledger.transactions_of("a").size(), 2u);
  EXPECT_EQ(ledger.first_date(), d(2016, 6, 1));
  EXPECT_EQ(ledger.last_date(), d(2016, 6, 3));
  EXPECT_THROW((void)ledger.account("zz"), NotFoundError);
}

TEST(Ledger, RejectsUnknownAccountAndBadSplit) {
  EXPECT_THROW(Ledger({}, {tx("a", d(2016, 6, 1), "x", 1)}), DataError);
  const std::vector<Account> acc{testutil::account("a", "u", 0, d(2016, 7, 1))};
  EXPECT_THROW(Ledger(acc, {tx("a", d(2016, 6, 1), "x", 1), tx("a", d(2016, 6, 5), "x", 1)}, d(2016, 8, 1)),
               DataError);
}

TEST(Ledger, TruncationRestatesBalances) {
  const Ledger ledger({testutil::account("a", "u", 100, d(2016, 6, 10))},
                      {tx("a", d(2016, 6, 1), "x", 10), tx("a", d(2016, 6, 5), "y", 20)});
  const auto cut = ledger.truncated(d(2016, 6, 3));
  EXPECT_EQ(cut.transactions().size(), 1u);
  EXPECT_EQ(cut.account("a").current_balance, Cents::from_double(120));
  EXPECT_EQ(cut.account("a").as_of, d(2016, 6, 3));
}

TEST(BalanceSeries, SingleInflowBackward) {
  // Current balance 0 on day 5, an inflow of 1000 on day 3.
  const Ledger ledger({testutil::account("a", "u", 0, d(2016, 6, 5))}, {tx("a", d(2016, 6, 3), "dep", -1000)});
  const auto s = build_balance_series(ledger, "a", Step::Daily, d(2016, 6, 1));
  EXPECT_EQ(s.values, (std::vector<double>{-1000, -1000, 0, 0, 0}));
}

TEST(BalanceSeries, CarryForwardConstant) {
  const Ledger ledger({testutil::account("a", "u", 42, d(2016, 6, 5))}, {tx("a", d(2016, 6, 1), "x", 0)});
  const auto s = build_balance_series(ledger, "a", Step::Daily);
  EXPECT_EQ(s.values, (std::vector<double>(5, 42.0)));
}

TEST(BalanceSeries, TableOneAccountThree) {
  // Interest -0.01 and a direct deposit of -1000 on 6/24; balance B on 6/25.
  const double B = 2345.67;
  const Ledger ledger({testutil::account("3", "u", B, d(2016, 6, 25))},
                      {tx("3", d(2016, 6, 24), "Interest", -0.01, "Interest"),
                       tx("3", d(2016, 6, 24), "Direct Deposit", -1000, "Transfer")});
  const auto s = build_balance_series(ledger, "3", Step::Daily, d(2016, 6, 23));
  ASSERT_EQ(s.values.size(), 3u);
  EXPECT_DOUBLE_EQ(s.values[0], B - 1000.01);
  EXPECT_DOUBLE_EQ(s.values[2], B);
}

TEST(BalanceSeries, Errors) {
  const Ledger ledger({testutil::account("a", "u", 0, d(2016, 6, 5)), testutil::account("b", "u", 0, d(2016, 6, 5))},
                      {tx("a", d(2016, 6, 3), "x", 1)});
  EXPECT_THROW(build_balance_series(ledger, "zz", Step::Daily), NotFoundError);
  EXPECT_THROW(build_balance_series(ledger, "b", Step::Daily), DataError);
}

TEST(BalanceSeries, WeeklyTakesEndOfWeek) {
  // Wednesday 2016-06-22 .. Tuesday 2016-07-05.
  const Ledger ledger({testutil::account("a", "u", 0, d(2016, 7, 5))},
                      {tx("a", d(2016, 6, 22), "x", 10), tx("a", d(2016, 6, 28), "y", 5)});
  const auto s = build_balance_series(ledger, "a", Step::Weekly);
  EXPECT_EQ(s.start_date, d(2016, 6, 26));
  EXPECT_EQ(s.values, (std::vector<double>{5, 0, 0}));
  EXPECT_EQ(s.index_of(d(2016, 6, 27)), 1u);
}

// Property: forward simulation from the first reconstructed balance reproduces the current
// balance exactly, each step differs by that step's net amount, and the length is the day count.
TEST(BalanceSeries, RoundTripProperty) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> day(0, 40);
    std::uniform_int_distribution<int> cents(-200000, 200000);
    std::vector<Transaction> txns;
    const Date base = d(2016, 1, 1);
    const int n = 1 + trial % 30;
    for (int i = 0; i < n; ++i) txns.push_back(tx("a", base + day(rng), "t", cents(rng) / 100.0));
    const Date as_of = base + 45;
    const Cents current(cents(rng));
    const Ledger ledger({Account{"a", "u", AccountKind::Checking, current, as_of}}, txns);
    const auto s = build_balance_series(ledger, "a", Step::Daily);
    ASSERT_EQ(s.values.size(), static_cast<std::size_t>(as_of - ledger.first_date() + 1));
    std::int64_t bal = std::llround(s.values.front() * 100.0);
    for (std::size_t i = 1; i < s.values.size(); ++i) {
      std::int64_t net = 0;
      for (const auto& t : ledger.transactions()) {
        if (t.date == s.date_at(i)) net += t.amount.value();
      }
      bal -= net;
      ASSERT_EQ(bal, std::llround(s.values[i] * 100.0));
    }
    EXPECT_EQ(bal, current.value());
  }
}

TEST(Standardize, Examples) {
  const std::vector<double> x{1, 2, 3};
  const auto z = standardize(x);
  EXPECT_EQ(z.values, (std::vector<double>{-1, 0, 1}));
  EXPECT_DOUBLE_EQ(z.mean, 2.0);
  EXPECT_DOUBLE_EQ(z.stdev, 1.0);

  const std::vector<double> c{5, 5, 5, 5};
  const auto zc = standardize(c);
  EXPECT_EQ(zc.values, (std::vector<double>(4, 0.0)));
  EXPECT_EQ(zc.stdev, 0.0);
  EXPECT_EQ(destandardize(zc.values, zc.mean, zc.stdev), c);

  const std::vector<double> one{1.0};
  EXPECT_THROW(standardize(one), InvalidArgument);
}

TEST(Standardize, RoundTripProperty) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 40;
    const double scale = std::pow(10.0, trial % 7 - 2);
    std::vector<double> x(n);
    for (auto& v : x) v = 1000.0 * g(rng) * scale + 50.0;
    const auto z = standardize(x);
    const auto back = destandardize(z.values, z.mean, z.stdev);
    for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(back[i], x[i], 1e-9 * std::max(1.0, std::abs(x[i])));
  }
}

TEST(Percentile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4}, 50), 2.5);
  EXPECT_DOUBLE_EQ(percentile({10}, 90), 10);
  EXPECT_DOUBLE_EQ(percentile({}, 90), 0);
  EXPECT_DOUBLE_EQ(percentile({0, 10}, 90), 9);
}
