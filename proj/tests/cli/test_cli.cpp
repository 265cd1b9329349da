#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "balcast/csv.hpp"
#include "balcast/error.hpp"
#include "balcast/ingest.hpp"
#include "balcast/synthetic.hpp"
#include "balcast_cli/commands.hpp"
#include "balcast_cli/params.hpp"

namespace fs = std::filesystem;
using balcast::cli::run;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / ("balcast_cli_" + std::to_string(::getpid()));
    fs::create_directories(root_ / "in");
    balcast::SyntheticOptions opt;
    opt.accounts = 6;
    opt.users = 6;
    opt.seed = 4;
    const auto data = balcast::generate_synthetic(opt);
    std::ofstream ledger(root_ / "in" / "ledger.csv");
    balcast::write_wagegoal_csv(data.ledger, ledger);
    std::ofstream balances(root_ / "in" / "balances.csv");
    balcast::write_balances_csv(data.ledger, balances);
  }
  static void TearDownTestSuite() { fs::remove_all(root_); }

  static std::string input() { return (root_ / "in" / "ledger.csv").string(); }
  static std::string dir(const std::string& name) { return (root_ / name).string(); }

  static fs::path root_;
};

fs::path CliTest::root_;

// Column `name` of a CSV file, as text.
std::vector<std::string> column(const fs::path& file, const std::string& name) {
  std::ifstream in(file);
  balcast::csv::Reader reader(in);
  const balcast::csv::Header header(*reader.next());
  const auto idx = header.index(name);
  std::vector<std::string> out;
  while (auto row = reader.next()) out.push_back((*row)[idx]);
  return out;
}

}  // namespace

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(invoke({"--help"}).code, 0);
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({"ingest", "--input", dir("missing.csv")}).code, 1);
  EXPECT_EQ(invoke({"forecast", "--input", input(), "--out", dir("bad"), "--method", "arima"}).code, 1);
  EXPECT_EQ(invoke({"forecast", "--input", input(), "--out", dir("bad"), "--tau", "40"}).code, 1);
  EXPECT_EQ(invoke({"ingest", "--input", input(), "--out", dir("bad"), "--format", "xml"}).code, 1);
}

TEST_F(CliTest, IngestIsDeterministicAndRoundTrips) {
  ASSERT_EQ(invoke({"ingest", "--input", input(), "--out", dir("ing1")}).code, 0);
  ASSERT_EQ(invoke({"ingest", "--input", input(), "--out", dir("ing2")}).code, 0);
  for (const char* f : {"ledger.csv", "balances.csv", "summary.csv"}) {
    ASSERT_TRUE(fs::exists(fs::path(dir("ing1")) / f)) << f;
    EXPECT_EQ(slurp(fs::path(dir("ing1")) / f), slurp(fs::path(dir("ing2")) / f)) << f;
  }
  // Re-ingesting the canonical output reproduces it.
  ASSERT_EQ(invoke({"ingest", "--input", dir("ing1") + "/ledger.csv", "--out", dir("ing3")}).code, 0);
  EXPECT_EQ(slurp(fs::path(dir("ing1")) / "ledger.csv"), slurp(fs::path(dir("ing3")) / "ledger.csv"));
}

TEST_F(CliTest, DataErrorsExitTwo) {
  fs::create_directories(dir("broken"));
  std::ofstream(dir("broken") + "/ledger.csv") << "account_id,date,description,amount,category\nA01,13/45/2016,X,1.00,Shops\n";
  std::ofstream(dir("broken") + "/balances.csv") << "account_id,balance,as_of,user_id,kind\nA01,0,2016-12-31,U1,checking\n";
  const auto r = invoke({"ingest", "--input", dir("broken") + "/ledger.csv", "--out", dir("broken_out")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("row"), std::string::npos);

  std::ofstream(dir("broken") + "/empty.csv") << "account_id,date,description,amount,category\n";
  EXPECT_EQ(invoke({"ingest", "--input", dir("broken") + "/empty.csv", "--balances", dir("broken") + "/balances.csv",
                    "--out", dir("broken_out")})
                .code,
            2);
  EXPECT_EQ(invoke({"cluster", "--input", input(), "--out", dir("cl_bad"), "--k", "25"}).code, 2);
  EXPECT_EQ(invoke({"forecast", "--input", input(), "--out", dir("fc_bad"), "--account", "NOPE"}).code, 2);
}

TEST_F(CliTest, HybridWithFullTauEqualsHistAvg) {
  ASSERT_EQ(invoke({"forecast", "--input", input(), "--out", dir("fc_h"), "--method", "histavg"}).code, 0);
  ASSERT_EQ(invoke({"forecast", "--input", input(), "--out", dir("fc_y"), "--method", "hybrid", "--tau", "31"}).code, 0);
  const auto a = column(fs::path(dir("fc_h")) / "forecast.csv", "predicted_balance");
  const auto b = column(fs::path(dir("fc_y")) / "forecast.csv", "predicted_balance");
  ASSERT_EQ(a.size(), 6u * 31u);
  EXPECT_EQ(a, b);
  EXPECT_EQ(column(fs::path(dir("fc_y")) / "forecast.csv", "method").front(), "HistAvg-SubseqLS");
}

TEST_F(CliTest, RecurringAndClusterOutputs) {
  ASSERT_EQ(invoke({"recurring", "--input", input(), "--out", dir("rec")}).code, 0);
  EXPECT_FALSE(column(fs::path(dir("rec")) / "recurring.csv", "frequency").empty());
  EXPECT_TRUE(fs::exists(fs::path(dir("rec")) / "large_expenses.csv"));

  ASSERT_EQ(invoke({"cluster", "--input", input(), "--out", dir("cl"), "--k", "3"}).code, 0);
  EXPECT_EQ(column(fs::path(dir("cl")) / "assignments.csv", "user_id").size(), 6u);
  EXPECT_TRUE(fs::exists(fs::path(dir("cl")) / "profiles.csv"));
}

TEST_F(CliTest, TuneThenEvaluateIsDeterministic) {
  const std::string params = dir("tuned") + "/params.txt";
  ASSERT_EQ(invoke({"tune", "--input", input(), "--out", dir("tuned"), "--tune-windows", "3"}).code, 0);
  const auto file = balcast::cli::ParamFile::load(params);
  EXPECT_TRUE(file.get("M.paycheck").has_value() || file.get("M.nopaycheck").has_value());

  std::vector<std::string> args{"evaluate", "--input", input(), "--config", params, "--windows", "4",
                                "--methods", "histavg,hybrid", "--seed", "3"};
  auto a = args;
  a.insert(a.end(), {"--out", dir("ev1")});
  auto b = args;
  b.insert(b.end(), {"--out", dir("ev2"), "--threads", "2"});
  ASSERT_EQ(invoke(a).code, 0);
  ASSERT_EQ(invoke(b).code, 0);
  for (const char* f : {"metrics.csv", "per_step.csv", "windows.csv", "forecasts.csv"}) {
    EXPECT_EQ(slurp(fs::path(dir("ev1")) / f), slurp(fs::path(dir("ev2")) / f)) << f;
  }
  EXPECT_EQ(column(fs::path(dir("ev1")) / "windows.csv", "account_id").size(), 4u);
}

TEST(ParamFile, ParsesAndRejects) {
  std::istringstream in("# comment\nM = 10\n\nlambda.A01=0.5\n");
  const auto p = balcast::cli::ParamFile::parse(in);
  EXPECT_EQ(p.get("M"), "10");
  EXPECT_EQ(p.get("lambda.A01"), "0.5");
  std::istringstream bad("M 10\n");
  EXPECT_THROW(balcast::cli::ParamFile::parse(bad), balcast::InvalidArgument);
}
