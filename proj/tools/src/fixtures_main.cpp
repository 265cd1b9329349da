// Writes the synthetic WageGoal-style fixture: ledger.csv, balances.csv and labels.csv.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "balcast/eval.hpp"
#include "balcast/ingest.hpp"
#include "balcast/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic transaction fixture", "balcast-fixtures"};
  balcast::SyntheticOptions opt;
  std::string out = "data/fixtures";
  std::string start;
  app.add_option("--out,-o", out, "Output directory");
  app.add_option("--seed", opt.seed, "Generator seed");
  app.add_option("--accounts", opt.accounts, "Number of accounts");
  app.add_option("--users", opt.users, "Number of users");
  app.add_option("--days", opt.days, "Length of the period in days");
  app.add_option("--start", start, "First day (YYYY-MM-DD)");
  app.add_option("--noise-rate", opt.noise_rate, "Card transactions per day");
  CLI11_PARSE(app, argc, argv);

  try {
    if (!start.empty()) opt.start = balcast::Date::parse(start);
    const auto data = balcast::generate_synthetic(opt);
    const std::filesystem::path dir(out);
    std::filesystem::create_directories(dir);
    std::ofstream ledger(dir / "ledger.csv", std::ios::binary);
    std::ofstream balances(dir / "balances.csv", std::ios::binary);
    std::ofstream labels(dir / "labels.csv", std::ios::binary);
    balcast::write_wagegoal_csv(data.ledger, ledger);
    balcast::write_balances_csv(data.ledger, balances);
    balcast::write_labels_csv(labels, data.labels);
    if (!ledger || !balances || !labels) {
      std::cerr << "error: cannot write to " << dir << '\n';
      return 2;
    }
    std::cout << data.ledger.transactions().size() << " transactions, " << data.ledger.accounts().size()
              << " accounts, " << data.labels.size() << " labelled occurrences\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
