#include "balcast/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <string>

#include "balcast/csv.hpp"
#include "balcast/error.hpp"

namespace balcast {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open '" + path.string() + "'");
  return in;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool blank_row(const std::vector<std::string>& row) {
  return std::all_of(row.begin(), row.end(), [](const std::string& f) { return f.empty(); });
}

AccountKind parse_kind(std::string_view text) {
  const auto k = lower(text);
  if (k == "checking") return AccountKind::Checking;
  if (k == "savings") return AccountKind::Savings;
  return AccountKind::Other;
}

}  // namespace

BalanceTable read_balances_csv(std::istream& in) {
  csv::Reader reader(in);
  auto head = reader.next();
  if (!head) throw DataError("balances file is empty");
  const csv::Header header(*head);
  const auto c_id = header.index("account_id");
  const auto c_bal = header.index("balance");
  const auto c_asof = header.index("as_of");
  const auto c_user = header.find("user_id");
  const auto c_kind = header.find("kind");

  BalanceTable table;
  while (auto row = reader.next()) {
    if (blank_row(*row)) continue;
    const auto line = reader.record_line();
    try {
      if (row->size() < header.size()) throw DataError("expected " + std::to_string(header.size()) + " fields");
      BalanceEntry e;
      e.balance = Cents::parse((*row)[c_bal]);
      e.as_of = Date::parse((*row)[c_asof]);
      if (c_user && !(*row)[*c_user].empty()) e.user = (*row)[*c_user];
      if (c_kind) e.kind = parse_kind((*row)[*c_kind]);
      if (!table.emplace((*row)[c_id], e).second) throw DataError("duplicate account '" + (*row)[c_id] + "'");
    } catch (const DataError& err) {
      throw DataError("balances row " + std::to_string(line) + ": " + err.what());
    }
  }
  return table;
}

BalanceTable load_balances_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_balances_csv(in);
}

IngestResult read_wagegoal_csv(std::istream& in, const BalanceTable& balances, std::optional<Date> train_end) {
  csv::Reader reader(in);
  auto head = reader.next();
  if (!head || blank_row(*head)) throw DataError("ledger file is empty");
  const csv::Header header(*head);
  const auto c_id = header.index("account_id");
  const auto c_date = header.index("date");
  const auto c_desc = header.index("description");
  const auto c_amt = header.index("amount");
  const auto c_cat = header.index("category");

  IngestResult result;
  std::vector<Transaction> txns;
  std::set<AccountId> seen;
  while (auto row = reader.next()) {
    if (blank_row(*row)) continue;
    const auto line = reader.record_line();
    try {
      if (row->size() != header.size()) {
        throw DataError("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(row->size()));
      }
      Transaction t;
      t.account = (*row)[c_id];
      if (t.account.empty()) throw DataError("empty account_id");
      t.date = Date::parse_mdy((*row)[c_date]);
      t.description = (*row)[c_desc];
      t.amount = Cents::parse((*row)[c_amt]);
      t.category_label = (*row)[c_cat];
      if (auto cat = parse_category(t.category_label)) {
        t.category = *cat;
      } else {
        t.category = Category::Unlabeled;
        ++result.unrecognized_categories;
      }
      seen.insert(t.account);
      txns.push_back(std::move(t));
    } catch (const DataError& err) {
      throw DataError("ledger row " + std::to_string(line) + ": " + err.what());
    }
  }

  std::vector<Account> accounts;
  for (const auto& id : seen) {
    const auto it = balances.find(id);
    if (it == balances.end()) throw DataError("no current balance for account '" + id + "'");
    accounts.push_back(Account{id, it->second.user.value_or(id), it->second.kind, it->second.balance, it->second.as_of});
  }
  // Accounts listed with a balance but no transactions are still part of the ledger.
  for (const auto& [id, e] : balances) {
    if (!seen.contains(id)) accounts.push_back(Account{id, e.user.value_or(id), e.kind, e.balance, e.as_of});
  }
  result.ledger = Ledger(std::move(accounts), std::move(txns), train_end);
  return result;
}

IngestResult load_wagegoal_csv(const std::filesystem::path& path, const BalanceTable& balances,
                               std::optional<Date> train_end) {
  auto in = open_input(path);
  return read_wagegoal_csv(in, balances, train_end);
}

void write_wagegoal_csv(const Ledger& ledger, std::ostream& out) {
  csv::write_row(out, {"account_id", "date", "description", "amount", "category"});
  for (const auto& t : ledger.transactions()) {
    const std::string label = t.category_label.empty() && t.category != Category::Unlabeled
                                  ? std::string(category_name(t.category))
                                  : t.category_label;
    csv::write_row(out, {t.account, t.date.mdy(), t.description, t.amount.str(), label});
  }
}

void write_balances_csv(const Ledger& ledger, std::ostream& out) {
  csv::write_row(out, {"account_id", "balance", "as_of", "user_id", "kind"});
  for (const auto& a : ledger.accounts()) {
    csv::write_row(out, {a.id, a.current_balance.str(), a.as_of.iso(), a.user, std::string(account_kind_name(a.kind))});
  }
}

Ledger read_pkdd99(std::istream& in, const Pkdd99Options& options) {
  csv::Reader reader(in, ';');
  auto head = reader.next();
  if (!head || blank_row(*head)) throw DataError("PKDD'99 file is empty");
  const csv::Header header(*head);
  const auto c_id = header.index("account_id");
  const auto c_date = header.index("date");
  const auto c_type = header.index("type");
  const auto c_amt = header.index("amount");

  std::vector<Transaction> txns;
  while (auto row = reader.next()) {
    if (blank_row(*row)) continue;
    const auto line = reader.record_line();
    try {
      if (row->size() < header.size()) throw DataError("expected " + std::to_string(header.size()) + " fields");
      Transaction t;
      t.account = (*row)[c_id];
      if (t.account.empty()) throw DataError("empty account_id");
      t.date = Date::parse_yymmdd((*row)[c_date]);
      const Cents amount = Cents::parse((*row)[c_amt]);
      if (amount.value() < 0) throw DataError("negative amount");
      const auto type = lower((*row)[c_type]);
      if (type == "prijem" || type == "credit") {
        t.amount = -amount;
      } else if (type == "vydaj" || type == "vyber" || type == "debit") {
        t.amount = amount;
      } else {
        throw DataError("unknown transaction type '" + (*row)[c_type] + "'");
      }
      txns.push_back(std::move(t));
    } catch (const DataError& err) {
      throw DataError("PKDD'99 row " + std::to_string(line) + ": " + err.what());
    }
  }

  std::map<AccountId, std::pair<Date, Date>> span;
  std::map<AccountId, Cents> net;
  for (const auto& t : txns) {
    auto [it, fresh] = span.try_emplace(t.account, t.date, t.date);
    if (!fresh) {
      it->second.first = std::min(it->second.first, t.date);
      it->second.second = std::max(it->second.second, t.date);
    }
    net[t.account] += t.amount;
  }

  std::vector<Account> accounts;
  std::set<AccountId> keep;
  for (const auto& [id, range] : span) {
    if (range.second - range.first < options.min_span_days) continue;
    keep.insert(id);
    // Opening balance 0: the current balance is minus the net outflow.
    accounts.push_back(Account{id, id, AccountKind::Other, -net[id], range.second});
  }
  std::erase_if(txns, [&](const Transaction& t) { return !keep.contains(t.account); });
  if (txns.empty()) return Ledger(std::move(accounts), {});

  Date lo = txns.front().date;
  Date hi = txns.front().date;
  for (const auto& t : txns) {
    lo = std::min(lo, t.date);
    hi = std::max(hi, t.date);
  }
  const Date train_end = lo + static_cast<int>(static_cast<double>(hi - lo) * options.train_fraction);
  return Ledger(std::move(accounts), std::move(txns), train_end);
}

Ledger load_pkdd99(const std::filesystem::path& path, const Pkdd99Options& options) {
  auto in = open_input(path);
  return read_pkdd99(in, options);
}

BalanceSeries build_series_from_opening(const Ledger& ledger, std::string_view account, Step step) {
  const auto txns = ledger.transactions_of(account);
  if (txns.empty()) throw DataError("account '" + std::string(account) + "' has no transactions");
  return build_balance_series(ledger, account, step, txns.front().date - step_days(step));
}

Date resolve_split(const Ledger& ledger, SplitPoint split) {
  const Date first = ledger.first_date();
  const Date last = ledger.last_date();
  Date at;
  if (const double* f = std::get_if<double>(&split)) {
    if (!(*f > 0.0 && *f < 1.0)) throw DataError("training fraction must lie in (0, 1)");
    at = first + static_cast<int>(static_cast<double>(last - first) * *f);
  } else {
    at = std::get<Date>(split);
  }
  if (at <= first || at >= last) {
    throw DataError("split date " + at.iso() + " must lie strictly inside " + first.iso() + ".." + last.iso());
  }
  return at;
}

std::pair<Ledger, Ledger> split_train_test(const Ledger& ledger, SplitPoint split) {
  const Date at = resolve_split(ledger, split);
  Ledger train = ledger.truncated(at);
  train = train.with_train_end(std::min(at, train.last_date()));
  std::vector<Transaction> rest;
  for (const auto& t : ledger.transactions()) {
    if (t.date > at) rest.push_back(t);
  }
  std::optional<Date> test_end;
  if (!rest.empty()) {
    test_end = std::min_element(rest.begin(), rest.end(), [](const Transaction& a, const Transaction& b) {
                 return a.date < b.date;
               })->date;
  }
  Ledger test(ledger.accounts(), std::move(rest), test_end);
  return {std::move(train), std::move(test)};
}

}  // namespace balcast
