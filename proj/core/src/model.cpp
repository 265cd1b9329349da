#include "balcast/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "balcast/error.hpp"

namespace balcast {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
    "BankFees", "CashAdvance", "Community", "FoodAndDrink", "Healthcare", "Interest", "Payment",
    "Recreation", "Service", "Shops", "Travel", "Transfer", "NA",
};

// Lowercase, drop everything but letters, spell '&' as "and".
std::string squash(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '&') {
      out += "and";
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

}  // namespace

std::string_view category_name(Category c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::optional<Category> parse_category(std::string_view label) {
  // Top level of a hierarchical label.
  for (std::string_view sep : {" - ", ", ", ">", ":"}) {
    if (auto pos = label.find(sep); pos != std::string_view::npos) {
      label = label.substr(0, pos);
    }
  }
  const std::string key = squash(label);
  if (key.empty() || key == "na" || key == "unlabeled" || key == "uncategorized") return Category::Unlabeled;
  for (std::size_t i = 0; i + 1 < kCategoryCount; ++i) {
    if (squash(kCategoryNames[i]) == key) return static_cast<Category>(i);
  }
  if (key == "food") return Category::FoodAndDrink;
  if (key == "bankfee") return Category::BankFees;
  return std::nullopt;
}

std::string_view account_kind_name(AccountKind k) {
  switch (k) {
    case AccountKind::Checking: return "checking";
    case AccountKind::Savings: return "savings";
    case AccountKind::Other: return "other";
  }
  return "other";
}

Ledger::Ledger(std::vector<Account> accounts, std::vector<Transaction> transactions, std::optional<Date> train_end)
    : accounts_(std::move(accounts)), transactions_(std::move(transactions)) {
  std::sort(accounts_.begin(), accounts_.end(), [](const Account& a, const Account& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < accounts_.size(); ++i) {
    if (!account_index_.emplace(accounts_[i].id, i).second) {
      throw DataError("duplicate account '" + accounts_[i].id + "'");
    }
  }
  for (const auto& t : transactions_) {
    if (!account_index_.contains(t.account)) {
      throw DataError("transaction references unknown account '" + t.account + "'");
    }
  }
  std::stable_sort(transactions_.begin(), transactions_.end(), [](const Transaction& a, const Transaction& b) {
    if (a.account != b.account) return a.account < b.account;
    return a.date < b.date;
  });
  for (std::size_t i = 0; i < transactions_.size();) {
    std::size_t j = i;
    while (j < transactions_.size() && transactions_[j].account == transactions_[i].account) ++j;
    ranges_[transactions_[i].account] = Range{i, j};
    i = j;
  }
  if (!transactions_.empty()) {
    auto [lo, hi] = std::minmax_element(transactions_.begin(), transactions_.end(),
                                        [](const Transaction& a, const Transaction& b) { return a.date < b.date; });
    first_ = lo->date;
    last_ = hi->date;
    if (train_end) {
      if (*train_end < first_ || *train_end > last_) {
        throw DataError("train_end " + train_end->iso() + " outside observed range " + first_.iso() + ".." +
                        last_.iso());
      }
      train_end_ = *train_end;
    } else {
      train_end_ = first_ + static_cast<int>((last_ - first_) * 3 / 4);
    }
  } else if (train_end) {
    train_end_ = *train_end;
  }
}

const Account& Ledger::account(std::string_view id) const {
  const auto it = account_index_.find(std::string(id));
  if (it == account_index_.end()) throw NotFoundError("unknown account '" + std::string(id) + "'");
  return accounts_[it->second];
}

bool Ledger::has_account(std::string_view id) const { return account_index_.contains(std::string(id)); }

std::span<const Transaction> Ledger::transactions_of(std::string_view id) const {
  const auto it = ranges_.find(std::string(id));
  if (it == ranges_.end()) return {};
  return std::span<const Transaction>(transactions_).subspan(it->second.begin, it->second.end - it->second.begin);
}

std::vector<UserId> Ledger::users() const {
  std::set<UserId> users;
  for (const auto& a : accounts_) users.insert(a.user);
  return {users.begin(), users.end()};
}

std::vector<AccountId> Ledger::accounts_of_user(std::string_view user) const {
  std::vector<AccountId> out;
  for (const auto& a : accounts_) {
    if (a.user == user) out.push_back(a.id);
  }
  return out;
}

Date Ledger::first_date() const {
  if (transactions_.empty()) throw DataError("empty ledger has no date range");
  return first_;
}

Date Ledger::last_date() const {
  if (transactions_.empty()) throw DataError("empty ledger has no date range");
  return last_;
}

Ledger Ledger::truncated(Date cutoff) const {
  std::vector<Account> accounts = accounts_;
  std::vector<Transaction> kept;
  kept.reserve(transactions_.size());
  for (auto& a : accounts) {
    if (cutoff >= a.as_of) continue;
    Cents later{};
    for (const auto& t : transactions_of(a.id)) {
      if (t.date > cutoff) later += t.amount;
    }
    a.current_balance += later;
    a.as_of = cutoff;
  }
  for (const auto& t : transactions_) {
    if (t.date <= cutoff) kept.push_back(t);
  }
  std::optional<Date> split;
  if (!kept.empty()) {
    Date lo = kept.front().date;
    Date hi = kept.front().date;
    for (const auto& t : kept) {
      lo = std::min(lo, t.date);
      hi = std::max(hi, t.date);
    }
    split = std::clamp(train_end_, lo, hi);
  }
  return Ledger(std::move(accounts), std::move(kept), split);
}

Ledger Ledger::with_train_end(Date train_end) const { return Ledger(accounts_, transactions_, train_end); }

}  // namespace balcast
