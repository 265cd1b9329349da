#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "balcast/date.hpp"
#include "balcast/money.hpp"

namespace balcast {

using AccountId = std::string;
using UserId = std::string;

enum class Category {
  BankFees,
  CashAdvance,
  Community,
  FoodAndDrink,
  Healthcare,
  Interest,
  Payment,
  Recreation,
  Service,
  Shops,
  Travel,
  Transfer,
  Unlabeled,
};

inline constexpr std::size_t kCategoryCount = 13;

std::string_view category_name(Category c);
/// Maps a raw label to the enumeration. Hierarchical labels ("Service - Subscription")
/// map by their top level. Empty and "NA" give Unlabeled; unknown labels give nullopt.
std::optional<Category> parse_category(std::string_view label);

/// One ledger line. Amounts are outflow-positive: spending > 0, income < 0.
struct Transaction {
  AccountId account;
  Date date;
  std::string description;
  Cents amount;
  Category category = Category::Unlabeled;
  /// Label text as it appeared in the source file, kept for rule-based matching.
  std::string category_label;

  bool operator==(const Transaction&) const = default;
};

enum class AccountKind { Checking, Savings, Other };

std::string_view account_kind_name(AccountKind k);

struct Account {
  AccountId id;
  UserId user;
  AccountKind kind = AccountKind::Other;
  Cents current_balance;
  Date as_of;

  bool operator==(const Account&) const = default;
};

/// Immutable account and transaction store. Transactions are ordered stably by (account, date).
class Ledger {
 public:
  Ledger() = default;
  /// Throws DataError if a transaction names an unknown account or train_end lies outside
  /// the observed range. Without train_end, the split sits at 75% of the date range.
  Ledger(std::vector<Account> accounts, std::vector<Transaction> transactions,
         std::optional<Date> train_end = std::nullopt);

  [[nodiscard]] const std::vector<Account>& accounts() const { return accounts_; }
  [[nodiscard]] const std::vector<Transaction>& transactions() const { return transactions_; }
  [[nodiscard]] const Account& account(std::string_view id) const;
  [[nodiscard]] bool has_account(std::string_view id) const;
  [[nodiscard]] std::span<const Transaction> transactions_of(std::string_view id) const;
  [[nodiscard]] std::vector<UserId> users() const;
  [[nodiscard]] std::vector<AccountId> accounts_of_user(std::string_view user) const;

  [[nodiscard]] bool empty() const { return transactions_.empty(); }
  [[nodiscard]] Date first_date() const;
  [[nodiscard]] Date last_date() const;
  [[nodiscard]] Date train_end() const { return train_end_; }

  /// Everything observable at the end of `cutoff`: transactions dated after it are dropped and
  /// each account's balance is restated as of `cutoff`.
  [[nodiscard]] Ledger truncated(Date cutoff) const;
  [[nodiscard]] Ledger with_train_end(Date train_end) const;

  bool operator==(const Ledger& other) const {
    return accounts_ == other.accounts_ && transactions_ == other.transactions_ && train_end_ == other.train_end_;
  }

 private:
  struct Range {
    std::size_t begin = 0;
    std::size_t end = 0;
  };

  std::vector<Account> accounts_;
  std::vector<Transaction> transactions_;
  std::unordered_map<std::string, std::size_t> account_index_;
  std::unordered_map<std::string, Range> ranges_;
  Date first_{};
  Date last_{};
  Date train_end_{};
};

}  // namespace balcast
