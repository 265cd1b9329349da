#pragma once

#include <string>
#include <vector>

#include "balcast/model.hpp"

namespace testutil {

inline balcast::Date d(int y, unsigned m, unsigned day) { return balcast::Date::from_ymd(y, m, day); }

inline balcast::Transaction tx(const std::string& account, balcast::Date date, const std::string& description,
                               double amount, const std::string& label = "") {
  balcast::Transaction t;
  t.account = account;
  t.date = date;
  t.description = description;
  t.amount = balcast::Cents::from_double(amount);
  t.category = balcast::parse_category(label).value_or(balcast::Category::Unlabeled);
  t.category_label = label;
  return t;
}

inline balcast::Account account(const std::string& id, const std::string& user, double balance, balcast::Date as_of,
                                balcast::AccountKind kind = balcast::AccountKind::Checking) {
  return balcast::Account{id, user, kind, balcast::Cents::from_double(balance), as_of};
}

}  // namespace testutil
