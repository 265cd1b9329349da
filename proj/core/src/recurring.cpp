#include "balcast/recurring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "balcast/series.hpp"

namespace balcast {

namespace {

bool canonical_less(const Transaction& a, const Transaction& b) {
  return std::tie(a.date, a.category, a.description, a.amount, a.category_label, a.account) <
         std::tie(b.date, b.category, b.description, b.amount, b.category_label, b.account);
}

struct Chain {
  Frequency frequency;
  std::vector<std::size_t> members;  // indices into the canonical vector, newest first
};

double best_similarity(const std::string& desc, const std::vector<const std::string*>& chain_descs,
                       const SimilarityConfig& config) {
  double best = 0.0;
  for (const auto* d : chain_descs) best = std::max(best, similarity(desc, *d, config));
  return best;
}

// Chains for one frequency over canonically ordered transactions dated <= as_of.
std::vector<Chain> build_chains(const std::vector<Transaction>& txns, Date as_of, Frequency f,
                                const SimilarityConfig& config) {
  std::map<Category, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < txns.size(); ++i) groups[txns[i].category].push_back(i);

  std::vector<Chain> chains;
  const Date seed_from = as_of - (f.backtrack_days + f.window_days);
  for (const auto& [category, idx] : groups) {
    std::vector<bool> used(txns.size(), false);
    // Newest seeds first; idx is in canonical (date-ascending) order.
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
      const std::size_t seed = *it;
      if (txns[seed].date <= seed_from) break;
      if (used[seed]) continue;

      Chain chain{f, {seed}};
      std::vector<const std::string*> descs{&txns[seed].description};
      Date cur = txns[seed].date;
      for (;;) {
        const Date target = cur - f.backtrack_days;
        std::optional<std::size_t> pick;
        std::tuple<int, double, int> pick_key{};
        for (std::size_t j : idx) {
          const Date d = txns[j].date;
          if (d < target - f.window_days) continue;
          if (d > target + f.window_days || d >= cur) break;
          if (used[j] || std::find(chain.members.begin(), chain.members.end(), j) != chain.members.end()) continue;
          const double sim = best_similarity(txns[j].description, descs, config);
          if (sim < config.threshold) continue;
          // Closest to the nominal date, then most similar, then the later date.
          const std::tuple<int, double, int> key{std::abs(d - target), -sim, -d.serial()};
          if (!pick || key < pick_key) {
            pick = j;
            pick_key = key;
          }
        }
        if (!pick) break;
        chain.members.push_back(*pick);
        descs.push_back(&txns[*pick].description);
        cur = txns[*pick].date;
      }
      if (chain.members.size() < kMinRecurringWindows) continue;

      // A biller that also shows up inside most gaps recurs faster than this frequency.
      std::size_t crowded = 0;
      for (std::size_t k = 0; k + 1 < chain.members.size(); ++k) {
        const Date newer = txns[chain.members[k]].date;
        const Date older = txns[chain.members[k + 1]].date;
        for (std::size_t j : idx) {
          const Date d = txns[j].date;
          if (d <= older) continue;
          if (d >= newer) break;
          if (best_similarity(txns[j].description, descs, config) >= config.threshold) {
            ++crowded;
            break;
          }
        }
      }
      const std::size_t gaps = chain.members.size() - 1;
      if (2 * crowded > gaps) continue;

      for (std::size_t m : chain.members) used[m] = true;
      chains.push_back(std::move(chain));
    }
  }
  return chains;
}

RecurringTransaction to_recurring(const std::vector<Transaction>& txns, const Chain& chain) {
  const Transaction& seed = txns[chain.members.front()];
  RecurringTransaction r;
  r.account = seed.account;
  r.frequency = chain.frequency;
  r.description = seed.description;
  r.category = seed.category;
  r.last_date = seed.date;
  double sum = 0.0;
  for (auto it = chain.members.rbegin(); it != chain.members.rend(); ++it) {
    r.support.push_back(txns[*it]);
    sum += txns[*it].amount.to_double();
  }
  r.mean_amount = sum / static_cast<double>(chain.members.size());
  return r;
}

std::vector<Transaction> canonical_upto(std::span<const Transaction> transactions, Date as_of) {
  std::vector<Transaction> txns;
  for (const auto& t : transactions) {
    if (t.date <= as_of) txns.push_back(t);
  }
  std::sort(txns.begin(), txns.end(), canonical_less);
  return txns;
}

void sort_output(std::vector<RecurringTransaction>& out) {
  std::sort(out.begin(), out.end(), [](const RecurringTransaction& a, const RecurringTransaction& b) {
    return std::tie(a.account, a.last_date, a.category, a.description, a.frequency.kind) <
           std::tie(b.account, b.last_date, b.category, b.description, b.frequency.kind);
  });
}

}  // namespace

double Frequency::nominal_days() const {
  switch (kind) {
    case FrequencyKind::Monthly: return 365.25 / 12.0;
    case FrequencyKind::Semimonthly: return 365.25 / 24.0;
    case FrequencyKind::Biweekly: return 14.0;
    case FrequencyKind::Weekly: return 7.0;
  }
  return 0.0;
}

std::string_view Frequency::name() const {
  switch (kind) {
    case FrequencyKind::Monthly: return "monthly";
    case FrequencyKind::Semimonthly: return "semimonthly";
    case FrequencyKind::Biweekly: return "biweekly";
    case FrequencyKind::Weekly: return "weekly";
  }
  return "";
}

std::optional<FrequencyKind> parse_frequency(std::string_view name) {
  for (auto k : kAllFrequencies) {
    if (Frequency::of(k).name() == name) return k;
  }
  return std::nullopt;
}

Date advance(Date from, Frequency frequency) {
  if (frequency.kind == FrequencyKind::Monthly) return from.add_months(1);
  if (frequency.kind == FrequencyKind::Semimonthly) return from + 15;
  return from + frequency.backtrack_days;
}

double RecurringTransaction::mean_gap_days() const {
  if (support.size() < 2) return 0.0;
  return static_cast<double>(support.back().date - support.front().date) / static_cast<double>(support.size() - 1);
}

std::vector<RecurringTransaction> extract_recurring(std::span<const Transaction> transactions, Date as_of,
                                                    Frequency frequency, const SimilarityConfig& config) {
  config.validate();
  const auto txns = canonical_upto(transactions, as_of);
  std::vector<RecurringTransaction> out;
  for (const auto& chain : build_chains(txns, as_of, frequency, config)) out.push_back(to_recurring(txns, chain));
  sort_output(out);
  return out;
}

std::vector<RecurringTransaction> extract_all_recurring(std::span<const Transaction> transactions, Date as_of,
                                                        const SimilarityConfig& config) {
  config.validate();
  const auto txns = canonical_upto(transactions, as_of);
  std::vector<Chain> chains;
  for (auto kind : kAllFrequencies) {
    auto part = build_chains(txns, as_of, Frequency::of(kind), config);
    chains.insert(chains.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }

  // Union-find over chains that share a transaction.
  std::vector<std::size_t> parent(chains.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::optional<std::size_t>> owner(txns.size());
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (std::size_t m : chains[c].members) {
      if (owner[m]) {
        parent[find(c)] = find(*owner[m]);
      } else {
        owner[m] = c;
      }
    }
  }

  auto misfit = [&](std::size_t c) {
    const auto& members = chains[c].members;
    const double gap = static_cast<double>(txns[members.front()].date - txns[members.back()].date) /
                       static_cast<double>(members.size() - 1);
    const double nominal = chains[c].frequency.nominal_days();
    return std::abs(gap - nominal) / nominal;
  };
  std::map<std::size_t, std::size_t> best;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const std::size_t root = find(c);
    auto [it, fresh] = best.try_emplace(root, c);
    if (fresh) continue;
    const std::size_t incumbent = it->second;
    const double a = misfit(c);
    const double b = misfit(incumbent);
    const bool longer = chains[c].frequency.nominal_days() > chains[incumbent].frequency.nominal_days();
    if (a < b - 1e-12 || (std::abs(a - b) <= 1e-12 && longer)) it->second = c;
  }

  std::vector<RecurringTransaction> out;
  for (const auto& [root, c] : best) out.push_back(to_recurring(txns, chains[c]));
  sort_output(out);
  return out;
}

NextOccurrence predict_next(const RecurringTransaction& recurring) {
  return NextOccurrence{recurring, advance(recurring.last_date, recurring.frequency), recurring.mean_amount};
}

std::vector<NextOccurrence> occurrences_between(const RecurringTransaction& recurring, Date after, Date until) {
  std::vector<NextOccurrence> out;
  RecurringTransaction walker = recurring;
  walker.support.clear();
  for (;;) {
    NextOccurrence next = predict_next(walker);
    if (next.predicted_date > until) break;
    walker.last_date = next.predicted_date;
    if (next.predicted_date > after) {
      next.recurring = recurring;
      out.push_back(std::move(next));
    }
  }
  return out;
}

bool matches_recurring(const Transaction& t, std::span<const RecurringTransaction> recurrings,
                       const SimilarityConfig& config) {
  for (const auto& r : recurrings) {
    if (r.category != t.category) continue;
    if ((r.mean_amount < 0.0) != (t.amount.value() < 0)) continue;
    if (is_same_biller(t.description, r.description, config)) return true;
  }
  return false;
}

double top_share_threshold(std::vector<double> amounts, double top_share) {
  return percentile(std::move(amounts), 100.0 * (1.0 - top_share));
}

std::vector<LargeExpense> unexpected_large_expenses(const Ledger& ledger, const SimilarityConfig& config) {
  config.validate();
  std::vector<LargeExpense> pooled;
  for (const auto& user : ledger.users()) {
    std::vector<Transaction> remaining;
    for (const auto& account : ledger.accounts_of_user(user)) {
      const auto txns = ledger.transactions_of(account);
      if (txns.empty()) continue;
      const auto recurrings = extract_all_recurring(txns, txns.back().date, config);
      for (const auto& t : txns) {
        if (t.amount.value() > 0 && !matches_recurring(t, recurrings, config)) remaining.push_back(t);
      }
    }
    if (remaining.empty()) continue;
    std::vector<double> amounts;
    for (const auto& t : remaining) amounts.push_back(t.amount.to_double());
    const double cut = top_share_threshold(amounts);

    std::vector<Transaction> top;
    for (const auto& t : remaining) {
      if (t.amount.to_double() > cut) top.push_back(t);
    }
    std::sort(top.begin(), top.end(), [](const Transaction& a, const Transaction& b) {
      if (a.amount != b.amount) return a.amount > b.amount;
      return canonical_less(a, b);
    });
    std::vector<LargeExpense> mine;
    for (const auto& t : top) {
      const bool dup = std::any_of(mine.begin(), mine.end(), [&](const LargeExpense& e) {
        return is_same_biller(e.description, t.description, config);
      });
      if (!dup) mine.push_back(LargeExpense{t.description, t.amount.to_double(), user});
    }
    pooled.insert(pooled.end(), mine.begin(), mine.end());
  }
  return pooled;
}

}  // namespace balcast
