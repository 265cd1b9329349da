#include "balcast/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "balcast/error.hpp"

namespace balcast {

std::optional<std::size_t> BalanceSeries::index_of(Date d) const {
  if (values.empty() || d < start_date - (step_days(step) - 1)) return std::nullopt;
  // Step i covers (date_at(i-1), date_at(i)].
  const int offset = d - start_date;
  const int width = step_days(step);
  const int idx = offset <= 0 ? 0 : (offset + width - 1) / width;
  if (static_cast<std::size_t>(idx) >= values.size()) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

BalanceSeries BalanceSeries::prefix_until(Date cutoff) const {
  BalanceSeries out{account, start_date, step, {}};
  for (std::size_t i = 0; i < values.size() && date_at(i) <= cutoff; ++i) out.values.push_back(values[i]);
  return out;
}

BalanceSeries build_balance_series(const Ledger& ledger, std::string_view account_id, Step step,
                                   std::optional<Date> range_start) {
  const Account& account = ledger.account(account_id);
  const auto txns = ledger.transactions_of(account_id);
  if (txns.empty()) throw DataError("account '" + account.id + "' has no transactions");
  if (account.as_of < txns.back().date) {
    throw DataError("balance as-of date for account '" + account.id + "' precedes its last transaction");
  }
  const Date first = range_start.value_or(txns.front().date);
  if (first > account.as_of) throw DataError("range start after the balance as-of date");

  // End-of-day balances in cents, walking backward from the as-of balance.
  const int days = account.as_of - first + 1;
  std::vector<std::int64_t> daily(static_cast<std::size_t>(days));
  std::vector<std::int64_t> net(static_cast<std::size_t>(days) + 1, 0);
  for (const auto& t : txns) {
    const int k = t.date - first;
    if (k >= 0) net[static_cast<std::size_t>(k)] += t.amount.value();
  }
  daily.back() = account.current_balance.value();
  for (int k = days - 1; k > 0; --k) {
    daily[static_cast<std::size_t>(k - 1)] = daily[static_cast<std::size_t>(k)] + net[static_cast<std::size_t>(k)];
  }

  BalanceSeries out;
  out.account = account.id;
  out.step = step;
  if (step == Step::Daily) {
    out.start_date = first;
    out.values.reserve(daily.size());
    for (auto c : daily) out.values.push_back(static_cast<double>(c) / 100.0);
    return out;
  }
  out.start_date = first.week_end();
  for (Date d = out.start_date;; d = d + 7) {
    const Date snap = std::min(d, account.as_of);
    out.values.push_back(static_cast<double>(daily[static_cast<std::size_t>(snap - first)]) / 100.0);
    if (d >= account.as_of) break;
  }
  return out;
}

Standardized standardize(std::span<const double> series) {
  if (series.size() < 2) throw InvalidArgument("standardize needs at least two values");
  Standardized out;
  out.mean = mean(series);
  out.stdev = sample_stdev(series);
  out.values.resize(series.size(), 0.0);
  if (out.stdev > 0.0) {
    for (std::size_t i = 0; i < series.size(); ++i) out.values[i] = (series[i] - out.mean) / out.stdev;
  }
  return out;
}

std::vector<double> destandardize(std::span<const double> z, double mu, double sd) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = mu + sd * z[i];
  return out;
}

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_stdev(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double mu = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double percentile(std::vector<double> x, double p) {
  if (x.empty()) return 0.0;
  std::sort(x.begin(), x.end());
  const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

}  // namespace balcast
