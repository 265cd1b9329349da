#include "balcast/landmark.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <string>

#include "balcast/dtw.hpp"
#include "balcast/error.hpp"

namespace balcast {

namespace {

bool payroll_like(std::string_view description) {
  std::string s;
  for (char c : description) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  constexpr std::array<std::string_view, 7> keys = {"payroll", "salary", "direct dep", "dir dep",
                                                    "paycheck", "wage", "deposit"};
  return std::any_of(keys.begin(), keys.end(), [&](std::string_view k) { return s.find(k) != std::string::npos; });
}

std::optional<std::size_t> step_index(Date d, Date first_step_date, Step step) {
  const int width = step_days(step);
  const int offset = d - first_step_date;
  if (offset <= -width) return std::nullopt;
  if (offset <= 0) return 0;
  return static_cast<std::size_t>((offset + width - 1) / width);
}

}  // namespace

std::vector<double> LandmarkTemplate::unit_indicator() const {
  std::vector<double> out(length, 0.0);
  double peak = 0.0;
  for (const auto& [i, m] : marks) peak = std::max(peak, m);
  if (peak <= 0.0) return out;
  for (const auto& [i, m] : marks) out[i] = m / peak;
  return out;
}

std::optional<RecurringTransaction> find_paycheck(std::span<const RecurringTransaction> recurrings) {
  const RecurringTransaction* best = nullptr;
  for (const auto& r : recurrings) {
    if (r.mean_amount >= 0.0) continue;
    const bool salary_category = r.category == Category::Transfer || r.category == Category::Payment;
    if (!salary_category && !payroll_like(r.description)) continue;
    if (!best || r.mean_amount < best->mean_amount ||
        (r.mean_amount == best->mean_amount && r.description < best->description)) {
      best = &r;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

std::vector<Payday> paycheck_deposits(const RecurringTransaction& paycheck, std::span<const Transaction> transactions,
                                      const SimilarityConfig& config) {
  std::vector<Payday> out;
  for (const auto& t : transactions) {
    if (t.amount.value() >= 0 || t.category != paycheck.category) continue;
    if (is_same_biller(t.description, paycheck.description, config)) out.push_back({t.date, -t.amount.to_double()});
  }
  return out;
}

LandmarkTemplate template_from_paydays(std::span<const Payday> paydays, Date first_step_date, std::size_t length,
                                       Step step) {
  std::map<std::size_t, double> marks;
  for (const auto& p : paydays) {
    if (p.amount <= 0.0) continue;
    const auto idx = step_index(p.date, first_step_date, step);
    if (idx && *idx < length) marks[*idx] += p.amount;
  }
  return LandmarkTemplate{length, {marks.begin(), marks.end()}};
}

LandmarkTemplate build_payday_template(std::span<const RecurringTransaction> recurrings,
                                       std::span<const Transaction> account_transactions, Date origin,
                                       std::size_t history_steps, std::size_t horizon_steps, Step step,
                                       const SimilarityConfig& config) {
  const std::size_t length = history_steps + horizon_steps;
  const int width = step_days(step);
  const Date first_step = origin - static_cast<int>(history_steps - 1) * width;
  const auto paycheck = find_paycheck(recurrings);
  if (!paycheck) return LandmarkTemplate{length, {}};

  std::vector<Payday> days;
  for (const auto& p : paycheck_deposits(*paycheck, account_transactions, config)) {
    if (p.date <= origin) days.push_back(p);
  }
  const Date horizon_end = origin + static_cast<int>(horizon_steps) * width;
  for (const auto& next : occurrences_between(*paycheck, origin, horizon_end)) {
    days.push_back({next.predicted_date, std::abs(next.predicted_amount)});
  }
  return template_from_paydays(days, first_step, length, step);
}

std::vector<double> align_to_template(std::span<const double> raw, const LandmarkTemplate& source,
                                      const LandmarkTemplate& target) {
  if (source.length != raw.size() || target.length != raw.size()) {
    throw InvalidArgument("template lengths must match the sequence length");
  }
  std::vector<double> out(raw.begin(), raw.end());
  if (source.empty() || target.empty() || raw.empty()) return out;

  const auto src = source.unit_indicator();
  const auto tgt = target.unit_indicator();
  const DtwConfig band{(raw.size() + 3) / 4};
  const auto [dist, path] = dtw_path(src, tgt, band);
  (void)dist;

  std::vector<double> sum(raw.size(), 0.0);
  std::vector<std::size_t> count(raw.size(), 0);
  for (const auto& [i, j] : path.pairs) {
    sum[j] += raw[i];
    ++count[j];
  }
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = sum[j] / static_cast<double>(count[j]);
  return out;
}

}  // namespace balcast
