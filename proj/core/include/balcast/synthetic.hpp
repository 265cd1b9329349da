#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "balcast/eval.hpp"
#include "balcast/model.hpp"

namespace balcast {

/// Draws built on raw 64-bit output so fixtures are identical across standard libraries.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi);  // inclusive
  bool chance(double p) { return uniform() < p; }
  double normal();
  std::size_t poisson(double rate);
  /// Index drawn with the given (unnormalised) weights.
  std::size_t weighted(const std::vector<double>& weights);
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

struct SyntheticOptions {
  std::size_t accounts = 20;
  /// Accounts are spread over this many users; the surplus accounts go to the last user.
  std::size_t users = 19;
  Date start = Date::from_ymd(2016, 6, 21);
  int days = 360;
  std::uint64_t seed = 1;
  /// Mean count of non-recurring card transactions per day.
  double noise_rate = 0.5;
  /// Irregular "bill pay" transfers that a keyword rule mistakes for recurring charges.
  bool irregular_bill_pay = true;
  /// Share of occurrences moved off schedule; moves are at most two days (one for weekly
  /// and biweekly streams).
  double jitter_share = 0.3;
};

struct SyntheticData {
  Ledger ledger;
  std::vector<RecurringLabel> labels;
};

/// Checking accounts with a semimonthly salary, monthly, biweekly and weekly charges and
/// Poisson card spending. Every planted recurring occurrence is listed in `labels`.
SyntheticData generate_synthetic(const SyntheticOptions& options);

}  // namespace balcast
