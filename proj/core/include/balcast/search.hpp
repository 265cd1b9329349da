#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "balcast/dtw.hpp"
#include "balcast/series.hpp"

namespace balcast {

/// Geometry of a candidate window: the first `match_length` values are compared with the
/// query, the first `norm_length` values fix the z-score, and `window_length` values are
/// returned.
struct WindowShape {
  std::size_t match_length = 20;
  std::size_t norm_length = 31;
  std::size_t window_length = 62;
};

/// Windows of `account` touching [from, to] are never returned.
struct Exclusion {
  AccountId account;
  Date from;
  Date to;
};

struct SearchOptions {
  WindowShape shape;
  std::size_t count = 10;
  std::vector<Exclusion> exclusions;
  /// Candidate windows must end on or before this date.
  std::optional<Date> cutoff;
  DtwConfig dtw;
  /// Envelope lower bounds skip DTW evaluations; results match the exhaustive scan exactly.
  bool prune = true;
};

/// A historical window standardized by its own first `norm_length` values.
struct MatchedSequence {
  AccountId source_account;
  Date source_start;
  std::size_t source_offset = 0;
  std::vector<double> raw;
  /// Filled by landmark alignment; equals `raw` until then.
  std::vector<double> aligned;
  double dtw_distance = 0.0;
  double norm_mean = 0.0;
  double norm_stdev = 0.0;
};

struct SearchResult {
  std::vector<MatchedSequence> matches;
  /// Fewer than the requested number of non-overlapping windows exist.
  bool shortfall = false;
  std::size_t candidates = 0;
  std::size_t pruned = 0;
  std::size_t dtw_evaluations = 0;
};

/// Historical balance windows, ordered by account id for deterministic tie-breaking.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<BalanceSeries> series);

  [[nodiscard]] const std::vector<BalanceSeries>& series() const { return series_; }
  [[nodiscard]] bool empty() const { return series_.empty(); }
  [[nodiscard]] const BalanceSeries* find(std::string_view account) const;

 private:
  std::vector<BalanceSeries> series_;
};

/// The `count` lowest-DTW windows against `query` (already standardized, length
/// match_length), ranked by (distance, account, start). Two picks from one account differ in
/// start by more than the DTW window. A window that is constant over its first norm_length
/// values standardizes to all zeros.
SearchResult subsequence_search(std::span<const double> query, const Corpus& corpus, const SearchOptions& options);

}  // namespace balcast
