#include "balcast/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "balcast/error.hpp"

namespace balcast {

namespace {

struct Candidate {
  double dist2 = 0.0;
  std::size_t series = 0;
  std::size_t offset = 0;

  bool operator<(const Candidate& o) const {
    return std::tie(dist2, series, offset) < std::tie(o.dist2, o.series, o.offset);
  }
};

bool excluded(const BalanceSeries& s, std::size_t offset, std::size_t length, const std::vector<Exclusion>& ex) {
  if (ex.empty()) return false;
  const Date first = s.date_at(offset) - (step_days(s.step) - 1);
  const Date last = s.date_at(offset + length - 1);
  return std::any_of(ex.begin(), ex.end(), [&](const Exclusion& e) {
    return e.account == s.account && first <= e.to && last >= e.from;
  });
}

// Two-pass mean and sample deviation, same arithmetic as standardize().
std::pair<double, double> window_stats(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  const double mu = sum / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  return {mu, x.size() > 1 ? std::sqrt(ss / static_cast<double>(x.size() - 1)) : 0.0};
}

}  // namespace

Corpus::Corpus(std::vector<BalanceSeries> series) : series_(std::move(series)) {
  std::stable_sort(series_.begin(), series_.end(),
                   [](const BalanceSeries& a, const BalanceSeries& b) { return a.account < b.account; });
}

const BalanceSeries* Corpus::find(std::string_view account) const {
  for (const auto& s : series_) {
    if (s.account == account) return &s;
  }
  return nullptr;
}

SearchResult subsequence_search(std::span<const double> query, const Corpus& corpus, const SearchOptions& options) {
  const auto& shape = options.shape;
  if (shape.match_length == 0 || shape.norm_length < 2 || shape.match_length > shape.window_length ||
      shape.norm_length > shape.window_length) {
    throw InvalidArgument("inconsistent search window shape");
  }
  if (query.size() != shape.match_length) throw InvalidArgument("query length must equal the match length");
  if (options.count == 0) throw InvalidArgument("search needs count >= 1");

  const std::size_t w = options.dtw.window;
  const std::size_t keep = options.count * (2 * w + 1);
  const Envelope env = make_envelope(query, w);

  SearchResult result;
  std::priority_queue<Candidate> best;  // max-heap of the `keep` best so far
  std::vector<Candidate> all;
  std::vector<double> z(shape.match_length);

  for (std::size_t si = 0; si < corpus.series().size(); ++si) {
    const auto& s = corpus.series()[si];
    if (s.size() < shape.window_length) continue;
    for (std::size_t off = 0; off + shape.window_length <= s.size(); ++off) {
      if (options.cutoff && s.date_at(off + shape.window_length - 1) > *options.cutoff) break;
      if (excluded(s, off, shape.window_length, options.exclusions)) continue;
      const auto [mu, sd] = window_stats(std::span<const double>(s.values).subspan(off, shape.norm_length));
      ++result.candidates;
      for (std::size_t k = 0; k < shape.match_length; ++k) z[k] = sd > 0.0 ? (s.values[off + k] - mu) / sd : 0.0;

      if (options.prune && best.size() == keep) {
        const double threshold = best.top().dist2;
        // Later candidates lose ties, so a bound equal to the threshold already excludes.
        if (lb_kim_squared(query, z) >= threshold || lb_keogh_squared(env, z, threshold) >= threshold) {
          ++result.pruned;
          continue;
        }
      }
      ++result.dtw_evaluations;
      const Candidate c{dtw_squared(query, z, options.dtw), si, off};
      if (options.prune) {
        if (best.size() < keep) {
          best.push(c);
        } else if (c < best.top()) {
          best.pop();
          best.push(c);
        }
      } else {
        all.push_back(c);
      }
    }
  }

  if (options.prune) {
    all.reserve(best.size());
    while (!best.empty()) {
      all.push_back(best.top());
      best.pop();
    }
  }
  std::sort(all.begin(), all.end());

  std::vector<Candidate> picked;
  for (const auto& c : all) {
    if (picked.size() == options.count) break;
    const bool overlaps = std::any_of(picked.begin(), picked.end(), [&](const Candidate& p) {
      const std::size_t gap = p.offset > c.offset ? p.offset - c.offset : c.offset - p.offset;
      return p.series == c.series && gap <= w;
    });
    if (!overlaps) picked.push_back(c);
  }

  for (const auto& c : picked) {
    const auto& s = corpus.series()[c.series];
    const auto window = std::span<const double>(s.values).subspan(c.offset, shape.window_length);
    const auto [mu, sd] = window_stats(window.first(shape.norm_length));
    MatchedSequence m;
    m.source_account = s.account;
    m.source_start = s.date_at(c.offset);
    m.source_offset = c.offset;
    m.raw.resize(window.size());
    for (std::size_t k = 0; k < window.size(); ++k) m.raw[k] = sd > 0.0 ? (window[k] - mu) / sd : 0.0;
    m.aligned = m.raw;
    m.dtw_distance = std::sqrt(c.dist2);
    m.norm_mean = mu;
    m.norm_stdev = sd;
    result.matches.push_back(std::move(m));
  }
  result.shortfall = result.matches.size() < options.count;
  return result;
}

}  // namespace balcast
