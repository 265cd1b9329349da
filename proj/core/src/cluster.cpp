#include "balcast/cluster.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <string>

#include "balcast/error.hpp"
#include "balcast/parallel.hpp"
#include "balcast/series.hpp"

namespace balcast {

std::string_view linkage_name(Linkage l) { return l == Linkage::Complete ? "complete" : "average"; }

std::optional<Linkage> parse_linkage(std::string_view name) {
  std::string key(name);
  for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (key == "complete") return Linkage::Complete;
  if (key == "average") return Linkage::Average;
  return std::nullopt;
}

std::map<UserId, std::vector<double>> user_balance_sequences(const Ledger& ledger, Date from, Date to) {
  if (from > to) throw InvalidArgument("cluster period is empty");
  const auto days = static_cast<std::size_t>(to - from + 1);
  std::map<UserId, std::vector<double>> out;
  for (const auto& user : ledger.users()) {
    std::vector<double> sum(days, 0.0);
    bool covered = false;
    for (const auto& id : ledger.accounts_of_user(user)) {
      const Account& account = ledger.account(id);
      if (account.as_of < to) continue;
      const auto txns = ledger.transactions_of(id);
      if (txns.empty()) {
        for (auto& v : sum) v += account.current_balance.to_double();
      } else {
        const Date start = std::min(from, txns.front().date);
        const auto series = build_balance_series(ledger, id, Step::Daily, start);
        const auto offset = static_cast<std::size_t>(from - start);
        for (std::size_t d = 0; d < days; ++d) sum[d] += series.values[offset + d];
      }
      covered = true;
    }
    if (!covered) continue;
    const double mu = mean(sum);
    for (auto& v : sum) v -= mu;
    out.emplace(user, std::move(sum));
  }
  return out;
}

std::vector<std::size_t> agglomerate(const Eigen::MatrixXd& distances, std::size_t k, Linkage linkage,
                                     std::vector<double>* heights) {
  const auto n = static_cast<std::size_t>(distances.rows());
  if (distances.cols() != distances.rows()) throw InvalidArgument("distance matrix must be square");
  if (k == 0) throw InvalidArgument("k must be at least 1");
  if (n < k) throw DataError("fewer entities (" + std::to_string(n) + ") than clusters (" + std::to_string(k) + ")");

  // Clusters kept ordered by lowest member; members stay sorted.
  std::vector<std::vector<std::size_t>> clusters(n);
  for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};
  auto between = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    double acc = 0.0;
    for (auto i : a) {
      for (auto j : b) {
        const double d = distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        acc = linkage == Linkage::Complete ? std::max(acc, d) : acc + d;
      }
    }
    if (linkage == Linkage::Average) acc /= static_cast<double>(a.size() * b.size());
    return acc;
  };
  if (heights) heights->clear();
  while (clusters.size() > k) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    std::size_t bj = 1;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double d = between(clusters[i], clusters[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    auto merged = clusters[bi];
    merged.insert(merged.end(), clusters[bj].begin(), clusters[bj].end());
    std::sort(merged.begin(), merged.end());
    clusters[bi] = std::move(merged);
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    if (heights) heights->push_back(best);
  }
  std::vector<std::size_t> assignment(n, 0);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (auto i : clusters[c]) assignment[i] = c;
  }
  return assignment;
}

ClusterResult cluster_balances(const Ledger& ledger, Date from, Date to, const ClusterOptions& options) {
  if (options.k == 0) throw InvalidArgument("k must be at least 1");
  const auto sequences = user_balance_sequences(ledger, from, to);
  if (sequences.size() < options.k) {
    throw DataError("only " + std::to_string(sequences.size()) + " users cover the period; k = " +
                    std::to_string(options.k));
  }
  ClusterResult result;
  result.k = options.k;
  result.linkage = options.linkage;
  std::vector<const std::vector<double>*> seqs;
  for (const auto& [user, seq] : sequences) {
    result.users.push_back(user);
    seqs.push_back(&seq);
  }
  const std::size_t n = seqs.size();
  result.distances = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> dist(pairs.size());
  parallel_for(pairs.size(), options.threads, [&](std::size_t p) {
    dist[p] = dtw_distance(*seqs[pairs[p].first], *seqs[pairs[p].second], options.dtw);
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto i = static_cast<Eigen::Index>(pairs[p].first);
    const auto j = static_cast<Eigen::Index>(pairs[p].second);
    result.distances(i, j) = dist[p];
    result.distances(j, i) = dist[p];
  }
  const auto assignment = agglomerate(result.distances, options.k, options.linkage, &result.merge_heights);
  for (std::size_t i = 0; i < n; ++i) result.assignments[result.users[i]] = assignment[i];
  result.category_profiles = category_profile(ledger, result.assignments, from, to);
  return result;
}

std::map<std::size_t, CategoryTotals> category_profile(const Ledger& ledger,
                                                       const std::map<UserId, std::size_t>& assignments,
                                                       std::optional<Date> from, std::optional<Date> to) {
  std::map<std::size_t, CategoryTotals> sums;
  std::map<std::size_t, std::size_t> members;
  for (const auto& [user, cluster] : assignments) {
    CategoryTotals totals{};
    for (const auto& id : ledger.accounts_of_user(user)) {
      for (const auto& t : ledger.transactions_of(id)) {
        if ((from && t.date < *from) || (to && t.date > *to)) continue;
        totals[static_cast<std::size_t>(t.category)] += t.amount.to_double();
      }
    }
    auto& acc = sums.try_emplace(cluster, CategoryTotals{}).first->second;
    for (std::size_t c = 0; c < kCategoryCount; ++c) acc[c] += totals[c];
    ++members[cluster];
  }
  for (auto& [cluster, acc] : sums) {
    for (auto& v : acc) v /= static_cast<double>(members[cluster]);
  }
  return sums;
}

}  // namespace balcast
