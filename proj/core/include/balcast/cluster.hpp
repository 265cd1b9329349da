#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "balcast/dtw.hpp"
#include "balcast/model.hpp"

namespace balcast {

enum class Linkage { Complete, Average };

std::string_view linkage_name(Linkage l);
std::optional<Linkage> parse_linkage(std::string_view name);

using CategoryTotals = std::array<double, kCategoryCount>;

struct ClusterResult {
  /// Entities in id order; distances and merges index into this list.
  std::vector<UserId> users;
  std::map<UserId, std::size_t> assignments;
  std::size_t k = 0;
  Linkage linkage = Linkage::Complete;
  Eigen::MatrixXd distances;
  /// Linkage distance of each merge, in merge order.
  std::vector<double> merge_heights;
  std::map<std::size_t, CategoryTotals> category_profiles;
};

struct ClusterOptions {
  std::size_t k = 5;
  DtwConfig dtw;
  Linkage linkage = Linkage::Complete;
  std::size_t threads = 1;
};

/// Per-user daily balance (summed over the user's accounts) on [from, to], zero-meaned.
/// Users without an account whose balance is known through `to` are left out.
std::map<UserId, std::vector<double>> user_balance_sequences(const Ledger& ledger, Date from, Date to);

/// Agglomerative clustering of the zero-mean user balance sequences under banded DTW. Ties merge
/// the pair with the lowest entity ids first; cluster ids are numbered by lowest member.
/// Throws DataError with fewer than k users and InvalidArgument for k = 0 or from > to.
ClusterResult cluster_balances(const Ledger& ledger, Date from, Date to, const ClusterOptions& options);

/// Clusters an explicit distance matrix (symmetric, zero diagonal). Returns assignments by
/// index and fills `heights` with the merge distances.
std::vector<std::size_t> agglomerate(const Eigen::MatrixXd& distances, std::size_t k, Linkage linkage,
                                     std::vector<double>* heights = nullptr);

/// Mean per-user total amount per category within each cluster, over transactions in
/// [from, to] when given. Income shows as negative spending.
std::map<std::size_t, CategoryTotals> category_profile(const Ledger& ledger,
                                                       const std::map<UserId, std::size_t>& assignments,
                                                       std::optional<Date> from = std::nullopt,
                                                       std::optional<Date> to = std::nullopt);

}  // namespace balcast
