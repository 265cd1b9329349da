#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace balcast {

/// Sakoe-Chiba band radius; squared pointwise cost, square root of the total.
struct DtwConfig {
  std::size_t window = 2;
};

/// Monotone alignment from (0,0) to (n-1,m-1) inside the band.
struct WarpPath {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Sum of squared costs along the cheapest banded path (no square root).
/// Throws InvalidArgument for empty inputs or when |len(a) - len(b)| exceeds the window.
double dtw_squared(std::span<const double> a, std::span<const double> b, const DtwConfig& config = {});

double dtw_distance(std::span<const double> a, std::span<const double> b, const DtwConfig& config = {});

/// Distance plus an optimal path. Backtracking prefers the diagonal predecessor, then the one
/// that advances `a`'s index, then the one that advances `b`'s.
std::pair<double, WarpPath> dtw_path(std::span<const double> a, std::span<const double> b,
                                     const DtwConfig& config = {});

/// Running min/max of `q` over [i - window, i + window].
struct Envelope {
  std::vector<double> lower;
  std::vector<double> upper;
};

Envelope make_envelope(std::span<const double> q, std::size_t window);

/// Squared LB_Keogh of `c` against the envelope of an equal-length query. Stops early once the
/// running sum reaches `abandon_at`.
double lb_keogh_squared(const Envelope& env, std::span<const double> c,
                        double abandon_at = std::numeric_limits<double>::infinity());

/// Squared cost of the first and last cells, which every warp path visits.
double lb_kim_squared(std::span<const double> q, std::span<const double> c);

}  // namespace balcast
