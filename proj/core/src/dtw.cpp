#include "balcast/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "balcast/error.hpp"

namespace balcast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_band(std::span<const double> a, std::span<const double> b, std::size_t window) {
  if (a.empty() || b.empty()) throw InvalidArgument("DTW needs non-empty sequences");
  const std::size_t diff = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
  if (diff > window) throw InvalidArgument("DTW band too narrow for the length difference");
}

// Band cells of row i are j in [lo(i), hi(i)].
struct Band {
  std::size_t n, m, w;
  [[nodiscard]] std::size_t lo(std::size_t i) const { return i > w ? i - w : 0; }
  [[nodiscard]] std::size_t hi(std::size_t i) const { return std::min(m - 1, i + w); }
};

// Full band table, row-major with (2w+1) slots per row; slot = j - i + w.
std::vector<double> fill_table(std::span<const double> a, std::span<const double> b, const Band& band) {
  const std::size_t width = 2 * band.w + 1;
  std::vector<double> table(a.size() * width, kInf);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return table[i * width + (j + band.w - i)]; };
  auto get = [&](std::size_t i, std::size_t j) -> double {
    if (j + band.w < i || j > i + band.w || j >= band.m) return kInf;
    return table[i * width + (j + band.w - i)];
  };
  for (std::size_t i = 0; i < band.n; ++i) {
    for (std::size_t j = band.lo(i); j <= band.hi(i); ++j) {
      const double d = a[i] - b[j];
      const double cost = d * d;
      if (i == 0 && j == 0) {
        at(i, j) = cost;
        continue;
      }
      double best = kInf;
      if (i > 0 && j > 0) best = get(i - 1, j - 1);
      if (i > 0) best = std::min(best, get(i - 1, j));
      if (j > 0) best = std::min(best, get(i, j - 1));
      at(i, j) = cost + best;
    }
  }
  return table;
}

}  // namespace

double dtw_squared(std::span<const double> a, std::span<const double> b, const DtwConfig& config) {
  check_band(a, b, config.window);
  const Band band{a.size(), b.size(), config.window};
  const std::size_t width = 2 * band.w + 1;
  // Two rolling rows indexed by slot j - i + w.
  std::vector<double> prev(width, kInf);
  std::vector<double> cur(width, kInf);
  for (std::size_t i = 0; i < band.n; ++i) {
    std::fill(cur.begin(), cur.end(), kInf);
    for (std::size_t j = band.lo(i); j <= band.hi(i); ++j) {
      const std::size_t slot = j + band.w - i;
      const double d = a[i] - b[j];
      const double cost = d * d;
      if (i == 0 && j == 0) {
        cur[slot] = cost;
        continue;
      }
      double best = kInf;
      // (i-1, j-1) sits in the same slot of the previous row, (i-1, j) one slot to the right.
      if (i > 0 && j > 0) best = prev[slot];
      if (i > 0 && slot + 1 < width) best = std::min(best, prev[slot + 1]);
      if (j > 0 && slot > 0) best = std::min(best, cur[slot - 1]);
      cur[slot] = cost + best;
    }
    std::swap(prev, cur);
  }
  return prev[band.m - 1 + band.w - (band.n - 1)];
}

double dtw_distance(std::span<const double> a, std::span<const double> b, const DtwConfig& config) {
  return std::sqrt(dtw_squared(a, b, config));
}

std::pair<double, WarpPath> dtw_path(std::span<const double> a, std::span<const double> b, const DtwConfig& config) {
  check_band(a, b, config.window);
  const Band band{a.size(), b.size(), config.window};
  const auto table = fill_table(a, b, band);
  const std::size_t width = 2 * band.w + 1;
  auto get = [&](std::size_t i, std::size_t j) -> double {
    if (j + band.w < i || j > i + band.w || j >= band.m) return kInf;
    return table[i * width + (j + band.w - i)];
  };

  WarpPath path;
  std::size_t i = band.n - 1;
  std::size_t j = band.m - 1;
  path.pairs.emplace_back(i, j);
  while (i > 0 || j > 0) {
    const double diag = (i > 0 && j > 0) ? get(i - 1, j - 1) : kInf;
    const double up = i > 0 ? get(i - 1, j) : kInf;
    const double left = j > 0 ? get(i, j - 1) : kInf;
    if (diag <= up && diag <= left) {
      --i;
      --j;
    } else if (up <= left) {
      --i;
    } else {
      --j;
    }
    path.pairs.emplace_back(i, j);
  }
  std::reverse(path.pairs.begin(), path.pairs.end());
  return {std::sqrt(get(band.n - 1, band.m - 1)), std::move(path)};
}

Envelope make_envelope(std::span<const double> q, std::size_t window) {
  const std::size_t n = q.size();
  Envelope env{std::vector<double>(n), std::vector<double>(n)};
  // Monotone deques (Lemire's streaming min/max).
  std::deque<std::size_t> maxq;
  std::deque<std::size_t> minq;
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t right = std::min(n - 1, i + window);
    while (next <= right) {
      while (!maxq.empty() && q[maxq.back()] <= q[next]) maxq.pop_back();
      maxq.push_back(next);
      while (!minq.empty() && q[minq.back()] >= q[next]) minq.pop_back();
      minq.push_back(next);
      ++next;
    }
    const std::size_t left = i > window ? i - window : 0;
    while (maxq.front() < left) maxq.pop_front();
    while (minq.front() < left) minq.pop_front();
    env.upper[i] = q[maxq.front()];
    env.lower[i] = q[minq.front()];
  }
  return env;
}

double lb_keogh_squared(const Envelope& env, std::span<const double> c, double abandon_at) {
  double sum = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    double d = 0.0;
    if (c[j] > env.upper[j]) {
      d = c[j] - env.upper[j];
    } else if (c[j] < env.lower[j]) {
      d = env.lower[j] - c[j];
    }
    sum += d * d;
    if (sum >= abandon_at) return sum;
  }
  return sum;
}

double lb_kim_squared(std::span<const double> q, std::span<const double> c) {
  const double first = q.front() - c.front();
  if (q.size() == 1 && c.size() == 1) return first * first;
  const double last = q.back() - c.back();
  return first * first + last * last;
}

}  // namespace balcast
