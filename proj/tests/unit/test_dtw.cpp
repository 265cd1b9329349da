#include <gtest/gtest.h>

#include <random>

#include "balcast/dtw.hpp"
#include "balcast/error.hpp"
#include "oracles.hpp"

using namespace balcast;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST(Dtw, Examples) {
  const std::vector<double> a{1, 2, 3};
  EXPECT_EQ(dtw_distance(a, a), 0.0);

  const std::vector<double> x{0, 0, 1, 0};
  const std::vector<double> y{0, 1, 0, 0};
  EXPECT_DOUBLE_EQ(dtw_squared(x, y, {2}), oracle::dtw_squared(x, y, 2));
  EXPECT_EQ(dtw_distance(x, y, {2}), 0.0);

  // Window 0 is the Euclidean distance.
  const std::vector<double> p{1, 2, 4};
  const std::vector<double> q{2, 2, 2};
  EXPECT_DOUBLE_EQ(dtw_distance(p, q, {0}), std::sqrt(1.0 + 0.0 + 4.0));
}

TEST(Dtw, InfeasibleBandAndEmptyInputThrow) {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{1, 2};
  const std::vector<double> none;
  EXPECT_THROW(dtw_distance(a, b, {2}), InvalidArgument);
  EXPECT_THROW(dtw_distance(none, none), InvalidArgument);
  EXPECT_NO_THROW(dtw_distance(a, b, {3}));
}

TEST(Dtw, PathIdentityAndEndpoints) {
  std::mt19937_64 rng(1);
  const auto a = random_vec(rng, 9);
  const auto [dist, path] = dtw_path(a, a);
  EXPECT_EQ(dist, 0.0);
  ASSERT_EQ(path.pairs.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(path.pairs[i], std::make_pair(i, i));
}

// Banded DTW against the full-matrix oracle and the path against a cost recomputation.
TEST(Dtw, OracleEquivalenceProperty) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> len(1, 12);
  std::uniform_int_distribution<std::size_t> win(0, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = len(rng);
    const std::size_t w = win(rng);
    const std::size_t lo = n > w ? n - w : 1;
    std::uniform_int_distribution<std::size_t> mlen(std::max<std::size_t>(1, lo), std::min<std::size_t>(12, n + w));
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, mlen(rng));
    const double expected = oracle::dtw_squared(a, b, w);
    ASSERT_NEAR(dtw_squared(a, b, {w}), expected, 1e-12);
    ASSERT_NEAR(dtw_distance(a, b, {w}), std::sqrt(expected), 1e-12);
    const auto [dist, path] = dtw_path(a, b, {w});
    ASSERT_NEAR(dist, std::sqrt(expected), 1e-12);
    ASSERT_EQ(path.pairs.front(), std::make_pair(std::size_t{0}, std::size_t{0}));
    ASSERT_EQ(path.pairs.back(), std::make_pair(a.size() - 1, b.size() - 1));
    for (std::size_t k = 1; k < path.pairs.size(); ++k) {
      const auto [i0, j0] = path.pairs[k - 1];
      const auto [i1, j1] = path.pairs[k];
      ASSERT_TRUE((i1 == i0 || i1 == i0 + 1) && (j1 == j0 || j1 == j0 + 1) && (i1 + j1 > i0 + j0));
      ASSERT_LE(i1 > j1 ? i1 - j1 : j1 - i1, w);
    }
    ASSERT_NEAR(oracle::path_cost(a, b, path.pairs), expected, 1e-12);
  }
}

TEST(Dtw, DynamicProgramMatchesPathEnumeration) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> len(1, 6);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_vec(rng, len(rng));
    const auto b = random_vec(rng, len(rng));
    const std::size_t w = std::max(a.size(), b.size());
    ASSERT_NEAR(dtw_squared(a, b, {w}), oracle::dtw_squared_enumerated(a, b, w), 1e-12);
  }
}

TEST(Dtw, SymmetryAndWideBandProperty) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> len(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_vec(rng, len(rng));
    const auto b = random_vec(rng, len(rng));
    const std::size_t wide = std::max(a.size(), b.size()) - 1;
    const double d = dtw_distance(a, b, {wide});
    EXPECT_GE(d, 0.0);
    EXPECT_NEAR(d, dtw_distance(b, a, {wide}), 1e-12);
    // A band at least max(len)-1 wide is unconstrained.
    EXPECT_NEAR(dtw_squared(a, b, {wide}), oracle::dtw_squared(a, b, 1000), 1e-12);
  }
}

TEST(Dtw, LowerBoundsNeverExceedDistance) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> len(2, 40);
  std::uniform_int_distribution<std::size_t> win(0, 4);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto n = len(rng);
    const std::size_t w = win(rng);
    const auto q = random_vec(rng, n);
    const auto c = random_vec(rng, n);
    const double d2 = dtw_squared(q, c, {w});
    const auto env = make_envelope(q, w);
    ASSERT_LE(lb_keogh_squared(env, c), d2 + 1e-12);
    ASSERT_LE(lb_kim_squared(q, c), d2 + 1e-12);
  }
}

TEST(Dtw, EnvelopeIsRunningMinMax) {
  const std::vector<double> q{3, 1, 4, 1, 5, 9, 2};
  const auto env = make_envelope(q, 1);
  EXPECT_EQ(env.lower, (std::vector<double>{1, 1, 1, 1, 1, 2, 2}));
  EXPECT_EQ(env.upper, (std::vector<double>{3, 4, 4, 5, 9, 9, 9}));
}
