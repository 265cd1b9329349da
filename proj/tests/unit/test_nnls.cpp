#include <gtest/gtest.h>

#include <random>

#include "balcast/error.hpp"
#include "balcast/nnls.hpp"
#include "oracles.hpp"

using namespace balcast;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Problem {
  VectorXd y;
  MatrixXd X;
  VectorXd w;
  MatrixXd D;
};

Problem random_problem(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> weight(0, 2);
  Problem p{VectorXd(n), MatrixXd(n, m), VectorXd(n), MatrixXd(m, m)};
  for (Eigen::Index i = 0; i < n; ++i) {
    p.y[i] = g(rng);
    p.w[i] = std::array<double, 3>{1.0, 5.0, 10.0}[static_cast<std::size_t>(weight(rng))];
    for (Eigen::Index j = 0; j < m; ++j) p.X(i, j) = g(rng);
  }
  // Anomaly-style penalty: pairwise absolute differences of random values.
  VectorXd v(m);
  for (auto& x : v) x = g(rng);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) p.D(i, j) = std::abs(v[i] - v[j]);
  }
  return p;
}

void expect_kkt(const Problem& p, double lambda, const RegressionFit& fit) {
  const VectorXd g = penalized_gradient(p.y, p.X, p.w, p.D, lambda, fit.beta0, fit.beta);
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
    ASSERT_GE(fit.beta[j], 0.0);
    if (fit.beta[j] > 0.0) {
      EXPECT_NEAR(g[j], 0.0, 1e-8 * scale) << "active " << j;
    } else {
      EXPECT_GE(g[j], -1e-8 * scale) << "inactive " << j;
    }
  }
  // Intercept: weighted residuals sum to zero.
  const VectorXd r = p.y - p.X * fit.beta - VectorXd::Constant(p.y.size(), fit.beta0);
  EXPECT_NEAR(p.w.dot(r), 0.0, 1e-9 * std::max(1.0, p.w.sum()));
}

}  // namespace

TEST(Nnls, LawsonHansonSmall) {
  MatrixXd A(3, 2);
  A << 1, 0, 0, 1, 1, 1;
  VectorXd b(3);
  b << 1, -1, 0;
  const VectorXd x = nnls(A, b);
  // Unconstrained optimum is (1, -1); clamped problem gives (0.5, 0).
  EXPECT_NEAR(x[0], 0.5, 1e-12);
  EXPECT_EQ(x[1], 0.0);
}

TEST(PenalizedNnls, ExactFit) {
  VectorXd y(6);
  y << 3, 1, 4, 1, 5, 9;
  const double c = 2.5;
  MatrixXd X = (y.array() - c).matrix();
  const VectorXd w = VectorXd::Ones(6);
  const MatrixXd D = MatrixXd::Zero(1, 1);
  const auto fit = fit_weighted_penalized_nnls(y, X, w, D, 0.0);
  EXPECT_NEAR(fit.beta[0], 1.0, 1e-12);
  EXPECT_NEAR(fit.beta0, c, 1e-12);
  EXPECT_NEAR(fit.objective, 0.0, 1e-20);
  EXPECT_EQ(fit.active_set, std::vector<std::size_t>{0});
}

TEST(PenalizedNnls, LargePenaltyLimit) {
  std::mt19937_64 rng(5);
  auto p = random_problem(rng, 12, 3);
  p.D = MatrixXd::Identity(3, 3);
  const auto fit = fit_weighted_penalized_nnls(p.y, p.X, p.w, p.D, 1e12);
  EXPECT_LT(fit.beta.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(fit.beta0, p.w.dot(p.y) / p.w.sum(), 1e-9);
}

TEST(PenalizedNnls, RejectsBadInput) {
  VectorXd y = VectorXd::Ones(3);
  MatrixXd X = MatrixXd::Ones(3, 2);
  VectorXd w = VectorXd::Ones(3);
  MatrixXd D = MatrixXd::Zero(2, 2);
  EXPECT_THROW(fit_weighted_penalized_nnls(y, X, w, D, -1.0), InvalidArgument);
  w[1] = 0.0;
  EXPECT_THROW(fit_weighted_penalized_nnls(y, X, w, D, 1.0), InvalidArgument);
  w[1] = 1.0;
  y[0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(fit_weighted_penalized_nnls(y, X, w, D, 1.0), InvalidArgument);
  y[0] = 1.0;
  EXPECT_THROW(fit_weighted_penalized_nnls(y, MatrixXd::Ones(4, 2), w, D, 1.0), InvalidArgument);
}

// KKT conditions and agreement with an accelerated projected-gradient solver.
TEST(PenalizedNnls, MatchesProjectedGradientProperty) {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const double lambda = std::array<double, 3>{0.0, 0.5, 5.0}[static_cast<std::size_t>(trial % 3)];
    const auto p = random_problem(rng, 10, 3);
    const auto fit = fit_weighted_penalized_nnls(p.y, p.X, p.w, p.D, lambda);
    expect_kkt(p, lambda, fit);
    EXPECT_NEAR(fit.objective, penalized_objective(p.y, p.X, p.w, p.D, lambda, fit.beta0, fit.beta), 1e-10);
    const auto ref = oracle::projected_gradient(p.y, p.X, p.w, p.D, lambda);
    ASSERT_NEAR(fit.objective, ref.objective, 1e-6 * std::max(1.0, ref.objective)) << "trial " << trial;
    ASSERT_LE(fit.objective, ref.objective + 1e-9 * std::max(1.0, ref.objective));
  }
}

TEST(PenalizedNnls, MatchesSupportEnumerationProperty) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const double lambda = 0.25 * (trial % 9);
    const auto p = random_problem(rng, 20, 6);
    const auto fit = fit_weighted_penalized_nnls(p.y, p.X, p.w, p.D, lambda);
    const auto ref = oracle::enumerate_supports(p.y, p.X, p.w, p.D, lambda);
    ASSERT_NEAR(fit.objective, ref.objective, 1e-9 * std::max(1.0, ref.objective)) << "trial " << trial;
    ASSERT_NEAR((fit.beta - ref.beta).cwiseAbs().maxCoeff(), 0.0, 1e-6);
  }
}

TEST(PenalizedNnls, PenaltyShrinksMonotonically) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_problem(rng, 15, 4);
    double prev = std::numeric_limits<double>::infinity();
    for (double lambda : {0.0, 0.1, 1.0, 10.0, 100.0}) {
      const auto fit = fit_weighted_penalized_nnls(p.y, p.X, p.w, p.D, lambda);
      const double pen = (p.D * fit.beta).squaredNorm();
      EXPECT_LE(pen, prev + 1e-9);
      prev = pen;
    }
  }
}

TEST(PenalizedNnls, GradientMatchesOracle) {
  std::mt19937_64 rng(1);
  const auto p = random_problem(rng, 8, 3);
  VectorXd beta(3);
  beta << 0.2, 0.0, 1.5;
  const VectorXd g = penalized_gradient(p.y, p.X, p.w, p.D, 0.7, 0.3, beta);
  const VectorXd ref = oracle::gradient(p.y, p.X, p.w, p.D, 0.7, 0.3, beta);
  EXPECT_LT((g - ref).cwiseAbs().maxCoeff(), 1e-12);
}
