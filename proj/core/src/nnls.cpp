#include "balcast/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "balcast/error.hpp"

namespace balcast {

namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(A.cols());
  if (cols.empty()) return z;
  Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(cols[k]);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Ap);
  Eigen::VectorXd zp = qr.solve(b);
  // One step of iterative refinement tightens the normal-equation residual.
  zp += qr.solve(b - Ap * zp);
  for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = zp(static_cast<Eigen::Index>(k));
  return z;
}

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, std::size_t max_iterations) {
  const auto n = static_cast<std::size_t>(A.cols());
  if (A.rows() != b.size()) throw InvalidArgument("nnls: row count mismatch");
  if (max_iterations == 0) max_iterations = 3 * n + 10;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());
  std::vector<bool> passive(n, false);
  if (n == 0) return x;

  const double scale = std::max(1.0, (A.transpose() * b).cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale * static_cast<double>(std::max<Eigen::Index>(A.rows(), A.cols()));

  Eigen::VectorXd grad = A.transpose() * (b - A * x);
  std::size_t outer = 0;
  while (outer++ < max_iterations) {
    std::optional<Eigen::Index> enter;
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (!passive[static_cast<std::size_t>(j)] && grad(j) > tol && (!enter || grad(j) > grad(*enter))) enter = j;
    }
    if (!enter) break;
    passive[static_cast<std::size_t>(*enter)] = true;

    std::size_t inner = 0;
    for (;;) {
      Eigen::VectorXd z = solve_passive(A, b, passive);
      bool feasible = true;
      for (std::size_t j = 0; j < n; ++j) {
        if (passive[j] && z(static_cast<Eigen::Index>(j)) <= 0.0) feasible = false;
      }
      if (feasible) {
        x = z;
        break;
      }
      if (++inner > 3 * n + 10) {
        x = z.cwiseMax(0.0);
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        if (passive[j] && z(jj) <= 0.0) alpha = std::min(alpha, x(jj) / (x(jj) - z(jj)));
      }
      x += alpha * (z - x);
      for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        if (passive[j] && x(jj) <= std::numeric_limits<double>::epsilon() * (1.0 + std::abs(z(jj)))) {
          passive[j] = false;
          x(jj) = 0.0;
        }
      }
    }
    grad = A.transpose() * (b - A * x);
    // The entering variable came straight back out: numerically stationary.
    if (!passive[static_cast<std::size_t>(*enter)]) break;
  }
  return x;
}

double penalized_objective(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                           const Eigen::MatrixXd& D, double lambda, double beta0, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd r = (y - X * beta).array() - beta0;
  double obj = (w.array() * r.array().square()).sum();
  if (lambda != 0.0 && beta.size() > 0) obj += lambda * (D * beta).squaredNorm();
  return obj;
}

Eigen::VectorXd penalized_gradient(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                                   const Eigen::MatrixXd& D, double lambda, double beta0,
                                   const Eigen::VectorXd& beta) {
  const Eigen::VectorXd r = (y - X * beta).array() - beta0;
  Eigen::VectorXd g = -2.0 * X.transpose() * (w.array() * r.array()).matrix();
  if (lambda != 0.0 && beta.size() > 0) g += 2.0 * lambda * D.transpose() * (D * beta);
  return g;
}

RegressionFit fit_weighted_penalized_nnls(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                                          const Eigen::VectorXd& w, const Eigen::MatrixXd& D, double lambda) {
  const Eigen::Index L = y.size();
  const Eigen::Index M = X.cols();
  if (X.rows() != L || w.size() != L) throw InvalidArgument("regression: y, X and w disagree in length");
  if (D.rows() != M || D.cols() != M) throw InvalidArgument("regression: D must be M x M");
  if (L == 0) throw InvalidArgument("regression: empty response");
  if (!all_finite(y) || !all_finite(X) || !all_finite(w) || !all_finite(D) || !std::isfinite(lambda)) {
    throw InvalidArgument("regression: non-finite input");
  }
  if (lambda < 0.0) throw InvalidArgument("regression: lambda must be non-negative");
  if ((w.array() <= 0.0).any()) throw InvalidArgument("regression: weights must be positive");

  const double wsum = w.sum();
  const double ybar = w.dot(y) / wsum;
  const Eigen::RowVectorXd xbar = (w.transpose() * X) / wsum;
  const Eigen::VectorXd sw = w.array().sqrt();

  Eigen::MatrixXd A(L + (lambda > 0.0 ? M : 0), M);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(A.rows());
  A.topRows(L) = sw.asDiagonal() * (X.rowwise() - xbar);
  b.head(L) = sw.array() * (y.array() - ybar);
  if (lambda > 0.0) A.bottomRows(M) = std::sqrt(lambda) * D;

  RegressionFit fit;
  fit.beta = nnls(A, b);
  // Exact weighted-mean normal equation for the intercept.
  fit.beta0 = w.dot(y - X * fit.beta) / wsum;
  fit.objective = penalized_objective(y, X, w, D, lambda, fit.beta0, fit.beta);
  for (Eigen::Index j = 0; j < M; ++j) {
    if (fit.beta(j) > 0.0) fit.active_set.push_back(static_cast<std::size_t>(j));
  }
  return fit;
}

}  // namespace balcast
