#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace balcast {

/// Lawson-Hanson active-set solution of min ||A x - b||^2 subject to x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, std::size_t max_iterations = 0);

struct RegressionFit {
  double beta0 = 0.0;
  Eigen::VectorXd beta;
  double objective = 0.0;
  std::vector<std::size_t> active_set;
};

/// sum_l w_l (y_l - beta0 - X_l beta)^2 + lambda ||D beta||^2
double penalized_objective(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                           const Eigen::MatrixXd& D, double lambda, double beta0, const Eigen::VectorXd& beta);

/// Gradient of penalized_objective with respect to beta at (beta0, beta).
Eigen::VectorXd penalized_gradient(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                                   const Eigen::MatrixXd& D, double lambda, double beta0,
                                   const Eigen::VectorXd& beta);

/// Minimises the penalized objective over free beta0 and beta >= 0.
///
/// beta0 is profiled out by weighted centering; the remaining problem is NNLS on the stacked
/// system [sqrt(W) Xc; sqrt(lambda) D] beta ~ [sqrt(W) yc; 0]. Throws InvalidArgument on
/// non-finite input, non-positive weights, negative lambda or mismatched shapes.
RegressionFit fit_weighted_penalized_nnls(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                                          const Eigen::VectorXd& w, const Eigen::MatrixXd& D, double lambda);

}  // namespace balcast
