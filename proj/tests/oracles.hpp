#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

// Independent reference implementations used only by tests. Each solves the
// same problem as the library through a different algorithm, so agreement is
// evidence of correctness rather than shared bugs.
namespace regbench::test {

struct OracleFit {
  double intercept = 0.0;
  Eigen::VectorXd coefs;
  double objective = 0.0;
  int iterations = 0;
};

// FISTA (accelerated proximal gradient) for
//   (1/2n)||Xw - y||^2 + alpha*rho*||w||_1 + (alpha*(1-rho)/2)*||w||^2
// with the intercept handled by centering.
OracleFit fista_elastic_net(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                            double alpha, double l1_ratio,
                            int max_iter = 200000, double tol = 1e-13);

// Plain gradient descent on ||Xw - y||^2 + alpha*||w||^2 (unnormalized
// residual term, matching the ridge objective).
OracleFit ridge_gradient_descent(const Eigen::MatrixXd& x,
                                 const Eigen::VectorXd& y, double alpha,
                                 int max_iter = 2000000, double tol = 1e-14);

// Minimum-norm least squares via SVD pseudoinverse.
OracleFit pinv_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

double elastic_net_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                             double intercept, const Eigen::VectorXd& w,
                             double alpha, double l1_ratio);

double ridge_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       double intercept, const Eigen::VectorXd& w, double alpha);

// One-way omega squared transcribed term by term from the defining formula.
double omega_squared_literal(const std::vector<double>& values,
                             const std::vector<std::string>& groups);

struct TwoWayOracle {
  double f_interaction = 0.0;
  double eta2_interaction = 0.0;
};

// Balanced two-way ANOVA interaction, literal sum-of-squares decomposition.
TwoWayOracle two_way_literal(const std::vector<double>& values,
                             const std::vector<std::string>& factor_a,
                             const std::vector<std::string>& factor_b);

// Two-sample Kolmogorov-Smirnov statistic (max CDF gap).
double ks_statistic(std::vector<double> a, std::vector<double> b);

}  // namespace regbench::test
