#pragma once

#include <Eigen/Dense>

#include "regbench/solvers.hpp"

namespace regbench {

struct SupportScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long selected_count = 0;
};

// Support recovery against the exact-zero pattern of the true coefficients.
// Empty selected and empty true support both score 1.0 by convention.
SupportScores support_metrics(const Eigen::VectorXd& beta_true,
                              const LinearModel& model);

// ||beta_hat - beta||_2 / ||beta||_2; a zero-norm truth is an error.
double relative_l2(const Eigen::VectorXd& beta_true,
                   const Eigen::VectorXd& beta_hat);

double rmse(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

struct MetricsRecord {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double rel_l2 = 0.0;
  double rmse_test = 0.0;
  long selected_count = 0;
};

}  // namespace regbench
