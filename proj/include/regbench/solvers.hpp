#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "regbench/rng.hpp"

namespace regbench {

enum class Method { OLS, Ridge, Lasso, ElasticNet, PostLassoOLS };

Method method_from_name(const std::string& name);
std::string method_name(Method m);

struct LinearModel {
  double intercept = 0.0;
  Eigen::VectorXd coefs;
  Method method = Method::OLS;

  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
  // Exact nonzeros for sparse methods; dense methods keep every feature.
  std::vector<int> selected() const;
};

struct CdStats {
  long sweeps = 0;
  double kkt_residual = 0.0;
};

struct FitOptions {
  bool fit_intercept = true;
  double tol = 1e-6;       // relative, on the max coefficient change per sweep
  long max_sweeps = 100000;
  const Eigen::VectorXd* warm_start = nullptr;
  CdStats* stats = nullptr;
  std::vector<double>* objective_trace = nullptr;  // per-sweep objective values
};

// Least squares; rank-deficient designs take the minimum-norm solution.
LinearModel fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const FitOptions& opts = {});

// Minimizes ||Xw - y||^2 + alpha ||w||^2 (no sample-size normalization),
// solved in closed form on centered data.
LinearModel fit_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      double alpha, const FitOptions& opts = {});

// Minimizes (1/2n)||Xw - y||^2 + alpha ||w||_1 by cyclic coordinate descent
// with exact soft-threshold updates.
LinearModel fit_lasso(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      double alpha, const FitOptions& opts = {});

// Minimizes (1/2n)||Xw - y||^2 + alpha ratio ||w||_1
//           + alpha (1 - ratio) / 2 ||w||^2.
// ratio = 0 dispatches to the closed-form ridge solve at alpha * n.
LinearModel fit_elasticnet(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           double alpha, double l1_ratio,
                           const FitOptions& opts = {});

struct AlphaBounds {
  double alpha_max = 0.0;
  double alpha_min = 0.0;
  bool degenerate = false;  // alpha_max == 0 (response orthogonal to design)
};

// alpha_max = (1/n) max_j |x_j . y|; alpha_min = eps * alpha_max.
// Expects X centered the same way the fitters center it.
AlphaBounds compute_alpha_max(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                              double eps = 1e-3);

// Fold schedule by sample size: 5 (n<=100), 4 (n<=1000), 3 (n<=10000), else 2.
int folds_for_sample_size(long n);

struct CvPlan {
  std::vector<double> alpha_grid;  // ascending
  std::vector<double> l1_grid;     // ascending; consulted by ElasticNet only
  int folds = 5;

  static std::vector<double> default_alpha_grid();  // 1e-3 .. 1e5, decades
  static std::vector<double> default_l1_grid();
  static CvPlan standard(long n_train);
  void validate(Method method) const;
};

struct CvCell {
  double alpha = 0.0;
  double l1_ratio = -1.0;  // -1 when the method has no l1 axis
  double mean_mse = 0.0;
};

struct FitReport {
  LinearModel model;
  double elected_alpha = 0.0;
  std::optional<double> elected_l1_ratio;
  double alpha_max = 0.0;
  bool saturated = false;  // elected alpha sits at the top of the grid
  std::vector<CvCell> cv_mse;
  long cv_fits = 0;
  int folds = 0;
  long iterations = 0;  // sweeps of the final refit (1 for closed forms)
  double fit_seconds = 0.0;
};

// K-fold CV over the plan's grid(s): seeded shuffle, contiguous-block folds,
// mean validation MSE per grid point, ties broken toward larger alpha then
// larger l1 ratio, refit on the full training data at the elected values.
FitReport cross_validate(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         Method method, const CvPlan& plan, Rng& rng);

// CV-elected Lasso followed by an OLS refit on the selected support.
// An empty support degrades to the intercept-only model.
FitReport fit_post_lasso(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const CvPlan& plan, Rng& rng);

}  // namespace regbench
