#pragma once

#include <Eigen/Dense>
#include <vector>

#include "regbench/rng.hpp"
#include "regbench/solvers.hpp"
#include "regbench/spacegen.hpp"

namespace regbench {

struct StabilityConfig {
  std::vector<double> lambda_grid = CvPlan::default_alpha_grid();
  double threshold = 0.6;  // pi_thr; grid and defaults are workbench choices,
  int iterations = 50;     // not tuned guarantees
};

struct StabilityResult {
  Eigen::MatrixXd selection_probs;  // p x |grid|, column order = grid order
  std::vector<int> stable_set;      // max over the grid >= threshold
};

// Subsample half the rows without replacement, fit the Lasso per lambda, and
// count how often each feature enters; features whose peak frequency clears
// the threshold form the stable set.
StabilityResult stability_select(const Eigen::MatrixXd& x,
                                 const Eigen::VectorXd& y,
                                 const StabilityConfig& cfg, Rng& rng);

// Equicorrelated Gaussian model-X knockoffs for a known full-rank covariance:
// s = min(2 lambda_min(Sigma), 1), cov(x~) = Sigma, cov(x, x~) = Sigma - s I.
Eigen::MatrixXd construct_gaussian_knockoffs(const Eigen::MatrixXd& x,
                                             const CovarianceModel& cov,
                                             Rng& rng);

struct KnockoffResult {
  Eigen::VectorXd w_stats;    // |b_j| - |b_{j+p}|
  double tau = 0.0;           // +inf when no threshold satisfies the bound
  std::vector<int> selected;  // W_j >= tau
  double q = 0.0;
  bool saturated = false;     // augmented fit produced no nonzero coefficient
};

// Knockoff+ filter at target FDR q: one CV-elected Lasso on [X, X~], signed
// coefficient-difference statistics, and the smallest threshold t with
// (1 + #{W <= -t}) / #{W >= t} <= q.
KnockoffResult knockoff_filter(const Eigen::MatrixXd& x,
                               const Eigen::MatrixXd& x_knock,
                               const Eigen::VectorXd& y, double q,
                               const CvPlan& plan, Rng& rng);

}  // namespace regbench
