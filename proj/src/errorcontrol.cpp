#include "regbench/errorcontrol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "regbench/errors.hpp"

namespace regbench {

StabilityResult stability_select(const Eigen::MatrixXd& x,
                                 const Eigen::VectorXd& y,
                                 const StabilityConfig& cfg, Rng& rng) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (n != y.size()) throw ConfigError("x rows and y length differ");
  if (n < 4) throw ConfigError("stability selection needs at least 4 rows");
  if (cfg.lambda_grid.empty()) throw ConfigError("lambda grid is empty");
  for (double l : cfg.lambda_grid)
    if (!(l > 0.0)) throw ConfigError("lambda grid must be positive");
  if (cfg.iterations < 1) throw ConfigError("iteration count must be >= 1");
  if (!(cfg.threshold > 0.0) || cfg.threshold > 1.0)
    throw ConfigError("threshold must lie in (0, 1]");

  // Pre-drawn per-iteration seeds keep iterations independent of each other.
  std::vector<std::uint64_t> iter_seeds(static_cast<std::size_t>(cfg.iterations));
  for (auto& s : iter_seeds) s = rng();

  const Eigen::Index half = n / 2;
  const long grid = static_cast<long>(cfg.lambda_grid.size());
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(p, grid);

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int m = 0; m < cfg.iterations; ++m) {
    Rng iter_rng(iter_seeds[static_cast<std::size_t>(m)]);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), iter_rng);
    const std::vector<int> rows(order.begin(), order.begin() + half);
    const Eigen::MatrixXd xs = subset_rows(x, rows);
    const Eigen::VectorXd ys = subset_rows(y, rows);

    for (long li = 0; li < grid; ++li) {
      try {
        const LinearModel fit =
            fit_lasso(xs, ys, cfg.lambda_grid[static_cast<std::size_t>(li)]);
        for (Eigen::Index j = 0; j < p; ++j)
          if (fit.coefs(j) != 0.0) counts(j, li) += 1.0;
      } catch (const ConvergenceError& e) {
        throw ConvergenceError("stability iteration " + std::to_string(m) +
                                   ", lambda index " + std::to_string(li) +
                                   ": " + e.what(),
                               e.kkt_residual);
      }
    }
  }

  StabilityResult result;
  result.selection_probs = counts / static_cast<double>(cfg.iterations);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (result.selection_probs.row(j).maxCoeff() >= cfg.threshold)
      result.stable_set.push_back(static_cast<int>(j));
  }
  return result;
}

Eigen::MatrixXd construct_gaussian_knockoffs(const Eigen::MatrixXd& x,
                                             const CovarianceModel& cov,
                                             Rng& rng) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (cov.spectrum.lambdas.size() != p || cov.basis_q.cols() != p)
    throw ConfigError("covariance model does not match the design width");
  if (cov.spectrum.rank != static_cast<int>(p))
    throw ConfigError(
        "knockoffs unsupported: covariance is rank-deficient (rank " +
        std::to_string(cov.spectrum.rank) + " of " + std::to_string(p) + ")");

  const double lambda_min = cov.spectrum.lambdas(p - 1);
  const double s = std::min(2.0 * lambda_min, 1.0);

  // Sigma^{-1} through the eigenbasis; A = I - s Sigma^{-1} is symmetric.
  const Eigen::VectorXd inv_l = cov.spectrum.lambdas.cwiseInverse();
  const Eigen::MatrixXd sigma_inv =
      cov.basis_q * inv_l.asDiagonal() * cov.basis_q.transpose();
  const Eigen::MatrixXd a =
      Eigen::MatrixXd::Identity(p, p) - s * sigma_inv;
  // Conditional covariance 2sI - s^2 Sigma^{-1} = s (I + A).
  const Eigen::MatrixXd v = s * (Eigen::MatrixXd::Identity(p, p) + a);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v);
  if (es.info() != Eigen::Success)
    throw ConfigError("knockoff conditional covariance decomposition failed");
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd c =
      es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();

  Eigen::MatrixXd z(n, p);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = normal(rng);

  return x * a + z * c;
}

KnockoffResult knockoff_filter(const Eigen::MatrixXd& x,
                               const Eigen::MatrixXd& x_knock,
                               const Eigen::VectorXd& y, double q,
                               const CvPlan& plan, Rng& rng) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (x_knock.rows() != n || x_knock.cols() != p)
    throw ConfigError("knockoff matrix shape does not match the design");
  if (!(q > 0.0) || q >= 1.0) throw ConfigError("q must lie in (0, 1)");

  Eigen::MatrixXd aug(n, 2 * p);
  aug.leftCols(p) = x;
  aug.rightCols(p) = x_knock;
  const FitReport report = cross_validate(aug, y, Method::Lasso, plan, rng);
  const Eigen::VectorXd& b = report.model.coefs;

  KnockoffResult result;
  result.q = q;
  result.saturated = b.cwiseAbs().maxCoeff() == 0.0;
  result.w_stats.resize(p);
  for (Eigen::Index j = 0; j < p; ++j)
    result.w_stats(j) = std::abs(b(j)) - std::abs(b(j + p));

  std::set<double> candidates;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double a = std::abs(result.w_stats(j));
    if (a > 0.0) candidates.insert(a);
  }

  result.tau = std::numeric_limits<double>::infinity();
  for (double t : candidates) {  // ascending, first hit is the smallest
    long neg = 0, pos = 0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (result.w_stats(j) <= -t) ++neg;
      if (result.w_stats(j) >= t) ++pos;
    }
    if (pos == 0) continue;
    if (static_cast<double>(1 + neg) / static_cast<double>(pos) <= q) {
      result.tau = t;
      break;
    }
  }
  if (std::isfinite(result.tau)) {
    for (Eigen::Index j = 0; j < p; ++j)
      if (result.w_stats(j) >= result.tau)
        result.selected.push_back(static_cast<int>(j));
  }
  return result;
}

}  // namespace regbench
