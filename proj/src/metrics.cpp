#include "regbench/metrics.hpp"

#include <cmath>

#include "regbench/errors.hpp"

namespace regbench {

SupportScores support_metrics(const Eigen::VectorXd& beta_true,
                              const LinearModel& model) {
  if (beta_true.size() != model.coefs.size())
    throw ConfigError("true and fitted coefficient lengths differ");

  const std::vector<int> sel = model.selected();
  long true_count = 0, hit = 0;
  std::vector<char> is_true(static_cast<std::size_t>(beta_true.size()), 0);
  for (Eigen::Index j = 0; j < beta_true.size(); ++j) {
    if (beta_true(j) != 0.0) {
      is_true[static_cast<std::size_t>(j)] = 1;
      ++true_count;
    }
  }
  for (int j : sel) hit += is_true[static_cast<std::size_t>(j)];

  SupportScores s;
  s.selected_count = static_cast<long>(sel.size());
  s.precision = sel.empty() ? (true_count == 0 ? 1.0 : 0.0)
                            : static_cast<double>(hit) / static_cast<double>(sel.size());
  s.recall = true_count == 0 ? (sel.empty() ? 1.0 : 0.0)
                             : static_cast<double>(hit) / static_cast<double>(true_count);
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

double relative_l2(const Eigen::VectorXd& beta_true,
                   const Eigen::VectorXd& beta_hat) {
  if (beta_true.size() != beta_hat.size())
    throw ConfigError("coefficient lengths differ");
  const double nrm = beta_true.norm();
  if (!(nrm > 0.0))
    throw ConfigError("relative L2 undefined for a zero-norm truth");
  return (beta_hat - beta_true).norm() / nrm;
}

double rmse(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
  if (y_true.size() != y_pred.size()) throw ConfigError("rmse lengths differ");
  if (y_true.size() == 0) throw ConfigError("rmse of an empty vector");
  return std::sqrt((y_true - y_pred).squaredNorm() /
                   static_cast<double>(y_true.size()));
}

}  // namespace regbench
