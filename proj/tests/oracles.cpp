#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace regbench::test {
namespace {

struct Centered {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  Eigen::RowVectorXd x_mean;
  double y_mean = 0.0;
};

Centered center(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Centered c;
  c.x_mean = x.colwise().mean();
  c.y_mean = y.mean();
  c.x = x.rowwise() - c.x_mean;
  c.y = y.array() - c.y_mean;
  return c;
}

double soft(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

}  // namespace

double elastic_net_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                             double intercept, const Eigen::VectorXd& w,
                             double alpha, double l1_ratio) {
  const double n = static_cast<double>(x.rows());
  const Eigen::VectorXd r =
      y - (x * w).eval() - Eigen::VectorXd::Constant(x.rows(), intercept);
  return r.squaredNorm() / (2.0 * n) + alpha * l1_ratio * w.lpNorm<1>() +
         0.5 * alpha * (1.0 - l1_ratio) * w.squaredNorm();
}

double ridge_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       double intercept, const Eigen::VectorXd& w,
                       double alpha) {
  const Eigen::VectorXd r =
      y - (x * w).eval() - Eigen::VectorXd::Constant(x.rows(), intercept);
  return r.squaredNorm() + alpha * w.squaredNorm();
}

OracleFit fista_elastic_net(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                            double alpha, double l1_ratio, int max_iter,
                            double tol) {
  const Centered c = center(x, y);
  const auto n = static_cast<double>(x.rows());
  const auto p = x.cols();
  const double l2 = alpha * (1.0 - l1_ratio);
  const double l1 = alpha * l1_ratio;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c.x);
  const double smax = svd.singularValues().size() > 0
                          ? svd.singularValues()(0)
                          : 0.0;
  const double lip = smax * smax / n + l2;
  if (lip <= 0.0) {
    OracleFit flat;
    flat.coefs = Eigen::VectorXd::Zero(p);
    flat.intercept = c.y_mean;
    flat.objective = elastic_net_objective(x, y, flat.intercept, flat.coefs,
                                           alpha, l1_ratio);
    return flat;
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd z = w;
  double t = 1.0;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const Eigen::VectorXd grad = c.x.transpose() * (c.x * z - c.y) / n + l2 * z;
    Eigen::VectorXd w_next(p);
    for (Eigen::Index j = 0; j < p; ++j) {
      w_next(j) = soft(z(j) - grad(j) / lip, l1 / lip);
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double change = (w_next - w).cwiseAbs().maxCoeff();
    z = w_next + ((t - 1.0) / t_next) * (w_next - w);
    w = w_next;
    t = t_next;
    if (change < tol) break;
  }

  OracleFit fit;
  fit.coefs = w;
  fit.intercept = c.y_mean - c.x_mean * w;
  fit.objective = elastic_net_objective(x, y, fit.intercept, w, alpha, l1_ratio);
  fit.iterations = iter;
  return fit;
}

OracleFit ridge_gradient_descent(const Eigen::MatrixXd& x,
                                 const Eigen::VectorXd& y, double alpha,
                                 int max_iter, double tol) {
  const Centered c = center(x, y);
  const auto p = x.cols();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c.x);
  const double smax = svd.singularValues().size() > 0
                          ? svd.singularValues()(0)
                          : 0.0;
  const double lip = 2.0 * (smax * smax + alpha);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  if (lip > 0.0) {
    int iter = 0;
    for (; iter < max_iter; ++iter) {
      const Eigen::VectorXd grad =
          2.0 * (c.x.transpose() * (c.x * w - c.y)) + 2.0 * alpha * w;
      const Eigen::VectorXd w_next = w - grad / lip;
      const double change = (w_next - w).cwiseAbs().maxCoeff();
      w = w_next;
      if (change < tol) break;
    }
  }

  OracleFit fit;
  fit.coefs = w;
  fit.intercept = c.y_mean - c.x_mean * w;
  fit.objective = ridge_objective(x, y, fit.intercept, w, alpha);
  return fit;
}

OracleFit pinv_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Centered c = center(x, y);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(c.x,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cut = s.size() > 0 ? 1e-12 * s(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) inv(i) = 1.0 / s(i);
  }
  OracleFit fit;
  fit.coefs = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose() * c.y;
  fit.intercept = c.y_mean - c.x_mean * fit.coefs;
  fit.objective = (c.y - c.x * fit.coefs).squaredNorm();
  return fit;
}

double omega_squared_literal(const std::vector<double>& values,
                             const std::vector<std::string>& groups) {
  if (values.size() != groups.size() || values.empty()) {
    throw std::invalid_argument("omega_squared_literal: bad inputs");
  }
  std::map<std::string, std::vector<double>> by_group;
  for (std::size_t i = 0; i < values.size(); ++i) {
    by_group[groups[i]].push_back(values[i]);
  }
  const double n_total = static_cast<double>(values.size());
  double grand = 0.0;
  for (double v : values) grand += v;
  grand /= n_total;

  double ss_between = 0.0;
  double ss_within = 0.0;
  for (const auto& [name, vec] : by_group) {
    double mean = 0.0;
    for (double v : vec) mean += v;
    mean /= static_cast<double>(vec.size());
    ss_between += static_cast<double>(vec.size()) * (mean - grand) * (mean - grand);
    for (double v : vec) ss_within += (v - mean) * (v - mean);
  }
  const double df_between = static_cast<double>(by_group.size()) - 1.0;
  const double df_within = n_total - static_cast<double>(by_group.size());
  const double ms_error = df_within > 0.0 ? ss_within / df_within : 0.0;
  const double ss_total = ss_between + ss_within;
  const double denom = ss_total + ms_error;
  if (denom == 0.0) return 0.0;
  return (ss_between - df_between * ms_error) / denom;
}

TwoWayOracle two_way_literal(const std::vector<double>& values,
                             const std::vector<std::string>& factor_a,
                             const std::vector<std::string>& factor_b) {
  if (values.size() != factor_a.size() || values.size() != factor_b.size()) {
    throw std::invalid_argument("two_way_literal: bad inputs");
  }
  std::map<std::pair<std::string, std::string>, std::vector<double>> cells;
  std::map<std::string, std::vector<double>> rows;
  std::map<std::string, std::vector<double>> cols;
  for (std::size_t i = 0; i < values.size(); ++i) {
    cells[{factor_a[i], factor_b[i]}].push_back(values[i]);
    rows[factor_a[i]].push_back(values[i]);
    cols[factor_b[i]].push_back(values[i]);
  }
  auto mean_of = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
  };
  const double a = static_cast<double>(rows.size());
  const double b = static_cast<double>(cols.size());
  const double r = static_cast<double>(cells.begin()->second.size());
  double grand = 0.0;
  for (double v : values) grand += v;
  grand /= static_cast<double>(values.size());

  double ss_a = 0.0;
  for (const auto& [k, v] : rows) {
    ss_a += b * r * (mean_of(v) - grand) * (mean_of(v) - grand);
  }
  double ss_b = 0.0;
  for (const auto& [k, v] : cols) {
    ss_b += a * r * (mean_of(v) - grand) * (mean_of(v) - grand);
  }
  double ss_ab = 0.0;
  double ss_err = 0.0;
  for (const auto& [key, v] : cells) {
    const double cell_mean = mean_of(v);
    const double dev =
        cell_mean - mean_of(rows[key.first]) - mean_of(cols[key.second]) + grand;
    ss_ab += r * dev * dev;
    for (double x : v) ss_err += (x - cell_mean) * (x - cell_mean);
  }
  const double df_ab = (a - 1.0) * (b - 1.0);
  const double df_err = a * b * (r - 1.0);
  TwoWayOracle out;
  const double ss_total = ss_a + ss_b + ss_ab + ss_err;
  out.eta2_interaction = ss_total > 0.0 ? ss_ab / ss_total : 0.0;
  if (ss_err > 0.0 && df_err > 0.0) {
    out.f_interaction = (ss_ab / df_ab) / (ss_err / df_err);
  } else {
    out.f_interaction = std::numeric_limits<double>::infinity();
  }
  return out;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0;
  std::size_t ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] <= b[ib]) {
      ++ia;
    } else {
      ++ib;
    }
    d = std::max(d, std::abs(static_cast<double>(ia) / na -
                             static_cast<double>(ib) / nb));
  }
  return d;
}

}  // namespace regbench::test
