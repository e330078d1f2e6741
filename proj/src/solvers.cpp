#include "regbench/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "regbench/errors.hpp"

namespace regbench {

namespace {

struct CenteredData {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  Eigen::RowVectorXd x_mean;
  double y_mean = 0.0;
};

CenteredData center(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    bool fit_intercept) {
  CenteredData c;
  if (fit_intercept) {
    c.x_mean = x.colwise().mean();
    c.y_mean = y.mean();
    c.x = x.rowwise() - c.x_mean;
    c.y = y.array() - c.y_mean;
  } else {
    c.x_mean = Eigen::RowVectorXd::Zero(x.cols());
    c.x = x;
    c.y = y;
  }
  return c;
}

LinearModel assemble(const CenteredData& c, Eigen::VectorXd w, Method method) {
  LinearModel m;
  m.intercept = c.y_mean - c.x_mean * w;
  m.coefs = std::move(w);
  m.method = method;
  return m;
}

void check_dims(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw ConfigError("x rows and y length differ");
  if (x.rows() < 1 || x.cols() < 1) throw ConfigError("empty design matrix");
}

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

// Minimum-norm least squares on already-centered data.
Eigen::VectorXd solve_min_norm(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(x);
  return cod.solve(y);
}

Eigen::VectorXd solve_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                            double alpha) {
  if (alpha == 0.0) return solve_min_norm(x, y);
  Eigen::MatrixXd gram = x.transpose() * x;
  gram.diagonal().array() += alpha;
  return gram.ldlt().solve(x.transpose() * y);
}

double kkt_violation(const Eigen::MatrixXd& x, const Eigen::VectorXd& r,
                     const Eigen::VectorXd& w, double l1, double l2) {
  const double n = static_cast<double>(x.rows());
  double worst = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double g = x.col(j).dot(r) / n;
    double viol;
    if (w(j) == 0.0) {
      viol = std::max(0.0, std::abs(g) - l1);
    } else {
      const double sgn = w(j) > 0.0 ? 1.0 : -1.0;
      viol = std::abs(g - l1 * sgn - l2 * w(j));
    }
    worst = std::max(worst, viol);
  }
  return worst;
}

// Cyclic coordinate descent for (1/2n)||y - Xw||^2 + l1 ||w||_1 + l2/2 ||w||^2
// on centered data.  Sweeps until the max coefficient change drops below the
// relative tolerance.  Every so often, and again after the loop, it snaps to
// the stationary point of the current face (support and signs fixed make
// stationarity linear), accepting the snap only when both the objective and
// the full KKT residual improve.  The snap makes independent runs that find
// the same face agree to solver precision and rescues the slow crawl along
// flat valleys that exactly collinear columns produce under an l1 penalty.
Eigen::VectorXd coordinate_descent(const Eigen::MatrixXd& x,
                                   const Eigen::VectorXd& y, double l1, double l2,
                                   const FitOptions& opts) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  const double dn = static_cast<double>(n);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  if (opts.warm_start) {
    if (opts.warm_start->size() != p)
      throw ConfigError("warm start length does not match feature count");
    w = *opts.warm_start;
  }
  Eigen::VectorXd r = y - x * w;

  Eigen::VectorXd col_sq(p);
  for (Eigen::Index j = 0; j < p; ++j) col_sq(j) = x.col(j).squaredNorm() / dn;
  const Eigen::VectorXd denom = col_sq.array() + l2;

  long sweeps = 0;

  auto record_objective = [&]() {
    if (!opts.objective_trace) return;
    const double obj = r.squaredNorm() / (2.0 * dn) + l1 * w.lpNorm<1>() +
                       0.5 * l2 * w.squaredNorm();
    opts.objective_trace->push_back(obj);
  };

  auto sweep = [&](const std::vector<Eigen::Index>& coords) {
    double max_change = 0.0;
    for (Eigen::Index j : coords) {
      if (denom(j) <= 0.0) {
        if (w(j) != 0.0) {
          r += x.col(j) * w(j);
          max_change = std::max(max_change, std::abs(w(j)));
          w(j) = 0.0;
        }
        continue;
      }
      const double c = x.col(j).dot(r) / dn + col_sq(j) * w(j);
      const double wj = soft_threshold(c, l1) / denom(j);
      if (wj != w(j)) {
        r += x.col(j) * (w(j) - wj);
        max_change = std::max(max_change, std::abs(wj - w(j)));
        w(j) = wj;
      }
    }
    ++sweeps;
    record_objective();
    return max_change;
  };

  auto fail = [&]() -> ConvergenceError {
    r = y - x * w;
    const double kkt = kkt_violation(x, r, w, l1, l2);
    if (opts.stats) {
      opts.stats->sweeps = sweeps;
      opts.stats->kkt_residual = kkt;
    }
    return ConvergenceError("coordinate descent hit the sweep cap (" +
                                std::to_string(opts.max_sweeps) +
                                "); KKT residual " + std::to_string(kkt),
                            kkt);
  };

  auto objective_at = [&](const Eigen::VectorXd& coef,
                          const Eigen::VectorXd& resid) {
    return resid.squaredNorm() / (2.0 * dn) + l1 * coef.lpNorm<1>() +
           0.5 * l2 * coef.squaredNorm();
  };

  // Solve the stationarity system restricted to the current support with the
  // penalty signs frozen, retrying with small diagonal damping when the
  // reduced Gram matrix is singular.  A coefficient whose solved value flips
  // sign is pinned to zero and dropped from the trial support before
  // re-solving; collinear columns put the face minimizer on such a boundary,
  // which cyclic updates only crawl toward.  The final candidate is adopted
  // when it lowers both the objective and the full KKT residual, so a failed
  // snap leaves the sweep state untouched.
  auto face_snap = [&]() {
    r = y - x * w;
    std::vector<Eigen::Index> support;
    for (Eigen::Index j = 0; j < p; ++j)
      if (w(j) != 0.0) support.push_back(j);
    if (support.empty()) return false;
    const double obj_now = objective_at(w, r);
    const double kkt_now = kkt_violation(x, r, w, l1, l2);
    for (double damp : {0.0, 1e-10, 1e-6}) {
      std::vector<Eigen::Index> trial = support;
      Eigen::VectorXd wa;
      bool consistent = true;
      while (!trial.empty()) {
        const auto a = static_cast<Eigen::Index>(trial.size());
        Eigen::MatrixXd xa(n, a);
        Eigen::VectorXd sign_a(a);
        for (Eigen::Index k = 0; k < a; ++k) {
          const Eigen::Index j = trial[static_cast<std::size_t>(k)];
          xa.col(k) = x.col(j);
          sign_a(k) = w(j) > 0.0 ? 1.0 : -1.0;
        }
        Eigen::MatrixXd gram = xa.transpose() * xa / dn;
        gram.diagonal().array() += l2 + damp * gram.diagonal().mean();
        wa = gram.ldlt().solve(xa.transpose() * y / dn - l1 * sign_a);
        consistent = wa.allFinite();
        if (!consistent) break;
        Eigen::Index worst = -1;
        double worst_value = 0.0;
        for (Eigen::Index k = 0; k < a; ++k) {
          const double signed_value = wa(k) * sign_a(k);
          if (signed_value <= 0.0 && signed_value <= worst_value) {
            worst = k;
            worst_value = signed_value;
          }
        }
        if (worst < 0) break;
        trial.erase(trial.begin() + worst);
      }
      if (!consistent) continue;
      Eigen::VectorXd w_face = Eigen::VectorXd::Zero(p);
      for (std::size_t k = 0; k < trial.size(); ++k)
        w_face(trial[k]) = wa(static_cast<Eigen::Index>(k));
      const Eigen::VectorXd r_face = y - x * w_face;
      if (objective_at(w_face, r_face) > obj_now) continue;
      if (kkt_violation(x, r_face, w_face, l1, l2) > kkt_now) continue;
      w = w_face;
      r = r_face;
      record_objective();
      return true;
    }
    return false;
  };

  // Accelerator for designs whose near-dependent columns make cyclic sweeps
  // crawl: proximal-gradient bursts on the gram matrix cost O(p^2) per
  // iteration and converge at a square-root-of-condition-number rate.  The
  // gram, correlation vector and Lipschitz constant are built on first use;
  // the burst result is adopted only when the exact objective improves.
  bool accel_ready = false;
  Eigen::MatrixXd gram_full;
  Eigen::VectorXd corr_full;
  double lip = 0.0;
  double y_const = 0.0;
  const int burst_iters = 2000;

  auto fista_burst = [&]() {
    if (!accel_ready) {
      gram_full = x.transpose() * x / dn;
      corr_full = x.transpose() * y / dn;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_full);
      lip = es.eigenvalues().maxCoeff() + l2;
      y_const = y.squaredNorm() / (2.0 * dn);
      accel_ready = true;
    }
    if (lip <= 0.0) return;
    auto gram_obj = [&](const Eigen::VectorXd& u) {
      return 0.5 * u.dot(gram_full * u) - corr_full.dot(u) + y_const +
             l1 * u.lpNorm<1>() + 0.5 * l2 * u.squaredNorm();
    };
    Eigen::VectorXd z = w;
    Eigen::VectorXd v = w;
    double t = 1.0;
    double best = gram_obj(w);
    const double start_obj = best;
    for (int it = 0; it < burst_iters; ++it) {
      const Eigen::VectorXd grad = gram_full * v - corr_full + l2 * v;
      Eigen::VectorXd z_next(p);
      for (Eigen::Index j = 0; j < p; ++j)
        z_next(j) = soft_threshold(v(j) - grad(j) / lip, l1 / lip);
      const double obj_next = gram_obj(z_next);
      if (obj_next > best) {
        v = z;
        t = 1.0;
        continue;
      }
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      v = z_next + ((t - 1.0) / t_next) * (z_next - z);
      z = z_next;
      t = t_next;
      best = obj_next;
    }
    if (best >= start_obj) return;
    r = y - x * w;
    const Eigen::VectorXd r_burst = y - x * z;
    if (objective_at(z, r_burst) >= objective_at(w, r)) return;
    w = z;
    r = r_burst;
    record_objective();
  };

  std::vector<Eigen::Index> all(static_cast<std::size_t>(p));
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  const long snap_period = 50;

  for (;;) {
    if (sweeps >= opts.max_sweeps) throw fail();
    const double change = sweep(all);
    const double scale = std::max(1.0, w.lpNorm<Eigen::Infinity>());
    if (change <= opts.tol * scale) break;
    if (sweeps % snap_period == 0) {
      fista_burst();
      face_snap();
    }
  }
  face_snap();

  if (opts.stats) {
    opts.stats->sweeps = sweeps;
    opts.stats->kkt_residual = kkt_violation(x, r, w, l1, l2);
  }
  return w;
}

}  // namespace

Method method_from_name(const std::string& name) {
  if (name == "ols") return Method::OLS;
  if (name == "ridge") return Method::Ridge;
  if (name == "lasso") return Method::Lasso;
  if (name == "elasticnet") return Method::ElasticNet;
  if (name == "postlasso") return Method::PostLassoOLS;
  throw ConfigError("unknown method '" + name + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::OLS: return "ols";
    case Method::Ridge: return "ridge";
    case Method::Lasso: return "lasso";
    case Method::ElasticNet: return "elasticnet";
    case Method::PostLassoOLS: return "postlasso";
  }
  throw ConfigError("unknown method enum value");
}

Eigen::VectorXd LinearModel::predict(const Eigen::MatrixXd& x) const {
  return (x * coefs).array() + intercept;
}

std::vector<int> LinearModel::selected() const {
  std::vector<int> out;
  const bool dense = method == Method::OLS || method == Method::Ridge;
  for (Eigen::Index j = 0; j < coefs.size(); ++j)
    if (dense || coefs(j) != 0.0) out.push_back(static_cast<int>(j));
  return out;
}

LinearModel fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const FitOptions& opts) {
  check_dims(x, y);
  const CenteredData c = center(x, y, opts.fit_intercept);
  Eigen::VectorXd w = solve_min_norm(c.x, c.y);
  if (opts.stats) {
    opts.stats->sweeps = 1;
    opts.stats->kkt_residual =
        (2.0 * c.x.transpose() * (c.x * w - c.y)).lpNorm<Eigen::Infinity>();
  }
  return assemble(c, std::move(w), Method::OLS);
}

LinearModel fit_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      double alpha, const FitOptions& opts) {
  check_dims(x, y);
  if (alpha < 0.0) throw ConfigError("ridge alpha must be >= 0");
  const CenteredData c = center(x, y, opts.fit_intercept);
  Eigen::VectorXd w = solve_ridge(c.x, c.y, alpha);
  if (opts.stats) {
    opts.stats->sweeps = 1;
    opts.stats->kkt_residual =
        (2.0 * c.x.transpose() * (c.x * w - c.y) + 2.0 * alpha * w)
            .lpNorm<Eigen::Infinity>();
  }
  return assemble(c, std::move(w), Method::Ridge);
}

LinearModel fit_lasso(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      double alpha, const FitOptions& opts) {
  check_dims(x, y);
  if (!(alpha > 0.0)) throw ConfigError("lasso alpha must be > 0");
  const CenteredData c = center(x, y, opts.fit_intercept);
  Eigen::VectorXd w = coordinate_descent(c.x, c.y, alpha, 0.0, opts);
  return assemble(c, std::move(w), Method::Lasso);
}

LinearModel fit_elasticnet(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           double alpha, double l1_ratio, const FitOptions& opts) {
  check_dims(x, y);
  if (!(alpha > 0.0)) throw ConfigError("elastic net alpha must be > 0");
  if (l1_ratio < 0.0 || l1_ratio > 1.0)
    throw ConfigError("l1_ratio must lie in [0, 1]");
  const CenteredData c = center(x, y, opts.fit_intercept);
  Eigen::VectorXd w;
  if (l1_ratio == 0.0) {
    // Pure-ridge corner: same minimizer as the unnormalized ridge objective
    // at alpha * n, so reuse the closed form.
    w = solve_ridge(c.x, c.y, alpha * static_cast<double>(x.rows()));
    if (opts.stats) {
      opts.stats->sweeps = 1;
      opts.stats->kkt_residual = kkt_violation(c.x, c.y - c.x * w, w, 0.0, alpha);
    }
  } else {
    w = coordinate_descent(c.x, c.y, alpha * l1_ratio, alpha * (1.0 - l1_ratio),
                           opts);
  }
  return assemble(c, std::move(w), Method::ElasticNet);
}

AlphaBounds compute_alpha_max(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                              double eps) {
  check_dims(x, y);
  if (!(eps > 0.0) || eps >= 1.0) throw ConfigError("eps must lie in (0, 1)");
  if (x.cwiseAbs().maxCoeff() == 0.0)
    throw ConfigError("alpha_max undefined for an all-zero design");
  AlphaBounds b;
  // Per-column dot then divide, matching the coordinate descent update
  // exactly, so a fit at alpha_max zeroes every coefficient by construction
  // instead of up to a rounding ulp.
  const double dn = static_cast<double>(x.rows());
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    b.alpha_max = std::max(b.alpha_max, std::abs(x.col(j).dot(y)) / dn);
  b.alpha_min = b.alpha_max * eps;
  b.degenerate = b.alpha_max == 0.0;
  return b;
}

int folds_for_sample_size(long n) {
  if (n <= 100) return 5;
  if (n <= 1000) return 4;
  if (n <= 10000) return 3;
  return 2;
}

std::vector<double> CvPlan::default_alpha_grid() {
  return {1e-3, 1e-2, 1e-1, 1e0, 1e1, 1e2, 1e3, 1e4, 1e5};
}

std::vector<double> CvPlan::default_l1_grid() {
  return {0.0, 0.1, 0.5, 0.7, 0.9, 0.95, 0.99, 1.0};
}

CvPlan CvPlan::standard(long n_train) {
  CvPlan plan;
  plan.alpha_grid = default_alpha_grid();
  plan.l1_grid = default_l1_grid();
  plan.folds = folds_for_sample_size(n_train);
  return plan;
}

void CvPlan::validate(Method method) const {
  if (folds < 2) throw ConfigError("cv plan needs at least 2 folds");
  if (alpha_grid.empty()) throw ConfigError("cv plan alpha grid is empty");
  for (double a : alpha_grid)
    if (!(a > 0.0)) throw ConfigError("cv plan alpha grid must be positive");
  if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end()))
    throw ConfigError("cv plan alpha grid must be ascending");
  if (method == Method::ElasticNet) {
    if (l1_grid.empty()) throw ConfigError("elastic net cv needs an l1 grid");
    for (double r : l1_grid)
      if (r < 0.0 || r > 1.0) throw ConfigError("l1 grid entries must lie in [0, 1]");
    if (!std::is_sorted(l1_grid.begin(), l1_grid.end()))
      throw ConfigError("cv plan l1 grid must be ascending");
  }
}

namespace {

struct FoldSplit {
  Eigen::MatrixXd x_train, x_val;
  Eigen::VectorXd y_train, y_val;
};

std::vector<FoldSplit> make_folds(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                  int folds, Rng& rng) {
  const Eigen::Index n = x.rows();
  if (n / folds < 2) throw ConfigError("cv fold would hold fewer than 2 rows");

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<FoldSplit> out(static_cast<std::size_t>(folds));
  const Eigen::Index base = n / folds;
  const Eigen::Index extra = n % folds;
  Eigen::Index start = 0;
  for (int k = 0; k < folds; ++k) {
    const Eigen::Index size = base + (k < extra ? 1 : 0);
    FoldSplit& f = out[static_cast<std::size_t>(k)];
    f.x_val.resize(size, x.cols());
    f.y_val.resize(size);
    f.x_train.resize(n - size, x.cols());
    f.y_train.resize(n - size);
    Eigen::Index ti = 0, vi = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index row = perm[static_cast<std::size_t>(i)];
      if (i >= start && i < start + size) {
        f.x_val.row(vi) = x.row(row);
        f.y_val(vi++) = y(row);
      } else {
        f.x_train.row(ti) = x.row(row);
        f.y_train(ti++) = y(row);
      }
    }
    start += size;
  }
  return out;
}

double validation_mse(const Eigen::MatrixXd& x_val, const Eigen::VectorXd& y_val,
                      const Eigen::VectorXd& w, double intercept) {
  const Eigen::VectorXd pred = (x_val * w).array() + intercept;
  return (y_val - pred).squaredNorm() / static_cast<double>(y_val.size());
}

}  // namespace

FitReport cross_validate(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         Method method, const CvPlan& plan, Rng& rng) {
  const auto t0 = std::chrono::steady_clock::now();
  check_dims(x, y);
  if (method != Method::Ridge && method != Method::Lasso &&
      method != Method::ElasticNet)
    throw ConfigError("cross_validate handles ridge, lasso, and elasticnet");
  plan.validate(method);

  const bool has_l1_axis = method == Method::ElasticNet;
  const std::vector<double> l1_grid = has_l1_axis ? plan.l1_grid
                                                  : std::vector<double>{-1.0};

  FitReport report;
  report.folds = plan.folds;
  for (double rho : l1_grid)
    for (double alpha : plan.alpha_grid)
      report.cv_mse.push_back({alpha, rho, 0.0});

  // Descending-alpha visit order for warm starts.
  std::vector<std::size_t> alpha_desc(plan.alpha_grid.size());
  std::iota(alpha_desc.begin(), alpha_desc.end(), std::size_t{0});
  std::reverse(alpha_desc.begin(), alpha_desc.end());

  const std::vector<FoldSplit> folds = make_folds(x, y, plan.folds, rng);
  for (const FoldSplit& fold : folds) {
    const CenteredData c = center(fold.x_train, fold.y_train, true);
    if (method == Method::Ridge) {
      const Eigen::MatrixXd gram = c.x.transpose() * c.x;
      const Eigen::VectorXd xty = c.x.transpose() * c.y;
      for (std::size_t ai = 0; ai < plan.alpha_grid.size(); ++ai) {
        Eigen::MatrixXd g = gram;
        g.diagonal().array() += plan.alpha_grid[ai];
        const Eigen::VectorXd w = g.ldlt().solve(xty);
        const double b = c.y_mean - c.x_mean * w;
        report.cv_mse[ai].mean_mse += validation_mse(fold.x_val, fold.y_val, w, b);
        ++report.cv_fits;
      }
    } else {
      for (std::size_t ri = 0; ri < l1_grid.size(); ++ri) {
        Eigen::VectorXd warm;
        bool have_warm = false;
        for (std::size_t ai : alpha_desc) {
          const double alpha = plan.alpha_grid[ai];
          const double rho = l1_grid[ri];
          Eigen::VectorXd w;
          if (has_l1_axis && rho == 0.0) {
            w = solve_ridge(c.x, c.y, alpha * static_cast<double>(c.x.rows()));
          } else {
            FitOptions fo;
            fo.warm_start = have_warm ? &warm : nullptr;
            const double l1 = has_l1_axis ? alpha * rho : alpha;
            const double l2 = has_l1_axis ? alpha * (1.0 - rho) : 0.0;
            w = coordinate_descent(c.x, c.y, l1, l2, fo);
          }
          warm = w;
          have_warm = true;
          const double b = c.y_mean - c.x_mean * w;
          report.cv_mse[ri * plan.alpha_grid.size() + ai].mean_mse +=
              validation_mse(fold.x_val, fold.y_val, w, b);
          ++report.cv_fits;
        }
      }
    }
  }
  for (CvCell& cell : report.cv_mse) cell.mean_mse /= plan.folds;

  // Elect the minimum; ties prefer the larger alpha, then the larger ratio.
  const CvCell* best = &report.cv_mse.front();
  for (const CvCell& cell : report.cv_mse) {
    if (cell.mean_mse < best->mean_mse ||
        (cell.mean_mse == best->mean_mse &&
         (cell.alpha > best->alpha ||
          (cell.alpha == best->alpha && cell.l1_ratio > best->l1_ratio))))
      best = &cell;
  }
  report.elected_alpha = best->alpha;
  if (has_l1_axis) report.elected_l1_ratio = best->l1_ratio;
  report.saturated = best->alpha == plan.alpha_grid.back();

  CdStats stats;
  FitOptions final_opts;
  final_opts.stats = &stats;
  switch (method) {
    case Method::Ridge:
      report.model = fit_ridge(x, y, report.elected_alpha, final_opts);
      break;
    case Method::Lasso:
      report.model = fit_lasso(x, y, report.elected_alpha, final_opts);
      break;
    default:
      report.model = fit_elasticnet(x, y, report.elected_alpha,
                                    *report.elected_l1_ratio, final_opts);
      break;
  }
  report.iterations = stats.sweeps;

  const CenteredData full = center(x, y, true);
  report.alpha_max = compute_alpha_max(full.x, full.y).alpha_max;
  report.fit_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

FitReport fit_post_lasso(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const CvPlan& plan, Rng& rng) {
  const auto t0 = std::chrono::steady_clock::now();
  FitReport report = cross_validate(x, y, Method::Lasso, plan, rng);

  const std::vector<int> support = report.model.selected();
  LinearModel refit;
  refit.method = Method::PostLassoOLS;
  refit.coefs = Eigen::VectorXd::Zero(x.cols());
  if (support.empty()) {
    refit.intercept = y.mean();
  } else {
    Eigen::MatrixXd xs(x.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k)
      xs.col(static_cast<Eigen::Index>(k)) = x.col(support[k]);
    const LinearModel ols = fit_ols(xs, y);
    refit.intercept = ols.intercept;
    for (std::size_t k = 0; k < support.size(); ++k)
      refit.coefs(support[k]) = ols.coefs(static_cast<Eigen::Index>(k));
  }
  report.model = std::move(refit);
  report.fit_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace regbench
