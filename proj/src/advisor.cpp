#include "regbench/advisor.hpp"

#include <cmath>
#include <limits>

#include "regbench/errors.hpp"

namespace regbench {

namespace {

constexpr double kLargeSampleRatio = 78.0;
constexpr double kKappaLow = 1e2;
constexpr double kKappaHigh = 1e4;
// "Around a hundred rows" band where the small-sample prediction exception
// was observed; the next tested size (1000) behaved like the default.
constexpr long kSmallSampleCutoff = 200;

const std::string kNeverLasso =
    "more features than rows: lasso selection is unstable here, keep to ridge "
    "or elastic net";
const std::string kRidgeNotSelector =
    "ridge keeps every feature (recall 1.0 by construction); treat this as "
    "ranking, not genuine selection";
const std::string kAlphaHeuristic =
    "the alpha-based signal bands are empirical heuristics, not sharp "
    "cutoffs; readings near a boundary deserve a second look";
const std::string kUntestedBand =
    "condition number falls in the interpolated band (1e2..1e4) that the "
    "benchmark never exercised; recommendation is extrapolated";
const std::string kRidgeBestF1SmallN =
    "with a saturated alpha at around a hundred rows, ridge posted the top F1 "
    "in the collinear band; elastic net stays the selection default";
const std::string kSparseModerateGap =
    "sparse-prior guidance at moderate signal is untested; elastic net is the "
    "safe default";
const std::string kLassoAlternative =
    "lasso is equally viable when a hard-sparse model is wanted";

}  // namespace

Objective objective_from_name(const std::string& name) {
  if (name == "prediction") return Objective::Prediction;
  if (name == "selection") return Objective::Selection;
  if (name == "estimation") return Objective::Estimation;
  throw ConfigError("unknown objective '" + name +
                    "' (expected prediction|selection|estimation)");
}

std::string objective_name(Objective o) {
  switch (o) {
    case Objective::Prediction: return "prediction";
    case Objective::Selection: return "selection";
    case Objective::Estimation: return "estimation";
  }
  return "prediction";
}

SparsityPrior prior_from_name(const std::string& name) {
  if (name == "sparse") return SparsityPrior::Sparse;
  if (name == "dense") return SparsityPrior::Dense;
  if (name == "unknown") return SparsityPrior::Unknown;
  throw ConfigError("unknown sparsity prior '" + name +
                    "' (expected sparse|dense|unknown)");
}

std::string prior_name(SparsityPrior p) {
  switch (p) {
    case SparsityPrior::Sparse: return "sparse";
    case SparsityPrior::Dense: return "dense";
    case SparsityPrior::Unknown: return "unknown";
  }
  return "unknown";
}

std::string snr_regime_name(SnrRegime r) {
  switch (r) {
    case SnrRegime::Low: return "low";
    case SnrRegime::Moderate: return "moderate";
    case SnrRegime::High: return "high";
  }
  return "moderate";
}

Diagnostics compute_diagnostics(const Eigen::MatrixXd& x,
                                const Eigen::VectorXd& y, const CvPlan& plan,
                                Rng& rng) {
  if (x.rows() != y.size()) throw ConfigError("x rows and y length differ");
  if (x.rows() < 5) throw ConfigError("diagnostics need at least 5 rows");

  Diagnostics d;
  d.n = static_cast<long>(x.rows());
  d.p = static_cast<long>(x.cols());
  d.n_over_p = static_cast<double>(d.n) / static_cast<double>(d.p);
  d.underdetermined = d.p > d.n;

  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (centered.col(j).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + std::abs(mean(j))))
      d.constant_columns.push_back(static_cast<int>(j));
    else
      keep.push_back(j);
  }

  if (keep.empty()) {
    d.kappa_design = std::numeric_limits<double>::infinity();
    d.design_rank = 0;
  } else {
    Eigen::MatrixXd xr(x.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
      xr.col(static_cast<Eigen::Index>(k)) = centered.col(keep[k]);
    const Eigen::BDCSVD<Eigen::MatrixXd> svd(xr);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smax = sv(0);
    const double cut = 1e-12 * smax;
    double smin = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > cut) {
        ++d.design_rank;
        smin = sv(i);
      }
    }
    // Reported on the covariance-eigenvalue scale (the squared singular-value
    // ratio), so readings line up with the dispersion bands the rules cite.
    d.kappa_design = (d.design_rank == sv.size() && smin > 0.0)
                         ? (smax / smin) * (smax / smin)
                         : std::numeric_limits<double>::infinity();
  }

  Rng cv_rng = rng;  // take a deterministic snapshot for the single CV pass
  const FitReport report = cross_validate(x, y, Method::Lasso, plan, cv_rng);
  d.elected_alpha = report.elected_alpha;
  d.alpha_max = report.alpha_max;
  d.saturated = report.saturated;
  d.alpha_ratio = report.alpha_max > 0.0
                      ? report.elected_alpha / report.alpha_max
                      : std::numeric_limits<double>::infinity();
  return d;
}

SnrRegime classify_snr_regime(const Diagnostics& diag) {
  if (diag.saturated || diag.elected_alpha > 10.0) return SnrRegime::Low;
  if (diag.elected_alpha >= 0.1) return SnrRegime::Moderate;
  return SnrRegime::High;
}

namespace {

const std::vector<std::string> kRuleIds = {
    "underdetermined/prediction",
    "underdetermined/selection",
    "underdetermined/estimation",
    "large_sample/prediction",
    "large_sample/selection",
    "large_sample/estimation",
    "small_sample/prediction/high_snr",
    "small_sample/prediction/low_snr",
    "small_sample/prediction/moderate_snr",
    "prediction/default",
    "collinear/selection",
    "collinear/estimation",
    "well_conditioned/selection/low_snr",
    "well_conditioned/selection/moderate_snr",
    "well_conditioned/selection/high_snr_sparse",
    "well_conditioned/selection/high_snr_default",
    "well_conditioned/estimation/sparse",
    "well_conditioned/estimation/dense",
    "well_conditioned/estimation/unknown",
    "interpolated/selection",
    "interpolated/estimation",
};

Recommendation make(Objective objective, Method method, std::string regime,
                    std::string rationale) {
  Recommendation rec;
  rec.objective = objective;
  rec.method = method;
  rec.regime = std::move(regime);
  rec.rationale = std::move(rationale);
  return rec;
}

}  // namespace

const std::vector<std::string>& advisor_rule_ids() { return kRuleIds; }

Recommendation advise(const Diagnostics& diag, Objective objective,
                      SparsityPrior prior) {
  if (diag.n < 1 || diag.p < 1) throw ConfigError("diagnostics are empty");

  const SnrRegime snr = classify_snr_regime(diag);
  const bool small_n = diag.n <= kSmallSampleCutoff;
  Recommendation rec;

  if (diag.underdetermined) {
    switch (objective) {
      case Objective::Prediction:
        rec = make(objective, Method::Ridge, "underdetermined/prediction",
                   "with p > n every benchmarked method leaned on shrinkage; "
                   "ridge predicted as well as any and is the cheapest");
        break;
      case Objective::Selection:
        rec = make(objective, Method::ElasticNet, "underdetermined/selection",
                   "with p > n the l2 term keeps selection stable where pure "
                   "lasso drops correlated true features");
        break;
      case Objective::Estimation:
        rec = make(objective, Method::ElasticNet, "underdetermined/estimation",
                   "with p > n elastic net held the lowest coefficient error "
                   "among the stable choices");
        break;
    }
    rec.caveats.push_back(kNeverLasso);
  } else if (diag.n_over_p >= kLargeSampleRatio) {
    switch (objective) {
      case Objective::Prediction:
        rec = make(objective, Method::Ridge, "large_sample/prediction",
                   "past n/p of about 78 the benchmark shows all methods tied "
                   "on held-out error; ridge is the cheapest to fit");
        break;
      case Objective::Selection:
        rec = make(objective, Method::ElasticNet, "large_sample/selection",
                   "in the large-sample band sparse methods recover the "
                   "support reliably; elastic net is the robust default");
        rec.caveats.push_back(kLassoAlternative);
        break;
      case Objective::Estimation:
        rec = make(objective, Method::Ridge, "large_sample/estimation",
                   "past n/p of about 78 coefficient error converges for all "
                   "methods; ridge gets there at the lowest cost");
        break;
    }
  } else if (objective == Objective::Prediction) {
    if (small_n && snr == SnrRegime::High) {
      rec = make(objective, Method::ElasticNet, "small_sample/prediction/high_snr",
                 "at around a hundred rows with strong signal, elastic net "
                 "beat ridge on held-out error by 5-15% in the benchmark");
    } else if (small_n && snr == SnrRegime::Low) {
      rec = make(objective, Method::Ridge, "small_sample/prediction/low_snr",
                 "weak signal at small n rewards heavy uniform shrinkage; "
                 "ridge was never worse than the sparse methods here");
    } else if (small_n) {
      rec = make(objective, Method::Ridge, "small_sample/prediction/moderate_snr",
                 "at moderate signal the methods predict within noise of each "
                 "other; ridge is the simple default");
    } else {
      rec = make(objective, Method::Ridge, "prediction/default",
                 "held-out error was method-insensitive across the benchmark "
                 "grid; ridge is the cheapest dependable choice");
    }
  } else if (diag.kappa_design > kKappaHigh) {
    if (objective == Objective::Selection) {
      rec = make(objective, Method::ElasticNet, "collinear/selection",
                 "under severe collinearity lasso recall collapsed as signal "
                 "fell while elastic net stayed in the 0.8-0.9 range");
      if (snr == SnrRegime::Low && small_n) rec.caveats.push_back(kRidgeBestF1SmallN);
    } else {
      rec = make(objective, Method::ElasticNet, "collinear/estimation",
                 "under severe collinearity the grouped l1+l2 penalty held "
                 "the lowest coefficient error at every tested signal level");
    }
  } else if (diag.kappa_design < kKappaLow) {
    if (objective == Objective::Selection) {
      switch (snr) {
        case SnrRegime::Low:
          rec = make(objective, Method::Ridge, "well_conditioned/selection/low_snr",
                     "a saturated or very large elected alpha marks signal too "
                     "weak for sparse recovery; ridge F1 was competitive here");
          rec.caveats.push_back(kRidgeNotSelector);
          break;
        case SnrRegime::Moderate:
          rec = make(objective, Method::ElasticNet,
                     "well_conditioned/selection/moderate_snr",
                     "with signal neither clearly strong nor weak, elastic net "
                     "was the best all-round selector in the benchmark");
          if (prior == SparsityPrior::Sparse) rec.caveats.push_back(kSparseModerateGap);
          break;
        case SnrRegime::High:
          if (prior == SparsityPrior::Sparse) {
            rec = make(objective, Method::Lasso,
                       "well_conditioned/selection/high_snr_sparse",
                       "small elected alpha plus a sparse prior is the one "
                       "regime where plain lasso selection is fully viable");
          } else {
            rec = make(objective, Method::ElasticNet,
                       "well_conditioned/selection/high_snr_default",
                       "strong signal without a sparsity prior still favours "
                       "the elastic net compromise over hard selection");
          }
          break;
      }
    } else {  // Estimation
      switch (prior) {
        case SparsityPrior::Sparse:
          rec = make(objective, Method::Lasso, "well_conditioned/estimation/sparse",
                     "when the truth is believed sparse and the design is "
                     "well conditioned, lasso estimated coefficients best");
          break;
        case SparsityPrior::Dense:
          rec = make(objective, Method::Ridge, "well_conditioned/estimation/dense",
                     "for dense truths uniform shrinkage wins; ridge held the "
                     "lowest coefficient error in this band");
          break;
        case SparsityPrior::Unknown:
          rec = make(objective, Method::ElasticNet,
                     "well_conditioned/estimation/unknown",
                     "without a sparsity prior the mixed penalty hedges both "
                     "ways at minimal cost in coefficient error");
          break;
      }
    }
  } else {  // kappa in [1e2, 1e4]
    if (objective == Objective::Selection) {
      rec = make(objective, Method::ElasticNet, "interpolated/selection",
                 "between the tested conditioning bands; elastic net is the "
                 "safe general-purpose selector");
    } else {
      rec = make(objective, Method::ElasticNet, "interpolated/estimation",
                 "between the tested conditioning bands; elastic net is the "
                 "safe general-purpose estimator");
    }
  }

  if (diag.kappa_design >= kKappaLow && diag.kappa_design <= kKappaHigh) {
    rec.caveats.push_back(kUntestedBand);
  }
  if (snr != SnrRegime::Moderate) rec.caveats.push_back(kAlphaHeuristic);
  return rec;
}

}  // namespace regbench
