#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "regbench/rng.hpp"
#include "regbench/solvers.hpp"

namespace regbench {

enum class Objective { Prediction, Selection, Estimation };
Objective objective_from_name(const std::string& name);
std::string objective_name(Objective o);

enum class SparsityPrior { Sparse, Dense, Unknown };
SparsityPrior prior_from_name(const std::string& name);
std::string prior_name(SparsityPrior p);

enum class SnrRegime { Low, Moderate, High };
std::string snr_regime_name(SnrRegime r);

// Everything the advisor consults, computable from (X, y) alone.
struct Diagnostics {
  long n = 0;
  long p = 0;
  double n_over_p = 0.0;
  bool underdetermined = false;  // p > n
  double kappa_design = 1.0;     // eigenvalue dispersion of the centered Gram
                                 // (squared singular-value ratio); +inf if singular
  long design_rank = 0;
  std::vector<int> constant_columns;  // flagged and excluded from kappa
  double elected_alpha = 0.0;         // one CV-elected Lasso pass
  double alpha_max = 0.0;
  double alpha_ratio = 0.0;  // elected / alpha_max
  bool saturated = false;
};

// Conditioning from the singular values of centered X (values below
// 1e-12 sigma_max count as zero, any zero reports +inf) plus one Lasso CV
// pass for the alpha diagnostics.
Diagnostics compute_diagnostics(const Eigen::MatrixXd& x,
                                const Eigen::VectorXd& y, const CvPlan& plan,
                                Rng& rng);

// Saturated or alpha > 10 -> Low; alpha in [0.1, 10] -> Moderate (boundaries
// inclusive on the low side); alpha < 0.1 -> High.
SnrRegime classify_snr_regime(const Diagnostics& diag);

struct Recommendation {
  Objective objective = Objective::Prediction;
  Method method = Method::Ridge;
  std::string regime;     // identifier of the rule that fired
  std::string rationale;  // evidence behind the rule, in plain words
  std::vector<std::string> caveats;
};

// Priority-ordered rule table over the observable regime.  Post-Lasso OLS is
// never recommended.
Recommendation advise(const Diagnostics& diag, Objective objective,
                      SparsityPrior prior);

// Identifiers of every rule advise() can fire; exposed so coverage can be
// checked exhaustively.
const std::vector<std::string>& advisor_rule_ids();

}  // namespace regbench
