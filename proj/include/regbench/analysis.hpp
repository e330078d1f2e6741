#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "regbench/records.hpp"

namespace regbench {

struct AnovaDecomposition {
  double ss_effect = 0.0;
  double ss_total = 0.0;
  double ms_error = 0.0;
  long df_effect = 0;
  long n_total = 0;
  long group_count = 0;
};

struct OmegaSquared {
  AnovaDecomposition anova;
  double omega2 = 0.0;
  bool degenerate = false;  // zero total variation; omega2 pinned to 0
};

// One-way omega-squared: (ss_effect - df_effect * ms_error) /
// (ss_total + ms_error).  Negative values pass through unclipped.
// Needs >= 2 groups with >= 2 values each.
OmegaSquared omega_squared(const std::vector<double>& values,
                           const std::vector<std::string>& groups);

enum class EffectMagnitude { Negligible, Small, Medium, Large };

// Bands: negligible < 0.01 <= small < 0.06 <= medium < 0.14 <= large.
EffectMagnitude classify_effect(double omega2);
std::string effect_magnitude_name(EffectMagnitude m);

struct TwoWayAnova {
  double f_interaction = 0.0;
  double eta2_interaction = 0.0;
  double ss_a = 0.0;
  double ss_b = 0.0;
  double ss_ab = 0.0;
  double ss_error = 0.0;
  double ss_total = 0.0;
  long df_ab = 0;
  long df_error = 0;
};

// Interaction F and eta^2 for a balanced complete two-factor layout.
// Unbalanced or incomplete designs are rejected.
TwoWayAnova two_way_interaction_f(const std::vector<double>& values,
                                  const std::vector<std::string>& a_labels,
                                  const std::vector<std::string>& b_labels);

inline constexpr std::array<const char*, 7> kHyperparameterNames = {
    "features_p", "rank_ratio", "dispersion", "beta_dist",
    "sparsity",   "snr",        "sample_n"};

// Hyperparameter level of a config as a printable label.
std::string hyperparameter_label(const SimConfig& config, const std::string& name);

// Per-(config, seed) metric differences for a method pair, with the seven
// hyperparameter labels aligned to each difference for grouping.
struct DiffTable {
  std::vector<double> diffs;  // metric(a) - metric(b)
  std::array<std::vector<std::string>, 7> labels;  // kHyperparameterNames order
};

DiffTable pairwise_difference_table(const std::vector<RunRecord>& records,
                                    const std::string& metric, Method a, Method b);

}  // namespace regbench
