#include "regbench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "regbench/errors.hpp"

namespace regbench {

OmegaSquared omega_squared(const std::vector<double>& values,
                           const std::vector<std::string>& groups) {
  if (values.size() != groups.size())
    throw ConfigError("values and group labels differ in length");

  std::map<std::string, std::pair<long, double>> acc;  // label -> (count, sum)
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto& [count, sum] = acc[groups[i]];
    ++count;
    sum += values[i];
  }
  if (acc.size() < 2) throw ConfigError("omega-squared needs at least 2 groups");
  for (const auto& [label, cs] : acc)
    if (cs.first < 2)
      throw ConfigError("group '" + label + "' holds fewer than 2 values");

  const long n = static_cast<long>(values.size());
  const long k = static_cast<long>(acc.size());
  double grand = 0.0;
  for (double v : values) grand += v;
  grand /= static_cast<double>(n);

  std::map<std::string, double> mean;
  for (const auto& [label, cs] : acc)
    mean[label] = cs.second / static_cast<double>(cs.first);

  OmegaSquared out;
  out.anova.n_total = n;
  out.anova.group_count = k;
  out.anova.df_effect = k - 1;
  for (const auto& [label, cs] : acc) {
    const double d = mean[label] - grand;
    out.anova.ss_effect += static_cast<double>(cs.first) * d * d;
  }
  double ss_within = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double dw = values[i] - mean[groups[i]];
    ss_within += dw * dw;
    const double dt = values[i] - grand;
    out.anova.ss_total += dt * dt;
  }
  out.anova.ms_error = ss_within / static_cast<double>(n - k);

  const double denom = out.anova.ss_total + out.anova.ms_error;
  if (denom == 0.0) {
    out.omega2 = 0.0;
    out.degenerate = true;
  } else {
    out.omega2 = (out.anova.ss_effect -
                  static_cast<double>(out.anova.df_effect) * out.anova.ms_error) /
                 denom;
  }
  return out;
}

EffectMagnitude classify_effect(double omega2) {
  if (omega2 < 0.01) return EffectMagnitude::Negligible;
  if (omega2 < 0.06) return EffectMagnitude::Small;
  if (omega2 < 0.14) return EffectMagnitude::Medium;
  return EffectMagnitude::Large;
}

std::string effect_magnitude_name(EffectMagnitude m) {
  switch (m) {
    case EffectMagnitude::Negligible: return "negligible";
    case EffectMagnitude::Small: return "small";
    case EffectMagnitude::Medium: return "medium";
    case EffectMagnitude::Large: return "large";
  }
  return "negligible";
}

TwoWayAnova two_way_interaction_f(const std::vector<double>& values,
                                  const std::vector<std::string>& a_labels,
                                  const std::vector<std::string>& b_labels) {
  if (values.size() != a_labels.size() || values.size() != b_labels.size())
    throw ConfigError("values and factor labels differ in length");
  if (values.empty()) throw ConfigError("two-way anova on empty data");

  std::map<std::string, long> a_ix, b_ix;
  for (const auto& l : a_labels) a_ix.emplace(l, 0);
  for (const auto& l : b_labels) b_ix.emplace(l, 0);
  long next = 0;
  for (auto& [l, ix] : a_ix) ix = next++;
  next = 0;
  for (auto& [l, ix] : b_ix) ix = next++;
  const long na = static_cast<long>(a_ix.size());
  const long nb = static_cast<long>(b_ix.size());
  if (na < 2 || nb < 2)
    throw ConfigError("two-way anova needs at least 2 levels per factor");

  std::vector<long> cell_count(static_cast<std::size_t>(na * nb), 0);
  std::vector<double> cell_sum(static_cast<std::size_t>(na * nb), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const long a = a_ix[a_labels[i]];
    const long b = b_ix[b_labels[i]];
    const auto cell = static_cast<std::size_t>(a * nb + b);
    ++cell_count[cell];
    cell_sum[cell] += values[i];
  }
  const long r = cell_count[0];
  for (long c : cell_count)
    if (c != r || c == 0)
      throw ConfigError("two-way anova requires a balanced complete design");

  const long n = static_cast<long>(values.size());
  double grand = 0.0;
  for (double v : values) grand += v;
  grand /= static_cast<double>(n);

  std::vector<double> a_mean(static_cast<std::size_t>(na), 0.0);
  std::vector<double> b_mean(static_cast<std::size_t>(nb), 0.0);
  std::vector<double> cell_mean(static_cast<std::size_t>(na * nb), 0.0);
  for (long a = 0; a < na; ++a)
    for (long b = 0; b < nb; ++b) {
      const auto cell = static_cast<std::size_t>(a * nb + b);
      cell_mean[cell] = cell_sum[cell] / static_cast<double>(r);
      a_mean[static_cast<std::size_t>(a)] += cell_mean[cell] / static_cast<double>(nb);
      b_mean[static_cast<std::size_t>(b)] += cell_mean[cell] / static_cast<double>(na);
    }

  TwoWayAnova out;
  for (long a = 0; a < na; ++a) {
    const double d = a_mean[static_cast<std::size_t>(a)] - grand;
    out.ss_a += static_cast<double>(r * nb) * d * d;
  }
  for (long b = 0; b < nb; ++b) {
    const double d = b_mean[static_cast<std::size_t>(b)] - grand;
    out.ss_b += static_cast<double>(r * na) * d * d;
  }
  for (long a = 0; a < na; ++a)
    for (long b = 0; b < nb; ++b) {
      const auto cell = static_cast<std::size_t>(a * nb + b);
      const double d = cell_mean[cell] - a_mean[static_cast<std::size_t>(a)] -
                       b_mean[static_cast<std::size_t>(b)] + grand;
      out.ss_ab += static_cast<double>(r) * d * d;
    }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const long a = a_ix[a_labels[i]];
    const long b = b_ix[b_labels[i]];
    const double de = values[i] - cell_mean[static_cast<std::size_t>(a * nb + b)];
    out.ss_error += de * de;
    const double dt = values[i] - grand;
    out.ss_total += dt * dt;
  }

  out.df_ab = (na - 1) * (nb - 1);
  out.df_error = n - na * nb;
  const double ms_ab = out.ss_ab / static_cast<double>(out.df_ab);
  const double ms_error =
      out.df_error > 0 ? out.ss_error / static_cast<double>(out.df_error) : 0.0;
  if (ms_error > 0.0) {
    out.f_interaction = ms_ab / ms_error;
  } else {
    // Noise-free layouts: additive cell means give F = 0, genuine interaction
    // diverges.  Cancellation leaves ~1e-16-scale residue, hence the relative cut.
    const double tiny = 1e-12 * std::max(out.ss_total, 1e-300);
    out.f_interaction =
        out.ss_ab <= tiny ? 0.0 : std::numeric_limits<double>::infinity();
  }
  out.eta2_interaction = out.ss_total > 0.0 ? out.ss_ab / out.ss_total : 0.0;
  return out;
}

std::string hyperparameter_label(const SimConfig& config, const std::string& name) {
  char buf[64];
  if (name == "features_p") return std::to_string(config.features_p);
  if (name == "rank_ratio") {
    std::snprintf(buf, sizeof(buf), "%g", config.rank_ratio);
    return buf;
  }
  if (name == "dispersion") return dispersion_name(config.dispersion);
  if (name == "beta_dist") return config.beta_dist.name();
  if (name == "sparsity") {
    std::snprintf(buf, sizeof(buf), "%g", config.sparsity);
    return buf;
  }
  if (name == "snr") {
    std::snprintf(buf, sizeof(buf), "%g", config.snr);
    return buf;
  }
  if (name == "sample_n") return std::to_string(config.sample_n);
  throw ConfigError("unknown hyperparameter '" + name + "'");
}

double record_metric(const RunRecord& r, const std::string& name) {
  if (name == "precision") return r.metrics.precision;
  if (name == "recall") return r.metrics.recall;
  if (name == "f1") return r.metrics.f1;
  if (name == "rel_l2") return r.metrics.rel_l2;
  if (name == "rmse_test") return r.metrics.rmse_test;
  if (name == "selected_count") return static_cast<double>(r.metrics.selected_count);
  if (name == "fit_seconds") return r.fit.fit_seconds;
  if (name == "iterations") return static_cast<double>(r.fit.iterations);
  if (name == "elected_alpha") return r.fit.elected_alpha;
  throw ConfigError("unknown metric '" + name + "'");
}

DiffTable pairwise_difference_table(const std::vector<RunRecord>& records,
                                    const std::string& metric, Method a, Method b) {
  if (a == b) throw ConfigError("method pair must name two distinct methods");

  struct PairSlot {
    const RunRecord* a = nullptr;
    const RunRecord* b = nullptr;
  };
  std::map<std::string, PairSlot> by_key;
  for (const RunRecord& r : records) {
    if (!r.ok() || (r.method != a && r.method != b)) continue;
    const std::string key =
        r.config.canonical() + "|s=" + std::to_string(r.seed_index);
    PairSlot& slot = by_key[key];
    (r.method == a ? slot.a : slot.b) = &r;
  }

  std::vector<std::string> missing;
  for (const auto& [key, slot] : by_key) {
    if (!slot.a) missing.push_back(key + "|m=" + method_name(a));
    if (!slot.b) missing.push_back(key + "|m=" + method_name(b));
  }
  if (!missing.empty())
    throw IncompletePairError("method pair " + method_name(a) + "/" +
                                  method_name(b) + " is missing " +
                                  std::to_string(missing.size()) + " record(s)",
                              missing);

  DiffTable table;
  for (const auto& [key, slot] : by_key) {
    table.diffs.push_back(record_metric(*slot.a, metric) -
                          record_metric(*slot.b, metric));
    for (std::size_t h = 0; h < kHyperparameterNames.size(); ++h)
      table.labels[h].push_back(
          hyperparameter_label(slot.a->config, kHyperparameterNames[h]));
  }
  return table;
}

}  // namespace regbench
