#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "regbench/metrics.hpp"
#include "regbench/spacegen.hpp"
#include "regbench/solvers.hpp"

namespace regbench {

inline constexpr int kSchemaVersion = 1;

struct FitSummary {
  double elected_alpha = 0.0;
  std::optional<double> elected_l1_ratio;
  bool saturated = false;
  double fit_seconds = 0.0;
  long iterations = 0;
};

// One (config, seed, method) cell of a sweep.  Failed cells keep the key and
// a reason; their metrics are meaningless and readers must skip them.
struct RunRecord {
  int schema_version = kSchemaVersion;
  SimConfig config;           // seed field carries the derived run seed
  std::uint64_t seed_index = 0;
  Method method = Method::Lasso;
  FitSummary fit;
  MetricsRecord metrics;
  std::string dataset_hash;
  std::string status = "ok";  // "ok" | "failed"
  std::string fail_reason;

  std::string key() const {
    return config.canonical() + "|s=" + std::to_string(seed_index) +
           "|m=" + method_name(method);
  }
  bool ok() const { return status == "ok"; }
};

// Metric accessor by store field name; throws ConfigError for unknown names.
double record_metric(const RunRecord& r, const std::string& name);

}  // namespace regbench
