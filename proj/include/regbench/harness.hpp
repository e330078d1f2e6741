#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <mutex>
#include <string>
#include <vector>

#include "regbench/records.hpp"

namespace regbench {

// Factor levels swept by a benchmark run.  The cell count is the plain
// product of the level sizes.
struct GridSpec {
  std::vector<int> features = {64, 128};
  std::vector<double> rank_ratios = {0.9, 1.0};
  std::vector<Dispersion> dispersions = {Dispersion::Low, Dispersion::High};
  std::vector<BetaDist> beta_dists = {
      BetaDist::gamma(0.04), BetaDist::gamma(0.2), BetaDist::gamma(1.0),
      BetaDist::gamma(5.0), BetaDist::uniform()};
  std::vector<double> sparsities = {0.0, 0.15};
  std::vector<double> snrs = {0.04, 0.2, 1.0};
  std::vector<int> sample_ns = {100, 1000, 10000, 100000};
  int seeds_per_config = 1;
  std::vector<Method> methods = {Method::Ridge, Method::Lasso,
                                 Method::ElasticNet, Method::PostLassoOLS};

  // Full benchmark layout: 960 configs, 35 seeds.
  static GridSpec paper();
  // Laptop-sized layout: p in {16, 32}, n in {100, 1000, 2500}, 5 seeds.
  static GridSpec desk();

  std::size_t config_count() const;
  void validate() const;
};

// Cartesian product in field order (features, rank_ratio, dispersion,
// beta_dist, sparsity, snr, sample_n), each level list in declared order.
std::vector<SimConfig> enumerate_grid(const GridSpec& spec);

// Run seed for a sweep cell, derived from the config key and seed index so
// cells are reproducible in isolation.
std::uint64_t derive_run_seed(const SimConfig& config, std::uint64_t seed_index);

// One dataset draw shared by every method: generate, split, fit each method
// with CV on the identical split, score on the held-out rows.  Failures
// come back as failed records, one per method.
std::vector<RunRecord> run_cell(const SimConfig& config, std::uint64_t seed_index,
                                const std::vector<Method>& methods);

// Append-only JSON-lines store.  Appends are flushed per record so readers
// only ever see whole lines.
class ResultStore {
 public:
  explicit ResultStore(std::filesystem::path path);

  void append(const RunRecord& record);
  // Read-only load; skips a corrupt trailing line with a warning.
  std::vector<RunRecord> load() const;
  // Load for resumption: additionally truncates a corrupt trailing line.
  std::vector<RunRecord> load_repair();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream appender_;
  std::mutex mutex_;
};

std::string record_to_json(const RunRecord& record);
RunRecord record_from_json(const std::string& line);

struct WorkItem {
  SimConfig config;
  std::uint64_t seed_index = 0;
  std::vector<Method> methods;  // methods still missing for this (config, seed)
};

// Planned cells minus completed keys, in enumeration order.
std::vector<WorkItem> resume(ResultStore& store, const GridSpec& spec);

struct SweepOutcome {
  std::size_t planned = 0;
  std::size_t already_done = 0;
  std::size_t executed = 0;
  std::size_t failed = 0;
};

SweepOutcome run_sweep(const GridSpec& spec, ResultStore& store, int workers);

struct SummaryRow {
  std::vector<std::string> group;
  long count = 0;
  double mean = 0.0;
  double median = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool degenerate_ci = false;  // single record, no spread to estimate
};

// Group-by summary of one metric over successful records; normal-approximation
// 95% confidence bounds.
std::vector<SummaryRow> export_summary(const std::vector<RunRecord>& records,
                                       const std::vector<std::string>& group_by,
                                       const std::string& metric);

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::vector<std::string>& group_by,
                       const std::string& metric, std::ostream& out);

}  // namespace regbench
