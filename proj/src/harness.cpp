#include "regbench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <thread>

#include <json.hpp>

#include "regbench/analysis.hpp"
#include "regbench/errors.hpp"

namespace regbench {

using nlohmann::json;

GridSpec GridSpec::paper() {
  GridSpec spec;
  spec.seeds_per_config = 35;
  return spec;
}

GridSpec GridSpec::desk() {
  GridSpec spec;
  spec.features = {16, 32};
  spec.sample_ns = {100, 1000, 2500};
  spec.seeds_per_config = 5;
  return spec;
}

std::size_t GridSpec::config_count() const {
  return features.size() * rank_ratios.size() * dispersions.size() *
         beta_dists.size() * sparsities.size() * snrs.size() * sample_ns.size();
}

void GridSpec::validate() const {
  if (config_count() == 0) throw ConfigError("grid has an empty level list");
  if (seeds_per_config < 1) throw ConfigError("seeds_per_config must be >= 1");
  if (methods.empty()) throw ConfigError("grid names no methods");
  for (Method m : methods)
    if (m == Method::OLS)
      throw ConfigError("sweeps cover ridge, lasso, elasticnet, postlasso");
}

std::vector<SimConfig> enumerate_grid(const GridSpec& spec) {
  spec.validate();
  std::vector<SimConfig> out;
  out.reserve(spec.config_count());
  for (int p : spec.features)
    for (double rr : spec.rank_ratios)
      for (Dispersion d : spec.dispersions)
        for (const BetaDist& bd : spec.beta_dists)
          for (double sp : spec.sparsities)
            for (double snr : spec.snrs)
              for (int n : spec.sample_ns) {
                SimConfig c;
                c.features_p = p;
                c.rank_ratio = rr;
                c.dispersion = d;
                c.beta_dist = bd;
                c.sparsity = sp;
                c.snr = snr;
                c.sample_n = n;
                c.seed = 0;
                out.push_back(c);
              }
  return out;
}

std::uint64_t derive_run_seed(const SimConfig& config, std::uint64_t seed_index) {
  const std::string key =
      config.canonical() + "|s=" + std::to_string(seed_index);
  return fnv1a64(key);
}

namespace {

std::string hash_dataset(const Dataset& data) {
  std::uint64_t h = fnv1a64(data.x.data(),
                            sizeof(double) * static_cast<std::size_t>(data.x.size()));
  h = fnv1a64(data.y.data(), sizeof(double) * static_cast<std::size_t>(data.y.size()), h);
  h = fnv1a64(data.train_idx.data(), sizeof(int) * data.train_idx.size(), h);
  h = fnv1a64(data.test_idx.data(), sizeof(int) * data.test_idx.size(), h);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::vector<RunRecord> run_cell(const SimConfig& config, std::uint64_t seed_index,
                                const std::vector<Method>& methods) {
  SimConfig cell = config;
  cell.seed = derive_run_seed(config, seed_index);

  std::vector<RunRecord> out;
  auto base_record = [&](Method m) {
    RunRecord r;
    r.config = cell;
    r.seed_index = seed_index;
    r.method = m;
    return r;
  };

  GeneratedWorld world;
  try {
    world = generate_world(cell);
  } catch (const std::exception& e) {
    for (Method m : methods) {
      RunRecord r = base_record(m);
      r.status = "failed";
      r.fail_reason = e.what();
      out.push_back(std::move(r));
    }
    return out;
  }

  const Eigen::MatrixXd x_train = subset_rows(world.data.x, world.data.train_idx);
  const Eigen::VectorXd y_train = subset_rows(world.data.y, world.data.train_idx);
  const Eigen::MatrixXd x_test = subset_rows(world.data.x, world.data.test_idx);
  const Eigen::VectorXd y_test = subset_rows(world.data.y, world.data.test_idx);
  const std::string hash = hash_dataset(world.data);
  const CvPlan plan = CvPlan::standard(x_train.rows());

  for (Method m : methods) {
    RunRecord r = base_record(m);
    r.dataset_hash = hash;
    try {
      // A fresh child stream per method reproduces the same fold shuffle, so
      // every method sees identical folds.
      Rng cv_rng = child_rng(cell.seed, Stream::CvFolds);
      const FitReport report =
          m == Method::PostLassoOLS
              ? fit_post_lasso(x_train, y_train, plan, cv_rng)
              : cross_validate(x_train, y_train, m, plan, cv_rng);

      r.fit.elected_alpha = report.elected_alpha;
      r.fit.elected_l1_ratio = report.elected_l1_ratio;
      r.fit.saturated = report.saturated;
      r.fit.fit_seconds = report.fit_seconds;
      r.fit.iterations = report.iterations;

      const SupportScores s = support_metrics(world.truth.beta, report.model);
      r.metrics.precision = s.precision;
      r.metrics.recall = s.recall;
      r.metrics.f1 = s.f1;
      r.metrics.selected_count = s.selected_count;
      r.metrics.rel_l2 = relative_l2(world.truth.beta, report.model.coefs);
      r.metrics.rmse_test = rmse(y_test, report.model.predict(x_test));
    } catch (const std::exception& e) {
      r.status = "failed";
      r.fail_reason = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string record_to_json(const RunRecord& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["config"] = {{"features_p", r.config.features_p},
                 {"rank_ratio", r.config.rank_ratio},
                 {"dispersion", dispersion_name(r.config.dispersion)},
                 {"beta_dist", r.config.beta_dist.name()},
                 {"sparsity", r.config.sparsity},
                 {"snr", r.config.snr},
                 {"sample_n", r.config.sample_n}};
  j["run_seed"] = r.config.seed;
  j["seed"] = r.seed_index;
  j["method"] = method_name(r.method);
  if (r.ok()) {
    j["elected_alpha"] = r.fit.elected_alpha;
    if (r.fit.elected_l1_ratio)
      j["elected_l1_ratio"] = *r.fit.elected_l1_ratio;
    else
      j["elected_l1_ratio"] = nullptr;
    j["saturated"] = r.fit.saturated;
    j["fit_seconds"] = r.fit.fit_seconds;
    j["iterations"] = r.fit.iterations;
    j["precision"] = r.metrics.precision;
    j["recall"] = r.metrics.recall;
    j["f1"] = r.metrics.f1;
    j["rel_l2"] = r.metrics.rel_l2;
    j["rmse_test"] = r.metrics.rmse_test;
    j["selected_count"] = r.metrics.selected_count;
  } else {
    for (const char* k :
         {"elected_alpha", "elected_l1_ratio", "saturated", "fit_seconds",
          "iterations", "precision", "recall", "f1", "rel_l2", "rmse_test",
          "selected_count"})
      j[k] = nullptr;
  }
  j["dataset_hash"] = r.dataset_hash;
  j["status"] = r.status;
  j["fail_reason"] = r.fail_reason;
  return j.dump();
}

RunRecord record_from_json(const std::string& line) {
  const json j = json::parse(line);
  RunRecord r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion)
    throw StoreError("store schema version " + std::to_string(r.schema_version) +
                     " does not match current " + std::to_string(kSchemaVersion) +
                     "; re-run the sweep into a fresh store or migrate the file");
  const json& c = j.at("config");
  r.config.features_p = c.at("features_p").get<int>();
  r.config.rank_ratio = c.at("rank_ratio").get<double>();
  r.config.dispersion = dispersion_from_name(c.at("dispersion").get<std::string>());
  r.config.beta_dist = BetaDist::from_name(c.at("beta_dist").get<std::string>());
  r.config.sparsity = c.at("sparsity").get<double>();
  r.config.snr = c.at("snr").get<double>();
  r.config.sample_n = c.at("sample_n").get<int>();
  r.config.seed = j.value("run_seed", std::uint64_t{0});
  r.seed_index = j.at("seed").get<std::uint64_t>();
  r.method = method_from_name(j.at("method").get<std::string>());
  r.status = j.at("status").get<std::string>();
  r.fail_reason = j.value("fail_reason", "");
  r.dataset_hash = j.value("dataset_hash", "");
  if (r.ok()) {
    r.fit.elected_alpha = j.at("elected_alpha").get<double>();
    if (!j.at("elected_l1_ratio").is_null())
      r.fit.elected_l1_ratio = j.at("elected_l1_ratio").get<double>();
    r.fit.saturated = j.at("saturated").get<bool>();
    r.fit.fit_seconds = j.at("fit_seconds").get<double>();
    r.fit.iterations = j.at("iterations").get<long>();
    r.metrics.precision = j.at("precision").get<double>();
    r.metrics.recall = j.at("recall").get<double>();
    r.metrics.f1 = j.at("f1").get<double>();
    r.metrics.rel_l2 = j.at("rel_l2").get<double>();
    r.metrics.rmse_test = j.at("rmse_test").get<double>();
    r.metrics.selected_count = j.value("selected_count", 0L);
  }
  return r;
}

ResultStore::ResultStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path())
    std::filesystem::create_directories(path_.parent_path());
  appender_.open(path_, std::ios::app);
  if (!appender_) throw StoreError("cannot open store " + path_.string());
}

void ResultStore::append(const RunRecord& record) {
  const std::string line = record_to_json(record);
  std::lock_guard<std::mutex> lock(mutex_);
  appender_ << line << '\n';
  appender_.flush();
  if (!appender_) throw StoreError("append to " + path_.string() + " failed");
}

namespace {

struct ParsedStore {
  std::vector<RunRecord> records;
  bool trailing_corrupt = false;
  std::streamoff truncate_at = 0;  // byte offset of the corrupt trailing line
};

ParsedStore parse_store(const std::filesystem::path& path) {
  ParsedStore out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;

  std::string line;
  std::streamoff offset = 0;
  while (true) {
    const std::streamoff line_start = offset;
    if (!std::getline(in, line)) break;
    offset += static_cast<std::streamoff>(line.size()) + 1;
    if (line.empty()) continue;
    try {
      out.records.push_back(record_from_json(line));
    } catch (const StoreError&) {
      throw;  // schema mismatch is never repaired silently
    } catch (const std::exception&) {
      // Tolerate only a corrupt final line (an interrupted append).
      if (in.peek() == EOF) {
        out.trailing_corrupt = true;
        out.truncate_at = line_start;
        break;
      }
      throw StoreError("corrupt record mid-file in " + path.string());
    }
  }
  return out;
}

}  // namespace

std::vector<RunRecord> ResultStore::load() const {
  ParsedStore parsed = parse_store(path_);
  if (parsed.trailing_corrupt)
    std::cerr << "warning: ignoring corrupt trailing line in " << path_ << "\n";
  return std::move(parsed.records);
}

std::vector<RunRecord> ResultStore::load_repair() {
  ParsedStore parsed = parse_store(path_);
  if (parsed.trailing_corrupt) {
    std::cerr << "warning: truncating corrupt trailing line in " << path_ << "\n";
    std::lock_guard<std::mutex> lock(mutex_);
    appender_.close();
    std::filesystem::resize_file(path_, static_cast<std::uintmax_t>(parsed.truncate_at));
    appender_.open(path_, std::ios::app);
    if (!appender_) throw StoreError("cannot reopen store " + path_.string());
  }
  return std::move(parsed.records);
}

std::vector<WorkItem> resume(ResultStore& store, const GridSpec& spec) {
  spec.validate();
  std::set<std::string> done;
  for (const RunRecord& r : store.load_repair()) done.insert(r.key());

  std::vector<WorkItem> items;
  for (const SimConfig& config : enumerate_grid(spec)) {
    for (int s = 0; s < spec.seeds_per_config; ++s) {
      WorkItem item;
      item.config = config;
      item.seed_index = static_cast<std::uint64_t>(s);
      for (Method m : spec.methods) {
        const std::string key = config.canonical() + "|s=" + std::to_string(s) +
                                "|m=" + method_name(m);
        if (!done.count(key)) item.methods.push_back(m);
      }
      if (!item.methods.empty()) items.push_back(std::move(item));
    }
  }
  return items;
}

SweepOutcome run_sweep(const GridSpec& spec, ResultStore& store, int workers) {
  if (workers < 1) throw ConfigError("worker count must be >= 1");
  std::vector<WorkItem> items = resume(store, spec);

  SweepOutcome outcome;
  outcome.planned = enumerate_grid(spec).size() *
                    static_cast<std::size_t>(spec.seeds_per_config) *
                    spec.methods.size();
  std::size_t remaining = 0;
  for (const WorkItem& item : items) remaining += item.methods.size();
  outcome.already_done = outcome.planned - remaining;

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> executed{0};
  std::atomic<std::size_t> failed{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      const WorkItem& item = items[i];
      const std::vector<RunRecord> records =
          run_cell(item.config, item.seed_index, item.methods);
      for (const RunRecord& r : records) {
        store.append(r);
        ++executed;
        if (!r.ok()) ++failed;
      }
    }
  };

  const int thread_count =
      std::min<std::size_t>(static_cast<std::size_t>(workers), items.size());
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  outcome.executed = executed.load();
  outcome.failed = failed.load();
  return outcome;
}

std::vector<SummaryRow> export_summary(const std::vector<RunRecord>& records,
                                       const std::vector<std::string>& group_by,
                                       const std::string& metric) {
  if (group_by.empty()) throw ConfigError("summary needs at least one group key");

  auto label_of = [&](const RunRecord& r, const std::string& key) -> std::string {
    if (key == "method") return method_name(r.method);
    return hyperparameter_label(r.config, key);
  };

  std::map<std::vector<std::string>, std::vector<double>> groups;
  for (const RunRecord& r : records) {
    if (!r.ok()) continue;
    std::vector<std::string> key;
    key.reserve(group_by.size());
    for (const std::string& g : group_by) key.push_back(label_of(r, g));
    groups[key].push_back(record_metric(r, metric));
  }

  std::vector<SummaryRow> rows;
  for (auto& [key, vals] : groups) {
    SummaryRow row;
    row.group = key;
    row.count = static_cast<long>(vals.size());
    double sum = 0.0;
    for (double v : vals) sum += v;
    row.mean = sum / static_cast<double>(vals.size());
    std::sort(vals.begin(), vals.end());
    const std::size_t mid = vals.size() / 2;
    row.median = vals.size() % 2 == 1 ? vals[mid]
                                      : 0.5 * (vals[mid - 1] + vals[mid]);
    if (vals.size() < 2) {
      row.degenerate_ci = true;
      row.ci_lo = row.ci_hi = row.mean;
    } else {
      double ss = 0.0;
      for (double v : vals) ss += (v - row.mean) * (v - row.mean);
      const double se = std::sqrt(ss / static_cast<double>(vals.size() - 1) /
                                  static_cast<double>(vals.size()));
      row.ci_lo = row.mean - 1.96 * se;
      row.ci_hi = row.mean + 1.96 * se;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::vector<std::string>& group_by,
                       const std::string& metric, std::ostream& out) {
  for (const std::string& g : group_by) out << g << ",";
  out << "count,mean_" << metric << ",median_" << metric
      << ",ci95_lo,ci95_hi,degenerate_ci\n";
  char buf[64];
  for (const SummaryRow& row : rows) {
    for (const std::string& g : row.group) out << g << ",";
    out << row.count;
    for (double v : {row.mean, row.median, row.ci_lo, row.ci_hi}) {
      std::snprintf(buf, sizeof(buf), "%.9g", v);
      out << "," << buf;
    }
    out << "," << (row.degenerate_ci ? "true" : "false") << "\n";
  }
}

}  // namespace regbench
