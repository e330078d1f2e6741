#include "regbench/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "regbench/advisor.hpp"
#include "regbench/analysis.hpp"
#include "regbench/errorcontrol.hpp"
#include "regbench/errors.hpp"

namespace regbench {

using nlohmann::json;

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& tok, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value '" + tok + "' for key '" + key + "'");
  }
}

int parse_int(const std::string& tok, const std::string& key) {
  const double v = parse_double(tok, key);
  if (v != std::floor(v)) throw ConfigError("key '" + key + "' wants integers");
  return static_cast<int>(v);
}

std::filesystem::path ensure_out_dir(const CliConfig& cfg) {
  // The REGBENCH_OUT environment variable wins over --out.
  std::string dir = cfg.out_dir;
  if (const char* env = std::getenv("REGBENCH_OUT"); env && *env) dir = env;
  std::filesystem::create_directories(dir);
  return dir;
}

std::string format9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

int run_generate(const CliConfig& cfg) {
  SimConfig sim = cfg.sim;
  sim.seed = cfg.seed;
  const GeneratedWorld world = generate_world(sim);
  const auto dir = ensure_out_dir(cfg);
  const auto path = dir / ("dataset_p" + std::to_string(sim.features_p) + "_n" +
                           std::to_string(sim.sample_n) + "_seed" +
                           std::to_string(cfg.seed) + ".csv");
  std::ofstream out(path);
  if (!out) throw StoreError("cannot write " + path.string());
  write_dataset_csv(world.data, out);

  std::cout << "wrote " << path.string() << "\n"
            << "config " << sim.canonical() << "\n"
            << "spectrum rank " << world.cov.spectrum.rank << ", kappa "
            << format9(world.cov.spectrum.kappa) << "\n"
            << "true support size " << world.truth.support.size()
            << ", noise sigma^2 " << format9(world.truth.noise_sigma2) << "\n";
  return 0;
}

int run_sweep_cmd(const CliConfig& cfg) {
  const GridSpec spec = grid_for_preset(cfg.preset, cfg.config_path);
  const auto dir = ensure_out_dir(cfg);
  ResultStore store(dir / "results.jsonl");
  const SweepOutcome outcome = run_sweep(spec, store, cfg.workers);
  std::cout << "planned " << outcome.planned << " runs, " << outcome.already_done
            << " already complete, executed " << outcome.executed << " ("
            << outcome.failed << " failed)\n"
            << "store " << store.path().string() << "\n";
  return 0;
}

int run_analyze(const CliConfig& cfg) {
  const auto dir = ensure_out_dir(cfg);
  ResultStore store(dir / "results.jsonl");
  const std::vector<RunRecord> records = store.load();
  if (records.empty()) {
    std::cout << "store is empty; nothing to analyze\n";
    return 0;
  }
  const auto rows = export_summary(records, cfg.group_by, cfg.metric);
  const auto path = dir / ("summary_" + cfg.metric + ".csv");
  std::ofstream out(path);
  if (!out) throw StoreError("cannot write " + path.string());
  write_summary_csv(rows, cfg.group_by, cfg.metric, out);
  write_summary_csv(rows, cfg.group_by, cfg.metric, std::cout);
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

struct PairSpec {
  Method a;
  Method b;
  std::string label;
};

// Main-effect omega^2 per hyperparameter for each method pair, then the three
// strongest two-factor interactions ranked by mean eta^2 across pairs.
void write_effect_report(const std::vector<RunRecord>& records,
                         const std::string& metric,
                         const std::vector<PairSpec>& pairs, std::ostream& out) {
  out << "# paired per-seed differences, metric=" << metric << "\n";
  out << "parameter";
  for (const auto& p : pairs) out << "," << p.label;
  out << "\n";

  std::map<std::string, DiffTable> tables;
  for (const auto& p : pairs)
    tables.emplace(p.label, pairwise_difference_table(records, metric, p.a, p.b));

  for (std::size_t h = 0; h < kHyperparameterNames.size(); ++h) {
    out << kHyperparameterNames[h];
    for (const auto& p : pairs) {
      const DiffTable& t = tables.at(p.label);
      try {
        const OmegaSquared w = omega_squared(t.diffs, t.labels[h]);
        out << "," << format9(w.omega2) << " ("
            << effect_magnitude_name(classify_effect(w.omega2)) << ")";
      } catch (const ConfigError&) {
        out << ",na";  // single level in this store
      }
    }
    out << "\n";
  }

  // Interactions: all 21 hyperparameter pairs, keep the top three.
  struct InteractionRow {
    std::string name;
    std::vector<double> f;
    double mean_eta2 = 0.0;
  };
  std::vector<InteractionRow> inter;
  for (std::size_t i = 0; i < kHyperparameterNames.size(); ++i) {
    for (std::size_t k = i + 1; k < kHyperparameterNames.size(); ++k) {
      InteractionRow row;
      row.name = std::string(kHyperparameterNames[i]) + "*" + kHyperparameterNames[k];
      bool usable = true;
      double eta_sum = 0.0;
      for (const auto& p : pairs) {
        const DiffTable& t = tables.at(p.label);
        try {
          const TwoWayAnova a =
              two_way_interaction_f(t.diffs, t.labels[i], t.labels[k]);
          row.f.push_back(a.f_interaction);
          eta_sum += a.eta2_interaction;
        } catch (const ConfigError&) {
          usable = false;
          break;
        }
      }
      if (!usable) continue;
      row.mean_eta2 = eta_sum / static_cast<double>(pairs.size());
      inter.push_back(std::move(row));
    }
  }
  std::sort(inter.begin(), inter.end(),
            [](const InteractionRow& a, const InteractionRow& b) {
              return a.mean_eta2 > b.mean_eta2;
            });

  out << "\n# top interactions by mean eta^2 (F statistics per pair)\n";
  out << "interaction";
  for (const auto& p : pairs) out << "," << p.label;
  out << ",mean_eta2\n";
  const std::size_t top = std::min<std::size_t>(3, inter.size());
  for (std::size_t i = 0; i < top; ++i) {
    out << inter[i].name;
    for (double f : inter[i].f) out << "," << format9(f);
    out << "," << format9(inter[i].mean_eta2) << "\n";
  }
}

void write_timing_report(const std::vector<RunRecord>& records, std::ostream& out) {
  out << "method,features_p,sample_n,count,mean_seconds,median_seconds\n";
  std::map<std::tuple<std::string, int, int>, std::vector<double>> groups;
  for (const RunRecord& r : records) {
    if (!r.ok()) continue;
    groups[{method_name(r.method), r.config.features_p, r.config.sample_n}]
        .push_back(r.fit.fit_seconds);
  }
  for (auto& [key, vals] : groups) {
    std::sort(vals.begin(), vals.end());
    double sum = 0.0;
    for (double v : vals) sum += v;
    const std::size_t mid = vals.size() / 2;
    const double median =
        vals.size() % 2 == 1 ? vals[mid] : 0.5 * (vals[mid - 1] + vals[mid]);
    out << std::get<0>(key) << "," << std::get<1>(key) << "," << std::get<2>(key)
        << "," << vals.size() << "," << format9(sum / vals.size()) << ","
        << format9(median) << "\n";
  }
}

int run_report(const CliConfig& cfg) {
  const auto dir = ensure_out_dir(cfg);
  ResultStore store(dir / "results.jsonl");
  const std::vector<RunRecord> records = store.load();

  const auto path = dir / ("report_" + cfg.table + ".csv");
  std::ofstream out(path);
  if (!out) throw StoreError("cannot write " + path.string());

  if (cfg.table == "timing") {
    write_timing_report(records, out);
  } else {
    std::string metric;
    std::vector<PairSpec> pairs;
    if (cfg.table == "f1") {
      metric = "f1";
      // Post-lasso keeps the lasso support exactly, so its F1 column would
      // duplicate lasso's; only the three informative pairs appear.
      pairs = {{Method::Lasso, Method::Ridge, "lasso-ridge"},
               {Method::Lasso, Method::ElasticNet, "lasso-elasticnet"},
               {Method::ElasticNet, Method::Ridge, "elasticnet-ridge"}};
    } else if (cfg.table == "l2" || cfg.table == "rmse") {
      metric = cfg.table == "l2" ? "rel_l2" : "rmse_test";
      pairs = {{Method::Ridge, Method::Lasso, "ridge-lasso"},
               {Method::ElasticNet, Method::Lasso, "elasticnet-lasso"},
               {Method::PostLassoOLS, Method::Lasso, "postlasso-lasso"},
               {Method::Ridge, Method::ElasticNet, "ridge-elasticnet"},
               {Method::PostLassoOLS, Method::ElasticNet, "postlasso-elasticnet"},
               {Method::Ridge, Method::PostLassoOLS, "ridge-postlasso"}};
    } else {
      throw ConfigError("unknown report table '" + cfg.table +
                        "' (expected f1|l2|rmse|timing)");
    }

    std::vector<Method> present;
    for (const auto& p : pairs) {
      for (Method m : {p.a, p.b})
        if (std::find(present.begin(), present.end(), m) == present.end() &&
            std::any_of(records.begin(), records.end(),
                        [m](const RunRecord& r) { return r.ok() && r.method == m; }))
          present.push_back(m);
    }
    std::vector<PairSpec> usable;
    for (const auto& p : pairs)
      if (std::find(present.begin(), present.end(), p.a) != present.end() &&
          std::find(present.begin(), present.end(), p.b) != present.end())
        usable.push_back(p);
    if (usable.empty()) {
      out << "# no method pair is complete in this store; run a sweep with at "
             "least two methods\n";
    } else {
      write_effect_report(records, metric, usable, out);
    }
  }
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

CvPlan plan_for(const CliConfig& cfg, long n) {
  CvPlan plan = CvPlan::standard(n);
  if (!cfg.alpha_grid.empty()) {
    plan.alpha_grid = cfg.alpha_grid;
    std::sort(plan.alpha_grid.begin(), plan.alpha_grid.end());
  }
  return plan;
}

int run_knockoff(const CliConfig& cfg) {
  SimConfig sim = cfg.sim;
  sim.seed = cfg.seed;
  if (sim.rank_ratio != 1.0)
    throw ConfigError("knockoffs need a full-rank covariance; set --rank-ratio 1.0");
  const GeneratedWorld world = generate_world(sim);

  Rng ko_rng = child_rng(sim.seed, Stream::Knockoff);
  const Eigen::MatrixXd knock =
      construct_gaussian_knockoffs(world.data.x, world.cov, ko_rng);
  Rng cv_rng = child_rng(sim.seed, Stream::CvFolds);
  const KnockoffResult result =
      knockoff_filter(world.data.x, knock, world.data.y, cfg.q,
                      plan_for(cfg, world.data.x.rows()), cv_rng);

  long false_sel = 0;
  for (int j : result.selected)
    if (world.truth.beta(j) == 0.0) ++false_sel;

  std::cout << "knockoff filter at q=" << format9(cfg.q) << " on "
            << sim.canonical() << "\n";
  std::cout << "tau " << format9(result.tau) << ", selected "
            << result.selected.size() << " of " << sim.features_p
            << " features";
  if (result.saturated) std::cout << " (augmented fit was all-zero)";
  std::cout << "\n";
  if (!result.selected.empty()) {
    std::cout << "selected:";
    for (int j : result.selected) std::cout << " x" << (j + 1);
    std::cout << "\nfalse selections vs ground truth: " << false_sel << "\n";
  }

  const auto dir = ensure_out_dir(cfg);
  const auto path = dir / "knockoff.json";
  json j;
  j["config"] = sim.canonical();
  j["q"] = result.q;
  j["tau"] = std::isfinite(result.tau) ? json(result.tau) : json();
  j["selected"] = result.selected;
  j["saturated"] = result.saturated;
  j["false_selections"] = false_sel;
  std::vector<double> w(result.w_stats.data(),
                        result.w_stats.data() + result.w_stats.size());
  j["w_stats"] = w;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int run_stability(const CliConfig& cfg) {
  SimConfig sim = cfg.sim;
  sim.seed = cfg.seed;
  const GeneratedWorld world = generate_world(sim);

  StabilityConfig sc;
  sc.threshold = cfg.pi_thr;
  sc.iterations = cfg.m_iters;
  if (!cfg.alpha_grid.empty()) sc.lambda_grid = cfg.alpha_grid;

  Rng rng = child_rng(sim.seed, Stream::Subsample);
  const StabilityResult result = stability_select(world.data.x, world.data.y, sc, rng);

  std::cout << "stability selection, M=" << sc.iterations
            << ", threshold=" << format9(sc.threshold) << " on "
            << sim.canonical() << "\n";
  std::cout << "note: the lambda grid and threshold are workbench defaults, "
               "not tuned error guarantees\n";
  std::cout << "stable set (" << result.stable_set.size() << "):";
  for (int j : result.stable_set) std::cout << " x" << (j + 1);
  std::cout << "\n";
  long missed = 0;
  for (int j : world.truth.support) {
    if (std::find(result.stable_set.begin(), result.stable_set.end(), j) ==
        result.stable_set.end())
      ++missed;
  }
  std::cout << "true support size " << world.truth.support.size() << ", missed "
            << missed << "\n";

  const auto dir = ensure_out_dir(cfg);
  const auto path = dir / "stability.json";
  json j;
  j["config"] = sim.canonical();
  j["threshold"] = sc.threshold;
  j["iterations"] = sc.iterations;
  j["lambda_grid"] = sc.lambda_grid;
  j["stable_set"] = result.stable_set;
  std::vector<double> peak;
  for (Eigen::Index r = 0; r < result.selection_probs.rows(); ++r)
    peak.push_back(result.selection_probs.row(r).maxCoeff());
  j["peak_probability"] = peak;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int run_advise(const CliConfig& cfg) {
  if (cfg.input_path.empty()) throw ConfigError("advise needs a csv input file");
  const NumericTable table = read_numeric_csv(cfg.input_path);
  if (table.columns.size() < 2)
    throw ConfigError("advise needs at least one feature column and a response");

  std::size_t resp = table.columns.size() - 1;
  if (!cfg.response_column.empty()) {
    const auto it = std::find(table.columns.begin(), table.columns.end(),
                              cfg.response_column);
    if (it == table.columns.end())
      throw ConfigError("response column '" + cfg.response_column +
                        "' not found in " + cfg.input_path);
    resp = static_cast<std::size_t>(it - table.columns.begin());
  }

  Eigen::MatrixXd x(table.values.rows(), table.values.cols() - 1);
  Eigen::Index xi = 0;
  for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
    if (static_cast<std::size_t>(j) == resp) continue;
    x.col(xi++) = table.values.col(j);
  }
  const Eigen::VectorXd y = table.values.col(static_cast<Eigen::Index>(resp));

  Rng rng = child_rng(cfg.seed, Stream::CvFolds);
  const Diagnostics diag = compute_diagnostics(x, y, plan_for(cfg, x.rows()), rng);
  const Objective objective = objective_from_name(cfg.objective);
  const Recommendation rec = advise(diag, objective, prior_from_name(cfg.prior));

  std::cout << "diagnostics for " << cfg.input_path << "\n"
            << "  n=" << diag.n << " p=" << diag.p
            << " n/p=" << format9(diag.n_over_p)
            << (diag.underdetermined ? " (underdetermined)" : "") << "\n"
            << "  condition number " << format9(diag.kappa_design) << " (rank "
            << diag.design_rank << ")\n"
            << "  elected alpha " << format9(diag.elected_alpha) << ", alpha_max "
            << format9(diag.alpha_max) << ", ratio " << format9(diag.alpha_ratio)
            << (diag.saturated ? " [saturated]" : "") << "\n"
            << "  signal regime: " << snr_regime_name(classify_snr_regime(diag))
            << "\n";
  if (!diag.constant_columns.empty()) {
    std::cout << "  warning: " << diag.constant_columns.size()
              << " constant column(s) excluded from the condition number\n";
  }
  std::cout << "recommendation for " << objective_name(objective) << ": "
            << method_name(rec.method) << "\n"
            << "  rule: " << rec.regime << "\n"
            << "  why: " << rec.rationale << "\n";
  for (const std::string& c : rec.caveats) std::cout << "  caveat: " << c << "\n";

  const auto dir = ensure_out_dir(cfg);
  const auto path = dir / "advice.json";
  json j;
  j["input"] = cfg.input_path;
  j["objective"] = objective_name(rec.objective);
  j["method"] = method_name(rec.method);
  j["regime"] = rec.regime;
  j["rationale"] = rec.rationale;
  j["caveats"] = rec.caveats;
  j["diagnostics"] = {
      {"n", diag.n},
      {"p", diag.p},
      {"n_over_p", diag.n_over_p},
      {"underdetermined", diag.underdetermined},
      {"kappa_design", std::isfinite(diag.kappa_design)
                           ? json(diag.kappa_design)
                           : json("inf")},
      {"design_rank", diag.design_rank},
      {"constant_columns", diag.constant_columns},
      {"elected_alpha", diag.elected_alpha},
      {"alpha_max", diag.alpha_max},
      {"saturated", diag.saturated},
      {"snr_regime", snr_regime_name(classify_snr_regime(diag))}};
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

}  // namespace

GridSpec parse_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read grid file " + path);

  GridSpec spec = GridSpec::desk();
  std::string line;
  std::string section;
  bool saw_grid = false;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      if (section == "grid") saw_grid = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("grid file line without '=': " + line);
    if (section != "grid")
      throw ConfigError("key outside the [grid] section: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::vector<std::string> vals = split_ws(line.substr(eq + 1));
    if (vals.empty()) throw ConfigError("key '" + key + "' lists no values");

    if (key == "features") {
      spec.features.clear();
      for (const auto& v : vals) spec.features.push_back(parse_int(v, key));
    } else if (key == "rank_ratio") {
      spec.rank_ratios.clear();
      for (const auto& v : vals) spec.rank_ratios.push_back(parse_double(v, key));
    } else if (key == "dispersion") {
      spec.dispersions.clear();
      for (const auto& v : vals) spec.dispersions.push_back(dispersion_from_name(v));
    } else if (key == "beta_dist") {
      spec.beta_dists.clear();
      for (const auto& v : vals) spec.beta_dists.push_back(BetaDist::from_name(v));
    } else if (key == "sparsity") {
      spec.sparsities.clear();
      for (const auto& v : vals) spec.sparsities.push_back(parse_double(v, key));
    } else if (key == "snr") {
      spec.snrs.clear();
      for (const auto& v : vals) spec.snrs.push_back(parse_double(v, key));
    } else if (key == "sample_n") {
      spec.sample_ns.clear();
      for (const auto& v : vals) spec.sample_ns.push_back(parse_int(v, key));
    } else if (key == "seeds") {
      if (vals.size() != 1) throw ConfigError("'seeds' wants a single integer");
      spec.seeds_per_config = parse_int(vals[0], key);
    } else if (key == "methods") {
      spec.methods.clear();
      for (const auto& v : vals) spec.methods.push_back(method_from_name(v));
    } else {
      throw ConfigError("unknown grid key '" + key + "'");
    }
  }
  if (!saw_grid) throw ConfigError("grid file " + path + " has no [grid] section");
  spec.validate();
  return spec;
}

GridSpec grid_for_preset(const std::string& preset, const std::string& config_path) {
  if (preset == "desk") return GridSpec::desk();
  if (preset == "paper") return GridSpec::paper();
  if (preset == "custom") {
    if (config_path.empty())
      throw ConfigError("--preset custom needs --config <file>");
    return parse_grid_file(config_path);
  }
  throw ConfigError("unknown preset '" + preset + "' (expected desk|paper|custom)");
}

NumericTable read_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);

  auto split_commas = [](const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    return out;
  };

  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + " is empty");
  const std::vector<std::string> header = split_commas(line);
  if (header.empty()) throw ConfigError(path + " has an empty header");

  std::size_t split_col = header.size();
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == "split") split_col = j;

  NumericTable table;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (j != split_col) table.columns.push_back(header[j]);

  std::vector<double> flat;
  long rows = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_commas(line);
    if (cells.size() != header.size())
      throw ConfigError(path + " row " + std::to_string(rows + 2) + " has " +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(header.size()));
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j == split_col) continue;
      flat.push_back(parse_double(cells[j], header[j]));
    }
    ++rows;
  }
  if (rows == 0) throw ConfigError(path + " has no data rows");

  const auto cols = static_cast<Eigen::Index>(table.columns.size());
  table.values.resize(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      table.values(i, j) = flat[static_cast<std::size_t>(i) *
                                    static_cast<std::size_t>(cols) +
                                static_cast<std::size_t>(j)];
  return table;
}

int dispatch(const CliConfig& cfg) {
  try {
    switch (cfg.command) {
      case Command::Generate: return run_generate(cfg);
      case Command::Run: return run_sweep_cmd(cfg);
      case Command::Analyze: return run_analyze(cfg);
      case Command::Report: return run_report(cfg);
      case Command::Knockoff: return run_knockoff(cfg);
      case Command::Stability: return run_stability(cfg);
      case Command::Advise: return run_advise(cfg);
    }
    throw ConfigError("unknown command");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace regbench
