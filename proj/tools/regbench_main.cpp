#include <CLI11.hpp>

#include "regbench/cli.hpp"
#include "regbench/errors.hpp"

namespace {

void add_sim_flags(CLI::App* cmd, regbench::CliConfig& cfg) {
  cmd->add_option("--features", cfg.sim.features_p, "feature count p");
  cmd->add_option("--rank-ratio", cfg.sim.rank_ratio, "target rank / p");
  cmd->add_option_function<std::string>(
         "--dispersion",
         [&cfg](const std::string& v) {
           cfg.sim.dispersion = regbench::dispersion_from_name(v);
         },
         "eigenvalue dispersion: low|high")
      ->default_str("low");
  cmd->add_option_function<std::string>(
         "--beta-dist",
         [&cfg](const std::string& v) {
           cfg.sim.beta_dist = regbench::BetaDist::from_name(v);
         },
         "coefficient law: uniform|gamma:<shape>")
      ->default_str("uniform");
  cmd->add_option("--sparsity", cfg.sim.sparsity, "fraction of zeroed coefficients");
  cmd->add_option("--snr", cfg.sim.snr, "signal-to-noise ratio");
  cmd->add_option("--n", cfg.sim.sample_n, "sample size");
}

}  // namespace

int main(int argc, char** argv) {
  regbench::CliConfig cfg;
  CLI::App app{"regbench: a workbench for regularized linear regression"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "write one synthetic dataset as csv");
  add_sim_flags(gen, cfg);
  gen->add_option("--seed", cfg.seed, "generator seed");
  gen->add_option("--out", cfg.out_dir, "output directory");
  gen->callback([&] { cfg.command = regbench::Command::Generate; });

  auto* run = app.add_subcommand("run", "run a benchmark sweep (resumable)");
  run->add_option("--preset", cfg.preset, "desk|paper|custom")
      ->default_str("desk");
  run->add_option("--config", cfg.config_path, "grid file for --preset custom");
  run->add_option("--workers", cfg.workers, "worker thread count");
  run->add_option("--out", cfg.out_dir, "output directory");
  run->callback([&] { cfg.command = regbench::Command::Run; });

  auto* analyze = app.add_subcommand("analyze", "grouped summary of a sweep store");
  analyze->add_option("--metric", cfg.metric,
                      "precision|recall|f1|rel_l2|rmse_test|fit_seconds|...");
  analyze->add_option("--group-by", cfg.group_by,
                      "group keys: method or any hyperparameter name");
  analyze->add_option("--out", cfg.out_dir, "directory holding results.jsonl");
  analyze->callback([&] { cfg.command = regbench::Command::Analyze; });

  auto* report = app.add_subcommand("report", "effect-size and timing tables");
  report->add_option("--table", cfg.table, "f1|l2|rmse|timing");
  report->add_option("--out", cfg.out_dir, "directory holding results.jsonl");
  report->callback([&] { cfg.command = regbench::Command::Report; });

  auto* knockoff = app.add_subcommand("knockoff",
                                      "knockoff filter demo on a synthetic config");
  add_sim_flags(knockoff, cfg);
  knockoff->add_option("--seed", cfg.seed, "generator seed");
  knockoff->add_option("--q", cfg.q, "target false discovery rate");
  knockoff->add_option("--alpha-grid", cfg.alpha_grid, "cv alpha grid override");
  knockoff->add_option("--out", cfg.out_dir, "output directory");
  knockoff->callback([&] { cfg.command = regbench::Command::Knockoff; });

  auto* stability = app.add_subcommand(
      "stability", "stability selection demo on a synthetic config");
  add_sim_flags(stability, cfg);
  stability->add_option("--seed", cfg.seed, "generator seed");
  stability->add_option("--pi-thr", cfg.pi_thr, "stability threshold");
  stability->add_option("--m-iters", cfg.m_iters, "subsample iterations");
  stability->add_option("--alpha-grid", cfg.alpha_grid, "lambda grid override");
  stability->add_option("--out", cfg.out_dir, "output directory");
  stability->callback([&] { cfg.command = regbench::Command::Stability; });

  auto* advise = app.add_subcommand("advise", "recommend a method for a csv dataset");
  advise->add_option("data", cfg.input_path, "csv file with a header row")
      ->required();
  advise->add_option("--objective", cfg.objective,
                     "prediction|selection|estimation");
  advise->add_option("--prior", cfg.prior, "sparsity prior: sparse|dense|unknown");
  advise->add_option("--response", cfg.response_column,
                     "response column name (default: last column)");
  advise->add_option("--seed", cfg.seed, "cv fold shuffle seed");
  advise->add_option("--alpha-grid", cfg.alpha_grid, "cv alpha grid override");
  advise->add_option("--out", cfg.out_dir, "output directory");
  advise->callback([&] { cfg.command = regbench::Command::Advise; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits clean, usage errors exit 2
  }
  return regbench::dispatch(cfg);
}
