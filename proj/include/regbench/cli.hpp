#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "regbench/harness.hpp"
#include "regbench/spacegen.hpp"

namespace regbench {

enum class Command { Generate, Run, Analyze, Report, Knockoff, Stability, Advise };

struct CliConfig {
  Command command = Command::Run;
  std::string out_dir = "out";
  std::string config_path;         // custom grid file for --preset custom
  std::string input_path;          // csv input (advise)
  std::string preset = "desk";     // desk | paper | custom
  int workers = 1;
  std::uint64_t seed = 0;

  // single-instance commands (generate / knockoff / stability)
  SimConfig sim;

  // advise
  std::string objective = "prediction";
  std::string prior = "unknown";
  std::string response_column;     // default: last column

  // analyze / report
  std::string metric = "f1";
  std::vector<std::string> group_by = {"method"};
  std::string table = "f1";        // f1 | l2 | rmse | timing

  // error control
  double q = 0.2;
  double pi_thr = 0.6;
  int m_iters = 50;
  std::vector<double> alpha_grid;  // empty -> default decade grid
};

// Runs one parsed command; returns the process exit code (0 ok, 1 domain
// error).  Usage errors are the flag parser's business and exit with 2.
int dispatch(const CliConfig& cfg);

// Key-value grid file ([grid] section, space-separated level lists); keys
// missing from the file keep the desk-preset levels.
GridSpec parse_grid_file(const std::string& path);
GridSpec grid_for_preset(const std::string& preset, const std::string& config_path);

struct NumericTable {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;
};

// Comma-separated numeric file with a header row.  A column named "split"
// (the dataset export marker) is dropped.
NumericTable read_numeric_csv(const std::string& path);

}  // namespace regbench
