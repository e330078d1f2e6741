#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace regbench {

// Caller supplied an invalid configuration, grid, plan, or grouping.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Generated signal collapsed (zero-variance signal, all-zero coefficient draw).
class DegenerateSignalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative solver hit its sweep cap before meeting tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double kkt)
      : std::runtime_error(what), kkt_residual(kkt) {}
  double kkt_residual;
};

// Result-store problems: unreadable file, schema mismatch, mid-file corruption.
class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A paired comparison is missing one side for some (config, seed) keys.
class IncompletePairError : public std::runtime_error {
 public:
  IncompletePairError(const std::string& what, std::vector<std::string> keys)
      : std::runtime_error(what), missing_keys(std::move(keys)) {}
  std::vector<std::string> missing_keys;
};

}  // namespace regbench
