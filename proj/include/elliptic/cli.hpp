#pragma once

// Command-line front end. run() is the whole program minus process exit, so
// tests drive it in-process with an argument vector.
//
//   elliptic <check|solve|classify|sweep|oracle> --config FILE
//            [--force] [--epsilon V] [--rmax V] [--nodes N] [--out DIR]
//
// ELLIPTIC_LOG=quiet|info|debug sets the verbosity of diagnostics on stderr.
// Numeric output (CSV files, reports) never depends on it.

#include <filesystem>
#include <string>
#include <vector>

#include "elliptic/config.hpp"

namespace elliptic::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kNonConvergence = 3,
  kInconclusive = 4,
  kOracleDisagreement = 5,
};

struct Context {
  RunConfig config;
  std::filesystem::path out_dir = ".";
  bool force = false;
};

int cmd_check(const Context& ctx);
int cmd_classify(const Context& ctx);
int cmd_solve(const Context& ctx);
int cmd_sweep(const Context& ctx);
int cmd_oracle(const Context& ctx);

/// args excludes the program name.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

/// Applies ELLIPTIC_LOG (or `level` when non-empty) to the diagnostics logger.
void configure_logging(const std::string& level = "");

}  // namespace elliptic::cli
