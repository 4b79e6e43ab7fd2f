#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mpft::cli {

enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsageError = 2 };

struct RunOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<unsigned long long> seed;
  std::optional<int> jobs;
};

/// Loads a config, runs all stages and writes archive.csv, report.json,
/// front.svg and run.log into the output directory.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

/// Prints hv and sp of the non-dominated rows of an archive CSV.
int cmd_metrics(const std::string& csv_path, const std::string& ref, std::ostream& out, std::ostream& err);

/// Prints the top-K sparse regions of an archive CSV as JSON lines.
int cmd_sparse(const std::string& csv_path, int k, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mpft::cli
