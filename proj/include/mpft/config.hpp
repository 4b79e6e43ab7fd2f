#pragma once

#include "mpft/problems.hpp"
#include "mpft/tracker.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace mpft {

/// Everything a `run` needs, loaded from one JSON document.
///
/// Track settings sit at the top level next to "problem", "reference_point",
/// "output_dir" and "svg". Budgets accept a scalar (same for every objective or
/// region) or an array.
struct ExperimentConfig {
  std::shared_ptr<const Problem> problem;
  TrackConfig track;
  std::optional<ObjectiveVector> reference_point;
  std::filesystem::path output_dir = "mpft-out";
  bool svg = true;
};

/// Parses and validates a config. `source` names the document in diagnostics
/// and relative "mdp_file" paths resolve against `base_dir`. Throws
/// ConfigError with "source:line: key: message".
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source = "config",
                                         const std::filesystem::path& base_dir = ".");

/// Reads and parses a config file. A missing file is a ConfigError.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Tabular MOMDP from {"S", "A", "m", "P"[s][a][s'], "R"[s][a][i], "gamma",
/// "T", "start", "done"}. "T" null or absent means an infinite horizon.
TabularMomdp parse_momdp(const std::string& text, const std::string& source = "mdp");
TabularMomdp load_momdp(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace mpft
