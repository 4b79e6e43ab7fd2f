#include "mpft/cli.hpp"

#include "format.hpp"
#include "mpft/config.hpp"
#include "mpft/errors.hpp"
#include "mpft/metrics.hpp"
#include "mpft/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mpft::cli {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(path.string() + ": cannot write file");
  f << text;
  if (!f) throw Error(path.string() + ": write failed");
}

std::vector<TrackedPolicy> read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open file");
  try {
    return read_archive_csv(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::vector<ObjectiveVector> objectives_of(const std::vector<TrackedPolicy>& rows) {
  if (rows.empty()) throw ConfigError("archive CSV has no policy rows");
  std::vector<ObjectiveVector> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.push_back(r.objectives);
  return pts;
}

ObjectiveVector parse_ref(const std::string& text) {
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto x = detail::parse_real(item);
    if (!x) throw ConfigError("--ref: '" + item + "' is not a number");
    xs.push_back(*x);
  }
  if (xs.empty()) throw ConfigError("--ref: expected comma-separated coordinates");
  return Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

std::string metric(double x) { return std::isfinite(x) ? detail::format_real(x) : "undefined"; }

}  // namespace

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = load_experiment_config(options.config_path);
    if (options.out_dir) cfg.output_dir = *options.out_dir;
    if (options.seed) cfg.track.seed = *options.seed;
    if (options.jobs) {
      if (*options.jobs < 0) throw ConfigError("--jobs must be >= 0");
      cfg.track.jobs = *options.jobs;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    auto start = std::chrono::steady_clock::now();
    RunResult result = run_mpft(*cfg.problem, cfg.track, cfg.reference_point);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::filesystem::create_directories(cfg.output_dir);
    write_file(cfg.output_dir / "archive.csv", archive_csv(result.archive));
    write_file(cfg.output_dir / "report.json", report_json(result.report));
    if (cfg.svg && (result.archive.empty() || result.archive.objective_count() <= 3))
      write_file(cfg.output_dir / "front.svg", front_svg(result.archive, result.report.regions));

    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    std::ostringstream log;
    log << "finished " << stamp << "\nconfig " << options.config_path << "\nwall_seconds " << seconds << "\n";
    write_file(cfg.output_dir / "run.log", log.str());

    out << "hv=" << metric(result.report.hv) << "\n";
    out << "sp=" << metric(result.report.sp) << "\n";
    out << "env_steps=" << result.report.env_steps << "\n";
    out << "policies=" << result.archive.size() << "\n";
    out << "output=" << cfg.output_dir.string() << "\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

int cmd_metrics(const std::string& csv_path, const std::string& ref_text, std::ostream& out, std::ostream& err) {
  std::vector<ObjectiveVector> pts;
  ObjectiveVector ref;
  try {
    pts = nondominated_points(objectives_of(read_csv_file(csv_path)));
    ref = parse_ref(ref_text);
    if (ref.size() != pts.front().size())
      throw ConfigError("--ref has " + std::to_string(ref.size()) + " coordinates but the archive has " +
                        std::to_string(pts.front().size()) + " objectives");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  try {
    double hv = hypervolume(pts, ref);
    out << "hv=" << detail::format_real(hv) << "\n";
    if (pts.size() < 2)
      out << "sp=undefined (fewer than two points)\n";
    else
      out << "sp=" << detail::format_real(sparsity(pts)) << "\n";
    out << "points=" << pts.size() << "\n";
    return kOk;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

int cmd_sparse(const std::string& csv_path, int k, std::ostream& out, std::ostream& err) {
  std::vector<ObjectiveVector> pts;
  try {
    if (k < 1) throw ConfigError("--k must be >= 1");
    pts = nondominated_points(objectives_of(read_csv_file(csv_path)));
    int m = static_cast<int>(pts.front().size());
    if (m != 2 && m != 3) throw ConfigError("sparse regions need two or three objectives, found " + std::to_string(m));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  try {
    for (const auto& r : sparse_regions(pts, k)) out << region_json_line(r) << "\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-policy Pareto front tracking"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "run all stages from a JSON config");
  run_cmd->add_option("config", run.config_path, "experiment config (JSON)")->required();
  run_cmd->add_option("--out", run.out_dir, "output directory (overrides the config)");
  run_cmd->add_option("--seed", run.seed, "random seed (overrides the config)");
  run_cmd->add_option("--jobs", run.jobs, "concurrent tracks; 0 means one per track");

  std::string metrics_csv, ref;
  auto* metrics_cmd = app.add_subcommand("metrics", "hypervolume and sparsity of an archive CSV");
  metrics_cmd->add_option("csv", metrics_csv, "archive CSV")->required();
  metrics_cmd->add_option("--ref", ref, "reference point x,y[,z]")->required();

  std::string sparse_csv;
  int k = 1;
  auto* sparse_cmd = app.add_subcommand("sparse", "top-K sparse regions of an archive CSV");
  sparse_cmd->add_option("csv", sparse_csv, "archive CSV")->required();
  sparse_cmd->add_option("--k", k, "number of regions")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  if (*run_cmd) return cmd_run(run, out, err);
  if (*metrics_cmd) return cmd_metrics(metrics_csv, ref, out, err);
  return cmd_sparse(sparse_csv, k, out, err);
}

}  // namespace mpft::cli
