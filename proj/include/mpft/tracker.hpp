#pragma once

#include "mpft/errors.hpp"
#include "mpft/metrics.hpp"
#include "mpft/pareto.hpp"
#include "mpft/problems.hpp"
#include "mpft/random.hpp"
#include "mpft/sparsity.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mpft {

/// How a search direction becomes a parameter update of size lr.
enum class StepMode {
  /// lr * d / |d|
  Normalized,
  /// lr * d / max(|d|, 1): unit steps far from a stationary point, plain
  /// gradient steps close to it.
  Clipped,
  /// lr * d
  Raw,
};

std::string to_string(StepMode mode);
StepMode step_mode_from_string(const std::string& name);

/// Episode budgets and schedule of one run. Vectors are indexed by objective
/// (vertex budgets, length m) or by sparse region (interior budgets, length K).
struct TrackConfig {
  std::vector<std::int64_t> xi_vertex;
  std::vector<std::int64_t> psi_vertex;
  std::vector<std::int64_t> xi_interior;
  std::vector<std::int64_t> psi_interior;
  int u = 1;
  int v = 2;
  int K = 0;
  /// Interactions charged per training episode.
  std::int64_t steps = 1;
  double lr = 0.05;
  /// Anchor stopping distance; nullopt means 0.05 * |j_max|.
  std::optional<double> epsilon_anchor;
  std::uint64_t seed = 0;

  StepMode step_mode = StepMode::Clipped;
  /// Ascent sub-steps are skipped when the min-norm squared norm is at most this.
  double stationarity_eps = 1e-6;
  /// Start each anchor from the boundary policy nearest j_max instead of a
  /// random policy.
  bool warm_start_interior = false;
  /// Interactions charged per objective evaluation (kept apart from training).
  std::int64_t steps_per_evaluation = 0;
  /// Upper bound on concurrently running tracks; 0 means one per track.
  int jobs = 0;

  /// Uniform budgets for an m-objective problem with K regions.
  static TrackConfig uniform(int m, std::int64_t xi, std::int64_t psi, int K = 0, std::int64_t xi_k = 0,
                             std::int64_t psi_k = 0);

  /// Throws ConfigError naming the first violated invariant.
  void validate(int m) const;

  double anchor_tolerance(const ObjectiveVector& j_max) const;
};

/// Per-track diagnostics.
struct TrackLog {
  std::int64_t episodes = 0;
  /// Budgeted episodes this track did not run (cycle remainders, early anchor stop).
  std::int64_t unused_episodes = 0;
  int stationary_skips = 0;
  std::vector<std::string> notes;
};

/// Everything one track owns privately.
struct TrackState {
  explicit TrackState(std::uint64_t seed) : rng(seed) {}
  Rng rng;
  /// Training interactions: `steps` per episode.
  InteractionCounter counter;
  /// Interactions spent on objective evaluations.
  InteractionCounter evaluation;
  TrackLog log;
};

/// theta + step, per the configured step mode.
PolicyParams apply_step(const PolicyParams& theta, const Eigen::VectorXd& direction, const TrackConfig& config);

/// Stage 1: Xi_i episodes of ascent on objective `objective` (0-based) from a
/// random policy.
TrackedPolicy stage1_vertex(const Problem& problem, int objective, const TrackConfig& config, TrackState& state);

/// One tracking cycle: u updates along the Pareto-reverse direction of
/// `objective`, then v along the Pareto-ascent direction. Gradients are
/// recomputed before every update.
PolicyParams track_cycle(const Problem& problem, const PolicyParams& theta, int objective,
                         const TrackConfig& config, TrackState& state);

/// Runs `cycles` tracking cycles from `start`, merging each new policy into the
/// returned set.
ParetoArchive track_from(const Problem& problem, const TrackedPolicy& start, int objective, std::int64_t cycles,
                         Provenance provenance, const TrackConfig& config, TrackState& state);

/// Stage 2: floor(Psi_i / (u + v)) cycles from the vertex of `objective`.
ParetoArchive stage2_track(const Problem& problem, const TrackedPolicy& vertex, int objective,
                           const TrackConfig& config, TrackState& state);

/// omega = beta / |beta|_1 with beta = j_max / max(J, 1e-8).
WeightVector anchor_weights(const ObjectiveVector& j_max, const ObjectiveVector& current);

/// Objective weight adjustment toward j_max for at most `budget` episodes.
/// Stops as soon as |J - j_max| <= the anchor tolerance.
TrackedPolicy weight_adjust_anchor(const Problem& problem, const ObjectiveVector& j_max, std::int64_t budget,
                                   const TrackConfig& config, TrackState& state, int region = 1,
                                   const std::optional<PolicyParams>& warm_start = std::nullopt);

struct RegionFill {
  SparseRegion region;
  TrackedPolicy anchor;
  /// F_inter^k: the anchor plus everything its sub-tracks kept.
  ParetoArchive policies;
  InteractionCounter counter;
  InteractionCounter evaluation;
  TrackLog log;
};

struct Stage3Result {
  std::vector<RegionFill> fills;
  /// Requested regions that could not be detected.
  int shortfall = 0;
  /// Budget of undetected regions, in episodes.
  std::int64_t unused_episodes = 0;
};

/// Stage 3: anchor inside each of the top-K sparse regions, then track from the
/// anchor toward every objective with floor(Psi_k / (m (u + v))) cycles each.
Stage3Result stage3_fill(const Problem& problem, const ParetoArchive& archive, const TrackConfig& config);

struct StageSummary {
  std::string name;
  std::int64_t episodes = 0;
  std::int64_t policies_kept = 0;
};

struct RunReport {
  /// Budget formula value.
  std::int64_t env_steps = 0;
  /// Interactions actually charged by training episodes across all tracks.
  std::int64_t env_steps_consumed = 0;
  std::int64_t evaluation_steps = 0;
  std::int64_t unused_episodes = 0;
  double hv = 0.0;
  /// NaN when the archive has fewer than two members.
  double sp = 0.0;
  double hv_stage2 = 0.0;
  double sp_stage2 = 0.0;
  ObjectiveVector reference_point;
  std::vector<StageSummary> stages;
  std::vector<SparseRegion> regions;
  int stationary_skips = 0;
  int region_shortfall = 0;
};

struct RunResult {
  ParetoArchive archive;
  /// Archive after Stage 2, before sparse-region filling.
  ParetoArchive stage2_archive;
  RunReport report;
};

/// Stages 1-4 end to end. `reference_point` defaults to the origin.
RunResult run_mpft(const Problem& problem, const TrackConfig& config,
                   const std::optional<ObjectiveVector>& reference_point = std::nullopt);

/// Error raised inside a stage, prefixed with the stage and track.
class StageError : public Error {
 public:
  StageError(std::string stage, int track, const std::string& what);
  const std::string& stage() const { return stage_; }
  int track() const { return track_; }

 private:
  std::string stage_;
  int track_;
};

}  // namespace mpft
