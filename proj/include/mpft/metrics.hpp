#pragma once

#include "mpft/pareto.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mpft {

struct TrackConfig;

struct MetricsReport {
  double hv = 0.0;
  /// NaN when the front has fewer than two points.
  double sp = 0.0;
  std::int64_t env_steps = 0;
  ObjectiveVector reference_point;
};

/// Non-dominated subset of `points` with exact duplicates collapsed.
std::vector<ObjectiveVector> nondominated_points(std::vector<ObjectiveVector> points);

/// Lebesgue measure of the union of boxes [ref, p] over points p that strictly
/// exceed ref in every coordinate. Exact for m = 2 (sweep) and m = 3 (slabs
/// over the sorted third coordinate).
double hypervolume(std::span<const ObjectiveVector> front, const ObjectiveVector& ref);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Uniform sampling in [ref, max(front)]. Test oracle for hypervolume().
MonteCarloEstimate hypervolume_mc(std::span<const ObjectiveVector> front, const ObjectiveVector& ref,
                                  std::int64_t samples, std::uint64_t seed);

/// Sum over objectives of squared gaps between consecutive sorted values,
/// divided by |front| - 1. Throws UndefinedMetricError for fewer than 2 points.
double sparsity(std::span<const ObjectiveVector> front);

/// steps * (sum_i (Xi_i + Psi_i) + sum_k (Xi_k + Psi_k)).
std::int64_t env_steps(const TrackConfig& config);

}  // namespace mpft
